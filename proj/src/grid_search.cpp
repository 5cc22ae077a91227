#include "relaycap/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "relaycap/errors.hpp"

namespace relaycap::opt {

void GridSpec::validate() const
{
    if (coarse_points < 3)
        throw std::invalid_argument("grid coarse_points must be at least 3, got " +
                                    std::to_string(coarse_points));
    if (refine_rounds < 0)
        throw std::invalid_argument("grid refine_rounds must be non-negative, got " +
                                    std::to_string(refine_rounds));
    if (!(refine_shrink > 0.0 && refine_shrink < 1.0))
        throw std::invalid_argument("grid refine_shrink must lie in (0, 1), got " +
                                    std::to_string(refine_shrink));
}

void PointBatch::reserve(std::size_t n)
{
    for (auto& a : axes_)
        a.reserve(n);
}

void PointBatch::push(std::span<const double> point)
{
    for (std::size_t k = 0; k < dims_; ++k)
        axes_[k].push_back(point[k]);
    ++size_;
}

void PointBatch::assign_product(std::span<const std::vector<double>> coords)
{
    std::size_t total = 1;
    for (const auto& c : coords)
        total *= c.size();
    std::size_t inner = total;
    for (std::size_t k = 0; k < dims_; ++k) {
        // Each coordinate repeats `inner` times, and that block cycles.
        inner /= coords[k].size();
        auto& a = axes_[k];
        a.resize(total);
        auto out = a.begin();
        while (out != a.end())
            for (double v : coords[k])
                out = std::fill_n(out, inner, v);
    }
    size_ = total;
}

void PointBatch::clear() noexcept
{
    for (auto& a : axes_)
        a.clear();
    size_ = 0;
}

std::vector<double> PointBatch::point(std::size_t i) const
{
    std::vector<double> p(dims_);
    for (std::size_t k = 0; k < dims_; ++k)
        p[k] = axes_[k][i];
    return p;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct AxisGrid {
    double lo;
    double hi;
    int n;

    [[nodiscard]] double pitch() const { return n > 1 ? (hi - lo) / (n - 1) : 0.0; }

    // Endpoints are hit exactly.
    [[nodiscard]] double coord(int i) const
    {
        if (i == n - 1)
            return hi;
        return lo + i * pitch();
    }
};

void validate_boxes(std::span<const Interval> boxes)
{
    if (boxes.empty())
        throw std::invalid_argument("search box list is empty");
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const auto& b = boxes[k];
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
            throw std::invalid_argument("search box " + std::to_string(k) + " is not a finite [lo, hi]");
    }
}

std::vector<AxisGrid> round_axes(std::span<const Interval> boxes, const std::vector<double>* center,
                                 int round, const GridSpec& grid)
{
    std::vector<AxisGrid> axes;
    axes.reserve(boxes.size());
    const double shrink = std::pow(grid.refine_shrink, round);
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const auto& b = boxes[k];
        if (b.lo == b.hi) {
            axes.push_back({b.lo, b.hi, 1});
            continue;
        }
        if (center == nullptr) {
            axes.push_back({b.lo, b.hi, grid.coarse_points});
            continue;
        }
        const double half = 0.5 * (b.hi - b.lo) * shrink;
        const double c = (*center)[k];
        axes.push_back({std::max(b.lo, c - half), std::min(b.hi, c + half), grid.coarse_points});
    }
    return axes;
}

std::string describe(std::span<const double> p)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < p.size(); ++k)
        os << (k ? ", " : "") << p[k];
    os << ')';
    return os.str();
}

bool better(double score, std::span<const double> point, double best_score,
            const std::vector<double>& best_point)
{
    if (score > best_score)
        return true;
    if (score < best_score || best_point.empty())
        return false;
    return std::lexicographical_compare(point.begin(), point.end(), best_point.begin(),
                                        best_point.end());
}

// One evaluated grid. `slot` maps a flat (axis 0 slowest) grid index to its
// position in the batch, or -1 for a skipped point.
struct Round {
    std::vector<AxisGrid> axes;
    std::vector<std::ptrdiff_t> slot;
    std::vector<double> scores;
    PointBatch batch{0};
    std::size_t skipped = 0;
    bool usable = false;
    std::size_t best = 0;              // batch position
    std::vector<int> best_index;       // grid index per axis
    double tolerance = 0.0;

    [[nodiscard]] std::size_t flat_of(std::span<const int> index) const
    {
        std::size_t flat = 0;
        for (std::size_t k = 0; k < axes.size(); ++k)
            flat = flat * static_cast<std::size_t>(axes[k].n) + static_cast<std::size_t>(index[k]);
        return flat;
    }

    void index_of(std::size_t flat, std::span<int> index) const
    {
        for (std::size_t k = axes.size(); k-- > 0;) {
            index[k] = static_cast<int>(flat % static_cast<std::size_t>(axes[k].n));
            flat /= static_cast<std::size_t>(axes[k].n);
        }
    }

    [[nodiscard]] double score_at(std::size_t flat) const
    {
        return slot[flat] < 0 ? kNegInf : scores[static_cast<std::size_t>(slot[flat])];
    }
};

struct SearchContext {
    const BatchObjective& objective;
    const Feasibility& feasible;
    const ValueMap& to_value;
    bool allow_neg_inf;
    std::size_t evaluations = 0;

    [[nodiscard]] double value_of(double s) const { return to_value ? to_value(s) : s; }

    Round evaluate(std::vector<AxisGrid> axes)
    {
        const std::size_t dims = axes.size();
        Round r;
        r.axes = std::move(axes);
        r.batch = PointBatch(dims);

        std::size_t total = 1;
        for (const auto& a : r.axes)
            total *= static_cast<std::size_t>(a.n);
        r.batch.reserve(total);
        r.slot.assign(total, -1);

        std::vector<std::vector<double>> coords(dims);
        for (std::size_t k = 0; k < dims; ++k)
            for (int i = 0; i < r.axes[k].n; ++i)
                coords[k].push_back(r.axes[k].coord(i));

        if (!feasible) {
            r.batch.assign_product(coords);
            std::iota(r.slot.begin(), r.slot.end(), std::ptrdiff_t{0});
        }

        // Odometer over the grid, last axis fastest.
        std::vector<int> index(dims, 0);
        std::vector<double> point(dims);
        for (std::size_t k = 0; k < dims; ++k)
            point[k] = coords[k][0];
        for (std::size_t flat = 0; feasible && flat < total; ++flat) {
            if (!feasible(point)) {
                ++r.skipped;
            } else {
                r.slot[flat] = static_cast<std::ptrdiff_t>(r.batch.size());
                r.batch.push(point);
            }
            for (std::size_t k = dims; k-- > 0;) {
                if (++index[k] < r.axes[k].n) {
                    point[k] = coords[k][static_cast<std::size_t>(index[k])];
                    break;
                }
                index[k] = 0;
                point[k] = coords[k][0];
            }
        }
        if (r.batch.size() == 0)
            return r;

        r.scores.assign(r.batch.size(), 0.0);
        objective(r.batch, r.scores);
        evaluations += r.batch.size();

        for (std::size_t i = 0; i < r.scores.size(); ++i) {
            const double s = r.scores[i];
            if (!std::isfinite(s)) {
                if (allow_neg_inf && s == kNegInf)
                    continue;
                throw NonFiniteError("objective returned " + std::to_string(s) + " at " +
                                     describe(r.batch.point(i)));
            }
            // Batch order is lexicographic, so the first maximum is the smallest point.
            if (!r.usable || s > r.scores[r.best]) {
                r.best = i;
                r.usable = true;
            }
        }
        if (!r.usable)
            return r;

        std::size_t flat_best = 0;
        while (r.slot[flat_best] != static_cast<std::ptrdiff_t>(r.best))
            ++flat_best;
        r.best_index.resize(dims);
        r.index_of(flat_best, r.best_index);

        // Tolerance from the spread of values around this round's optimum.
        const double v_best = value_of(r.scores[r.best]);
        double tol = 0.0;
        std::vector<int> probe = r.best_index;
        for (std::size_t k = 0; k < dims; ++k) {
            for (int step : {-1, 1}) {
                const int j = r.best_index[k] + step;
                if (j < 0 || j >= r.axes[k].n)
                    continue;
                probe[k] = j;
                const double s = r.score_at(r.flat_of(probe));
                probe[k] = r.best_index[k];
                if (s == kNegInf)
                    continue;
                tol = std::max(tol, std::abs(v_best - value_of(s)));
            }
        }
        r.tolerance = std::max(tol, kToleranceFloor);
        return r;
    }
};

// Middle of the bounding box of the grid points connected to the optimum
// (through any of the 3^d - 1 neighbours) whose value is within the round
// tolerance of it.
std::vector<double> plateau_middle(const Round& r, const SearchContext& ctx)
{
    const std::size_t dims = r.axes.size();
    const double floor_value = ctx.value_of(r.scores[r.best]) - r.tolerance;
    auto near = [&](std::size_t flat) {
        const double s = r.score_at(flat);
        return s != kNegInf && ctx.value_of(s) >= floor_value;
    };

    std::vector<int> lo = r.best_index;
    std::vector<int> hi = r.best_index;
    std::vector<char> seen(r.slot.size(), 0);
    std::vector<std::size_t> stack{r.flat_of(r.best_index)};
    seen[stack.back()] = 1;

    std::size_t offsets = 1;
    for (std::size_t k = 0; k < dims; ++k)
        offsets *= 3;

    std::vector<int> index(dims);
    std::vector<int> nb(dims);
    while (!stack.empty()) {
        const std::size_t flat = stack.back();
        stack.pop_back();
        r.index_of(flat, index);
        for (std::size_t k = 0; k < dims; ++k) {
            lo[k] = std::min(lo[k], index[k]);
            hi[k] = std::max(hi[k], index[k]);
        }
        for (std::size_t code = 0; code < offsets; ++code) {
            std::size_t c = code;
            bool inside = true;
            bool self = true;
            for (std::size_t k = 0; k < dims; ++k) {
                const int step = static_cast<int>(c % 3) - 1;
                c /= 3;
                nb[k] = index[k] + step;
                self = self && step == 0;
                inside = inside && nb[k] >= 0 && nb[k] < r.axes[k].n;
            }
            if (self || !inside)
                continue;
            const std::size_t f = r.flat_of(nb);
            if (seen[f] || !near(f))
                continue;
            seen[f] = 1;
            stack.push_back(f);
        }
    }

    std::vector<double> mid(dims);
    for (std::size_t k = 0; k < dims; ++k)
        mid[k] = 0.5 * (r.axes[k].coord(lo[k]) + r.axes[k].coord(hi[k]));
    return mid;
}

struct Track {
    double score = kNegInf;
    std::vector<double> point;
    double tolerance = 0.0;
    std::vector<double> final_pitch;

    void absorb(const Round& r)
    {
        const auto candidate = r.batch.point(r.best);
        if (better(r.scores[r.best], candidate, score, point)) {
            score = r.scores[r.best];
            point = candidate;
        }
        tolerance = r.tolerance;
        final_pitch.clear();
        for (const auto& a : r.axes)
            final_pitch.push_back(a.pitch());
    }
};

// Shared grid-plus-refinement driver. With allow_neg_inf a score of -infinity
// marks an unusable point instead of an error.
//
// Refinement recentres on the incumbent. When the coarse grid skipped
// infeasible points a second track recentres on the middle of the
// near-optimal plateau instead: next to a curved feasibility boundary many
// grid points tie to within the pitch, the lexicographic tie-break pulls the
// incumbent to one end of that plateau, and the shrinking window then loses
// the true optimum. The better track wins.
MaxResult run_search(const BatchObjective& objective, std::span<const Interval> boxes,
                     const Feasibility& feasible, const GridSpec& grid, const ValueMap& to_value,
                     bool allow_neg_inf)
{
    grid.validate();
    validate_boxes(boxes);
    SearchContext ctx{objective, feasible, to_value, allow_neg_inf};

    const Round coarse = ctx.evaluate(round_axes(boxes, nullptr, 0, grid));
    if (coarse.batch.size() == 0)
        throw InfeasibleError("no feasible grid point in the search box");
    if (!coarse.usable)
        throw InfeasibleError("every grid point was rejected by the objective");

    auto refine = [&](bool plateau) {
        Track t;
        t.absorb(coarse);
        std::vector<double> center = plateau ? plateau_middle(coarse, ctx) : t.point;
        for (int round = 1; round <= grid.refine_rounds; ++round) {
            const Round r = ctx.evaluate(round_axes(boxes, &center, round, grid));
            if (!r.usable)
                break;
            t.absorb(r);
            center = plateau ? plateau_middle(r, ctx) : t.point;
        }
        return t;
    };

    Track best = refine(false);
    if (coarse.skipped > 0 && grid.refine_rounds > 0) {
        Track alt = refine(true);
        if (better(alt.score, alt.point, best.score, best.point))
            best = std::move(alt);
    }

    MaxResult result;
    result.score = best.score;
    result.value = ctx.value_of(best.score);
    result.argmax = std::move(best.point);
    result.diagnostics.evaluations = ctx.evaluations;
    result.diagnostics.final_pitch = std::move(best.final_pitch);
    result.diagnostics.tolerance = best.tolerance;
    return result;
}

} // namespace

MaxResult maximize(const Objective& objective, std::span<const Interval> boxes,
                   const Feasibility& feasible, const GridSpec& grid)
{
    auto batched = [&](const PointBatch& batch, std::span<double> out) {
        std::vector<double> p(batch.dims());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            for (std::size_t k = 0; k < batch.dims(); ++k)
                p[k] = batch.at(i, k);
            out[i] = objective(p);
        }
    };
    return run_search(batched, boxes, feasible, grid, {}, false);
}

MaxResult maximize_batched(const BatchObjective& objective, std::span<const Interval> boxes,
                           const Feasibility& feasible, const GridSpec& grid,
                           const ValueMap& to_value)
{
    return run_search(objective, boxes, feasible, grid, to_value, false);
}

MaximinResult maximin(std::span<const Interval> outer_boxes, std::span<const Interval> inner_boxes,
                      const OuterTerm& term1, const InnerBatchTerm& term2,
                      const JointFeasibility& feasible, const GridSpec& grid,
                      const ValueMap& to_value)
{
    validate_boxes(inner_boxes);
    std::size_t evaluations = 0;

    auto solve_inner = [&](std::span<const double> outer) -> std::optional<MaxResult> {
        auto inner_objective = [&](const PointBatch& batch, std::span<double> out) {
            term2(outer, batch, out);
        };
        Feasibility inner_feasible;
        if (feasible)
            inner_feasible = [&](std::span<const double> inner) { return feasible(outer, inner); };
        try {
            auto r = run_search(inner_objective, inner_boxes, inner_feasible, grid, to_value, false);
            evaluations += r.diagnostics.evaluations;
            return r;
        } catch (const InfeasibleError&) {
            return std::nullopt;
        }
    };

    auto outer_objective = [&](const PointBatch& batch, std::span<double> out) {
        std::vector<double> p(batch.dims());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            for (std::size_t k = 0; k < batch.dims(); ++k)
                p[k] = batch.at(i, k);
            const auto inner = solve_inner(p);
            if (!term1) {
                out[i] = inner ? inner->score : kNegInf;
                continue;
            }
            const double s1 = term1(p);
            ++evaluations;
            if (!std::isfinite(s1))
                throw NonFiniteError("outer term returned " + std::to_string(s1) + " at " + describe(p));
            out[i] = inner ? std::min(s1, inner->score) : kNegInf;
        }
    };

    MaxResult outer;
    try {
        outer = run_search(outer_objective, outer_boxes, {}, grid, to_value, true);
    } catch (const InfeasibleError&) {
        throw InfeasibleError("no outer grid point has a feasible inner problem");
    }

    const auto inner = solve_inner(outer.argmax);

    MaximinResult r;
    r.score = outer.score;
    r.value = outer.value;
    r.outer_argmax = outer.argmax;
    r.inner_argmax = inner->argmax;
    r.evaluations = evaluations;
    r.tolerance = outer.diagnostics.tolerance + inner->diagnostics.tolerance;
    return r;
}

MaximinResult maximin(std::span<const Interval> outer_boxes, std::span<const Interval> inner_boxes,
                      const OuterTerm& term1, const InnerTerm& term2,
                      const JointFeasibility& feasible, const GridSpec& grid,
                      const ValueMap& to_value)
{
    InnerBatchTerm batched = [&](std::span<const double> outer, const PointBatch& batch,
                                 std::span<double> out) {
        std::vector<double> p(batch.dims());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            for (std::size_t k = 0; k < batch.dims(); ++k)
                p[k] = batch.at(i, k);
            out[i] = term2(outer, p);
        }
    };
    return maximin(outer_boxes, inner_boxes, term1, batched, feasible, grid, to_value);
}

} // namespace relaycap::opt
