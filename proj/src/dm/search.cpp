#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "relaycap/dm/bounds.hpp"
#include "relaycap/parallel.hpp"
#include "detail.hpp"

namespace relaycap::dm {

namespace {

constexpr double kSteps[] = {0.5, 0.25, 0.1, 0.05};
constexpr int kMaxSweepsPerStep = 200;
constexpr double kSumEps = 1e-14;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(0x5eed0000ULL + restart));
}

// Flat symmetric Dirichlet draw per row via normalized exponentials.
// Built from raw engine output so it does not depend on the standard
// library's distribution implementations.
void randomize(CondPmf& m, std::mt19937_64& rng)
{
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        double sum = 0.0;
        for (auto& v : row) {
            const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
            v = -std::log(u);
            sum += v;
        }
        for (auto& v : row)
            v /= sum;
    }
}

struct Score {
    double min = -std::numeric_limits<double>::infinity();
    double sum = -std::numeric_limits<double>::infinity();
};

bool improves(const Score& cand, const Score& cur)
{
    if (cand.min > cur.min)
        return true;
    return cand.min == cur.min && cand.sum > cur.sum + kSumEps;
}

Score score_of(const BoundTerms& t) { return {t.value(), t.relay + t.destination}; }

struct Slot {
    CondPmf* m;
    std::size_t row;
};

// Moves mass toward (step > 0) or away from outcome k of one row, then
// renormalizes the row. Returns false when the move is a no-op.
bool apply_move(std::span<double> row, std::size_t k, double step)
{
    if (step > 0.0) {
        row[k] += step;
    } else {
        const double take = std::min(-step, row[k]);
        if (take <= 0.0 || take >= 1.0)
            return false;
        row[k] -= take;
    }
    double sum = 0.0;
    for (double v : row)
        sum += v;
    for (auto& v : row)
        v /= sum;
    return true;
}

template <class Factors, class Eval>
Score climb(Factors& f, std::vector<Slot> slots, const Eval& eval, BoundTerms& terms)
{
    terms = eval(f);
    Score cur = score_of(terms);
    std::vector<double> saved;
    for (double step : kSteps) {
        for (int sweep = 0; sweep < kMaxSweepsPerStep; ++sweep) {
            bool moved = false;
            for (const auto& slot : slots) {
                auto row = slot.m->row(slot.row);
                if (row.size() < 2)
                    continue;
                for (std::size_t k = 0; k < row.size(); ++k)
                    for (double dir : {step, -step}) {
                        saved.assign(row.begin(), row.end());
                        if (!apply_move(row, k, dir))
                            continue;
                        const auto t = eval(f);
                        const Score s = score_of(t);
                        if (improves(s, cur)) {
                            cur = s;
                            terms = t;
                            moved = true;
                        } else {
                            std::copy(saved.begin(), saved.end(), row.begin());
                        }
                    }
            }
            if (!moved)
                break;
        }
    }
    return cur;
}

void add_slots(std::vector<Slot>& slots, CondPmf& m)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        slots.push_back({&m, r});
}

void append_labels(BoundResult& out, const CondPmf& m, const std::string& name)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out.labels.push_back(name + "[" + std::to_string(r) + "," + std::to_string(c) + "]");
            out.argmax.push_back(m(r, c));
        }
}

struct RestartResult {
    Score score;
    BoundTerms terms;
    std::variant<LowerFactorization, UpperFactorization> best;
    std::size_t evaluations = 0;
};

RestartResult run_restart(const DiscreteChannelSpec& spec, const SearchOptions& o, std::size_t restart)
{
    std::mt19937_64 rng(restart_seed(o.seed, restart));
    RestartResult r;
    std::size_t evals = 0;
    std::vector<Slot> slots;

    if (o.mode == SearchMode::lower) {
        auto f = LowerFactorization::uniform(spec.sizes, o.aux_u1, o.aux_u2);
        for (auto* m : {&f.u1, &f.x1, &f.u2, &f.x2}) {
            randomize(*m, rng);
            add_slots(slots, *m);
        }
        auto eval = [&](const LowerFactorization& g) {
            ++evals;
            return detail::lower_terms(spec, g);
        };
        r.score = climb(f, slots, eval, r.terms);
        r.best = std::move(f);
    } else {
        const bool aware = o.mode == SearchMode::trivial;
        auto f = UpperFactorization::uniform(spec.sizes, aware);
        for (auto* m : {&f.x1, &f.x2}) {
            randomize(*m, rng);
            add_slots(slots, *m);
        }
        auto eval = [&](const UpperFactorization& g) {
            ++evals;
            return aware ? detail::trivial_upper_terms(spec, g) : detail::upper_terms(spec, g, o.degraded);
        };
        r.score = climb(f, slots, eval, r.terms);
        r.best = std::move(f);
    }
    r.evaluations = evals;
    return r;
}

} // namespace

DmSearchResult dm_search(const DiscreteChannelSpec& spec, const SearchOptions& options)
{
    spec.validate();
    if (options.restarts == 0)
        throw std::invalid_argument("search budget (restarts) must be at least 1");
    if (options.mode == SearchMode::lower)
        LowerFactorization::uniform(spec.sizes, options.aux_u1, options.aux_u2).validate(spec.sizes);

    std::vector<RestartResult> runs(options.restarts);
    parallel_for(options.restarts, [&](std::size_t i) { runs[i] = run_restart(spec, options, i); });

    // Reduction in restart order keeps the result independent of scheduling.
    std::size_t best = 0;
    std::size_t evaluations = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        evaluations += runs[i].evaluations;
        const auto& s = runs[i].score;
        const auto& b = runs[best].score;
        if (s.min > b.min || (s.min == b.min && s.sum > b.sum))
            best = i;
    }

    DmSearchResult out;
    out.raw_value = runs[best].score.min;
    out.terms = runs[best].terms;
    out.best = runs[best].best;
    out.best_restart = best;
    out.bound.rate = std::max(out.raw_value, 0.0);
    out.bound.evaluations = evaluations;
    out.bound.grid_tolerance = 0.0;
    if (const auto* f = std::get_if<LowerFactorization>(&out.best)) {
        append_labels(out.bound, f->u1, "p_u1");
        append_labels(out.bound, f->x1, "p_x1|u1");
        append_labels(out.bound, f->u2, "p_u2|u1,s");
        append_labels(out.bound, f->x2, "p_x2|u1,u2,s");
    } else {
        const auto& g = std::get<UpperFactorization>(out.best);
        append_labels(out.bound, g.x1, g.state_aware_source() ? "p_x1|s" : "p_x1");
        append_labels(out.bound, g.x2, "p_x2|x1,s");
    }
    return out;
}

} // namespace relaycap::dm
