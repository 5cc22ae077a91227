#pragma once

// Nested maximin search over small boxes of scalar parameters.
//
// Each search is a uniform grid over the box followed by `refine_rounds`
// passes over a box shrunk by `refine_shrink` around the incumbent. The
// incumbent only changes on a strictly larger score; among equal scores the
// lexicographically smallest point wins, so results never depend on the
// order in which grid points are evaluated.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace relaycap::opt {

struct GridSpec {
    int coarse_points = 101;
    int refine_rounds = 3;
    double refine_shrink = 0.1;

    void validate() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Grid points stored axis-major so kernels can stream one coordinate at a time.
class PointBatch {
public:
    explicit PointBatch(std::size_t dims = 0) : dims_(dims) {}

    void reserve(std::size_t n);
    void push(std::span<const double> point);
    /// Replaces the contents with the Cartesian product of per-axis
    /// coordinates, last axis fastest.
    void assign_product(std::span<const std::vector<double>> coords);
    void clear() noexcept;

    [[nodiscard]] std::size_t dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::span<const double> axis(std::size_t k) const noexcept { return axes_[k]; }
    [[nodiscard]] double at(std::size_t i, std::size_t k) const noexcept { return axes_[k][i]; }
    [[nodiscard]] std::vector<double> point(std::size_t i) const;

private:
    std::size_t dims_;
    std::size_t size_ = 0;
    std::vector<std::vector<double>> axes_ = std::vector<std::vector<double>>(dims_);
};

using Objective = std::function<double(std::span<const double>)>;
using BatchObjective = std::function<void(const PointBatch&, std::span<double>)>;
using Feasibility = std::function<bool(std::span<const double>)>;
/// Strictly increasing map from internal score to reported value.
using ValueMap = std::function<double(double)>;

struct SearchDiagnostics {
    std::size_t evaluations = 0;
    std::vector<double> final_pitch;  // per axis
    /// Largest value change between the optimum and its final-grid neighbours,
    /// floored at kToleranceFloor.
    double tolerance = 0.0;
};

inline constexpr double kToleranceFloor = 1e-12;

struct MaxResult {
    double value = 0.0;  // ValueMap applied to `score`
    double score = 0.0;
    std::vector<double> argmax;
    SearchDiagnostics diagnostics;
};

/// Maximizes `objective` over the box. An empty `feasible` accepts every point.
/// Throws InfeasibleError if no grid point is feasible and NonFiniteError on a
/// NaN or infinite objective value.
MaxResult maximize(const Objective& objective, std::span<const Interval> boxes,
                   const Feasibility& feasible, const GridSpec& grid);

/// Same search, evaluating each round's feasible points in one call.
MaxResult maximize_batched(const BatchObjective& objective, std::span<const Interval> boxes,
                           const Feasibility& feasible, const GridSpec& grid,
                           const ValueMap& to_value = {});

struct MaximinResult {
    double value = 0.0;
    double score = 0.0;
    std::vector<double> outer_argmax;
    std::vector<double> inner_argmax;
    std::size_t evaluations = 0;  // term1 calls plus every inner objective evaluation
    double tolerance = 0.0;       // outer grid tolerance plus the inner one at the argmax
};

/// Outer term: score of the outer point alone.
using OuterTerm = Objective;
/// Inner term for a fixed outer point, batched over inner points.
using InnerBatchTerm =
    std::function<void(std::span<const double> outer, const PointBatch& inner, std::span<double> out)>;
using InnerTerm = std::function<double(std::span<const double> outer, std::span<const double> inner)>;
using JointFeasibility =
    std::function<bool(std::span<const double> outer, std::span<const double> inner)>;

/// max over outer of min{ term1(outer), max over inner of term2(outer, inner) }.
/// An empty term1 leaves the nested maximum of term2. Nesting resolves a
/// maximum lying on a ridge that a joint grid would only straddle.
///
/// Outer points whose inner box has no feasible grid point score -infinity and
/// are never selected; if that holds for every outer point InfeasibleError is thrown.
MaximinResult maximin(std::span<const Interval> outer_boxes, std::span<const Interval> inner_boxes,
                      const OuterTerm& term1, const InnerBatchTerm& term2,
                      const JointFeasibility& feasible, const GridSpec& grid,
                      const ValueMap& to_value = {});

MaximinResult maximin(std::span<const Interval> outer_boxes, std::span<const Interval> inner_boxes,
                      const OuterTerm& term1, const InnerTerm& term2,
                      const JointFeasibility& feasible, const GridSpec& grid,
                      const ValueMap& to_value = {});

} // namespace relaycap::opt
