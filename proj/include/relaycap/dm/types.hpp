#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace relaycap::dm {

struct Alphabets {
    std::size_t s = 1;
    std::size_t x1 = 1;
    std::size_t x2 = 1;
    std::size_t y2 = 1;
    std::size_t y3 = 1;
};

/// A state-dependent discrete memoryless relay channel: state pmf Q_S and
/// transition kernel W(y2, y3 | x1, x2, s).
struct DiscreteChannelSpec {
    Alphabets sizes;
    std::vector<double> state_pmf;  // |S|
    std::vector<double> kernel;     // row-major over (x1, x2, s, y2, y3)

    /// Throws ParseError naming the offending cell or slice.
    void validate() const;

    [[nodiscard]] double w(std::size_t x1, std::size_t x2, std::size_t s, std::size_t y2,
                           std::size_t y3) const
    {
        return kernel[(((x1 * sizes.x2 + x2) * sizes.s + s) * sizes.y2 + y2) * sizes.y3 + y3];
    }
};

inline constexpr double kStochasticTolerance = 1e-12;

/// Row-stochastic matrix: each of rows() conditioning configurations carries a
/// pmf over cols() outcomes.
class CondPmf {
public:
    CondPmf() = default;
    CondPmf(std::size_t rows, std::size_t cols);  // every row uniform
    CondPmf(std::size_t rows, std::size_t cols, std::vector<double> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return p_[r * cols_ + c]; }
    [[nodiscard]] std::span<double> row(std::size_t r) { return {p_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {p_.data() + r * cols_, cols_}; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return p_; }

    /// Throws std::invalid_argument naming `what` and the bad row.
    void validate(const std::string& what) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> p_;
};

/// P_{U1} P_{X1|U1} P_{U2|U1,S} P_{X2|U1,U2,S}.
/// Row orders: u2 by (u1, s); x2 by (u1, u2, s).
struct LowerFactorization {
    CondPmf u1;  // 1 x |U1|
    CondPmf x1;  // |U1| x |X1|
    CondPmf u2;  // |U1||S| x |U2|
    CondPmf x2;  // |U1||U2||S| x |X2|

    /// Uniform factors with the given auxiliary sizes.
    static LowerFactorization uniform(const Alphabets& a, std::size_t u1_size, std::size_t u2_size);

    [[nodiscard]] std::size_t u1_size() const noexcept { return u1.cols(); }
    [[nodiscard]] std::size_t u2_size() const noexcept { return u2.cols(); }

    /// Shapes against the channel, each slice a pmf, cardinality caps respected.
    void validate(const Alphabets& a) const;
};

/// P_{X1} (or P_{X1|S} for the trivial bound) and P_{X2|X1,S}, rows of x2 by (x1, s).
struct UpperFactorization {
    CondPmf x1;  // 1 x |X1|, or |S| x |X1|
    CondPmf x2;  // |X1||S| x |X2|

    static UpperFactorization uniform(const Alphabets& a, bool state_aware_source);

    [[nodiscard]] bool state_aware_source() const noexcept { return x1.rows() > 1; }
    void validate(const Alphabets& a) const;
};

/// Largest auxiliary alphabets ever needed by the lower bound.
struct CardinalityBounds {
    std::size_t u1;
    std::size_t u2;
};
[[nodiscard]] CardinalityBounds cardinality_bounds(const Alphabets& a) noexcept;

/// Dense probability tensor, row-major over its axes.
class JointPmf {
public:
    JointPmf() = default;
    explicit JointPmf(std::vector<std::size_t> dims);

    [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t rank() const noexcept { return dims_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return p_.size(); }
    [[nodiscard]] std::span<double> data() noexcept { return p_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return p_; }
    [[nodiscard]] double total() const noexcept;

    [[nodiscard]] double at(std::span<const std::size_t> index) const;
    double& at(std::span<const std::size_t> index);

private:
    [[nodiscard]] std::size_t flat(std::span<const std::size_t> index) const;

    std::vector<std::size_t> dims_;
    std::vector<double> p_;
};

/// Axis order of the lower-bound joint.
namespace lower_axis {
inline constexpr std::size_t S = 0, U1 = 1, U2 = 2, X1 = 3, X2 = 4, Y2 = 5, Y3 = 6;
}
/// Axis order of the upper-bound joint.
namespace upper_axis {
inline constexpr std::size_t S = 0, X1 = 1, X2 = 2, Y2 = 3, Y3 = 4;
}

} // namespace relaycap::dm
