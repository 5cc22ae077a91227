#include "relaycap/dm/types.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "relaycap/errors.hpp"

namespace relaycap::dm {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

void DiscreteChannelSpec::validate() const
{
    const auto& a = sizes;
    for (auto [n, name] : {std::pair{a.s, "s"}, {a.x1, "x1"}, {a.x2, "x2"}, {a.y2, "y2"}, {a.y3, "y3"}})
        if (n == 0)
            throw ParseError(std::string("alphabet size ") + name + " must be at least 1");

    if (state_pmf.size() != a.s)
        throw ParseError("state_pmf has " + std::to_string(state_pmf.size()) + " entries, expected " +
                         std::to_string(a.s));
    for (std::size_t i = 0; i < state_pmf.size(); ++i)
        if (!std::isfinite(state_pmf[i]) || state_pmf[i] < 0.0)
            throw ParseError("state_pmf[" + std::to_string(i) + "] = " + fmt(state_pmf[i]) +
                             " is not a probability");
    const double qs = std::accumulate(state_pmf.begin(), state_pmf.end(), 0.0);
    if (std::abs(qs - 1.0) > kStochasticTolerance)
        throw ParseError("state_pmf sums to " + fmt(qs) + ", expected 1");

    const std::size_t slice = a.y2 * a.y3;
    const std::size_t expected = a.x1 * a.x2 * a.s * slice;
    if (kernel.size() != expected)
        throw ParseError("kernel has " + std::to_string(kernel.size()) + " entries, expected " +
                         std::to_string(expected) + " = |X1||X2||S||Y2||Y3|");
    for (std::size_t i = 0; i < kernel.size(); ++i)
        if (!std::isfinite(kernel[i]) || kernel[i] < 0.0)
            throw ParseError("kernel[" + std::to_string(i) + "] = " + fmt(kernel[i]) + " is not a probability");
    for (std::size_t x1 = 0; x1 < a.x1; ++x1)
        for (std::size_t x2 = 0; x2 < a.x2; ++x2)
            for (std::size_t s = 0; s < a.s; ++s) {
                const std::size_t first = ((x1 * a.x2 + x2) * a.s + s) * slice;
                const double sum = std::accumulate(kernel.begin() + static_cast<std::ptrdiff_t>(first),
                                                   kernel.begin() + static_cast<std::ptrdiff_t>(first + slice), 0.0);
                if (std::abs(sum - 1.0) > kStochasticTolerance)
                    throw ParseError("kernel slice (x1=" + std::to_string(x1) + ", x2=" + std::to_string(x2) +
                                     ", s=" + std::to_string(s) + ") at cells [" + std::to_string(first) + ", " +
                                     std::to_string(first + slice) + ") sums to " + fmt(sum) + ", expected 1");
            }
}

CondPmf::CondPmf(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), p_(rows * cols, cols ? 1.0 / static_cast<double>(cols) : 0.0)
{
}

CondPmf::CondPmf(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), p_(std::move(values))
{
    if (p_.size() != rows * cols)
        throw std::invalid_argument("conditional pmf needs " + std::to_string(rows * cols) + " values, got " +
                                    std::to_string(p_.size()));
}

void CondPmf::validate(const std::string& what) const
{
    if (cols_ == 0)
        throw std::invalid_argument(what + " has an empty outcome alphabet");
    for (std::size_t r = 0; r < rows_; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) {
            const double v = (*this)(r, c);
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument(what + " row " + std::to_string(r) + " has entry " + fmt(v));
            sum += v;
        }
        if (std::abs(sum - 1.0) > kStochasticTolerance)
            throw std::invalid_argument(what + " row " + std::to_string(r) + " sums to " + fmt(sum));
    }
}

CardinalityBounds cardinality_bounds(const Alphabets& a) noexcept
{
    const std::size_t base = a.s * a.x1 * a.x2;
    return {base + 1, (base + 1) * base};
}

LowerFactorization LowerFactorization::uniform(const Alphabets& a, std::size_t u1_size, std::size_t u2_size)
{
    return {CondPmf(1, u1_size), CondPmf(u1_size, a.x1), CondPmf(u1_size * a.s, u2_size),
            CondPmf(u1_size * u2_size * a.s, a.x2)};
}

namespace {

void require_shape(const CondPmf& m, std::size_t rows, std::size_t cols, const char* what)
{
    if (m.rows() != rows || m.cols() != cols)
        throw std::invalid_argument(std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
}

} // namespace

void LowerFactorization::validate(const Alphabets& a) const
{
    const std::size_t nu1 = u1.cols();
    const std::size_t nu2 = u2.cols();
    const auto caps = cardinality_bounds(a);
    if (nu1 == 0 || nu1 > caps.u1)
        throw std::invalid_argument("|U1| = " + std::to_string(nu1) + " outside [1, " + std::to_string(caps.u1) + "]");
    if (nu2 == 0 || nu2 > caps.u2)
        throw std::invalid_argument("|U2| = " + std::to_string(nu2) + " outside [1, " + std::to_string(caps.u2) + "]");
    require_shape(u1, 1, nu1, "P_U1");
    require_shape(x1, nu1, a.x1, "P_X1|U1");
    require_shape(u2, nu1 * a.s, nu2, "P_U2|U1,S");
    require_shape(x2, nu1 * nu2 * a.s, a.x2, "P_X2|U1,U2,S");
    u1.validate("P_U1");
    x1.validate("P_X1|U1");
    u2.validate("P_U2|U1,S");
    x2.validate("P_X2|U1,U2,S");
}

UpperFactorization UpperFactorization::uniform(const Alphabets& a, bool state_aware_source)
{
    return {CondPmf(state_aware_source ? a.s : 1, a.x1), CondPmf(a.x1 * a.s, a.x2)};
}

void UpperFactorization::validate(const Alphabets& a) const
{
    if (x1.rows() != 1 && x1.rows() != a.s)
        throw std::invalid_argument("P_X1 must have 1 or |S| rows, got " + std::to_string(x1.rows()));
    require_shape(x1, x1.rows(), a.x1, "P_X1");
    require_shape(x2, a.x1 * a.s, a.x2, "P_X2|X1,S");
    x1.validate("P_X1");
    x2.validate("P_X2|X1,S");
}

JointPmf::JointPmf(std::vector<std::size_t> dims) : dims_(std::move(dims))
{
    std::size_t n = 1;
    for (auto d : dims_)
        n *= d;
    p_.assign(n, 0.0);
}

double JointPmf::total() const noexcept
{
    return std::accumulate(p_.begin(), p_.end(), 0.0);
}

std::size_t JointPmf::flat(std::span<const std::size_t> index) const
{
    if (index.size() != dims_.size())
        throw std::invalid_argument("index rank " + std::to_string(index.size()) + " != tensor rank " +
                                    std::to_string(dims_.size()));
    std::size_t f = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (index[k] >= dims_[k])
            throw std::out_of_range("index out of range on axis " + std::to_string(k));
        f = f * dims_[k] + index[k];
    }
    return f;
}

double JointPmf::at(std::span<const std::size_t> index) const { return p_[flat(index)]; }

double& JointPmf::at(std::span<const std::size_t> index) { return p_[flat(index)]; }

} // namespace relaycap::dm
