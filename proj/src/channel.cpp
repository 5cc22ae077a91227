#include "relaycap/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "relaycap/errors.hpp"

namespace relaycap {

namespace {

void require_finite_nonneg(double v, const char* name)
{
    if (!std::isfinite(v) || v < 0.0)
        throw DomainError(std::string(name) + " must be finite and non-negative, got " + std::to_string(v));
}

void require_positive(double v, const char* name)
{
    if (!std::isfinite(v) || v <= 0.0)
        throw DomainError(std::string(name) + " must be finite and positive, got " + std::to_string(v));
}

void require_in(double v, double lo, double hi, const char* name)
{
    if (!(v >= lo && v <= hi))
        throw DomainError(std::string(name) + " must lie in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "], got " + std::to_string(v));
}

} // namespace

void ChannelParams::validate() const
{
    require_finite_nonneg(p1, "p1");
    require_finite_nonneg(p2, "p2");
    require_finite_nonneg(q, "q");
    require_positive(n2, "n2");
    require_positive(n3, "n3");
}

void LowerParams::validate() const
{
    require_in(rho12, 0.0, 1.0, "rho12");
    require_in(theta, 0.0, 1.0, "theta");
    require_in(rho2s, -1.0, 0.0, "rho2s");
}

double LowerParams::sigma12(const ChannelParams& ch) const
{
    return rho12 * std::sqrt((1.0 - theta) * ch.p1 * ch.p2);
}

double LowerParams::sigma2s(const ChannelParams& ch) const
{
    return rho2s * std::sqrt(theta * ch.p2 * ch.q);
}

bool UpperParams::feasible() const noexcept
{
    return rho12 >= 0.0 && rho12 <= 1.0 && rho2s >= -1.0 && rho2s <= 0.0 &&
           rho12 * rho12 + rho2s * rho2s <= 1.0;
}

void UpperParams::validate() const
{
    require_in(rho12, 0.0, 1.0, "rho12");
    require_in(rho2s, -1.0, 0.0, "rho2s");
    if (rho12 * rho12 + rho2s * rho2s > 1.0)
        throw DomainError("rho12^2 + rho2s^2 must not exceed 1, got " +
                          std::to_string(rho12 * rho12 + rho2s * rho2s));
}

double BoundResult::param(const std::string& label) const
{
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label)
            return argmax.at(i);
    throw std::out_of_range("no argmax entry named " + label);
}

std::ostream& operator<<(std::ostream& os, const ChannelParams& ch)
{
    return os << "{p1=" << ch.p1 << " p2=" << ch.p2 << " q=" << ch.q << " n2=" << ch.n2 << " n3=" << ch.n3
              << (ch.degraded ? " degraded}" : " general}");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double half_log2_1p(double snr) { return 0.5 * std::log2(1.0 + snr); }

} // namespace relaycap
