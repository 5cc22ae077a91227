#include "relaycap/dm/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "relaycap/dm/information.hpp"
#include "detail.hpp"

namespace relaycap::dm {

namespace detail {

JointPmf joint_lower(const DiscreteChannelSpec& spec, const LowerFactorization& f)
{
    const auto& a = spec.sizes;
    const std::size_t nu1 = f.u1_size();
    const std::size_t nu2 = f.u2_size();

    JointPmf joint({a.s, nu1, nu2, a.x1, a.x2, a.y2, a.y3});
    auto cell = joint.data().begin();
    for (std::size_t s = 0; s < a.s; ++s)
        for (std::size_t u1 = 0; u1 < nu1; ++u1)
            for (std::size_t u2 = 0; u2 < nu2; ++u2)
                for (std::size_t x1 = 0; x1 < a.x1; ++x1)
                    for (std::size_t x2 = 0; x2 < a.x2; ++x2) {
                        const double head = spec.state_pmf[s] * f.u1(0, u1) * f.x1(u1, x1) *
                                            f.u2(u1 * a.s + s, u2) * f.x2((u1 * nu2 + u2) * a.s + s, x2);
                        for (std::size_t y2 = 0; y2 < a.y2; ++y2)
                            for (std::size_t y3 = 0; y3 < a.y3; ++y3)
                                *cell++ = head * spec.w(x1, x2, s, y2, y3);
                    }
    return joint;
}

JointPmf joint_upper(const DiscreteChannelSpec& spec, const UpperFactorization& f)
{
    const auto& a = spec.sizes;
    const bool aware = f.state_aware_source();

    JointPmf joint({a.s, a.x1, a.x2, a.y2, a.y3});
    auto cell = joint.data().begin();
    for (std::size_t s = 0; s < a.s; ++s)
        for (std::size_t x1 = 0; x1 < a.x1; ++x1)
            for (std::size_t x2 = 0; x2 < a.x2; ++x2) {
                const double head = spec.state_pmf[s] * f.x1(aware ? s : 0, x1) * f.x2(x1 * a.s + s, x2);
                for (std::size_t y2 = 0; y2 < a.y2; ++y2)
                    for (std::size_t y3 = 0; y3 < a.y3; ++y3)
                        *cell++ = head * spec.w(x1, x2, s, y2, y3);
            }
    return joint;
}

BoundTerms lower_terms(const DiscreteChannelSpec& spec, const LowerFactorization& f)
{
    using namespace lower_axis;
    const auto j = joint_lower(spec, f);
    BoundTerms t;
    t.relay = mutual_information(j, {X1}, {Y2}, {S, U1});
    t.destination = mutual_information(j, {X1, U1, U2}, {Y3}) - mutual_information(j, {U2}, {S}, {U1});
    return t;
}

BoundTerms upper_terms(const DiscreteChannelSpec& spec, const UpperFactorization& f, bool degraded)
{
    using namespace upper_axis;
    const auto j = joint_upper(spec, f);
    BoundTerms t;
    t.relay = degraded ? mutual_information(j, {X1}, {Y2}, {S, X2})
                       : mutual_information(j, {X1}, {Y2, Y3}, {S, X2});
    t.destination = mutual_information(j, {X1, X2}, {Y3}, {S}) - mutual_information(j, {X1}, {S}, {Y3});
    return t;
}

BoundTerms trivial_upper_terms(const DiscreteChannelSpec& spec, const UpperFactorization& f)
{
    using namespace upper_axis;
    const auto j = joint_upper(spec, f);
    BoundTerms t;
    t.relay = mutual_information(j, {X1}, {Y2, Y3}, {S, X2});
    t.destination = mutual_information(j, {X1, X2}, {Y3}, {S});
    return t;
}

} // namespace detail

JointPmf build_joint_lower(const DiscreteChannelSpec& spec, const LowerFactorization& f)
{
    spec.validate();
    f.validate(spec.sizes);
    return detail::joint_lower(spec, f);
}

JointPmf build_joint_upper(const DiscreteChannelSpec& spec, const UpperFactorization& f)
{
    spec.validate();
    f.validate(spec.sizes);
    return detail::joint_upper(spec, f);
}

BoundTerms dm_lower_terms(const DiscreteChannelSpec& spec, const LowerFactorization& f)
{
    spec.validate();
    f.validate(spec.sizes);
    return detail::lower_terms(spec, f);
}

double dm_lower_eval(const DiscreteChannelSpec& spec, const LowerFactorization& f)
{
    return dm_lower_terms(spec, f).value();
}

BoundTerms dm_upper_terms(const DiscreteChannelSpec& spec, const UpperFactorization& f, bool degraded)
{
    spec.validate();
    f.validate(spec.sizes);
    if (f.state_aware_source())
        throw std::invalid_argument("the upper bound needs a source independent of the state");
    return detail::upper_terms(spec, f, degraded);
}

double dm_upper_eval(const DiscreteChannelSpec& spec, const UpperFactorization& f, bool degraded)
{
    return dm_upper_terms(spec, f, degraded).value();
}

BoundTerms dm_trivial_upper_terms(const DiscreteChannelSpec& spec, const UpperFactorization& f)
{
    spec.validate();
    f.validate(spec.sizes);
    return detail::trivial_upper_terms(spec, f);
}

double dm_trivial_upper_eval(const DiscreteChannelSpec& spec, const UpperFactorization& f)
{
    return dm_trivial_upper_terms(spec, f).value();
}

bool is_degraded(const DiscreteChannelSpec& spec, double tolerance)
{
    spec.validate();
    const auto& a = spec.sizes;
    for (std::size_t x2 = 0; x2 < a.x2; ++x2)
        for (std::size_t s = 0; s < a.s; ++s)
            for (std::size_t y2 = 0; y2 < a.y2; ++y2) {
                // W(y2 | x1, x2, s) for every x1; the candidate second stage is
                // read off the source symbol that makes y2 most likely.
                std::vector<double> relay(a.x1, 0.0);
                std::size_t pivot = 0;
                for (std::size_t x1 = 0; x1 < a.x1; ++x1) {
                    for (std::size_t y3 = 0; y3 < a.y3; ++y3)
                        relay[x1] += spec.w(x1, x2, s, y2, y3);
                    if (relay[x1] > relay[pivot])
                        pivot = x1;
                }
                if (relay[pivot] <= 0.0)
                    continue;  // y2 never occurs here: no constraint
                for (std::size_t y3 = 0; y3 < a.y3; ++y3) {
                    const double second = spec.w(pivot, x2, s, y2, y3) / relay[pivot];
                    for (std::size_t x1 = 0; x1 < a.x1; ++x1)
                        if (std::abs(spec.w(x1, x2, s, y2, y3) - relay[x1] * second) > tolerance)
                            return false;
                }
            }
    return true;
}

std::string_view to_string(SearchMode m) noexcept
{
    switch (m) {
    case SearchMode::lower: return "lower";
    case SearchMode::upper: return "upper";
    case SearchMode::trivial: return "trivial";
    }
    return "unknown";
}

} // namespace relaycap::dm
