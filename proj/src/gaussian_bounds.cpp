#include "relaycap/gaussian_bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaycap/errors.hpp"
#include "relaycap/kernels.hpp"

namespace relaycap {

using opt::Interval;
using opt::PointBatch;

namespace {

double half_log2(double score) { return 0.5 * std::log2(score); }

void require_unit(double v, const char* name)
{
    if (!(v >= 0.0 && v <= 1.0))
        throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
}

void require_nonpositive_unit(double v, const char* name)
{
    if (!(v >= -1.0 && v <= 0.0))
        throw DomainError(std::string(name) + " must lie in [-1, 0], got " + std::to_string(v));
}

void require_degraded(const ChannelParams& ch, const char* what)
{
    if (!ch.degraded)
        throw DomainError(std::string(what) + " applies to the degraded model only");
}

BoundResult df_search(const simd::DfShape& shape, const GridSpec& grid)
{
    const auto& kernels = simd::active();
    const std::array<Interval, 1> box{{{0.0, 1.0}}};
    auto objective = [&](const PointBatch& batch, std::span<double> out) {
        kernels.df_min(shape, batch.axis(0), out);
    };
    const auto r = opt::maximize_batched(objective, box, {}, grid, half_log2);

    const double beta = r.argmax[0];
    const double relay = half_log2_1p(shape.p1 * (1.0 - beta * beta) * shape.relay_gain);
    const double dest = half_log2_1p((shape.p1 + shape.p2 + 2.0 * beta * std::sqrt(shape.p1 * shape.p2)) /
                                     shape.dest_noise);
    BoundResult out;
    out.rate = std::min(relay, dest);
    out.argmax = {beta};
    out.labels = {"beta"};
    out.evaluations = r.diagnostics.evaluations;
    out.grid_tolerance = r.diagnostics.tolerance;
    return out;
}

} // namespace

double lower_term1(const ChannelParams& ch, double rho12)
{
    ch.validate();
    require_unit(rho12, "rho12");
    return half_log2_1p(ch.p1 * (1.0 - rho12 * rho12) / ch.n2);
}

double lower_term2(const ChannelParams& ch, const LowerParams& lp)
{
    ch.validate();
    lp.validate();
    const double tbar = 1.0 - lp.theta;
    const double tp2 = lp.theta * ch.p2;
    const double num = ch.p1 + tbar * ch.p2 + 2.0 * lp.rho12 * std::sqrt(tbar * ch.p1 * ch.p2);
    const double den = tp2 + ch.q + ch.n3 + 2.0 * lp.rho2s * std::sqrt(tp2 * ch.q);
    if (!(den > 0.0))
        throw std::logic_error("lower_term2: non-positive interference-plus-noise power " +
                               std::to_string(den));
    return half_log2_1p(num / den) + half_log2_1p(tp2 * (1.0 - lp.rho2s * lp.rho2s) / ch.n3);
}

double alpha_opt(const ChannelParams& ch, double theta, double rho2s)
{
    ch.validate();
    require_unit(theta, "theta");
    require_nonpositive_unit(rho2s, "rho2s");
    if (ch.q == 0.0)
        throw DomainError("alpha_opt is undefined without state (q = 0)");
    const double tp2 = theta * ch.p2;
    const double own = tp2 * (1.0 - rho2s * rho2s);
    const double lean = rho2s * std::sqrt(tp2 / ch.q);
    return own / (own + ch.n3) * (1.0 + lean) - lean;
}

BoundResult lower_bound(const ChannelParams& ch, const GridSpec& grid)
{
    ch.validate();
    const auto& kernels = simd::active();
    const std::array<Interval, 1> outer{{{0.0, 1.0}}};
    const std::array<Interval, 2> inner{{{0.0, 1.0}, {-1.0, 0.0}}};

    auto term1 = [&](std::span<const double> o) {
        return 1.0 + ch.p1 * (1.0 - o[0] * o[0]) / ch.n2;
    };
    auto term2 = [&](std::span<const double> o, const PointBatch& batch, std::span<double> out) {
        kernels.lower_inner(ch, o[0], batch.axis(0), batch.axis(1), out);
    };
    const auto r = opt::maximin(outer, inner, term1, opt::InnerBatchTerm(term2), {}, grid, half_log2);

    const LowerParams lp{r.outer_argmax[0], r.inner_argmax[0], r.inner_argmax[1]};
    BoundResult out;
    out.rate = std::min(lower_term1(ch, lp.rho12), lower_term2(ch, lp));
    out.argmax = {lp.rho12, lp.theta, lp.rho2s};
    out.labels = {"rho12p", "theta", "rho2sp"};
    out.evaluations = r.evaluations;
    out.grid_tolerance = r.tolerance;
    return out;
}

double upper_term1_general(const ChannelParams& ch, const UpperParams& up)
{
    ch.validate();
    up.validate();
    const double ratio = up.rho12 == 0.0 ? 0.0 : up.rho12 * up.rho12 / (1.0 - up.rho2s * up.rho2s);
    return half_log2_1p(ch.p1 * (1.0 - ratio) * (1.0 / ch.n2 + 1.0 / ch.n3));
}

double upper_term1_degraded(const ChannelParams& ch, const UpperParams& up)
{
    ch.validate();
    up.validate();
    const double cb = 1.0 - up.rho2s * up.rho2s;
    if (cb == 0.0)
        return half_log2_1p(ch.p1 / ch.n2);
    const double d = std::max(cb - up.rho12 * up.rho12, 0.0);
    return half_log2_1p(ch.p1 * d / (ch.n2 * cb));
}

double upper_term2(const ChannelParams& ch, const UpperParams& up)
{
    ch.validate();
    up.validate();
    const double d = std::max(1.0 - up.rho12 * up.rho12 - up.rho2s * up.rho2s, 0.0);
    const double coh = std::sqrt(ch.p1) + up.rho12 * std::sqrt(ch.p2);
    const double st = std::sqrt(ch.q) + up.rho2s * std::sqrt(ch.p2);
    return half_log2_1p(coh * coh / (ch.p2 * d + st * st + ch.n3)) + half_log2_1p(ch.p2 * d / ch.n3);
}

BoundResult upper_bound(const ChannelParams& ch, const GridSpec& grid)
{
    ch.validate();
    const auto& kernels = simd::active();
    // Outer rho2s, inner rho12 as a fraction of its largest feasible value, so
    // the disc is covered without infeasible points and the inner search can
    // land on the ridge where the two terms meet.
    const std::array<Interval, 1> outer{{{-1.0, 0.0}}};
    const std::array<Interval, 1> inner{{{0.0, 1.0}}};
    std::vector<double> rho12;
    std::vector<double> rho2s;
    auto term2 = [&](std::span<const double> o, const PointBatch& batch, std::span<double> out) {
        const double reach = std::sqrt(std::max(1.0 - o[0] * o[0], 0.0));
        const auto frac = batch.axis(0);
        rho12.resize(frac.size());
        rho2s.assign(frac.size(), o[0]);
        for (std::size_t i = 0; i < frac.size(); ++i)
            rho12[i] = frac[i] * reach;
        kernels.upper_pair(ch, rho12, rho2s, out);
    };
    const auto r = opt::maximin(outer, inner, {}, opt::InnerBatchTerm(term2), {}, grid, half_log2);
    const double b = r.outer_argmax[0];
    double a = r.inner_argmax[0] * std::sqrt(std::max(1.0 - b * b, 0.0));
    while (a > 0.0 && a * a + b * b > 1.0)
        a = std::nextafter(a, 0.0);

    const UpperParams up{a, b};
    const double t1 = ch.degraded ? upper_term1_degraded(ch, up) : upper_term1_general(ch, up);
    BoundResult out;
    out.rate = std::min(t1, upper_term2(ch, up));
    out.argmax = {up.rho12, up.rho2s};
    out.labels = {"rho12", "rho2s"};
    out.evaluations = r.evaluations;
    out.grid_tolerance = r.tolerance;
    return out;
}

double equiv_inner_term(const ChannelParams& ch, double kappa, double rho)
{
    ch.validate();
    require_unit(kappa, "kappa");
    require_nonpositive_unit(rho, "rho");
    const double c = 1.0 - rho * rho;
    const double kc = kappa * kappa * c;
    const double own = std::max(1.0 - kc - rho * rho, 0.0);
    const double num = ch.p1 + kc * ch.p2 + 2.0 * kappa * std::sqrt(c) * std::sqrt(ch.p1 * ch.p2);
    const double den = ch.p2 * (1.0 - kc) + ch.q + 2.0 * rho * std::sqrt(ch.p2 * ch.q) + ch.n3;
    return half_log2_1p(ch.p2 * own / ch.n3) + half_log2_1p(num / den);
}

BoundResult upper_bound_degraded_equiv(const ChannelParams& ch, const GridSpec& grid)
{
    ch.validate();
    require_degraded(ch, "upper_bound_degraded_equiv");
    const auto& kernels = simd::active();
    const std::array<Interval, 1> outer{{{0.0, 1.0}}};
    const std::array<Interval, 1> inner{{{-1.0, 0.0}}};

    auto term1 = [&](std::span<const double> o) {
        return 1.0 + ch.p1 * (1.0 - o[0] * o[0]) / ch.n2;
    };
    auto term2 = [&](std::span<const double> o, const PointBatch& batch, std::span<double> out) {
        kernels.equiv_inner(ch, o[0], batch.axis(0), out);
    };
    const auto r = opt::maximin(outer, inner, term1, opt::InnerBatchTerm(term2), {}, grid, half_log2);

    const double kappa = r.outer_argmax[0];
    const double rho = r.inner_argmax[0];
    BoundResult out;
    out.rate = std::min(half_log2_1p(ch.p1 * (1.0 - kappa * kappa) / ch.n2), equiv_inner_term(ch, kappa, rho));
    out.argmax = {kappa, rho};
    out.labels = {"kappa", "rho"};
    out.evaluations = r.evaluations;
    out.grid_tolerance = r.tolerance;
    return out;
}

BoundResult trivial_upper_bound(const ChannelParams& ch, const GridSpec& grid)
{
    ch.validate();
    const double gain = ch.degraded ? 1.0 / ch.n2 : 1.0 / ch.n2 + 1.0 / ch.n3;
    return df_search({ch.p1, ch.p2, gain, ch.n3}, grid);
}

BoundResult trivial_lower_bound(const ChannelParams& ch, const GridSpec& grid)
{
    ch.validate();
    return df_search({ch.p1, ch.p2, 1.0 / (ch.n2 + ch.q), ch.n3 + ch.q}, grid);
}

BoundResult degraded_df_capacity(const ChannelParams& ch, const GridSpec& grid)
{
    ch.validate();
    return df_search({ch.p1, ch.p2, 1.0 / ch.n2, ch.n3}, grid);
}

ThresholdResult capacity_condition_threshold(const ChannelParams& ch, const GridSpec& grid)
{
    ch.validate();
    require_degraded(ch, "capacity_condition_threshold");
    // Without source power every N2 gives the (zero) interference-free rate.
    if (ch.p1 == 0.0)
        return {0.0, -1.0, opt::kToleranceFloor, 0};

    const auto& kernels = simd::active();
    const std::array<Interval, 1> box{{{-1.0, 0.0}}};
    auto objective = [&](const PointBatch& batch, std::span<double> out) {
        kernels.threshold_ratio(ch, batch.axis(0), out);
    };
    const auto r = opt::maximize_batched(objective, box, {}, grid);

    const double z = r.argmax[0];
    const double cross = 2.0 * z * std::sqrt(ch.p2 * ch.q);
    const double p1n3 = ch.p1 * ch.n3;
    const double threshold =
        p1n3 * (ch.p2 + ch.q + ch.n3 + cross) /
        (p1n3 + ch.p2 * (1.0 - z * z) * (ch.p1 + ch.p2 + ch.q + ch.n3 + cross));
    return {threshold, z, r.diagnostics.tolerance, r.diagnostics.evaluations};
}

std::string_view to_string(ExtremeCase c) noexcept
{
    switch (c) {
    case ExtremeCase::no_state: return "no_state";
    case ExtremeCase::silent_relay: return "silent_relay";
    case ExtremeCase::strong_state: return "strong_state";
    }
    return "unknown";
}

std::optional<ExtremeCapacity> extreme_cases(const ChannelParams& ch, const ExtremeCaseOptions& options)
{
    ch.validate();
    require_degraded(ch, "extreme_cases");
    if (ch.q == 0.0)
        return ExtremeCapacity{ExtremeCase::no_state, degraded_df_capacity(ch, options.grid).rate};
    // Reduces to 1/2 log2(1 + P1/(Q + N3)) whenever N2 <= Q + N3, which
    // includes every physically degraded channel.
    if (ch.p2 == 0.0)
        return ExtremeCapacity{ExtremeCase::silent_relay,
                               std::min(half_log2_1p(ch.p1 / ch.n2), half_log2_1p(ch.p1 / (ch.q + ch.n3)))};
    const double scale = std::max({ch.p1, ch.p2, ch.n2, ch.n3});
    if (ch.q >= options.strong_state_ratio * scale)
        return ExtremeCapacity{ExtremeCase::strong_state,
                               std::min(half_log2_1p(ch.p1 / ch.n2), half_log2_1p(ch.p2 / ch.n3))};
    return std::nullopt;
}

} // namespace relaycap
