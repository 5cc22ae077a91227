// Scalar reference kernels. The vector variants mirror these operation by
// operation; any change here must be made to them too.

#include <algorithm>
#include <cmath>

#include "relaycap/kernels.hpp"

namespace relaycap::simd::detail {

namespace {

void lower_inner(const ChannelParams& ch, double rho12, std::span<const double> theta,
                 std::span<const double> rho2s, std::span<double> out)
{
    const double p1p2 = ch.p1 * ch.p2;
    const double p2q = ch.p2 * ch.q;
    const double base = ch.q + ch.n3;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = theta[i];
        const double r = rho2s[i];
        const double tbar = 1.0 - t;
        const double tp2 = t * ch.p2;
        const double num = ch.p1 + tbar * ch.p2 + 2.0 * rho12 * std::sqrt(tbar * p1p2);
        const double den = tp2 + base + 2.0 * r * std::sqrt(t * p2q);
        const double dpc = tp2 * (1.0 - r * r) / ch.n3;
        out[i] = (1.0 + num / den) * (1.0 + dpc);
    }
}

void upper_pair(const ChannelParams& ch, std::span<const double> rho12,
                std::span<const double> rho2s, std::span<double> out)
{
    const double sp1 = std::sqrt(ch.p1);
    const double sp2 = std::sqrt(ch.p2);
    const double sq = std::sqrt(ch.q);
    const double combine = 1.0 / ch.n2 + 1.0 / ch.n3;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = rho12[i];
        const double b = rho2s[i];
        const double a2 = a * a;
        const double cb = 1.0 - b * b;
        const double d = std::max(cb - a2, 0.0);

        double t1;
        if (ch.degraded)
            t1 = cb > 0.0 ? 1.0 + ch.p1 * d / (ch.n2 * cb) : 1.0 + ch.p1 / ch.n2;
        else
            t1 = 1.0 + ch.p1 * (1.0 - (a == 0.0 ? 0.0 : a2 / cb)) * combine;

        const double coh = sp1 + a * sp2;
        const double st = sq + b * sp2;
        const double t2 = (1.0 + coh * coh / (ch.p2 * d + st * st + ch.n3)) * (1.0 + ch.p2 * d / ch.n3);
        out[i] = std::min(t1, t2);
    }
}

void equiv_inner(const ChannelParams& ch, double kappa, std::span<const double> rho,
                 std::span<double> out)
{
    const double k2 = kappa * kappa;
    const double sp1p2 = std::sqrt(ch.p1 * ch.p2);
    const double sp2q = std::sqrt(ch.p2 * ch.q);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double r = rho[i];
        const double c = 1.0 - r * r;
        const double kc = k2 * c;
        const double dpc = std::max(1.0 - kc - r * r, 0.0);
        const double num = ch.p1 + kc * ch.p2 + 2.0 * kappa * std::sqrt(c) * sp1p2;
        const double den = ch.p2 * (1.0 - kc) + ch.q + 2.0 * r * sp2q + ch.n3;
        out[i] = (1.0 + ch.p2 * dpc / ch.n3) * (1.0 + num / den);
    }
}

void df_min(const DfShape& s, std::span<const double> beta, std::span<double> out)
{
    const double sp1p2 = std::sqrt(s.p1 * s.p2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double b = beta[i];
        const double relay = 1.0 + s.p1 * (1.0 - b * b) * s.relay_gain;
        const double dest = 1.0 + (s.p1 + s.p2 + 2.0 * b * sp1p2) / s.dest_noise;
        out[i] = std::min(relay, dest);
    }
}

void threshold_ratio(const ChannelParams& ch, std::span<const double> zeta, std::span<double> out)
{
    const double p1n3 = ch.p1 * ch.n3;
    const double sp2q = std::sqrt(ch.p2 * ch.q);
    const double a = ch.p2 + ch.q + ch.n3;
    const double b = ch.p1 + ch.p2 + ch.q + ch.n3;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double z = zeta[i];
        const double cross = 2.0 * z * sp2q;
        out[i] = p1n3 * (a + cross) / (p1n3 + ch.p2 * (1.0 - z * z) * (b + cross));
    }
}

} // namespace

const KernelTable scalar_table{
    Backend::scalar, lower_inner, upper_pair, equiv_inner, df_min, threshold_ratio,
};

} // namespace relaycap::simd::detail
