// NEON variants of the scalar kernels, two doubles per step (AArch64 only).
// Same operation order as the scalar reference; AArch64 compilers do not
// contract vmulq/vaddq intrinsics into fused operations.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "relaycap/kernels.hpp"

namespace relaycap::simd::detail {

namespace {

constexpr std::size_t kLanes = 2;

template <std::size_t N, typename Body>
inline void for_each_vector(std::array<std::span<const double>, N> in, std::span<double> out,
                            Body body)
{
    const std::size_t n = out.size();
    std::size_t i = 0;
    std::array<float64x2_t, N> v;
    for (; i + kLanes <= n; i += kLanes) {
        for (std::size_t k = 0; k < N; ++k)
            v[k] = vld1q_f64(in[k].data() + i);
        vst1q_f64(out.data() + i, body(v));
    }
    if (i == n)
        return;
    double tail_in[N][kLanes];
    double tail_out[kLanes];
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < kLanes; ++l)
            tail_in[k][l] = in[k][std::min(i + l, n - 1)];
    for (std::size_t k = 0; k < N; ++k)
        v[k] = vld1q_f64(tail_in[k]);
    vst1q_f64(tail_out, body(v));
    for (std::size_t l = 0; i + l < n; ++l)
        out[i + l] = tail_out[l];
}

// (x < 0) ? 0 : x
inline float64x2_t max_zero(float64x2_t x)
{
    const float64x2_t zero = vdupq_n_f64(0.0);
    return vbslq_f64(vcltq_f64(x, zero), zero, x);
}

// (b < a) ? b : a
inline float64x2_t min_of(float64x2_t a, float64x2_t b)
{
    return vbslq_f64(vcltq_f64(b, a), b, a);
}

void lower_inner(const ChannelParams& ch, double rho12, std::span<const double> theta,
                 std::span<const double> rho2s, std::span<double> out)
{
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t p1 = vdupq_n_f64(ch.p1);
    const float64x2_t p2 = vdupq_n_f64(ch.p2);
    const float64x2_t n3 = vdupq_n_f64(ch.n3);
    const float64x2_t p1p2 = vdupq_n_f64(ch.p1 * ch.p2);
    const float64x2_t p2q = vdupq_n_f64(ch.p2 * ch.q);
    const float64x2_t base = vdupq_n_f64(ch.q + ch.n3);
    const float64x2_t r12 = vdupq_n_f64(rho12);

    for_each_vector<2>({theta, rho2s}, out, [&](const std::array<float64x2_t, 2>& v) {
        const float64x2_t t = v[0];
        const float64x2_t r = v[1];
        const float64x2_t tbar = vsubq_f64(one, t);
        const float64x2_t tp2 = vmulq_f64(t, p2);
        float64x2_t num = vaddq_f64(p1, vmulq_f64(tbar, p2));
        num = vaddq_f64(num, vmulq_f64(vmulq_f64(two, r12), vsqrtq_f64(vmulq_f64(tbar, p1p2))));
        float64x2_t den = vaddq_f64(tp2, base);
        den = vaddq_f64(den, vmulq_f64(vmulq_f64(two, r), vsqrtq_f64(vmulq_f64(t, p2q))));
        const float64x2_t dpc = vdivq_f64(vmulq_f64(tp2, vsubq_f64(one, vmulq_f64(r, r))), n3);
        return vmulq_f64(vaddq_f64(one, vdivq_f64(num, den)), vaddq_f64(one, dpc));
    });
}

void upper_pair(const ChannelParams& ch, std::span<const double> rho12,
                std::span<const double> rho2s, std::span<double> out)
{
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t p1 = vdupq_n_f64(ch.p1);
    const float64x2_t p2 = vdupq_n_f64(ch.p2);
    const float64x2_t n2 = vdupq_n_f64(ch.n2);
    const float64x2_t n3 = vdupq_n_f64(ch.n3);
    const float64x2_t sp1 = vdupq_n_f64(std::sqrt(ch.p1));
    const float64x2_t sp2 = vdupq_n_f64(std::sqrt(ch.p2));
    const float64x2_t sq = vdupq_n_f64(std::sqrt(ch.q));
    const float64x2_t combine = vdupq_n_f64(1.0 / ch.n2 + 1.0 / ch.n3);
    const float64x2_t unconstrained = vdupq_n_f64(1.0 + ch.p1 / ch.n2);
    const bool degraded = ch.degraded;

    for_each_vector<2>({rho12, rho2s}, out, [&](const std::array<float64x2_t, 2>& v) {
        const float64x2_t a = v[0];
        const float64x2_t b = v[1];
        const float64x2_t a2 = vmulq_f64(a, a);
        const float64x2_t cb = vsubq_f64(one, vmulq_f64(b, b));
        const float64x2_t d = max_zero(vsubq_f64(cb, a2));

        float64x2_t t1;
        if (degraded) {
            const float64x2_t inner = vaddq_f64(one, vdivq_f64(vmulq_f64(p1, d), vmulq_f64(n2, cb)));
            t1 = vbslq_f64(vcgtq_f64(cb, zero), inner, unconstrained);
        } else {
            const float64x2_t ratio = vbslq_f64(vceqq_f64(a, zero), zero, vdivq_f64(a2, cb));
            t1 = vaddq_f64(one, vmulq_f64(vmulq_f64(p1, vsubq_f64(one, ratio)), combine));
        }

        const float64x2_t coh = vaddq_f64(sp1, vmulq_f64(a, sp2));
        const float64x2_t st = vaddq_f64(sq, vmulq_f64(b, sp2));
        const float64x2_t p2d = vmulq_f64(p2, d);
        const float64x2_t den = vaddq_f64(vaddq_f64(p2d, vmulq_f64(st, st)), n3);
        const float64x2_t mac = vaddq_f64(one, vdivq_f64(vmulq_f64(coh, coh), den));
        const float64x2_t t2 = vmulq_f64(mac, vaddq_f64(one, vdivq_f64(p2d, n3)));
        return min_of(t1, t2);
    });
}

void equiv_inner(const ChannelParams& ch, double kappa, std::span<const double> rho,
                 std::span<double> out)
{
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t p1 = vdupq_n_f64(ch.p1);
    const float64x2_t p2 = vdupq_n_f64(ch.p2);
    const float64x2_t q = vdupq_n_f64(ch.q);
    const float64x2_t n3 = vdupq_n_f64(ch.n3);
    const float64x2_t k = vdupq_n_f64(kappa);
    const float64x2_t k2 = vdupq_n_f64(kappa * kappa);
    const float64x2_t sp1p2 = vdupq_n_f64(std::sqrt(ch.p1 * ch.p2));
    const float64x2_t sp2q = vdupq_n_f64(std::sqrt(ch.p2 * ch.q));

    for_each_vector<1>({rho}, out, [&](const std::array<float64x2_t, 1>& v) {
        const float64x2_t r = v[0];
        const float64x2_t r2 = vmulq_f64(r, r);
        const float64x2_t c = vsubq_f64(one, r2);
        const float64x2_t kc = vmulq_f64(k2, c);
        const float64x2_t dpc = max_zero(vsubq_f64(vsubq_f64(one, kc), r2));
        float64x2_t num = vaddq_f64(p1, vmulq_f64(kc, p2));
        num = vaddq_f64(num, vmulq_f64(vmulq_f64(vmulq_f64(two, k), vsqrtq_f64(c)), sp1p2));
        float64x2_t den = vaddq_f64(vmulq_f64(p2, vsubq_f64(one, kc)), q);
        den = vaddq_f64(den, vmulq_f64(vmulq_f64(two, r), sp2q));
        den = vaddq_f64(den, n3);
        const float64x2_t own = vaddq_f64(one, vdivq_f64(vmulq_f64(p2, dpc), n3));
        return vmulq_f64(own, vaddq_f64(one, vdivq_f64(num, den)));
    });
}

void df_min(const DfShape& s, std::span<const double> beta, std::span<double> out)
{
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t p1 = vdupq_n_f64(s.p1);
    const float64x2_t p1p2sum = vdupq_n_f64(s.p1 + s.p2);
    const float64x2_t gain = vdupq_n_f64(s.relay_gain);
    const float64x2_t noise = vdupq_n_f64(s.dest_noise);
    const float64x2_t sp1p2 = vdupq_n_f64(std::sqrt(s.p1 * s.p2));

    for_each_vector<1>({beta}, out, [&](const std::array<float64x2_t, 1>& v) {
        const float64x2_t b = v[0];
        const float64x2_t relay =
            vaddq_f64(one, vmulq_f64(vmulq_f64(p1, vsubq_f64(one, vmulq_f64(b, b))), gain));
        const float64x2_t coh = vmulq_f64(vmulq_f64(two, b), sp1p2);
        const float64x2_t dest = vaddq_f64(one, vdivq_f64(vaddq_f64(p1p2sum, coh), noise));
        return min_of(relay, dest);
    });
}

void threshold_ratio(const ChannelParams& ch, std::span<const double> zeta, std::span<double> out)
{
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t p1n3 = vdupq_n_f64(ch.p1 * ch.n3);
    const float64x2_t p2 = vdupq_n_f64(ch.p2);
    const float64x2_t sp2q = vdupq_n_f64(std::sqrt(ch.p2 * ch.q));
    const float64x2_t a = vdupq_n_f64(ch.p2 + ch.q + ch.n3);
    const float64x2_t b = vdupq_n_f64(ch.p1 + ch.p2 + ch.q + ch.n3);

    for_each_vector<1>({zeta}, out, [&](const std::array<float64x2_t, 1>& v) {
        const float64x2_t z = v[0];
        const float64x2_t cross = vmulq_f64(vmulq_f64(two, z), sp2q);
        const float64x2_t num = vmulq_f64(p1n3, vaddq_f64(a, cross));
        const float64x2_t spread =
            vmulq_f64(vmulq_f64(p2, vsubq_f64(one, vmulq_f64(z, z))), vaddq_f64(b, cross));
        return vdivq_f64(num, vaddq_f64(p1n3, spread));
    });
}

} // namespace

const KernelTable neon_table{
    Backend::neon, lower_inner, upper_pair, equiv_inner, df_min, threshold_ratio,
};

} // namespace relaycap::simd::detail

#endif
