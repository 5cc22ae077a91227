// AVX2 variants of the scalar kernels, four doubles per step. Compiled into
// every x86 build through function target attributes and only reached after
// the dispatcher has checked the CPU.
//
// std::max(x, 0) is (x < 0) ? 0 : x, which is _mm256_max_pd(0, x);
// std::min(a, b) is (b < a) ? b : a, which is _mm256_min_pd(b, a).

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

// std::array<__m256d, N> drops the vector alignment attribute; harmless here.
#pragma GCC diagnostic ignored "-Wignored-attributes"

#include <algorithm>
#include <array>
#include <cmath>

#include "relaycap/kernels.hpp"

#define RELAYCAP_AVX2 __attribute__((target("avx2")))

namespace relaycap::simd::detail {

namespace {

constexpr std::size_t kLanes = 4;

// Runs `body` on full vectors, then once on a padded tail. Padding repeats the
// last valid element so the extra lanes stay inside the kernel's domain.
template <std::size_t N, typename Body>
RELAYCAP_AVX2 inline void for_each_vector(std::array<std::span<const double>, N> in,
                                          std::span<double> out, Body body)
{
    const std::size_t n = out.size();
    std::size_t i = 0;
    std::array<__m256d, N> v;
    for (; i + kLanes <= n; i += kLanes) {
        for (std::size_t k = 0; k < N; ++k)
            v[k] = _mm256_loadu_pd(in[k].data() + i);
        _mm256_storeu_pd(out.data() + i, body(v));
    }
    if (i == n)
        return;
    alignas(32) double tail_in[N][kLanes];
    alignas(32) double tail_out[kLanes];
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < kLanes; ++l)
            tail_in[k][l] = in[k][std::min(i + l, n - 1)];
    for (std::size_t k = 0; k < N; ++k)
        v[k] = _mm256_load_pd(tail_in[k]);
    _mm256_store_pd(tail_out, body(v));
    for (std::size_t l = 0; i + l < n; ++l)
        out[i + l] = tail_out[l];
}

RELAYCAP_AVX2 void lower_inner(const ChannelParams& ch, double rho12, std::span<const double> theta,
                               std::span<const double> rho2s, std::span<double> out)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d p1 = _mm256_set1_pd(ch.p1);
    const __m256d p2 = _mm256_set1_pd(ch.p2);
    const __m256d n3 = _mm256_set1_pd(ch.n3);
    const __m256d p1p2 = _mm256_set1_pd(ch.p1 * ch.p2);
    const __m256d p2q = _mm256_set1_pd(ch.p2 * ch.q);
    const __m256d base = _mm256_set1_pd(ch.q + ch.n3);
    const __m256d r12 = _mm256_set1_pd(rho12);

    for_each_vector<2>({theta, rho2s}, out, [&](const std::array<__m256d, 2>& v) RELAYCAP_AVX2 {
        const __m256d t = v[0];
        const __m256d r = v[1];
        const __m256d tbar = _mm256_sub_pd(one, t);
        const __m256d tp2 = _mm256_mul_pd(t, p2);
        // p1 + tbar*p2 + 2*rho12*sqrt(tbar*p1p2)
        __m256d num = _mm256_add_pd(p1, _mm256_mul_pd(tbar, p2));
        num = _mm256_add_pd(num, _mm256_mul_pd(_mm256_mul_pd(two, r12), _mm256_sqrt_pd(_mm256_mul_pd(tbar, p1p2))));
        // tp2 + base + 2*r*sqrt(t*p2q)
        __m256d den = _mm256_add_pd(tp2, base);
        den = _mm256_add_pd(den, _mm256_mul_pd(_mm256_mul_pd(two, r), _mm256_sqrt_pd(_mm256_mul_pd(t, p2q))));
        // tp2*(1 - r*r)/n3
        const __m256d dpc = _mm256_div_pd(_mm256_mul_pd(tp2, _mm256_sub_pd(one, _mm256_mul_pd(r, r))), n3);
        return _mm256_mul_pd(_mm256_add_pd(one, _mm256_div_pd(num, den)), _mm256_add_pd(one, dpc));
    });
}

RELAYCAP_AVX2 void upper_pair(const ChannelParams& ch, std::span<const double> rho12,
                              std::span<const double> rho2s, std::span<double> out)
{
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d p1 = _mm256_set1_pd(ch.p1);
    const __m256d p2 = _mm256_set1_pd(ch.p2);
    const __m256d n2 = _mm256_set1_pd(ch.n2);
    const __m256d n3 = _mm256_set1_pd(ch.n3);
    const __m256d sp1 = _mm256_set1_pd(std::sqrt(ch.p1));
    const __m256d sp2 = _mm256_set1_pd(std::sqrt(ch.p2));
    const __m256d sq = _mm256_set1_pd(std::sqrt(ch.q));
    const __m256d combine = _mm256_set1_pd(1.0 / ch.n2 + 1.0 / ch.n3);
    const __m256d unconstrained = _mm256_set1_pd(1.0 + ch.p1 / ch.n2);
    const bool degraded = ch.degraded;

    for_each_vector<2>({rho12, rho2s}, out, [&](const std::array<__m256d, 2>& v) RELAYCAP_AVX2 {
        const __m256d a = v[0];
        const __m256d b = v[1];
        const __m256d a2 = _mm256_mul_pd(a, a);
        const __m256d cb = _mm256_sub_pd(one, _mm256_mul_pd(b, b));
        const __m256d d = _mm256_max_pd(zero, _mm256_sub_pd(cb, a2));

        __m256d t1;
        if (degraded) {
            const __m256d inner = _mm256_add_pd(one, _mm256_div_pd(_mm256_mul_pd(p1, d), _mm256_mul_pd(n2, cb)));
            const __m256d positive = _mm256_cmp_pd(cb, zero, _CMP_GT_OQ);
            t1 = _mm256_blendv_pd(unconstrained, inner, positive);
        } else {
            const __m256d a_zero = _mm256_cmp_pd(a, zero, _CMP_EQ_OQ);
            const __m256d ratio = _mm256_blendv_pd(_mm256_div_pd(a2, cb), zero, a_zero);
            t1 = _mm256_add_pd(one, _mm256_mul_pd(_mm256_mul_pd(p1, _mm256_sub_pd(one, ratio)), combine));
        }

        const __m256d coh = _mm256_add_pd(sp1, _mm256_mul_pd(a, sp2));
        const __m256d st = _mm256_add_pd(sq, _mm256_mul_pd(b, sp2));
        const __m256d p2d = _mm256_mul_pd(p2, d);
        const __m256d den = _mm256_add_pd(_mm256_add_pd(p2d, _mm256_mul_pd(st, st)), n3);
        const __m256d mac = _mm256_add_pd(one, _mm256_div_pd(_mm256_mul_pd(coh, coh), den));
        const __m256d t2 = _mm256_mul_pd(mac, _mm256_add_pd(one, _mm256_div_pd(p2d, n3)));
        return _mm256_min_pd(t2, t1);
    });
}

RELAYCAP_AVX2 void equiv_inner(const ChannelParams& ch, double kappa, std::span<const double> rho,
                               std::span<double> out)
{
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d p1 = _mm256_set1_pd(ch.p1);
    const __m256d p2 = _mm256_set1_pd(ch.p2);
    const __m256d q = _mm256_set1_pd(ch.q);
    const __m256d n3 = _mm256_set1_pd(ch.n3);
    const __m256d k = _mm256_set1_pd(kappa);
    const __m256d k2 = _mm256_set1_pd(kappa * kappa);
    const __m256d sp1p2 = _mm256_set1_pd(std::sqrt(ch.p1 * ch.p2));
    const __m256d sp2q = _mm256_set1_pd(std::sqrt(ch.p2 * ch.q));

    for_each_vector<1>({rho}, out, [&](const std::array<__m256d, 1>& v) RELAYCAP_AVX2 {
        const __m256d r = v[0];
        const __m256d r2 = _mm256_mul_pd(r, r);
        const __m256d c = _mm256_sub_pd(one, r2);
        const __m256d kc = _mm256_mul_pd(k2, c);
        const __m256d dpc = _mm256_max_pd(zero, _mm256_sub_pd(_mm256_sub_pd(one, kc), r2));
        // p1 + kc*p2 + 2*kappa*sqrt(c)*sp1p2
        __m256d num = _mm256_add_pd(p1, _mm256_mul_pd(kc, p2));
        num = _mm256_add_pd(num, _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(two, k), _mm256_sqrt_pd(c)), sp1p2));
        // p2*(1 - kc) + q + 2*r*sp2q + n3
        __m256d den = _mm256_add_pd(_mm256_mul_pd(p2, _mm256_sub_pd(one, kc)), q);
        den = _mm256_add_pd(den, _mm256_mul_pd(_mm256_mul_pd(two, r), sp2q));
        den = _mm256_add_pd(den, n3);
        const __m256d own = _mm256_add_pd(one, _mm256_div_pd(_mm256_mul_pd(p2, dpc), n3));
        return _mm256_mul_pd(own, _mm256_add_pd(one, _mm256_div_pd(num, den)));
    });
}

RELAYCAP_AVX2 void df_min(const DfShape& s, std::span<const double> beta, std::span<double> out)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d p1 = _mm256_set1_pd(s.p1);
    const __m256d p1p2sum = _mm256_set1_pd(s.p1 + s.p2);
    const __m256d gain = _mm256_set1_pd(s.relay_gain);
    const __m256d noise = _mm256_set1_pd(s.dest_noise);
    const __m256d sp1p2 = _mm256_set1_pd(std::sqrt(s.p1 * s.p2));

    for_each_vector<1>({beta}, out, [&](const std::array<__m256d, 1>& v) RELAYCAP_AVX2 {
        const __m256d b = v[0];
        const __m256d relay = _mm256_add_pd(
            one, _mm256_mul_pd(_mm256_mul_pd(p1, _mm256_sub_pd(one, _mm256_mul_pd(b, b))), gain));
        const __m256d coh = _mm256_mul_pd(_mm256_mul_pd(two, b), sp1p2);
        const __m256d dest = _mm256_add_pd(one, _mm256_div_pd(_mm256_add_pd(p1p2sum, coh), noise));
        return _mm256_min_pd(dest, relay);
    });
}

RELAYCAP_AVX2 void threshold_ratio(const ChannelParams& ch, std::span<const double> zeta,
                                   std::span<double> out)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d p1n3 = _mm256_set1_pd(ch.p1 * ch.n3);
    const __m256d p2 = _mm256_set1_pd(ch.p2);
    const __m256d sp2q = _mm256_set1_pd(std::sqrt(ch.p2 * ch.q));
    const __m256d a = _mm256_set1_pd(ch.p2 + ch.q + ch.n3);
    const __m256d b = _mm256_set1_pd(ch.p1 + ch.p2 + ch.q + ch.n3);

    for_each_vector<1>({zeta}, out, [&](const std::array<__m256d, 1>& v) RELAYCAP_AVX2 {
        const __m256d z = v[0];
        const __m256d cross = _mm256_mul_pd(_mm256_mul_pd(two, z), sp2q);
        const __m256d num = _mm256_mul_pd(p1n3, _mm256_add_pd(a, cross));
        const __m256d spread = _mm256_mul_pd(_mm256_mul_pd(p2, _mm256_sub_pd(one, _mm256_mul_pd(z, z))),
                                             _mm256_add_pd(b, cross));
        return _mm256_div_pd(num, _mm256_add_pd(p1n3, spread));
    });
}

} // namespace

const KernelTable avx2_table{
    Backend::avx2, lower_inner, upper_pair, equiv_inner, df_min, threshold_ratio,
};

} // namespace relaycap::simd::detail

#endif
