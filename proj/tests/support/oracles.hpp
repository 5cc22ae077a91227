#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's search or kernel code.

#include <algorithm>
#include <cmath>
#include <random>

#include "relaycap/channel.hpp"

namespace oracle {

inline double hl(double snr) { return 0.5 * std::log2(1.0 + snr); }

/// max over beta in [0,1] of min{ hl(p1 (1-b^2) gain), hl((p1 + p2 + 2 b sqrt(p1 p2)) / noise) }.
/// The first argument falls and the second rises in beta, so the optimum is
/// an endpoint or their crossing, found by bisection.
inline double df_capacity(double p1, double p2, double gain, double noise)
{
    auto relay = [&](double b) { return p1 * (1.0 - b * b) * gain; };
    auto dest = [&](double b) { return (p1 + p2 + 2.0 * b * std::sqrt(p1 * p2)) / noise; };
    if (relay(0.0) <= dest(0.0))
        return hl(relay(0.0));
    if (relay(1.0) >= dest(1.0))
        return hl(dest(1.0));
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (relay(mid) > dest(mid) ? lo : hi) = mid;
    }
    return hl(std::min(relay(lo), dest(lo)));
}

/// Degraded relay capacity without state.
inline double state_free_df(const relaycap::ChannelParams& ch)
{
    return df_capacity(ch.p1, ch.p2, 1.0 / ch.n2, ch.n3);
}

/// Capacity threshold by a dense scan over zeta plus golden-section polish.
inline double threshold(const relaycap::ChannelParams& ch)
{
    auto f = [&](double z) {
        const double c = 2.0 * z * std::sqrt(ch.p2 * ch.q);
        return ch.p1 * ch.n3 * (ch.p2 + ch.q + ch.n3 + c) /
               (ch.p1 * ch.n3 + ch.p2 * (1.0 - z * z) * (ch.p1 + ch.p2 + ch.q + ch.n3 + c));
    };
    const int n = 200000;
    double best = f(-1.0), arg = -1.0;
    for (int i = 1; i <= n; ++i) {
        const double z = -1.0 + static_cast<double>(i) / n;
        if (f(z) > best) {
            best = f(z);
            arg = z;
        }
    }
    double a = std::max(-1.0, arg - 1.0 / n), b = std::min(0.0, arg + 1.0 / n);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < 100; ++i) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        (f(c) > f(d) ? b : a) = (f(c) > f(d) ? d : c);
    }
    return std::max(best, f(0.5 * (a + b)));
}

// Plain transcriptions of the rate expressions.

inline double lower_term1(const relaycap::ChannelParams& ch, double r12)
{
    return hl(ch.p1 * (1.0 - r12 * r12) / ch.n2);
}

inline double lower_term2(const relaycap::ChannelParams& ch, double r12, double t, double r2s)
{
    const double tb = 1.0 - t;
    const double num = ch.p1 + tb * ch.p2 + 2.0 * r12 * std::sqrt(tb * ch.p1 * ch.p2);
    const double den = t * ch.p2 + ch.q + ch.n3 + 2.0 * r2s * std::sqrt(t * ch.p2 * ch.q);
    return hl(num / den) + hl(t * ch.p2 * (1.0 - r2s * r2s) / ch.n3);
}

inline double upper_term1_general(const relaycap::ChannelParams& ch, double a, double b)
{
    const double ratio = a == 0.0 ? 0.0 : a * a / (1.0 - b * b);
    return hl(ch.p1 * (1.0 - ratio) * (1.0 / ch.n2 + 1.0 / ch.n3));
}

inline double upper_term1_degraded(const relaycap::ChannelParams& ch, double a, double b)
{
    if (b * b == 1.0)
        return hl(ch.p1 / ch.n2);
    return hl(ch.p1 * (1.0 - a * a - b * b) / (ch.n2 * (1.0 - b * b)));
}

inline double upper_term2(const relaycap::ChannelParams& ch, double a, double b)
{
    const double d = std::max(0.0, 1.0 - a * a - b * b);
    const double coh = std::sqrt(ch.p1) + a * std::sqrt(ch.p2);
    const double st = std::sqrt(ch.q) + b * std::sqrt(ch.p2);
    return hl(coh * coh / (ch.p2 * d + st * st + ch.n3)) + hl(ch.p2 * d / ch.n3);
}

inline double equiv_inner(const relaycap::ChannelParams& ch, double k, double r)
{
    const double c = 1.0 - r * r;
    const double num = ch.p1 + k * k * c * ch.p2 + 2.0 * k * std::sqrt(c) * std::sqrt(ch.p1 * ch.p2);
    const double den = ch.p2 * (1.0 - k * k * c) + ch.q + 2.0 * r * std::sqrt(ch.p2 * ch.q) + ch.n3;
    return hl(std::max(0.0, ch.p2 * (1.0 - k * k * c - r * r)) / ch.n3) + hl(num / den);
}

/// Constants drawn log-uniformly in [-10, 20] dB; degraded draws keep n3 >= n2.
inline relaycap::ChannelParams random_channel(std::mt19937_64& rng, bool degraded)
{
    std::uniform_real_distribution<double> db(-10.0, 20.0);
    auto draw = [&] { return std::pow(10.0, db(rng) / 10.0); };
    relaycap::ChannelParams ch{draw(), draw(), draw(), draw(), draw(), degraded};
    if (degraded && ch.n3 < ch.n2)
        std::swap(ch.n2, ch.n3);
    return ch;
}

} // namespace oracle
