#pragma once

// Grid-scan kernels for the Gaussian bounds.
//
// Every rate that gets maximized is 1/2 log2 of a positive "score" (a product
// or minimum of 1 + SNR factors), and 1/2 log2 is increasing, so the grid
// scans compare scores and never take a logarithm. Each kernel has a scalar
// reference and vector variants; all use the same operation order without
// fused multiply-add, so every backend returns bit-identical scores.
//
// Kernels do not validate their inputs. Callers pass in-box coordinates only.

#include <cstddef>
#include <span>
#include <string_view>

#include "relaycap/channel.hpp"

namespace relaycap::simd {

enum class Backend { scalar, avx2, neon };

[[nodiscard]] std::string_view to_string(Backend b) noexcept;

/// Coefficients of the decode-and-forward shape
///   min{ 1 + p1 (1 - beta^2) relay_gain,  1 + (p1 + p2 + 2 beta sqrt(p1 p2)) / dest_noise }
/// shared by the state-free capacity and both trivial bounds.
struct DfShape {
    double p1 = 0.0;
    double p2 = 0.0;
    double relay_gain = 0.0;  // 1/N at the relay, or 1/N2 + 1/N3 with receiver combining
    double dest_noise = 1.0;
};

struct KernelTable {
    Backend backend;

    /// Score of the lower bound's second term at fixed rho12 over (theta, rho2s) pairs.
    void (*lower_inner)(const ChannelParams& ch, double rho12, std::span<const double> theta,
                        std::span<const double> rho2s, std::span<double> out);

    /// min of the two upper-bound term scores over feasible (rho12, rho2s) pairs;
    /// the first term follows ch.degraded.
    void (*upper_pair)(const ChannelParams& ch, std::span<const double> rho12,
                       std::span<const double> rho2s, std::span<double> out);

    /// Score of the inner (rho) term of the degraded upper bound's kappa form.
    void (*equiv_inner)(const ChannelParams& ch, double kappa, std::span<const double> rho,
                        std::span<double> out);

    void (*df_min)(const DfShape& shape, std::span<const double> beta, std::span<double> out);

    /// The noise ratio whose maximum over zeta is the capacity threshold on N2.
    void (*threshold_ratio)(const ChannelParams& ch, std::span<const double> zeta,
                            std::span<double> out);
};

/// Table for `b`, or nullptr if this build or CPU cannot run it.
[[nodiscard]] const KernelTable* table_for(Backend b) noexcept;

/// Best supported backend, chosen once. RELAYCAP_SIMD=scalar|avx2|neon
/// forces a backend when it is supported.
[[nodiscard]] const KernelTable& active() noexcept;

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(__i386__)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif
} // namespace detail

} // namespace relaycap::simd
