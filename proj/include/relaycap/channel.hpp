#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace relaycap {

/// Constants of the state-dependent Gaussian relay channel
///
///   Y2 = X1 + S + Z2,   Y3 = X1 + X2 + S + Z3
///
/// with E[X1^2] <= p1, E[X2^2] <= p2, S ~ N(0, q), Z2 ~ N(0, n2),
/// Z3 ~ N(0, n3). All values are linear (not dB).
///
/// With `degraded` set the destination sees Y3 = X2 + Y2 + Z3' where
/// Var(Z3') = n3 - n2. The rate expressions stay well defined for n2 > n3,
/// so that case is accepted and evaluated as written.
struct ChannelParams {
    double p1 = 0.0;
    double p2 = 0.0;
    double q = 0.0;
    double n2 = 1.0;
    double n3 = 1.0;
    bool degraded = false;

    /// Throws DomainError naming the first offending field.
    void validate() const;

    /// n3 >= n2, i.e. the degraded model has a non-negative extra noise.
    [[nodiscard]] bool physically_degraded() const noexcept { return n3 >= n2; }
};

/// Code parameters of the informed-relay lower bound.
struct LowerParams {
    double rho12 = 0.0;  // correlation of X1 with the cooperative part U1, in [0, 1]
    double theta = 0.0;  // share of relay power spent on the state-dependent part, in [0, 1]
    double rho2s = 0.0;  // correlation of that part with the state, in [-1, 0]

    void validate() const;

    /// E[X1 X2] implied by rho12 and theta.
    [[nodiscard]] double sigma12(const ChannelParams& ch) const;
    /// E[X2 S] implied by rho2s and theta.
    [[nodiscard]] double sigma2s(const ChannelParams& ch) const;
};

/// Input correlations of the upper bound; jointly feasible iff rho12^2 + rho2s^2 <= 1.
struct UpperParams {
    double rho12 = 0.0;  // [0, 1]
    double rho2s = 0.0;  // [-1, 0]

    [[nodiscard]] bool feasible() const noexcept;
    void validate() const;
};

/// A bound value in bits per channel use, together with where it was attained.
struct BoundResult {
    double rate = 0.0;
    std::vector<double> argmax;
    std::vector<std::string> labels;  // one per argmax entry
    std::size_t evaluations = 0;
    double grid_tolerance = 0.0;

    /// Argmax entry by label; throws std::out_of_range if absent.
    [[nodiscard]] double param(const std::string& label) const;
};

std::ostream& operator<<(std::ostream& os, const ChannelParams& ch);

[[nodiscard]] double db_to_linear(double db);
[[nodiscard]] double linear_to_db(double linear);

/// 0.5 * log2(1 + snr); the Gaussian capacity in bits.
[[nodiscard]] double half_log2_1p(double snr);

} // namespace relaycap
