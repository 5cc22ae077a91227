#pragma once

// Closed-form rate expressions of the Gaussian relay channel whose state is
// known non-causally at the relay only, and their maximin optimizations.
// Rates are in bits per channel use.

#include <optional>
#include <string_view>

#include "relaycap/channel.hpp"
#include "relaycap/grid_search.hpp"

namespace relaycap {

using opt::GridSpec;

// ---- Lower bound: codeword splitting plus generalized dirty-paper coding ----

/// 1/2 log2(1 + P1 (1 - rho12^2) / N2): the source-to-relay decoding rate.
double lower_term1(const ChannelParams& ch, double rho12);

/// Rate seen at the destination: the coherent source/cooperative-relay signal
/// over the state-dependent part, plus the dirty-paper part's own rate.
double lower_term2(const ChannelParams& ch, const LowerParams& lp);

/// Inflation factor of the generalized dirty-paper auxiliary U2 = X2~ + alpha S.
/// Requires q > 0.
double alpha_opt(const ChannelParams& ch, double theta, double rho2s);

/// max over rho12 of min{ term1, max over (theta, rho2s) of term2 }.
/// argmax labels: rho12p, theta, rho2sp.
BoundResult lower_bound(const ChannelParams& ch, const GridSpec& grid = {});

// ---- Upper bounds ----

double upper_term1_general(const ChannelParams& ch, const UpperParams& up);
double upper_term1_degraded(const ChannelParams& ch, const UpperParams& up);
double upper_term2(const ChannelParams& ch, const UpperParams& up);

/// max over the feasible disc of min{ term1, term2 }, term1 per ch.degraded.
/// argmax labels: rho12, rho2s.
BoundResult upper_bound(const ChannelParams& ch, const GridSpec& grid = {});

/// The degraded upper bound in the (kappa, rho) parameterization,
/// kappa = rho12 / sqrt(1 - rho2s^2). Requires ch.degraded.
/// argmax labels: kappa, rho.
BoundResult upper_bound_degraded_equiv(const ChannelParams& ch, const GridSpec& grid = {});

/// Inner term of the kappa form at a single point.
double equiv_inner_term(const ChannelParams& ch, double kappa, double rho);

// ---- Reference curves ----

/// Cut-set bound with the state known at every node (so it can be removed):
/// state-free decode-and-forward form, receiver combining in the general model.
/// argmax label: beta.
BoundResult trivial_upper_bound(const ChannelParams& ch, const GridSpec& grid = {});

/// Decode-and-forward with the state treated as extra noise at both receivers.
/// argmax label: beta.
BoundResult trivial_lower_bound(const ChannelParams& ch, const GridSpec& grid = {});

/// Capacity of the state-free degraded relay channel (ch.q ignored).
/// argmax label: beta.
BoundResult degraded_df_capacity(const ChannelParams& ch, const GridSpec& grid = {});

// ---- Capacity results for the degraded model ----

struct ThresholdResult {
    double threshold = 0.0;  // linear noise variance
    double zeta = 0.0;       // maximizer
    double tolerance = 0.0;
    std::size_t evaluations = 0;

    /// N2 at or above the threshold: capacity is 1/2 log2(1 + P1/N2).
    [[nodiscard]] bool capacity_known(double n2) const noexcept { return n2 >= threshold; }
};

/// Smallest relay noise N2 from which the lower bound meets the upper bound at
/// the interference-free rate 1/2 log2(1 + P1/N2).
ThresholdResult capacity_condition_threshold(const ChannelParams& ch, const GridSpec& grid = {});

enum class ExtremeCase {
    no_state,      // q = 0
    silent_relay,  // p2 = 0
    strong_state,  // q above the configured ratio
};

[[nodiscard]] std::string_view to_string(ExtremeCase c) noexcept;

struct ExtremeCapacity {
    ExtremeCase kind;
    double capacity = 0.0;
};

struct ExtremeCaseOptions {
    /// q >= ratio * max(p1, p2, n2, n3) counts as an arbitrarily strong state.
    double strong_state_ratio = 1e6;
    GridSpec grid;
};

/// Capacity of the degraded model when it falls into a case with a closed form.
std::optional<ExtremeCapacity> extreme_cases(const ChannelParams& ch,
                                             const ExtremeCaseOptions& options = {});

} // namespace relaycap
