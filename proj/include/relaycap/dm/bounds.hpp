#pragma once

// Lower and upper bounds on the capacity of the discrete memoryless relay
// channel with the state known non-causally at the relay only.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>

#include "relaycap/channel.hpp"
#include "relaycap/dm/types.hpp"

namespace relaycap::dm {

JointPmf build_joint_lower(const DiscreteChannelSpec& spec, const LowerFactorization& f);
JointPmf build_joint_upper(const DiscreteChannelSpec& spec, const UpperFactorization& f);

/// The two terms of a min{ , } bound.
struct BoundTerms {
    double relay = 0.0;
    double destination = 0.0;

    [[nodiscard]] double value() const noexcept { return relay < destination ? relay : destination; }
};

/// relay: I(X1; Y2 | S, U1)
/// destination: I(X1, U1, U2; Y3) - I(U2; S | U1), which may be negative.
BoundTerms dm_lower_terms(const DiscreteChannelSpec& spec, const LowerFactorization& f);
double dm_lower_eval(const DiscreteChannelSpec& spec, const LowerFactorization& f);

/// relay: I(X1; Y2, Y3 | S, X2), or I(X1; Y2 | S, X2) when `degraded`
/// destination: I(X1, X2; Y3 | S) - I(X1; S | Y3)
/// Requires a state-independent source (f.x1 with one row).
BoundTerms dm_upper_terms(const DiscreteChannelSpec& spec, const UpperFactorization& f, bool degraded);
double dm_upper_eval(const DiscreteChannelSpec& spec, const UpperFactorization& f, bool degraded);

/// min{ I(X1; Y2, Y3 | S, X2), I(X1, X2; Y3 | S) } with the source allowed to see the state.
BoundTerms dm_trivial_upper_terms(const DiscreteChannelSpec& spec, const UpperFactorization& f);
double dm_trivial_upper_eval(const DiscreteChannelSpec& spec, const UpperFactorization& f);

/// Whether W factors as W(y2 | x1, x2, s) W'(y3 | y2, x2, s).
bool is_degraded(const DiscreteChannelSpec& spec, double tolerance = 1e-9);

enum class SearchMode { lower, upper, trivial };

[[nodiscard]] std::string_view to_string(SearchMode m) noexcept;

struct SearchOptions {
    SearchMode mode = SearchMode::lower;
    std::size_t restarts = 8;
    std::size_t aux_u1 = 2;
    std::size_t aux_u2 = 2;
    std::uint64_t seed = 1;
    bool degraded = false;  // upper mode: use the degraded relay term
};

struct DmSearchResult {
    BoundResult bound;       // rate clamped at 0
    double raw_value = 0.0;  // best objective before clamping
    BoundTerms terms;
    std::variant<LowerFactorization, UpperFactorization> best;
    std::size_t best_restart = 0;
};

/// Randomized coordinate hill climbing over the factor simplices. The result
/// is achieved by the reported factorization, so it never exceeds the true
/// maximum; it is reproducible from (seed, restarts) alone.
DmSearchResult dm_search(const DiscreteChannelSpec& spec, const SearchOptions& options);

} // namespace relaycap::dm
