#pragma once

// Unchecked evaluators for the search loop; callers validate once up front.

#include "relaycap/dm/bounds.hpp"

namespace relaycap::dm::detail {

JointPmf joint_lower(const DiscreteChannelSpec& spec, const LowerFactorization& f);
JointPmf joint_upper(const DiscreteChannelSpec& spec, const UpperFactorization& f);
BoundTerms lower_terms(const DiscreteChannelSpec& spec, const LowerFactorization& f);
BoundTerms upper_terms(const DiscreteChannelSpec& spec, const UpperFactorization& f, bool degraded);
BoundTerms trivial_upper_terms(const DiscreteChannelSpec& spec, const UpperFactorization& f);

} // namespace relaycap::dm::detail
