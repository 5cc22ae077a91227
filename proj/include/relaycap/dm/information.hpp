#pragma once

#include <cstddef>
#include <vector>

#include "relaycap/dm/types.hpp"

namespace relaycap::dm {

using Axes = std::vector<std::size_t>;

/// Marginal on `axes`, in the order given.
JointPmf marginal(const JointPmf& joint, const Axes& axes);

/// H(axes) in bits, 0 log 0 := 0.
double entropy(const JointPmf& joint, const Axes& axes);

/// I(A; B | C) in bits, summed directly as p(a,b,c) log2[p(a,b|c) / (p(a|c) p(b|c))].
/// Cells with zero mass contribute nothing. Throws std::invalid_argument if the
/// groups overlap or name a missing axis.
double mutual_information(const JointPmf& joint, const Axes& a, const Axes& b, const Axes& given = {});

} // namespace relaycap::dm
