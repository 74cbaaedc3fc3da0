#pragma once

// Rank-based format risk.  A format's risk per component is its normalised
// position in the ascending popularity order; ties share the highest position
// among equals so a crowd of zero-count formats is not all rated 100%.

#include <optional>
#include <vector>

#include "presim/registry.hpp"
#include "presim/world.hpp"

namespace presim {

// r = 100/(l-1) * ((l-1) - p) where p is the max-rank of values[target] in
// ascending order.  Requires at least two values.
double rank_risk(const std::vector<long long>& values, int target);

// Mean of the rank risks over file count, institution count and software count.
double format_risk(const GlobalStatistics& stats, int t, int f);

// Least-risk renderable format for the institution (ties: registry order).
// Empty when nothing is renderable.
std::optional<int> destination_format(const FormatRegistry& reg,
                                      const GlobalStatistics& stats,
                                      const Institution& inst, int t);

}  // namespace presim
