#include "presim/risk.hpp"

#include <limits>
#include <stdexcept>

namespace presim {

double rank_risk(const std::vector<long long>& values, int target) {
  const int l = static_cast<int>(values.size());
  if (l < 2) throw std::invalid_argument("rank_risk needs at least two values");
  if (target < 0 || target >= l) throw std::invalid_argument("rank_risk target out of range");
  // Max-rank without sorting: strictly smaller values plus equal ones, minus one.
  const long long v = values[target];
  int below = 0, equal = 0;
  for (long long x : values) {
    if (x < v) ++below;
    else if (x == v) ++equal;
  }
  const int p = below + equal - 1;
  return 100.0 * static_cast<double>(l - 1 - p) / static_cast<double>(l - 1);
}

double format_risk(const GlobalStatistics& stats, int t, int f) {
  double r = rank_risk(stats.file_count[t], f) +
             rank_risk(stats.institution_count[t], f) +
             rank_risk(stats.software_count[t], f);
  return r / 3.0;
}

std::optional<int> destination_format(const FormatRegistry& reg,
                                      const GlobalStatistics& stats,
                                      const Institution& inst, int t) {
  std::optional<int> best;
  double best_risk = std::numeric_limits<double>::infinity();
  for (int f : renderable_formats(reg, inst.os, inst.software.installed[t], t)) {
    double r = format_risk(stats, t, f);
    if (r < best_risk) {  // ties keep the earlier (registry-order) format
      best_risk = r;
      best = f;
    }
  }
  return best;
}

}  // namespace presim
