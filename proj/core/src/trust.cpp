#include "presim/trust.hpp"

#include <algorithm>

namespace presim {

double trust_files(long long fi, long long fj) {
  if (fi == 0 && fj == 0) return 0.5;
  double a = static_cast<double>(fi), b = static_cast<double>(fj);
  return 0.5 * (1.0 + (b - a) / (b + a));
}

double trust_distance(double d, double dmax) {
  if (dmax == 0) return 1.0;
  if (d > dmax) throw std::invalid_argument("distance exceeds dist_max");
  return 1.0 - d / dmax;
}

double trust_culture(const std::vector<double>& lang, int n, int i, int j) {
  return lang[static_cast<size_t>(i) * n + j];
}

double trust_staff(int si, int sj, int smax_j, bool i_public, bool j_public) {
  if (!j_public) return 0.0;
  if (i_public) {
    if (si == 0 && sj == 0) return 0.5;
    double a = si, b = sj;
    return 0.5 * (1.0 + (b - a) / (b + a));
  }
  if (smax_j <= 0) return 0.0;
  double v = static_cast<double>(sj) / smax_j;
  return std::clamp(v, 0.0, 1.0);
}

TrustBreakdown trust_evaluation(World& world, int i, int j, int t) {
  if (i == j) throw std::invalid_argument("self-trust is undefined");
  Institution& me = world.institutions[i];
  const Institution& peer = world.institutions[j];

  // File counts drift constantly; refresh the cached row entry before use.
  me.matrix_at(t, j) = static_cast<double>(peer.files_total[t]);

  TrustBreakdown out;
  out.files = trust_files(me.files_total[t], static_cast<long long>(me.matrix_at(t, j)));
  out.dist = trust_distance(me.matrix_at(kTrustRowDistance, j), world.dist_max);
  out.culture = me.matrix_at(kTrustRowCulture, j);
  out.staff = trust_staff(me.staff, static_cast<int>(me.matrix_at(kTrustRowStaff, j)),
                          staff_max(peer.kind), is_public(me.kind), is_public(peer.kind));
  out.aggregate = (me.weight_at(t, j) * out.files +
                   me.weight_at(kTrustRowDistance, j) * out.dist +
                   me.weight_at(kTrustRowCulture, j) * out.culture +
                   me.weight_at(kTrustRowStaff, j) * out.staff) /
                  kTrustComponents;
  return out;
}

void feedback(Institution& inst, int peer, int t, bool positive, TrustCounters& counters) {
  const double k = positive ? kFeedbackUp : kFeedbackDown;
  const int rows[4] = {t, kTrustRowDistance, kTrustRowCulture, kTrustRowStaff};
  for (int row : rows) {
    double& w = inst.weight_at(row, peer);
    w = std::clamp(w * k, kWeightMin, kWeightMax);
  }
  if (positive) counters.positive += 1;
  else counters.negative += 1;
}

}  // namespace presim
