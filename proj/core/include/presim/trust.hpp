#pragma once

// Four-component trust between institutions and the multiplicative feedback
// that tunes the per-peer weights.

#include <stdexcept>
#include <vector>

#include "presim/world.hpp"

namespace presim {

inline constexpr double kWeightMin = 0.01;
inline constexpr double kWeightMax = 10.0;
inline constexpr double kFeedbackUp = 1.1;
inline constexpr double kFeedbackDown = 0.9;
// The aggregate divides by the component count, not by the weight sum, so
// feedback shifts the absolute trust level instead of renormalising it.
inline constexpr double kTrustComponents = 4.0;

struct TrustBreakdown {
  double files = 0;
  double dist = 0;
  double culture = 0;
  double staff = 0;
  double aggregate = 0;
};

// 1/2 (1 + (fj - fi) / (fj + fi)); both zero -> 1/2 (no evidence either way).
double trust_files(long long fi, long long fj);
// 1 - d/dmax; dmax = 0 collapses to 1.  d > dmax is a contract violation.
double trust_distance(double d, double dmax);
// L[i][j] straight from the correlation matrix.
double trust_culture(const std::vector<double>& lang, int n, int i, int j);
// Private peers expose no staff signal (0); a public evaluator compares staff
// sizes symmetrically; a private evaluator admires absolute staffing.
double trust_staff(int si, int sj, int smax_j, bool i_public, bool j_public);

// Weighted aggregate for evaluator i about peer j and media type t.  Uses the
// file-count row matching t plus the three shared rows; refreshes the cached
// file-count entry from live state.  i == j is a contract violation.
TrustBreakdown trust_evaluation(World& world, int i, int j, int t);

struct TrustCounters {
  long long positive = 0;
  long long negative = 0;
};

// Multiplies the four weight entries used for (peer, t) by 1.1 (positive) or
// 0.9 (negative), clamped to [0.01, 10], and counts the variation.
void feedback(Institution& inst, int peer, int t, bool positive, TrustCounters& counters);

}  // namespace presim
