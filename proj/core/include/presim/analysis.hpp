#pragma once

// Weighted least-squares fitting of the three observed laws: the sqrt-
// exponential relaxation a*exp(-b*sqrt(t)) + c, plain lines, and the
// saturation curve y0 + A*exp(R0*x).  Nonlinear models use damped Gauss-Newton
// with a Levenberg-style lambda schedule.

#include <functional>
#include <string>
#include <vector>

namespace presim {

struct SeriesPoint {
  double t = 0;
  double y = 0;
  double sigma = 1;
};

struct FitResult {
  std::string model;
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> errors;  // sqrt of covariance diagonal
  double chi2 = 0;
  double reduced_chi2 = 0;
  double pearson = 0;
  int n_points = 0;
  int dof = 0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;  // singular normal matrix or vanishing amplitude

  double operator()(double t) const;  // evaluate the fitted model
};

// Points with t in [lo, hi] and sigma > 0 participate.  Throws
// std::invalid_argument when fewer than (params + 1) such points exist.
FitResult fit_sqrt_exp(const std::vector<SeriesPoint>& pts, double lo, double hi);
FitResult fit_linear(const std::vector<SeriesPoint>& pts, double lo, double hi);
FitResult fit_saturation(const std::vector<SeriesPoint>& pts);

double reduced_chi_square(const std::vector<SeriesPoint>& pts,
                          const std::function<double(double)>& model, int dof);
// Unweighted product-moment correlation of (t, y).
double pearson(const std::vector<SeriesPoint>& pts);

std::string fit_report(const FitResult& r);

}  // namespace presim
