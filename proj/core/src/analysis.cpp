#include "presim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace presim {

namespace {

double safe_exp(double x) { return std::exp(std::min(x, 700.0)); }

std::vector<SeriesPoint> window(const std::vector<SeriesPoint>& pts, double lo, double hi) {
  std::vector<SeriesPoint> out;
  for (const SeriesPoint& p : pts)
    if (p.t >= lo && p.t <= hi && p.sigma > 0) out.push_back(p);
  std::sort(out.begin(), out.end(),
            [](const SeriesPoint& a, const SeriesPoint& b) { return a.t < b.t; });
  return out;
}

// Solve A x = b in place (n <= 4); returns false when A is singular to
// working precision.
bool solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x) {
  double scale = 0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
  if (scale == 0) return false;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) <= 1e-14 * scale) return false;
    if (piv != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      double m = a[r * n + col] / a[col * n + col];
      for (int k = col; k < n; ++k) a[r * n + k] -= m * a[col * n + k];
      b[r] -= m * b[col];
    }
  }
  x.assign(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  return true;
}

bool invert(const std::vector<double>& a, int n, std::vector<double>& inv) {
  inv.assign(static_cast<size_t>(n) * n, 0.0);
  for (int c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0);
    e[c] = 1.0;
    std::vector<double> col;
    if (!solve(a, e, n, col)) return false;
    for (int r = 0; r < n; ++r) inv[r * n + c] = col[r];
  }
  return true;
}

using ModelFn = double (*)(const std::vector<double>&, double);
using GradFn = void (*)(const std::vector<double>&, double, double*);

double chi2_of(const std::vector<SeriesPoint>& pts, ModelFn f, const std::vector<double>& p) {
  double c = 0;
  for (const SeriesPoint& q : pts) {
    double r = (q.y - f(p, q.t)) / q.sigma;
    c += r * r;
  }
  return c;
}

// Damped Gauss-Newton: lambda scales the normal-matrix diagonal, x10 on a
// rejected step, /10 on an accepted one.  Convergence is a relative chi^2
// change below 1e-10; 500 iterations at most.
FitResult gauss_newton(const std::vector<SeriesPoint>& pts, const std::string& model,
                       std::vector<std::string> names, std::vector<double> p,
                       ModelFn f, GradFn grad) {
  const int np = static_cast<int>(p.size());
  const int n = static_cast<int>(pts.size());
  FitResult res;
  res.model = model;
  res.names = std::move(names);
  res.n_points = n;
  res.dof = n - np;
  res.pearson = pearson(pts);

  double chi2 = chi2_of(pts, f, p);
  double lambda = 1e-3;
  std::vector<double> g(np), jac(np);

  for (res.iterations = 1; res.iterations <= 500; ++res.iterations) {
    std::vector<double> a(static_cast<size_t>(np) * np, 0.0);
    std::fill(g.begin(), g.end(), 0.0);
    for (const SeriesPoint& q : pts) {
      grad(p, q.t, jac.data());
      double r = (q.y - f(p, q.t)) / q.sigma;
      for (int i = 0; i < np; ++i) {
        double ji = jac[i] / q.sigma;
        g[i] += ji * r;
        for (int j = 0; j < np; ++j) a[i * np + j] += ji * jac[j] / q.sigma;
      }
    }

    std::vector<double> damped = a;
    for (int i = 0; i < np; ++i) {
      double d = a[i * np + i];
      damped[i * np + i] = d + lambda * (d != 0 ? d : 1.0);
    }
    std::vector<double> delta;
    if (!solve(damped, g, np, delta)) {
      lambda *= 10;
      if (lambda > 1e12) break;
      continue;
    }
    std::vector<double> trial(p);
    for (int i = 0; i < np; ++i) trial[i] += delta[i];
    double chi2_trial = chi2_of(pts, f, trial);
    if (std::isfinite(chi2_trial) && chi2_trial <= chi2) {
      double drop = chi2 - chi2_trial;
      p = std::move(trial);
      chi2 = chi2_trial;
      lambda = std::max(lambda / 10, 1e-12);
      if (drop <= 1e-10 * std::max(chi2, 1e-300)) {
        res.converged = true;
        break;
      }
    } else {
      lambda *= 10;
      if (lambda > 1e12) break;
    }
  }

  res.params = p;
  res.chi2 = chi2;
  res.reduced_chi2 = res.dof > 0 ? chi2 / res.dof : 0;
  res.errors.assign(np, 0.0);
  // Covariance from the undamped normal matrix at the solution.
  std::vector<double> a(static_cast<size_t>(np) * np, 0.0);
  for (const SeriesPoint& q : pts) {
    grad(p, q.t, jac.data());
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j)
        a[i * np + j] += jac[i] * jac[j] / (q.sigma * q.sigma);
  }
  std::vector<double> cov;
  if (invert(a, np, cov)) {
    for (int i = 0; i < np; ++i)
      res.errors[i] = cov[i * np + i] > 0 ? std::sqrt(cov[i * np + i]) : 0.0;
  } else {
    res.degenerate = true;
  }
  return res;
}

double sqrt_exp_f(const std::vector<double>& p, double t) {
  return p[0] * safe_exp(-p[1] * std::sqrt(t)) + p[2];
}
void sqrt_exp_grad(const std::vector<double>& p, double t, double* g) {
  double s = std::sqrt(t);
  double e = safe_exp(-p[1] * s);
  g[0] = e;
  g[1] = -p[0] * s * e;
  g[2] = 1.0;
}

double saturation_f(const std::vector<double>& p, double x) {
  return p[0] + p[1] * safe_exp(p[2] * x);
}
void saturation_grad(const std::vector<double>& p, double x, double* g) {
  double e = safe_exp(p[2] * x);
  g[0] = 1.0;
  g[1] = e;
  g[2] = p[1] * x * e;
}

// Slope of z against u by plain least squares; false when degenerate.
bool slope_of(const std::vector<double>& u, const std::vector<double>& z, double& slope) {
  const size_t n = u.size();
  if (n < 2) return false;
  double su = 0, sz = 0, suu = 0, suz = 0;
  for (size_t i = 0; i < n; ++i) {
    su += u[i];
    sz += z[i];
    suu += u[i] * u[i];
    suz += u[i] * z[i];
  }
  double d = n * suu - su * su;
  if (d <= 0) return false;
  slope = (n * suz - su * sz) / d;
  return true;
}

double tail_mean(const std::vector<SeriesPoint>& pts) {
  size_t k = std::max<size_t>(1, pts.size() / 10);
  double m = 0;
  for (size_t i = pts.size() - k; i < pts.size(); ++i) m += pts[i].y;
  return m / k;
}

}  // namespace

double FitResult::operator()(double t) const {
  if (model == "sqrt_exp") return sqrt_exp_f(params, t);
  if (model == "linear") return params[0] + params[1] * t;
  return saturation_f(params, t);
}

FitResult fit_sqrt_exp(const std::vector<SeriesPoint>& pts, double lo, double hi) {
  auto w = window(pts, lo, hi);
  if (w.size() < 4)
    throw std::invalid_argument("fit_sqrt_exp needs at least 4 usable points in range");

  double c0 = tail_mean(w);
  double a0 = w.front().y - c0;
  // b from log-linearising the first decile: ln|y - c| = ln|a| - b sqrt(t).
  std::vector<double> u, z;
  size_t head = std::max<size_t>(2, w.size() / 10);
  for (size_t i = 0; i < head && i < w.size(); ++i) {
    double d = w[i].y - c0;
    if (a0 != 0 && d * a0 > 0) {
      u.push_back(std::sqrt(w[i].t));
      z.push_back(std::log(std::abs(d)));
    }
  }
  double slope = 0, b0;
  if (slope_of(u, z, slope) && slope < 0) b0 = -slope;
  else b0 = 1.0 / std::sqrt(std::max(1.0, 0.5 * (w.front().t + w.back().t)));
  if (a0 == 0) a0 = 1e-12;

  return gauss_newton(w, "sqrt_exp", {"a", "b", "c"}, {a0, b0, c0},
                      sqrt_exp_f, sqrt_exp_grad);
}

FitResult fit_linear(const std::vector<SeriesPoint>& pts, double lo, double hi) {
  auto w = window(pts, lo, hi);
  if (w.size() < 3)
    throw std::invalid_argument("fit_linear needs at least 3 usable points in range");

  FitResult res;
  res.model = "linear";
  res.names = {"a", "b"};
  res.n_points = static_cast<int>(w.size());
  res.dof = res.n_points - 2;
  double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const SeriesPoint& q : w) {
    double wgt = 1.0 / (q.sigma * q.sigma);
    s += wgt;
    sx += wgt * q.t;
    sy += wgt * q.y;
    sxx += wgt * q.t * q.t;
    sxy += wgt * q.t * q.y;
  }
  double d = s * sxx - sx * sx;
  if (d <= 0 || !std::isfinite(d)) {
    res.degenerate = true;
    res.params = {0, 0};
    res.errors = {0, 0};
    return res;
  }
  double a = (sxx * sy - sx * sxy) / d;
  double b = (s * sxy - sx * sy) / d;
  res.params = {a, b};
  res.errors = {std::sqrt(sxx / d), std::sqrt(s / d)};
  res.chi2 = chi2_of(w, [](const std::vector<double>& p, double t) {
    return p[0] + p[1] * t;
  }, res.params);
  res.reduced_chi2 = res.dof > 0 ? res.chi2 / res.dof : 0;
  res.pearson = pearson(w);
  res.converged = true;
  res.iterations = 1;
  return res;
}

FitResult fit_saturation(const std::vector<SeriesPoint>& pts) {
  auto w = window(pts, -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity());
  if (w.size() < 4)
    throw std::invalid_argument("fit_saturation needs at least 4 usable points");

  double y0 = tail_mean(w);
  double a0 = w.front().y - y0;
  std::vector<double> u, z;
  for (const SeriesPoint& q : w) {
    double d = q.y - y0;
    if (a0 != 0 && d * a0 > 0) {
      u.push_back(q.t);
      z.push_back(std::log(std::abs(d)));
    }
  }
  double r0 = 0, slope = 0;
  if (slope_of(u, z, slope)) r0 = slope;
  else r0 = -1.0 / std::max(1.0, w.back().t - w.front().t);
  if (a0 == 0) a0 = 1e-12;

  return gauss_newton(w, "saturation", {"y0", "A", "R0"}, {y0, a0, r0},
                      saturation_f, saturation_grad);
}

double reduced_chi_square(const std::vector<SeriesPoint>& pts,
                          const std::function<double(double)>& model, int dof) {
  if (dof <= 0) throw std::invalid_argument("reduced chi-square needs dof > 0");
  double c = 0;
  for (const SeriesPoint& q : pts) {
    if (q.sigma <= 0) throw std::invalid_argument("reduced chi-square needs sigma > 0");
    double r = (q.y - model(q.t)) / q.sigma;
    c += r * r;
  }
  return c / dof;
}

double pearson(const std::vector<SeriesPoint>& pts) {
  const size_t n = pts.size();
  if (n < 2) return 0;
  double mt = 0, my = 0;
  for (const SeriesPoint& q : pts) {
    mt += q.t;
    my += q.y;
  }
  mt /= n;
  my /= n;
  double ctt = 0, cyy = 0, cty = 0;
  for (const SeriesPoint& q : pts) {
    ctt += (q.t - mt) * (q.t - mt);
    cyy += (q.y - my) * (q.y - my);
    cty += (q.t - mt) * (q.y - my);
  }
  if (ctt <= 0 || cyy <= 0) return 0;
  return cty / std::sqrt(ctt * cyy);
}

std::string fit_report(const FitResult& r) {
  std::ostringstream os;
  os << "model: " << r.model << '\n';
  os << "points: " << r.n_points << "  dof: " << r.dof << '\n';
  for (size_t i = 0; i < r.params.size(); ++i)
    os << "  " << r.names[i] << " = " << r.params[i] << " +- " << r.errors[i] << '\n';
  os << "chi2: " << r.chi2 << "  reduced: " << r.reduced_chi2 << '\n';
  os << "pearson: " << r.pearson << '\n';
  os << "converged: " << (r.converged ? "yes" : "no")
     << (r.degenerate ? " (degenerate)" : "") << '\n';
  return os.str();
}

}  // namespace presim
