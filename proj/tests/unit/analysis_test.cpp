#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "presim/analysis.hpp"

using namespace presim;

namespace {

std::vector<SeriesPoint> sqrt_exp_series(double a, double b, double c,
                                         double sigma = 0.01) {
  std::vector<SeriesPoint> pts;
  for (int t = 200; t <= 5000; t += 10)
    pts.push_back({double(t), a * std::exp(-b * std::sqrt(double(t))) + c, sigma});
  return pts;
}

std::vector<SeriesPoint> saturation_series(double y0, double A, double R0,
                                           double sigma = 0.005) {
  std::vector<SeriesPoint> pts;
  for (int x = 1; x <= 50; ++x)
    pts.push_back({double(x), y0 + A * std::exp(R0 * x), sigma});
  return pts;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("reduced chi-square against a hand-computed table") {
  const std::vector<SeriesPoint> pts = {
      {1, 2.0, 0.5}, {2, 2.5, 0.25}, {3, 3.5, 0.5}, {4, 5.0, 1.0}};
  const auto line = [](double t) { return 1.0 + t; };
  // Residuals over sigma: 0, -2, -1, 0, so chi2 = 5.
  CHECK(reduced_chi_square(pts, line, 2) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(reduced_chi_square(pts, line, 1) == doctest::Approx(5.0).epsilon(1e-12));

  SUBCASE("a perfect model scores zero") {
    const auto exact = [&](double t) {
      for (const SeriesPoint& q : pts)
        if (q.t == t) return q.y;
      return 0.0;
    };
    CHECK(reduced_chi_square(pts, exact, 2) == 0.0);
  }
  SUBCASE("one-sigma residuals score n over dof") {
    std::vector<SeriesPoint> off = pts;
    for (SeriesPoint& q : off) q.y = (1.0 + q.t) + q.sigma;
    CHECK(reduced_chi_square(off, line, 4) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("rescaling all sigmas by k divides chi2 by k squared") {
    std::vector<SeriesPoint> wide = pts;
    for (SeriesPoint& q : wide) q.sigma *= 2.0;
    CHECK(reduced_chi_square(wide, line, 2) == doctest::Approx(2.5 / 4).epsilon(1e-12));
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(reduced_chi_square(pts, line, 0), std::invalid_argument);
    std::vector<SeriesPoint> bad = pts;
    bad[1].sigma = 0;
    CHECK_THROWS_AS(reduced_chi_square(bad, line, 2), std::invalid_argument);
  }
}

TEST_CASE("pearson correlation") {
  std::vector<SeriesPoint> pts;
  for (int t = 0; t < 20; ++t) pts.push_back({double(t), 3.0 * t + 1.0, 1.0});
  CHECK(pearson(pts) == doctest::Approx(1.0).epsilon(1e-12));

  for (SeriesPoint& q : pts) q.y = -q.y;
  CHECK(pearson(pts) == doctest::Approx(-1.0).epsilon(1e-12));

  SUBCASE("affine rescaling does not move it") {
    std::vector<SeriesPoint> scaled = pts;
    for (SeriesPoint& q : scaled) q.y = 0.01 * q.y + 40.0;
    CHECK(pearson(scaled) == doctest::Approx(pearson(pts)).epsilon(1e-12));
  }
  SUBCASE("degenerate inputs are defined as zero") {
    CHECK(pearson({}) == 0.0);
    CHECK(pearson({{1, 2, 1}}) == 0.0);
    std::vector<SeriesPoint> flat = {{1, 5, 1}, {2, 5, 1}, {3, 5, 1}};
    CHECK(pearson(flat) == 0.0);
  }
}

TEST_CASE("linear fits are exact on linear data") {
  std::vector<SeriesPoint> pts;
  for (int t = 0; t <= 30; ++t) pts.push_back({double(t), 2.0 + 3.0 * t, 0.5});

  const FitResult r = fit_linear(pts, 0, 30);
  CHECK(r.model == "linear");
  CHECK(r.converged);
  CHECK_FALSE(r.degenerate);
  CHECK(r.params[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.params[1] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(r.errors[0] > 0);
  CHECK(r.errors[1] > 0);
  CHECK(r.chi2 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.pearson == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r(10.0) == doctest::Approx(32.0).epsilon(1e-9));

  SUBCASE("points outside the window and unusable sigmas are ignored") {
    std::vector<SeriesPoint> noisy = pts;
    noisy.push_back({100.0, -999.0, 1.0});  // out of range
    noisy.push_back({15.5, 123.0, 0.0});    // sigma 0 never participates
    const FitResult again = fit_linear(noisy, 0, 30);
    CHECK(again.n_points == r.n_points);
    CHECK(again.params[0] == doctest::Approx(r.params[0]).epsilon(1e-12));
    CHECK(again.params[1] == doctest::Approx(r.params[1]).epsilon(1e-12));
  }
  SUBCASE("weights pull the fit toward precise points") {
    // Two precise points fix the line; a wild imprecise one barely matters.
    std::vector<SeriesPoint> mix = {
        {0, 1.0, 1e-4}, {10, 11.0, 1e-4}, {5, 40.0, 1e3}};
    const FitResult pulled = fit_linear(mix, 0, 10);
    CHECK(pulled.params[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(pulled.params[1] == doctest::Approx(1.0).epsilon(1e-4));
  }
  SUBCASE("no spread in t degenerates instead of throwing") {
    std::vector<SeriesPoint> column = {
        {5, 1, 1}, {5, 2, 1}, {5, 3, 1}, {5, 4, 1}};
    const FitResult flat = fit_linear(column, 0, 10);
    CHECK(flat.degenerate);
    CHECK_FALSE(flat.converged);
  }
  SUBCASE("fewer than three usable points throw") {
    CHECK_THROWS_AS(fit_linear(pts, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("the sqrt-exponential fit recovers noiseless truth") {
  const double a = 3.8, b = 0.072, c = 0.19;
  const std::vector<SeriesPoint> pts = sqrt_exp_series(a, b, c);

  const FitResult r = fit_sqrt_exp(pts, 200, 5000);
  CHECK(r.model == "sqrt_exp");
  REQUIRE(r.converged);
  CHECK_FALSE(r.degenerate);
  CHECK(r.params[0] == doctest::Approx(a).epsilon(1e-6));
  CHECK(r.params[1] == doctest::Approx(b).epsilon(1e-6));
  CHECK(r.params[2] == doctest::Approx(c).epsilon(1e-6));
  CHECK(r.reduced_chi2 < 1e-9);
  CHECK(r.n_points == 481);
  CHECK(r.dof == 478);
  CHECK(r(1000.0) ==
        doctest::Approx(a * std::exp(-b * std::sqrt(1000.0)) + c).epsilon(1e-9));

  SUBCASE("the window argument really cuts") {
    const FitResult cut = fit_sqrt_exp(pts, 1000, 2000);
    CHECK(cut.n_points == 101);
    CHECK(cut.params[2] == doctest::Approx(c).epsilon(1e-3));
  }
  SUBCASE("constant data is degenerate, not a crash") {
    std::vector<SeriesPoint> flat;
    for (int t = 200; t <= 400; t += 10) flat.push_back({double(t), 0.19, 0.01});
    const FitResult d = fit_sqrt_exp(flat, 200, 400);
    CHECK((d.degenerate || d.params[0] == doctest::Approx(0.0).epsilon(1e-6)));
  }
  SUBCASE("fewer than four usable points throw") {
    CHECK_THROWS_AS(fit_sqrt_exp(pts, 200, 220), std::invalid_argument);
  }
}

TEST_CASE("the saturation fit recovers noiseless truth") {
  const double y0 = 0.19, A = -0.08, R0 = -0.16;
  const std::vector<SeriesPoint> pts = saturation_series(y0, A, R0);

  const FitResult r = fit_saturation(pts);
  CHECK(r.model == "saturation");
  REQUIRE(r.converged);
  CHECK(r.params[0] == doctest::Approx(y0).epsilon(1e-6));
  CHECK(r.params[1] == doctest::Approx(A).epsilon(1e-6));
  CHECK(r.params[2] == doctest::Approx(R0).epsilon(1e-6));
  CHECK(r.reduced_chi2 < 1e-9);

  SUBCASE("the asymptote dominates a rising series") {
    double ymax = 0;
    for (const SeriesPoint& q : pts) ymax = std::max(ymax, q.y);
    CHECK(r.params[0] >= ymax - 1e-9);
  }
  SUBCASE("fewer than four points throw") {
    CHECK_THROWS_AS(fit_saturation({{1, 1, 1}, {2, 2, 1}, {3, 3, 1}}),
                    std::invalid_argument);
  }
}

TEST_CASE("random single-draw round trips per model") {
  std::mt19937_64 gen(20210412);
  const auto unif = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  };

  SUBCASE("sqrt_exp") {
    const double a = unif(0.5, 5), b = unif(0.03, 0.12), c = unif(0.05, 1);
    const FitResult r = fit_sqrt_exp(sqrt_exp_series(a, b, c), 200, 5000);
    REQUIRE(r.converged);
    CHECK(r.params[0] == doctest::Approx(a).epsilon(1e-6));
    CHECK(r.params[1] == doctest::Approx(b).epsilon(1e-6));
    CHECK(r.params[2] == doctest::Approx(c).epsilon(1e-6));
  }
  SUBCASE("linear") {
    const double a = unif(2, 10), b = unif(-5e-5, 5e-5);
    std::vector<SeriesPoint> pts;
    for (int t = 5000; t <= 10000; t += 10)
      pts.push_back({double(t), a + b * t, 0.01});
    const FitResult r = fit_linear(pts, 5000, 10000);
    CHECK(r.params[0] == doctest::Approx(a).epsilon(1e-7));
    CHECK(r.params[1] == doctest::Approx(b).margin(1e-10));
  }
  SUBCASE("saturation") {
    const double y0 = unif(0.1, 1);
    const double A = -unif(0.1, 0.9) * y0;
    const double R0 = -unif(0.05, 0.5);
    const FitResult r = fit_saturation(saturation_series(y0, A, R0));
    REQUIRE(r.converged);
    CHECK(r.params[0] == doctest::Approx(y0).epsilon(1e-5));
    CHECK(r.params[1] == doctest::Approx(A).epsilon(1e-4));
    CHECK(r.params[2] == doctest::Approx(R0).epsilon(1e-4));
  }
}

TEST_CASE("fit reports carry the essentials") {
  std::vector<SeriesPoint> pts;
  for (int t = 0; t <= 10; ++t) pts.push_back({double(t), 1.0 + 2.0 * t, 0.1});
  const std::string report = fit_report(fit_linear(pts, 0, 10));
  CHECK(testutil::contains(report, "model: linear"));
  CHECK(testutil::contains(report, "a"));
  CHECK(testutil::contains(report, "b"));
}

TEST_SUITE_END();
