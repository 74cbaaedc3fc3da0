#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "presim/risk.hpp"
#include "presim/rng.hpp"

using namespace presim;
using namespace testutil;

namespace {

// Brute-force oracle: sort ascending, take the highest position among equals.
double rank_oracle(std::vector<long long> values, int target) {
  const long long v = values[target];
  std::vector<long long> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  int p = 0;
  for (size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] <= v) p = static_cast<int>(k);
  const double l = static_cast<double>(values.size());
  return 100.0 / (l - 1) * ((l - 1) - p);
}

}  // namespace

TEST_SUITE_BEGIN("risk");

TEST_CASE("rank_risk maps popularity rank onto [0,100]") {
  CHECK(rank_risk({4, 9, 7}, 0) == 100.0);           // unique minimum
  CHECK(rank_risk({4, 9, 7}, 1) == 0.0);             // unique maximum
  CHECK(rank_risk({5, 9, 1}, 0) == doctest::Approx(50.0));
  CHECK_THROWS_AS(rank_risk({5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(rank_risk({5, 6}, 2), std::invalid_argument);
}

TEST_CASE("ties share the highest position among equals") {
  CHECK(rank_risk({3, 3, 5}, 0) == doctest::Approx(50.0));
  CHECK(rank_risk({3, 3, 5}, 1) == doctest::Approx(50.0));
  // A crowd of zero-count formats is not all rated 100%.
  CHECK(rank_risk({0, 0, 0, 0}, 2) == 0.0);
}

TEST_CASE("rank_risk agrees with the brute-force sort oracle") {
  Rng rng(31);
  for (int k = 0; k < 300; ++k) {
    const int l = static_cast<int>(rng.uniform_int(2, 12));
    std::vector<long long> values(l);
    for (auto& v : values) v = rng.uniform_int(0, 6);  // small range forces ties
    const int target = static_cast<int>(rng.uniform_int(0, l - 1));
    CHECK(rank_risk(values, target) == doctest::Approx(rank_oracle(values, target)));
  }
}

TEST_CASE("rank_risk depends on ranks only") {
  Rng rng(32);
  for (int k = 0; k < 200; ++k) {
    const int l = static_cast<int>(rng.uniform_int(2, 10));
    std::vector<long long> values(l);
    for (auto& v : values) v = rng.uniform_int(0, 50);
    const int target = static_cast<int>(rng.uniform_int(0, l - 1));
    std::vector<long long> affine(l), squared(l);
    for (int i = 0; i < l; ++i) {
      affine[i] = 3 * values[i] + 7;
      squared[i] = values[i] * values[i];
    }
    const double r = rank_risk(values, target);
    CHECK(rank_risk(affine, target) == doctest::Approx(r));
    CHECK(rank_risk(squared, target) == doctest::Approx(r));
  }
}

TEST_CASE("adding files never raises the file-count component") {
  Rng rng(33);
  for (int k = 0; k < 200; ++k) {
    const int l = static_cast<int>(rng.uniform_int(2, 10));
    std::vector<long long> values(l);
    for (auto& v : values) v = rng.uniform_int(0, 30);
    const int target = static_cast<int>(rng.uniform_int(0, l - 1));
    const double before = rank_risk(values, target);
    values[target] += rng.uniform_int(1, 20);
    CHECK(rank_risk(values, target) <= before + 1e-12);
  }
}

TEST_CASE("format_risk is the mean of the three component risks") {
  const FormatRegistry reg = toy_registry({"alpha", "beta", "gamma"}, {"a"}, {1, 1, 1});
  GlobalStatistics stats = GlobalStatistics::zero(reg);

  SUBCASE("top-ranked everywhere is risk-free") {
    stats.file_count[0] = {9, 1, 2};
    stats.institution_count[0] = {5, 1, 2};
    stats.software_count[0] = {7, 1, 2};
    CHECK(format_risk(stats, 0, 0) == 0.0);
  }
  SUBCASE("bottom-ranked everywhere is fully at risk") {
    stats.file_count[0] = {1, 5, 9};
    stats.institution_count[0] = {1, 3, 4};
    stats.software_count[0] = {1, 2, 8};
    CHECK(format_risk(stats, 0, 0) == 100.0);
  }
  SUBCASE("mixed ranks average by hand") {
    // Target format 0: bottom of files (100), top of institutions (0),
    // middle of software (50); mean 50.
    stats.file_count[0] = {1, 5, 9};
    stats.institution_count[0] = {9, 5, 1};
    stats.software_count[0] = {5, 9, 1};
    CHECK(format_risk(stats, 0, 0) == doctest::Approx(50.0));
  }
  SUBCASE("range over random counters") {
    Rng rng(34);
    for (int k = 0; k < 100; ++k) {
      for (auto* list : {&stats.file_count[0], &stats.institution_count[0],
                         &stats.software_count[0]})
        for (auto& v : *list) v = rng.uniform_int(0, 9);
      const double r = format_risk(stats, 0, 1);
      CHECK(r >= 0.0);
      CHECK(r <= 100.0);
    }
  }
}

TEST_CASE("destination_format picks the least-risk renderable format") {
  // Six formats so single-list risks land on multiples of 20; the one
  // installed app renders only the first two.
  const FormatRegistry reg = toy_registry(
      {"f0", "f1", "f2", "f3", "f4", "f5"}, {"a", "b"},
      {1, 0,
       1, 0,
       0, 1,
       0, 1,
       0, 1,
       0, 1});
  GlobalStatistics stats = GlobalStatistics::zero(reg);
  const std::vector<long long> counts = {9, 2, 1, 3, 4, 100};  // risks 20, 80, ...
  stats.file_count[0] = counts;
  stats.institution_count[0] = counts;
  stats.software_count[0] = counts;

  World w = make_world({InstSpec{.apps = {0}}});
  finalize_world(w);
  const Institution& inst = w.institutions[0];

  SUBCASE("risk 20 beats risk 80") {
    REQUIRE(format_risk(stats, 0, 0) == doctest::Approx(20.0));
    REQUIRE(format_risk(stats, 0, 1) == doctest::Approx(80.0));
    const auto dest = destination_format(reg, stats, inst, 0);
    REQUIRE(dest.has_value());
    CHECK(*dest == 0);
  }
  SUBCASE("single renderable format wins by default") {
    const FormatRegistry solo = toy_registry({"f0", "f1", "f2"}, {"only"}, {0, 1, 0});
    GlobalStatistics s = GlobalStatistics::zero(solo);
    s.file_count[0] = {9, 1, 5};  // f1 is the riskiest, still the only choice
    s.institution_count[0] = s.file_count[0];
    s.software_count[0] = s.file_count[0];
    World one = make_world({InstSpec{.apps = {0}}});
    finalize_world(one);
    const auto dest = destination_format(solo, s, one.institutions[0], 0);
    REQUIRE(dest.has_value());
    CHECK(*dest == 1);
  }
  SUBCASE("nothing renderable, nothing suggested") {
    World none = make_world({InstSpec{}});
    finalize_world(none);
    CHECK_FALSE(destination_format(reg, stats, none.institutions[0], 0).has_value());
  }
  SUBCASE("risk ties resolve in registry order") {
    stats.file_count[0] = {5, 5, 1, 1, 1, 1};
    stats.institution_count[0] = stats.file_count[0];
    stats.software_count[0] = stats.file_count[0];
    const auto dest = destination_format(reg, stats, inst, 0);
    REQUIRE(dest.has_value());
    CHECK(*dest == 0);
  }
}

TEST_SUITE_END();
