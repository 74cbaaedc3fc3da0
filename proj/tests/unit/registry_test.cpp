#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "presim/registry.hpp"

using namespace presim;
using namespace testutil;

TEST_SUITE_BEGIN("registry");

TEST_CASE("bundled dataset loads with 50 formats per type") {
  const RegistryPaths paths = RegistryPaths::conventional(PRESIM_DATA_DIR);
  const FormatRegistry reg = load_registry(paths, 42);
  for (int t = 0; t < kMediaTypes; ++t) {
    CHECK(reg.format_count(t) == 50);
    for (int os = 0; os < kOsCount; ++os) CHECK(reg.app_count(os, t) >= 10);
    CHECK(reg.compat[t].size() ==
          static_cast<size_t>(reg.format_count(t)) * reg.catalog_size(t));
    for (double m : reg.migration_coef[t]) {
      CHECK(m >= 10.0);
      CHECK(m <= 90.0);
    }
  }
}

TEST_CASE("identical coefficient seed gives bitwise-identical matrices") {
  const RegistryPaths paths = RegistryPaths::conventional(PRESIM_DATA_DIR);
  const FormatRegistry a = load_registry(paths, 7);
  const FormatRegistry b = load_registry(paths, 7);
  const FormatRegistry c = load_registry(paths, 8);
  for (int t = 0; t < kMediaTypes; ++t) {
    CHECK(a.migration_coef[t] == b.migration_coef[t]);
    CHECK(a.migration_coef[t] != c.migration_coef[t]);
  }
}

TEST_CASE("loader rejects broken data files, naming the file") {
  TempDir dir;
  write_toy_data_dir(dir);
  const auto load = [&] { return load_registry(RegistryPaths::conventional(dir.path.string()), 1); };

  SUBCASE("well-formed toy directory loads") {
    const FormatRegistry reg = load();
    CHECK(reg.format_count(0) == 2);
    CHECK(reg.catalog_size(0) == 2);
  }
  SUBCASE("empty format list") {
    dir.file("formats_audio.txt", "\n");
    const std::string msg = error_message<LoadError>(load);
    CHECK(contains(msg, "formats_audio.txt"));
    CHECK(contains(msg, "empty list"));
  }
  SUBCASE("row count mismatch against the format list") {
    dir.file("compat_text.csv", "1,0\n1,1\n0,1\n");
    const std::string msg = error_message<LoadError>(load);
    CHECK(contains(msg, "compat_text.csv"));
    CHECK(contains(msg, "expected 2"));
  }
  SUBCASE("column count mismatch against the application catalog") {
    dir.file("compat_image.csv", "1,0,1\n1,1,0\n");
    const std::string msg = error_message<LoadError>(load);
    CHECK(contains(msg, "compat_image.csv"));
    CHECK(contains(msg, "columns"));
  }
  SUBCASE("compat row of all zeros is an unrenderable format") {
    dir.file("compat_video.csv", "1,0\n0,0\n");
    const std::string msg = error_message<LoadError>(load);
    CHECK(contains(msg, "compat_video.csv"));
    CHECK(contains(msg, "beta"));
    CHECK(contains(msg, "renderable by no application"));
  }
  SUBCASE("non-numeric compat cell") {
    dir.file("compat_audio.csv", "1,x\n1,1\n");
    CHECK(contains(error_message<LoadError>(load), "bad number"));
  }
  SUBCASE("missing file") {
    std::filesystem::remove(dir.path / "apps_linux_text.txt");
    CHECK(contains(error_message<LoadError>(load), "apps_linux_text.txt"));
  }
}

TEST_CASE("coefficient file overrides the random draw") {
  TempDir dir;
  write_toy_data_dir(dir);
  const std::string coef = dir.file("coef_audio.csv", "10,20\n30,40\n");
  RegistryPaths paths = RegistryPaths::conventional(dir.path.string());
  paths.coef_files[0] = coef;
  const FormatRegistry reg = load_registry(paths, 1);
  CHECK(reg.coef(0, 0, 1) == 20.0);
  CHECK(reg.coef(0, 1, 0) == 30.0);
}

TEST_CASE("apps_for_format returns installed renderers in registry order") {
  // 3x3 toy grid: row alpha selects only app c; row beta all; gamma only a.
  const FormatRegistry reg = toy_registry(
      {"alpha", "beta", "gamma"}, {"a", "b", "c"},
      {0, 0, 1,
       1, 1, 1,
       1, 0, 0});

  SUBCASE("all apps installed, row of ones gives the full list") {
    const auto all = apps_for_format(reg, 0, {"a", "b", "c"}, 0, "beta");
    CHECK(all == std::vector<std::string>{"a", "b", "c"});
  }
  SUBCASE("nothing installed gives nothing") {
    CHECK(apps_for_format(reg, 0, std::set<int>{}, 0, 0).empty());
  }
  SUBCASE("three installed, row selects one") {
    const auto one = apps_for_format(reg, 0, {"a", "b", "c"}, 0, "alpha");
    CHECK(one == std::vector<std::string>{"c"});
  }
  SUBCASE("unknown names are reported") {
    CHECK(contains(error_message<LoadError>([&] {
            apps_for_format(reg, 0, {"a"}, 0, "delta");
          }),
          "unknown format: delta"));
    CHECK(contains(error_message<LoadError>([&] {
            apps_for_format(reg, 0, {"zzz"}, 0, "alpha");
          }),
          "unknown application: zzz"));
  }
}

TEST_CASE("renderable_formats lists formats with any installed renderer") {
  const FormatRegistry reg = toy_registry(
      {"alpha", "beta", "gamma"}, {"a", "b", "c"},
      {1, 0, 0,
       0, 1, 0,
       1, 0, 0});
  CHECK(renderable_formats(reg, 0, {}, 0).empty());
  // App a renders alpha and gamma.
  CHECK(renderable_formats(reg, 0, {0}, 0) == std::vector<int>{0, 2});
  CHECK(renderable_formats(reg, 0, {0, 1, 2}, 0) == std::vector<int>{0, 1, 2});
}

TEST_CASE("record_migration_size accumulates gb times cycles") {
  const FormatRegistry reg = toy_registry({"alpha", "beta"}, {"a"}, {1, 1});
  GlobalStatistics stats = GlobalStatistics::zero(reg);

  record_migration_size(stats, 0, 0, 1, 2.0, 3);
  CHECK(stats.migrated(0, 0, 1) == doctest::Approx(6.0));
  CHECK(stats.total_migrations == 1);

  SUBCASE("additivity") {
    record_migration_size(stats, 0, 0, 1, 1.0, 1);
    record_migration_size(stats, 0, 0, 1, 1.0, 1);
    CHECK(stats.migrated(0, 0, 1) == doctest::Approx(8.0));
    CHECK(stats.total_migrations == 3);
  }
  SUBCASE("zero gb still counts the migration") {
    record_migration_size(stats, 0, 1, 0, 0.0, 9);
    CHECK(stats.migrated(0, 1, 0) == 0.0);
    CHECK(stats.total_migrations == 2);
  }
  SUBCASE("self-migration is rejected") {
    CHECK_THROWS_AS(record_migration_size(stats, 0, 1, 1, 1.0, 1), std::invalid_argument);
  }
}

TEST_SUITE_END();
