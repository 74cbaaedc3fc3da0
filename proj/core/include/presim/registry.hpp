#pragma once

// Static world data (format lists, application lists, compatibility grids,
// migration coefficients) plus the global counters every agent reads and
// updates while the simulation runs.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "presim/media.hpp"

namespace presim {

struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegistryPaths {
  std::array<std::string, kMediaTypes> format_files;
  std::array<std::array<std::string, kMediaTypes>, kOsCount> app_files;
  std::array<std::string, kMediaTypes> compat_files;
  // Optional per-type override for the migration coefficient matrix; when
  // absent the coefficients are drawn uniformly in [10, 90].
  std::array<std::optional<std::string>, kMediaTypes> coef_files;
  // Optional N x N language correlation matrix; when absent the world builds
  // one from alphabet groups at spawn time.
  std::optional<std::string> lang_file;

  // formats_<type>.txt, apps_<os>_<type>.txt, compat_<type>.csv under dir.
  static RegistryPaths conventional(const std::string& data_dir);
};

struct FormatRegistry {
  std::array<std::vector<std::string>, kMediaTypes> formats;
  // F x F row-major, entries in [10, 90].
  std::array<std::vector<double>, kMediaTypes> migration_coef;
  // Application names per OS per media type, in file order.
  std::array<std::array<std::vector<std::string>, kMediaTypes>, kOsCount> applications;
  // Per-type application catalog: union of the three OS lists in first-seen
  // order (windows, then apple, then linux).  Compatibility columns follow it.
  std::array<std::vector<std::string>, kMediaTypes> app_catalog;
  // [os][t][app index] -> catalog column.
  std::array<std::array<std::vector<int>, kMediaTypes>, kOsCount> catalog_col;
  // F x |catalog| row-major 0/1.
  std::array<std::vector<uint8_t>, kMediaTypes> compat;
  // Loaded from lang_file when given; validated against N at spawn.
  std::optional<std::vector<double>> lang_override;
  int lang_override_dim = 0;

  int format_count(int t) const { return static_cast<int>(formats[t].size()); }
  int app_count(int os, int t) const { return static_cast<int>(applications[os][t].size()); }
  int catalog_size(int t) const { return static_cast<int>(app_catalog[t].size()); }

  double coef(int t, int src, int dst) const {
    return migration_coef[t][static_cast<size_t>(src) * formats[t].size() + dst];
  }
  bool renders(int t, int f, int col) const {
    return compat[t][static_cast<size_t>(f) * app_catalog[t].size() + col] != 0;
  }
  int format_index(int t, const std::string& name) const;
  int app_index(int os, int t, const std::string& name) const;
};

FormatRegistry load_registry(const RegistryPaths& paths, uint64_t coef_seed);

struct GlobalStatistics {
  // Indexed [media type][format].
  std::array<std::vector<long long>, kMediaTypes> file_count;
  std::array<std::vector<long long>, kMediaTypes> institution_count;
  std::array<std::vector<long long>, kMediaTypes> software_count;
  // Institutions holding each application, indexed [os][t][per-OS app index].
  std::array<std::array<std::vector<long long>, kMediaTypes>, kOsCount> installed_apps;
  // Accumulated migrated volume in GB-cycles, F x F row-major per type.
  std::array<std::vector<double>, kMediaTypes> migrated_sizes;
  long long total_migrations = 0;
  long long good_actions = 0;
  long long false_positives = 0;
  long long false_negatives = 0;
  long long indifferent_actions = 0;

  static GlobalStatistics zero(const FormatRegistry& reg);

  double migrated(int t, int src, int dst) const {
    return migrated_sizes[t][static_cast<size_t>(src) * fcount_[t] + dst];
  }
  double& migrated(int t, int src, int dst) {
    return migrated_sizes[t][static_cast<size_t>(src) * fcount_[t] + dst];
  }
  long long decisions_total() const {
    return good_actions + false_positives + false_negatives + indifferent_actions;
  }

  std::array<size_t, kMediaTypes> fcount_ = {0, 0, 0, 0};
};

// Installed applications (per-OS indices, registry order) able to render f.
std::vector<int> apps_for_format(const FormatRegistry& reg, int os,
                                 const std::set<int>& installed, int t, int f);
// Name-based variant; throws LoadError naming any unknown format/application.
std::vector<std::string> apps_for_format(const FormatRegistry& reg, int os,
                                         const std::vector<std::string>& installed,
                                         int t, const std::string& format);
// Formats with at least one compatible installed application, registry order.
std::vector<int> renderable_formats(const FormatRegistry& reg, int os,
                                    const std::set<int>& installed, int t);
// Adds gb * cycles to the (src, dst) cell and bumps the migration counter.
// gb = 0 still counts the migration but leaves the matrix untouched.
void record_migration_size(GlobalStatistics& stats, int t, int src, int dst,
                           double gb, long long cycles);

}  // namespace presim
