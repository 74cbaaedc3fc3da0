#include "presim/registry.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "presim/rng.hpp"

namespace presim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> read_name_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  if (out.empty()) throw LoadError("empty list in " + path);
  return out;
}

std::vector<std::vector<double>> read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      if (cell.empty()) throw LoadError("empty cell in " + path);
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw LoadError("bad number '" + cell + "' in " + path);
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw LoadError("empty matrix in " + path);
  for (const auto& r : rows)
    if (r.size() != rows[0].size()) throw LoadError("ragged matrix in " + path);
  return rows;
}

}  // namespace

RegistryPaths RegistryPaths::conventional(const std::string& data_dir) {
  RegistryPaths p;
  std::string d = data_dir.empty() ? "." : data_dir;
  for (int t = 0; t < kMediaTypes; ++t) {
    p.format_files[t] = d + "/formats_" + media_name(t) + ".txt";
    p.compat_files[t] = d + "/compat_" + media_name(t) + ".csv";
    for (int os = 0; os < kOsCount; ++os)
      p.app_files[os][t] = d + "/apps_" + std::string(os_name(os)) + "_" + media_name(t) + ".txt";
  }
  return p;
}

int FormatRegistry::format_index(int t, const std::string& name) const {
  const auto& v = formats[t];
  auto it = std::find(v.begin(), v.end(), name);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

int FormatRegistry::app_index(int os, int t, const std::string& name) const {
  const auto& v = applications[os][t];
  auto it = std::find(v.begin(), v.end(), name);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

FormatRegistry load_registry(const RegistryPaths& paths, uint64_t coef_seed) {
  FormatRegistry reg;
  for (int t = 0; t < kMediaTypes; ++t) {
    reg.formats[t] = read_name_list(paths.format_files[t]);
    for (int os = 0; os < kOsCount; ++os)
      reg.applications[os][t] = read_name_list(paths.app_files[os][t]);

    // Catalog: union of the OS lists in first-seen order; compatibility
    // columns are indexed by it.
    std::map<std::string, int> col_of;
    for (int os = 0; os < kOsCount; ++os) {
      reg.catalog_col[os][t].clear();
      for (const auto& name : reg.applications[os][t]) {
        auto it = col_of.find(name);
        int col;
        if (it == col_of.end()) {
          col = static_cast<int>(reg.app_catalog[t].size());
          reg.app_catalog[t].push_back(name);
          col_of.emplace(name, col);
        } else {
          col = it->second;
        }
        reg.catalog_col[os][t].push_back(col);
      }
    }

    const size_t f_count = reg.formats[t].size();
    const size_t a_count = reg.app_catalog[t].size();
    auto grid = read_matrix(paths.compat_files[t]);
    if (grid.size() != f_count)
      throw LoadError(paths.compat_files[t] + ": " + std::to_string(grid.size()) +
                      " rows, expected " + std::to_string(f_count));
    if (grid[0].size() != a_count)
      throw LoadError(paths.compat_files[t] + ": " + std::to_string(grid[0].size()) +
                      " columns, expected " + std::to_string(a_count));
    reg.compat[t].assign(f_count * a_count, 0);
    for (size_t f = 0; f < f_count; ++f) {
      bool any = false;
      for (size_t a = 0; a < a_count; ++a) {
        double v = grid[f][a];
        if (v != 0.0 && v != 1.0)
          throw LoadError(paths.compat_files[t] + ": entry (" + std::to_string(f) + "," +
                          std::to_string(a) + ") is not 0/1");
        reg.compat[t][f * a_count + a] = v != 0.0 ? 1 : 0;
        any = any || v != 0.0;
      }
      if (!any)
        throw LoadError(paths.compat_files[t] + ": format '" + reg.formats[t][f] +
                        "' is renderable by no application");
    }
  }

  // Migration coefficients: either loaded, or drawn once from a dedicated
  // stream (types in order, rows outer, columns inner).
  Rng rng(coef_seed);
  for (int t = 0; t < kMediaTypes; ++t) {
    const size_t f_count = reg.formats[t].size();
    if (paths.coef_files[t]) {
      auto grid = read_matrix(*paths.coef_files[t]);
      if (grid.size() != f_count || grid[0].size() != f_count)
        throw LoadError(*paths.coef_files[t] + ": expected " + std::to_string(f_count) +
                        "x" + std::to_string(f_count));
      reg.migration_coef[t].reserve(f_count * f_count);
      for (const auto& row : grid)
        for (double v : row) {
          if (v <= 0) throw LoadError(*paths.coef_files[t] + ": coefficients must be > 0");
          reg.migration_coef[t].push_back(v);
        }
    } else {
      reg.migration_coef[t].resize(f_count * f_count);
      for (auto& v : reg.migration_coef[t]) v = rng.uniform(10.0, 90.0);
    }
  }

  if (paths.lang_file) {
    auto grid = read_matrix(*paths.lang_file);
    if (grid.size() != grid[0].size())
      throw LoadError(*paths.lang_file + ": correlation matrix must be square");
    reg.lang_override_dim = static_cast<int>(grid.size());
    std::vector<double> flat;
    flat.reserve(grid.size() * grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
      for (size_t j = 0; j < grid.size(); ++j) {
        double v = grid[i][j];
        if (v < 0 || v > 1) throw LoadError(*paths.lang_file + ": entries must be in [0,1]");
        if (i == j && v != 1.0) throw LoadError(*paths.lang_file + ": diagonal must be 1");
        if (grid[j][i] != v) throw LoadError(*paths.lang_file + ": matrix must be symmetric");
        flat.push_back(v);
      }
    reg.lang_override = std::move(flat);
  }

  return reg;
}

GlobalStatistics GlobalStatistics::zero(const FormatRegistry& reg) {
  GlobalStatistics s;
  for (int t = 0; t < kMediaTypes; ++t) {
    size_t f = reg.formats[t].size();
    s.fcount_[t] = f;
    s.file_count[t].assign(f, 0);
    s.institution_count[t].assign(f, 0);
    s.software_count[t].assign(f, 0);
    s.migrated_sizes[t].assign(f * f, 0.0);
    for (int os = 0; os < kOsCount; ++os)
      s.installed_apps[os][t].assign(reg.applications[os][t].size(), 0);
  }
  return s;
}

std::vector<int> apps_for_format(const FormatRegistry& reg, int os,
                                 const std::set<int>& installed, int t, int f) {
  std::vector<int> out;
  for (int app : installed)
    if (reg.renders(t, f, reg.catalog_col[os][t][app])) out.push_back(app);
  return out;
}

std::vector<std::string> apps_for_format(const FormatRegistry& reg, int os,
                                         const std::vector<std::string>& installed,
                                         int t, const std::string& format) {
  int f = reg.format_index(t, format);
  if (f < 0) throw LoadError("unknown format: " + format);
  std::set<int> idx;
  for (const auto& name : installed) {
    int a = reg.app_index(os, t, name);
    if (a < 0) throw LoadError("unknown application: " + name);
    idx.insert(a);
  }
  std::vector<std::string> out;
  for (int a : apps_for_format(reg, os, idx, t, f))
    out.push_back(reg.applications[os][t][a]);
  return out;
}

std::vector<int> renderable_formats(const FormatRegistry& reg, int os,
                                    const std::set<int>& installed, int t) {
  std::vector<int> out;
  for (int f = 0; f < reg.format_count(t); ++f) {
    for (int app : installed) {
      if (reg.renders(t, f, reg.catalog_col[os][t][app])) {
        out.push_back(f);
        break;
      }
    }
  }
  return out;
}

void record_migration_size(GlobalStatistics& stats, int t, int src, int dst,
                           double gb, long long cycles) {
  if (src == dst) throw std::invalid_argument("self-migration is not a migration");
  if (gb < 0) throw std::invalid_argument("negative migrated volume");
  if (gb > 0) stats.migrated(t, src, dst) += gb * static_cast<double>(cycles);
  stats.total_migrations += 1;
}

}  // namespace presim
