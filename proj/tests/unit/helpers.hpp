#pragma once

// Shared fixtures: in-memory registries, hand-built worlds for scripted
// scenarios, and throwaway data directories for loader error cases.

#include <array>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "presim/config.hpp"
#include "presim/engine.hpp"
#include "presim/registry.hpp"
#include "presim/world.hpp"

namespace testutil {

// Registry that repeats the same formats, applications and compatibility grid
// across all four media types and all three operating systems.  compat is
// F x A row-major; every migration coefficient is `coef`.
inline presim::FormatRegistry toy_registry(const std::vector<std::string>& formats,
                                           const std::vector<std::string>& apps,
                                           const std::vector<uint8_t>& compat,
                                           double coef = 50.0) {
  presim::FormatRegistry reg;
  const size_t f = formats.size();
  const size_t a = apps.size();
  for (int t = 0; t < presim::kMediaTypes; ++t) {
    reg.formats[t] = formats;
    reg.app_catalog[t] = apps;
    reg.compat[t] = compat;
    reg.migration_coef[t].assign(f * f, coef);
    for (int os = 0; os < presim::kOsCount; ++os) {
      reg.applications[os][t] = apps;
      reg.catalog_col[os][t].resize(a);
      for (size_t k = 0; k < a; ++k) reg.catalog_col[os][t][k] = static_cast<int>(k);
    }
  }
  return reg;
}

struct InstSpec {
  presim::InstitutionKind kind = presim::InstitutionKind::library;
  int os = 0;
  double x = 0, y = 0;
  int staff = 10;
  double resources = 1e9;
  int lang_group = 0;
  // Per-OS application indices installed for every media type.
  std::set<int> apps;
};

// Builds institutions without collections; call add_collection, then
// finalize_world before handing the result to Simulation.
inline presim::World make_world(const std::vector<InstSpec>& specs) {
  presim::World world;
  world.institutions.resize(specs.size());
  world.lang_group.resize(specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    presim::Institution& in = world.institutions[i];
    const InstSpec& s = specs[i];
    in.id = static_cast<int>(i);
    in.kind = s.kind;
    in.os = s.os;
    in.x = s.x;
    in.y = s.y;
    in.staff = s.staff;
    in.resources = s.resources;
    in.n_ = specs.size();
    for (int t = 0; t < presim::kMediaTypes; ++t) in.software.installed[t] = s.apps;
    world.lang_group[i] = s.lang_group;
  }
  return world;
}

// One single-cluster collection; files_total is kept in step so the trust
// rows built by finalize_world see it.
inline presim::FormatCollection& add_collection(presim::World& world, int inst, int t,
                                                int format, long long files,
                                                double total_kb) {
  presim::Institution& in = world.institutions[inst];
  presim::FormatCollection col;
  col.format = format;
  col.files = files;
  col.clusters = {files};
  col.sizes_kb = {total_kb};
  col.recompute_total();
  in.files_total[t] += files;
  return in.pastors[t].collections.emplace(format, std::move(col)).first->second;
}

// Mirrors the trust/lang/distance pass of the spawner for hand-built worlds:
// unit weights, matrix rows from the current state, lang from groups.
inline void finalize_world(presim::World& world, double lang_cross = 1.0) {
  const int n = world.count();
  world.lang.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      world.lang[static_cast<size_t>(i) * n + j] =
          (i == j || world.lang_group[i] == world.lang_group[j]) ? 1.0 : lang_cross;
  world.dist_max = presim::dist_max(world);
  for (int i = 0; i < n; ++i) {
    presim::Institution& in = world.institutions[i];
    in.trust_matrix.assign(static_cast<size_t>(presim::kTrustRows) * n, 0.0);
    in.trust_weights.assign(static_cast<size_t>(presim::kTrustRows) * n, 1.0);
    for (int j = 0; j < n; ++j) {
      const presim::Institution& peer = world.institutions[j];
      for (int t = 0; t < presim::kMediaTypes; ++t)
        in.matrix_at(t, j) = static_cast<double>(peer.files_total[t]);
      in.matrix_at(presim::kTrustRowDistance, j) = presim::distance(in, peer);
      in.matrix_at(presim::kTrustRowCulture, j) = world.lang_at(i, j);
      in.matrix_at(presim::kTrustRowStaff, j) = static_cast<double>(peer.staff);
    }
  }
}

// Quiet baseline for scripted scenarios: no mutations, no sampling noise from
// tiny cycle counts, thresholds as in the shipped default config.
inline presim::SimConfig scripted_config() {
  presim::SimConfig cfg;
  cfg.institutions = 0;  // unused by the adopted-world constructor
  cfg.cycles = 10;
  cfg.seed = 1;
  cfg.mutation_probability = 0;
  cfg.sample_every = 1;
  return cfg;
}

// Throwaway directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("presim_test_" + std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    const std::filesystem::path p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

// Minimal on-disk data directory (one format list per type, one app list per
// OS/type, one compat grid per type) that load_registry accepts; individual
// tests overwrite single files to provoke loader errors.
inline void write_toy_data_dir(const TempDir& dir) {
  for (int t = 0; t < presim::kMediaTypes; ++t) {
    const std::string type = presim::media_name(t);
    dir.file("formats_" + type + ".txt", "alpha\nbeta\n");
    for (int os = 0; os < presim::kOsCount; ++os)
      dir.file("apps_" + std::string(presim::os_name(os)) + "_" + type + ".txt",
               "viewer\neditor\n");
    dir.file("compat_" + type + ".csv", "1,0\n1,1\n");
  }
}

inline long long count_events(const std::vector<presim::Event>& events,
                              presim::EventType type) {
  long long n = 0;
  for (const presim::Event& e : events)
    if (e.type == type) ++n;
  return n;
}

// What an expression throws, as text; empty when it does not throw E.
template <class E, class F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  } catch (...) {
  }
  return {};
}

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace testutil
