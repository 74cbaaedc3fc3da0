#include "presim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace presim {

double FormatCollection::smallest_kb() const {
  double best = 0;
  for (size_t i = 0; i < sizes_kb.size(); ++i)
    if (i == 0 || sizes_kb[i] < best) best = sizes_kb[i];
  return best;
}

void FormatCollection::recompute_total() {
  total_kb = std::accumulate(sizes_kb.begin(), sizes_kb.end(), 0.0);
}

double distance(const Institution& a, const Institution& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double dist_max(const World& world) {
  double best = 0;
  for (size_t i = 0; i < world.institutions.size(); ++i)
    for (size_t j = i + 1; j < world.institutions.size(); ++j)
      best = std::max(best, distance(world.institutions[i], world.institutions[j]));
  return best;
}

namespace {

// Large endowments are many collections with many files; the rest are small.
bool large_endowment(InstitutionKind kind, int t) {
  MediaType m = static_cast<MediaType>(t);
  switch (kind) {
    case InstitutionKind::broadcaster: return m != MediaType::text;
    case InstitutionKind::government: return m == MediaType::text;
    case InstitutionKind::university: return m == MediaType::text;
    case InstitutionKind::library: return true;
    case InstitutionKind::personal: return false;
  }
  return false;
}

long long log_uniform_count(Rng& rng, long long lo, long long hi) {
  double v = rng.log_uniform(static_cast<double>(lo), static_cast<double>(hi));
  return std::clamp(static_cast<long long>(std::llround(v)), lo, hi);
}

// Popularity-biased pick among candidate format indices; the format lists are
// popularity-ordered, so weight ~ 1/(1+index)^bias.
int pick_format(Rng& rng, const std::vector<int>& candidates, double bias) {
  if (candidates.empty()) return -1;
  if (bias == 0) return candidates[rng.uniform_int(0, candidates.size() - 1)];
  double total = 0;
  for (int f : candidates) total += std::pow(1.0 + f, -bias);
  double u = rng.uniform() * total;
  for (int f : candidates) {
    u -= std::pow(1.0 + f, -bias);
    if (u <= 0) return f;
  }
  return candidates.back();
}

std::vector<int> absent_formats(const Institution& inst, int t, int format_count) {
  std::vector<int> out;
  const auto& held = inst.pastors[t].collections;
  for (int f = 0; f < format_count; ++f)
    if (!held.count(f)) out.push_back(f);
  return out;
}

}  // namespace

bool create_collection(World& world, GlobalStatistics& stats, const SimConfig& cfg,
                       int inst, int t, int format, long long files, long long cycle,
                       Rng& rng) {
  Institution& in = world.institutions[inst];
  auto& held = in.pastors[t].collections;
  if (held.count(format)) return false;
  if (files < 1) throw std::invalid_argument("collections hold at least one file");

  FormatCollection col;
  col.format = format;
  col.files = files;
  col.last_checked = cycle;
  long long k = rng.uniform_int(1, std::min<long long>(cfg.clusters_max, files));
  // Partition: one file per cluster up front, the rest split by random weights.
  col.clusters.assign(k, 1);
  long long rem = files - k;
  std::vector<double> w(k);
  double wsum = 0;
  for (auto& v : w) {
    v = rng.uniform();
    wsum += v;
  }
  long long assigned = 0;
  for (long long i = 0; i < k; ++i) {
    long long add = wsum > 0 ? static_cast<long long>(rem * (w[i] / wsum)) : 0;
    col.clusters[i] += add;
    assigned += add;
  }
  for (long long i = 0; i < rem - assigned; ++i) col.clusters[i % k] += 1;
  col.sizes_kb.resize(k);
  for (auto& s : col.sizes_kb) s = rng.log_uniform(cfg.cluster_kb_min, cfg.cluster_kb_max);
  col.recompute_total();

  stats.file_count[t][format] += files;
  stats.institution_count[t][format] += 1;
  in.files_total[t] += files;
  held.emplace(format, std::move(col));
  return true;
}

bool delete_collection(World& world, GlobalStatistics& stats, int inst, int t, int format) {
  Institution& in = world.institutions[inst];
  auto it = in.pastors[t].collections.find(format);
  if (it == in.pastors[t].collections.end()) return false;
  stats.file_count[t][format] -= it->second.files;
  stats.institution_count[t][format] -= 1;
  in.files_total[t] -= it->second.files;
  in.pastors[t].collections.erase(it);
  return true;
}

FormatCollection& add_empty_collection(World& world, GlobalStatistics& stats, int inst,
                                       int t, int format, long long cycle) {
  Institution& in = world.institutions[inst];
  auto [it, fresh] = in.pastors[t].collections.try_emplace(format);
  if (fresh) {
    it->second.format = format;
    it->second.last_checked = cycle;
    stats.institution_count[t][format] += 1;
  }
  return it->second;
}

void remove_collection(World& world, GlobalStatistics& stats, int inst, int t, int format) {
  delete_collection(world, stats, inst, t, format);
}

bool install_app(World& world, GlobalStatistics& stats, const FormatRegistry& reg,
                 int inst, int t, int app_idx) {
  Institution& in = world.institutions[inst];
  if (!in.software.installed[t].insert(app_idx).second) return false;
  stats.installed_apps[in.os][t][app_idx] += 1;
  int col = reg.catalog_col[in.os][t][app_idx];
  for (int f = 0; f < reg.format_count(t); ++f)
    if (reg.renders(t, f, col)) stats.software_count[t][f] += 1;
  return true;
}

GlobalStatistics rescan(const World& world, const FormatRegistry& reg) {
  GlobalStatistics s = GlobalStatistics::zero(reg);
  for (const Institution& in : world.institutions) {
    for (int t = 0; t < kMediaTypes; ++t) {
      for (const auto& [f, col] : in.pastors[t].collections) {
        s.file_count[t][f] += col.files;
        s.institution_count[t][f] += 1;
      }
      for (int app : in.software.installed[t]) {
        s.installed_apps[in.os][t][app] += 1;
        int col = reg.catalog_col[in.os][t][app];
        for (int f = 0; f < reg.format_count(t); ++f)
          if (reg.renders(t, f, col)) s.software_count[t][f] += 1;
      }
    }
  }
  return s;
}

bool counters_match(const GlobalStatistics& a, const GlobalStatistics& b) {
  for (int t = 0; t < kMediaTypes; ++t) {
    if (a.file_count[t] != b.file_count[t]) return false;
    if (a.institution_count[t] != b.institution_count[t]) return false;
    if (a.software_count[t] != b.software_count[t]) return false;
    for (int os = 0; os < kOsCount; ++os)
      if (a.installed_apps[os][t] != b.installed_apps[os][t]) return false;
  }
  return true;
}

World spawn_world(const SimConfig& cfg, const FormatRegistry& reg,
                  GlobalStatistics& stats, uint64_t seed) {
  if (cfg.institutions < 1) throw std::invalid_argument("need at least one institution");
  Rng rng(seed);
  World world;
  const int n = static_cast<int>(cfg.institutions);
  world.institutions.resize(n);
  stats = GlobalStatistics::zero(reg);

  // Pass 1: identity, geometry, staffing, resources.
  for (int i = 0; i < n; ++i) {
    Institution& in = world.institutions[i];
    in.id = i;
    in.n_ = static_cast<size_t>(n);
    in.kind = static_cast<InstitutionKind>(rng.uniform_int(0, kKindCount - 1));
    in.os = static_cast<int>(rng.uniform_int(0, kOsCount - 1));
    in.x = rng.uniform(0, cfg.world_width);
    in.y = rng.uniform(0, cfg.world_height);
    in.staff = is_public(in.kind) ? static_cast<int>(rng.uniform_int(1, staff_max(in.kind))) : 0;
    in.resources = rng.log_uniform(cfg.resources_min, cfg.resources_max);
    for (int t = 0; t < kMediaTypes; ++t) in.pastors[t].media_type = t;
  }

  // Pass 2: endowed collections, then initial software.
  for (int i = 0; i < n; ++i) {
    Institution& in = world.institutions[i];
    for (int t = 0; t < kMediaTypes; ++t) {
      bool large = large_endowment(in.kind, t);
      long long lo = large ? cfg.endow_large_coll_min : cfg.endow_small_coll_min;
      long long hi = large ? cfg.endow_large_coll_max : cfg.endow_small_coll_max;
      long long count = rng.uniform_int(lo, hi);
      long long core = std::min<long long>({cfg.endow_core_formats, count,
                                            reg.format_count(t)});
      for (long long c = 0; c < count; ++c) {
        int f;
        if (c < core) {
          f = static_cast<int>(c);  // ubiquitous head formats
        } else {
          auto absent = absent_formats(in, t, reg.format_count(t));
          f = pick_format(rng, absent, cfg.popularity_bias);
        }
        if (f < 0) break;
        long long files = large
            ? log_uniform_count(rng, cfg.endow_large_files_min, cfg.endow_large_files_max)
            : log_uniform_count(rng, cfg.endow_small_files_min, cfg.endow_small_files_max);
        files = std::max<long long>(
            1, std::llround(files * std::pow(1.0 + f, -cfg.popularity_file_bias)));
        create_collection(world, stats, cfg, i, t, f, files, 0, rng);
      }
    }
    for (int t = 0; t < kMediaTypes; ++t) {
      long long avail = reg.app_count(in.os, t);
      long long k = std::min<long long>(avail, rng.uniform_int(cfg.initial_apps_min,
                                                               cfg.initial_apps_max));
      // Partial Fisher-Yates keeps the draw count fixed at k.
      std::vector<int> pool(avail);
      std::iota(pool.begin(), pool.end(), 0);
      for (long long d = 0; d < k; ++d) {
        long long pick = rng.uniform_int(d, avail - 1);
        std::swap(pool[d], pool[pick]);
        install_app(world, stats, reg, i, t, pool[d]);
      }
    }
  }

  // Language correlation: loaded override or alphabet groups.
  world.lang.assign(static_cast<size_t>(n) * n, 0.0);
  if (reg.lang_override) {
    if (reg.lang_override_dim != n)
      throw LoadError("language correlation is " + std::to_string(reg.lang_override_dim) +
                      "x" + std::to_string(reg.lang_override_dim) + ", world has " +
                      std::to_string(n));
    world.lang = *reg.lang_override;
  } else {
    world.lang_group.resize(n);
    for (int i = 0; i < n; ++i)
      world.lang_group[i] = static_cast<int>(rng.uniform_int(0, cfg.lang_groups - 1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        world.lang[static_cast<size_t>(i) * n + j] =
            (i == j || world.lang_group[i] == world.lang_group[j]) ? 1.0 : cfg.lang_cross;
  }

  world.dist_max = dist_max(world);

  // Trust state: unit weights, matrix rows filled from the spawned world.
  for (int i = 0; i < n; ++i) {
    Institution& in = world.institutions[i];
    in.trust_matrix.assign(static_cast<size_t>(kTrustRows) * n, 0.0);
    in.trust_weights.assign(static_cast<size_t>(kTrustRows) * n, 1.0);
    for (int j = 0; j < n; ++j) {
      const Institution& peer = world.institutions[j];
      for (int t = 0; t < kMediaTypes; ++t)
        in.matrix_at(t, j) = static_cast<double>(peer.files_total[t]);
      in.matrix_at(kTrustRowDistance, j) = distance(in, peer);
      in.matrix_at(kTrustRowCulture, j) = world.lang_at(i, j);
      in.matrix_at(kTrustRowStaff, j) = static_cast<double>(peer.staff);
    }
  }

  return world;
}

}  // namespace presim
