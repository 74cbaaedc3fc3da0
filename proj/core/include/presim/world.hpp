#pragma once

// Institutions, their format collections and software, and the spawn logic.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "presim/config.hpp"
#include "presim/media.hpp"
#include "presim/protocol.hpp"
#include "presim/registry.hpp"
#include "presim/rng.hpp"

namespace presim {

struct FormatCollection {
  int format = -1;
  long long files = 0;
  std::vector<long long> clusters;  // file counts, one per cluster; sums to files
  std::vector<double> sizes_kb;     // one per cluster, > 0
  double total_kb = 0;
  long long last_checked = 0;

  double smallest_kb() const;
  void recompute_total();
};

struct Pastor {
  int media_type = 0;
  // Keyed by format index: at most one collection per format, deterministic order.
  std::map<int, FormatCollection> collections;
};

struct SoftwareManager {
  // Per media type, indices into the institution OS's application list.
  std::array<std::set<int>, kMediaTypes> installed;
};

struct MigrationRecord {
  int media_type = 0;
  int src_format = -1;
  int dst_format = -1;
  double total_kb = 0;
  long long cycles_required = 0;
  long long cycle_completed = 0;
};

struct OpenIssue {
  int media_type = 0;
  int format = -1;
  long long due_cycle = 0;  // when the collected answers are acted upon
  std::vector<std::pair<int, Suggestion>> suggestions;  // sender, payload
};

struct InternalFailure {
  int media_type = 0;
  int format = -1;
  bool alert = false;
};

// Rows of the per-institution trust matrix/weights (7 x N): one file-count row
// per media type, then distance, language correlation, staff.
inline constexpr int kTrustRows = 7;
inline constexpr int kTrustRowDistance = 4;
inline constexpr int kTrustRowCulture = 5;
inline constexpr int kTrustRowStaff = 6;

struct Institution {
  int id = -1;
  InstitutionKind kind = InstitutionKind::personal;
  int os = 0;
  double x = 0, y = 0;
  int staff = 0;
  double resources = 1;
  std::array<Pastor, kMediaTypes> pastors;
  SoftwareManager software;
  std::vector<double> trust_matrix;   // kTrustRows x N, row-major
  std::vector<double> trust_weights;  // kTrustRows x N, in [0.01, 10], init 1
  std::vector<MigrationRecord> migrations_log;
  std::array<long long, kMediaTypes> busy_until = {0, 0, 0, 0};  // 0 = idle
  std::map<uint64_t, OpenIssue> open_issues;
  Mailbox mailbox;
  std::vector<InternalFailure> failures;  // same-cycle pastor reports
  uint64_t tag_counter = 0;
  std::array<long long, kMediaTypes> files_total = {0, 0, 0, 0};

  double matrix_at(int row, int peer) const {
    return trust_matrix[static_cast<size_t>(row) * n_ + peer];
  }
  double& matrix_at(int row, int peer) {
    return trust_matrix[static_cast<size_t>(row) * n_ + peer];
  }
  double weight_at(int row, int peer) const {
    return trust_weights[static_cast<size_t>(row) * n_ + peer];
  }
  double& weight_at(int row, int peer) {
    return trust_weights[static_cast<size_t>(row) * n_ + peer];
  }

  size_t n_ = 0;  // institution count, fixed after spawn
};

struct World {
  std::vector<Institution> institutions;
  std::vector<double> lang;      // N x N correlation, symmetric, unit diagonal
  std::vector<int> lang_group;   // alphabet group per institution (when generated)
  double dist_max = 0;

  int count() const { return static_cast<int>(institutions.size()); }
  double lang_at(int i, int j) const {
    return lang[static_cast<size_t>(i) * institutions.size() + j];
  }
};

double distance(const Institution& a, const Institution& b);
double dist_max(const World& world);

// Builds the full world from the seed: kinds, geometry, staff, resources,
// endowed collections, initial software, language matrix, trust state.  The
// statistics are rebuilt from the spawned state before returning.
World spawn_world(const SimConfig& cfg, const FormatRegistry& reg,
                  GlobalStatistics& stats, uint64_t seed);

// Randomised collection creation (spawn and mutations).  False when the
// institution already holds (t, format); nothing is drawn in that case.
bool create_collection(World& world, GlobalStatistics& stats, const SimConfig& cfg,
                       int inst, int t, int format, long long files, long long cycle,
                       Rng& rng);
bool delete_collection(World& world, GlobalStatistics& stats, int inst, int t, int format);

// Engine internals: empty destination shell for migrations, bookkeeping kept
// in step with the counters.
FormatCollection& add_empty_collection(World& world, GlobalStatistics& stats, int inst,
                                       int t, int format, long long cycle);
void remove_collection(World& world, GlobalStatistics& stats, int inst, int t, int format);
// Install per-OS application app_idx for media type t; false if already there.
bool install_app(World& world, GlobalStatistics& stats, const FormatRegistry& reg,
                 int inst, int t, int app_idx);

// Recomputes every integer counter from the world state (oracle for the
// incremental bookkeeping).
GlobalStatistics rescan(const World& world, const FormatRegistry& reg);
// Compares the integer counters; migrated_sizes and decision counters are
// event-sourced and deliberately excluded.
bool counters_match(const GlobalStatistics& a, const GlobalStatistics& b);

}  // namespace presim
