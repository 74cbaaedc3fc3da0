#pragma once

// The cycle loop.  Step order is fixed: deliver mail, pastor checks, failure
// handling, answering requests, reading suggestions, reading informs, random
// mutations, migration completions.  Institutions are always walked in
// ascending id order and all randomness comes from one run stream, so a run is
// a pure function of (config, seed).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "presim/config.hpp"
#include "presim/metrics.hpp"
#include "presim/protocol.hpp"
#include "presim/registry.hpp"
#include "presim/risk.hpp"
#include "presim/rng.hpp"
#include "presim/trust.hpp"
#include "presim/world.hpp"

namespace presim {

enum class DecisionOutcome : int {
  good_action = 0,
  false_positive = 1,
  false_negative = 2,
  indifferent = 3,
};

// ceil(total_kb * coef / resources), at least one cycle.
long long migration_time(double total_kb, double coef, double resources);
// Per-kB cost measured on the smallest cluster with multiplicative noise,
// extrapolated to the whole collection.  noise = 1 reproduces migration_time.
// Empty collections cannot be estimated.
long long estimate_time(const FormatCollection& col, double coef, double resources,
                        double noise);
bool accept_time(long long cycles, long long limit);

// Moves every file and cluster of src into dst and empties src.
void convert(FormatCollection& src, FormatCollection& dst);

// Classifies a performed/refused migration against the global migrated-sizes
// row of src (the caller records the migration first, so a performed
// migration's own contribution is included).  Updates the decision counters.
DecisionOutcome analyse_migration(GlobalStatistics& stats, int t, int src, int dst,
                                  bool migrated);

enum class EventType : int {
  failure,
  request_broadcast,
  suggestion_accepted,
  suggestion_rejected,
  inform_accepted,
  inform_refused,
  migration_started,
  migration_completed,
  collection_created,
  collection_deleted,
  app_installed,
  trust_positive,
  trust_negative,
  decision,
  message_dropped,
};

struct Event {
  EventType type;
  long long cycle = 0;
  int inst = -1;
  int media_type = -1;
  int a = -1;  // format / app / peer, by event type
  int b = -1;
  DecisionOutcome outcome = DecisionOutcome::indifferent;
};

class Simulation {
 public:
  // Spawns the world from cfg.seed.
  Simulation(const FormatRegistry& reg, const SimConfig& cfg);
  // Adopts a hand-built world (scripted scenarios); statistics are rebuilt by
  // rescan and the run stream is seeded from cfg.seed.
  Simulation(const FormatRegistry& reg, const SimConfig& cfg, World world);

  // Advances one cycle; returns the events it produced.
  const std::vector<Event>& step();
  // Runs to cfg.cycles, sampling every cfg.sample_every cycles.
  void run();

  long long cycle() const { return cycle_; }
  const World& world() const { return world_; }
  World& world_mut() { return world_; }
  const GlobalStatistics& stats() const { return stats_; }
  GlobalStatistics& stats_mut() { return stats_; }
  const FormatRegistry& registry() const { return reg_; }
  const SimConfig& config() const { return cfg_; }
  const std::vector<MetricSample>& samples() const { return samples_; }
  const TrustCounters& trust_counters() const { return trust_counters_; }
  long long in_progress() const;
  long long rescan_mismatches() const { return rescan_mismatches_; }
  long long dropped_messages() const { return dropped_; }
  const MessageTrace* trace() const { return trace_messages_ ? &trace_ : nullptr; }
  Rng& rng() { return rng_; }

  // Exposed for scripted tests; normally driven by step().
  void pastor_checks();
  void deal_with_failures();
  void suggest_solutions();
  void read_suggestions();
  void listen_to_informs();
  void random_mutations();
  // True when the migration started (idle, src held, src != dst).
  bool migrate(int inst, int t, int src, int dst, long long cycles);

 private:
  void init_from_world();
  void complete_migrations();
  void take_sample();
  bool effective(const Institution& inst, int t, int src, int dst,
                 const FormatCollection& col, long long* est_out);
  void autonomous_path(int inst, int t, int src);
  bool try_install_for(int inst, int t, int format);
  void push(EventType type, int inst, int t, int a = -1, int b = -1);
  void record_decision(int inst, int t, int src, int dst, bool migrated);

  FormatRegistry reg_;
  SimConfig cfg_;
  World world_;
  GlobalStatistics stats_;
  Rng rng_;
  long long cycle_ = 0;
  TrustCounters trust_counters_;
  std::vector<MetricSample> samples_;
  std::vector<Event> events_;
  MessageTrace trace_;
  bool trace_messages_ = false;
  long long rescan_mismatches_ = 0;
  long long dropped_ = 0;
};

}  // namespace presim
