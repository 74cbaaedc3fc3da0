#include "presim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace presim {

long long migration_time(double total_kb, double coef, double resources) {
  if (resources <= 0) throw std::invalid_argument("resources must be positive");
  if (total_kb < 0) throw std::invalid_argument("negative collection size");
  double c = std::ceil(total_kb * coef / resources);
  return std::max<long long>(1, static_cast<long long>(c));
}

long long estimate_time(const FormatCollection& col, double coef, double resources,
                        double noise) {
  if (col.sizes_kb.empty() || col.total_kb <= 0)
    throw std::invalid_argument("cannot estimate an empty collection");
  // The per-kB cost is measured by timing the smallest cluster (noisy), then
  // extrapolated to the whole collection.
  double smallest = col.smallest_kb();
  double measured = smallest * coef / resources * noise;
  double est = std::ceil(col.total_kb * (measured / smallest));
  return std::max<long long>(1, static_cast<long long>(est));
}

bool accept_time(long long cycles, long long limit) { return cycles <= limit; }

void convert(FormatCollection& src, FormatCollection& dst) {
  dst.files += src.files;
  dst.clusters.insert(dst.clusters.end(), src.clusters.begin(), src.clusters.end());
  dst.sizes_kb.insert(dst.sizes_kb.end(), src.sizes_kb.begin(), src.sizes_kb.end());
  dst.recompute_total();
  src.files = 0;
  src.clusters.clear();
  src.sizes_kb.clear();
  src.total_kb = 0;
}

DecisionOutcome analyse_migration(GlobalStatistics& stats, int t, int src, int dst,
                                  bool migrated) {
  const size_t f_count = stats.fcount_[t];
  const double* row = &stats.migrated_sizes[t][static_cast<size_t>(src) * f_count];
  double sum = 0;
  for (size_t k = 0; k < f_count; ++k) sum += row[k];

  DecisionOutcome out;
  if (sum <= 0) {
    // No global evidence about migrations from src: nothing to judge against.
    out = DecisionOutcome::indifferent;
  } else {
    double r = 100.0 * row[dst] / sum;
    if (r < 10.0) out = migrated ? DecisionOutcome::false_positive : DecisionOutcome::good_action;
    else if (r <= 50.0) out = DecisionOutcome::indifferent;
    else out = migrated ? DecisionOutcome::good_action : DecisionOutcome::false_negative;
  }
  switch (out) {
    case DecisionOutcome::good_action: stats.good_actions += 1; break;
    case DecisionOutcome::false_positive: stats.false_positives += 1; break;
    case DecisionOutcome::false_negative: stats.false_negatives += 1; break;
    case DecisionOutcome::indifferent: stats.indifferent_actions += 1; break;
  }
  return out;
}

Simulation::Simulation(const FormatRegistry& reg, const SimConfig& cfg)
    : reg_(reg), cfg_(cfg), rng_(stream_seed(cfg.seed, Stream::run)) {
  world_ = spawn_world(cfg_, reg_, stats_, stream_seed(cfg_.seed, Stream::world));
  init_from_world();
}

Simulation::Simulation(const FormatRegistry& reg, const SimConfig& cfg, World world)
    : reg_(reg), cfg_(cfg), world_(std::move(world)),
      rng_(stream_seed(cfg.seed, Stream::run)) {
  stats_ = rescan(world_, reg_);
  for (Institution& in : world_.institutions)
    for (int t = 0; t < kMediaTypes; ++t) {
      in.files_total[t] = 0;
      for (const auto& [f, col] : in.pastors[t].collections) in.files_total[t] += col.files;
    }
  init_from_world();
}

void Simulation::init_from_world() {
  trace_messages_ = cfg_.trace_messages;
  trace_.reg = &reg_;
}

void Simulation::push(EventType type, int inst, int t, int a, int b) {
  events_.push_back(Event{type, cycle_, inst, t, a, b, DecisionOutcome::indifferent});
}

void Simulation::record_decision(int inst, int t, int src, int dst, bool migrated) {
  DecisionOutcome out = analyse_migration(stats_, t, src, dst, migrated);
  events_.push_back(Event{EventType::decision, cycle_, inst, t, src, dst, out});
}

const std::vector<Event>& Simulation::step() {
  ++cycle_;
  events_.clear();
  deliver_mail(world_);
  pastor_checks();
  deal_with_failures();
  suggest_solutions();
  read_suggestions();
  listen_to_informs();
  random_mutations();
  complete_migrations();
  if (cfg_.debug_rescan && cycle_ % cfg_.sample_every == 0) {
    if (!counters_match(stats_, rescan(world_, reg_))) rescan_mismatches_ += 1;
  }
  return events_;
}

void Simulation::run() {
  while (cycle_ < cfg_.cycles) {
    step();
    if (cycle_ % cfg_.sample_every == 0) take_sample();
  }
}

void Simulation::take_sample() {
  samples_.push_back(presim::take_sample(world_, stats_, trust_counters_, cycle_));
}

long long Simulation::in_progress() const {
  long long n = 0;
  for (const Institution& in : world_.institutions)
    for (int t = 0; t < kMediaTypes; ++t)
      if (in.busy_until[t] >= cycle_) ++n;
  return n;
}

// Each pastor re-examines the collection that has gone unchecked the longest.
// Zero compatible applications is an urgent failure, exactly one is an early
// warning; both end up with the failure handler this same cycle.
void Simulation::pastor_checks() {
  for (Institution& in : world_.institutions) {
    for (int t = 0; t < kMediaTypes; ++t) {
      auto& collections = in.pastors[t].collections;
      if (collections.empty()) continue;
      // Stalest first; equally stale collections are triaged by format risk.
      int stalest = -1;
      long long oldest = 0;
      double triage = 0;
      for (const auto& [f, col] : collections) {
        double r = format_risk(stats_, t, f);
        if (stalest < 0 || col.last_checked < oldest ||
            (col.last_checked == oldest && r > triage)) {
          stalest = f;
          oldest = col.last_checked;
          triage = r;
        }
      }
      FormatCollection& col = collections[stalest];
      col.last_checked = cycle_;
      size_t n = apps_for_format(reg_, in.os, in.software.installed[t], t, stalest).size();
      if (n <= 1) {
        in.failures.push_back(InternalFailure{t, stalest, n == 1});
        push(EventType::failure, in.id, t, stalest, n == 1 ? 1 : 0);
      }
    }
  }
}

void Simulation::deal_with_failures() {
  for (Institution& in : world_.institutions) {
    for (const InternalFailure& f : in.failures) {
      double risk = format_risk(stats_, f.media_type, f.format);
      if (risk < cfg_.risk_threshold) {
        // Low risk is handled locally: adopt the most widely installed spare
        // application, when the catalogue still has one.
        try_install_for(in.id, f.media_type, f.format);
      } else {
        broadcast_request(world_, in.id, f.media_type, f.format, cycle_,
                          trace_messages_ ? &trace_ : nullptr);
        push(EventType::request_broadcast, in.id, f.media_type, f.format);
      }
    }
    in.failures.clear();
  }
}

bool Simulation::try_install_for(int inst, int t, int format) {
  Institution& in = world_.institutions[inst];
  // An application is one catalogue entry regardless of platform, so its
  // installation count is summed over the three ports.
  std::vector<long long> column_count(reg_.catalog_size(t), 0);
  for (int os = 0; os < kOsCount; ++os)
    for (int app = 0; app < reg_.app_count(os, t); ++app)
      column_count[reg_.catalog_col[os][t][app]] += stats_.installed_apps[os][t][app];
  int best = -1;
  long long best_count = -1;
  for (int app = 0; app < reg_.app_count(in.os, t); ++app) {
    if (in.software.installed[t].count(app)) continue;
    int col = reg_.catalog_col[in.os][t][app];
    if (!reg_.renders(t, format, col)) continue;
    long long count = column_count[col];
    if (count > best_count) {  // ties keep the lower (registry order) index
      best_count = count;
      best = app;
    }
  }
  if (best < 0) return false;
  install_app(world_, stats_, reg_, inst, t, best);
  push(EventType::app_installed, inst, t, best);
  return true;
}

// Every delivered request gets an answer: the latest matching migration from
// the asked format, or an empty propose when there is nothing to tell.
void Simulation::suggest_solutions() {
  for (Institution& in : world_.institutions) {
    for (const Message& m : in.mailbox.inbox) {
      if (m.kind != MsgKind::request) continue;
      std::optional<Suggestion> answer;
      for (auto it = in.migrations_log.rbegin(); it != in.migrations_log.rend(); ++it) {
        if (it->media_type == m.media_type && it->src_format == m.format) {
          answer = Suggestion{it->src_format, it->dst_format};
          break;
        }
      }
      send_propose(world_, in.id, m.sender, m.tag, m.media_type, answer, cycle_,
                   trace_messages_ ? &trace_ : nullptr);
    }
  }
}

bool Simulation::effective(const Institution& inst, int t, int src, int dst,
                           const FormatCollection& col, long long* est_out) {
  if (apps_for_format(reg_, inst.os, inst.software.installed[t], t, dst).empty())
    return false;
  if (!(format_risk(stats_, t, dst) < format_risk(stats_, t, src))) return false;
  long long est = estimate_time(col, reg_.coef(t, src, dst), inst.resources,
                                rng_.uniform(0.9, 1.1));
  if (est_out) *est_out = est;
  return accept_time(est, cfg_.accept_limit[t]);
}

void Simulation::autonomous_path(int inst, int t, int src) {
  Institution& in = world_.institutions[inst];
  auto d = destination_format(reg_, stats_, in, t);
  if (!d || *d == src) {
    try_install_for(inst, t, src);
    return;
  }
  if (format_risk(stats_, t, *d) >= format_risk(stats_, t, src)) {
    // The catalogue offers nothing safer; prefer keeping src renderable, and
    // only migrate when no spare application exists either.
    if (try_install_for(inst, t, src)) return;
  }
  const FormatCollection& col = in.pastors[t].collections.at(src);
  migrate(inst, t, src, *d,
          migration_time(col.total_kb, reg_.coef(t, src, *d), in.resources));
}

void Simulation::read_suggestions() {
  for (Institution& in : world_.institutions) {
    // File the delivered proposes under their open issues first.
    for (const Message& m : in.mailbox.inbox) {
      if (m.kind != MsgKind::propose) continue;
      auto it = in.open_issues.find(m.tag);
      if (it == in.open_issues.end()) {
        dropped_ += 1;  // answer to an already resolved issue
        push(EventType::message_dropped, in.id, m.media_type, m.sender);
        continue;
      }
      if (m.suggestion) it->second.suggestions.emplace_back(m.sender, *m.suggestion);
    }

    std::vector<uint64_t> due;
    for (const auto& [tag, issue] : in.open_issues)
      if (issue.due_cycle <= cycle_) due.push_back(tag);

    for (uint64_t tag : due) {
      OpenIssue& issue = in.open_issues[tag];
      const int t = issue.media_type;
      const int src = issue.format;
      auto col_it = in.pastors[t].collections.find(src);
      if (col_it == in.pastors[t].collections.end() || col_it->second.files == 0) {
        in.open_issues.erase(tag);  // already migrated or deleted meanwhile
        continue;
      }
      if (in.busy_until[t] >= cycle_) {
        issue.due_cycle = cycle_ + 1;  // deferred, retried when idle
        continue;
      }

      struct Candidate {
        int sender;
        Suggestion s;
        double trust;
        double dest_risk;
      };
      std::vector<Candidate> cands;
      for (const auto& [sender, sugg] : issue.suggestions) {
        double trust = trust_evaluation(world_, in.id, sender, t).aggregate;
        if (100.0 * trust >= cfg_.suggest_threshold)
          cands.push_back({sender, sugg, trust, format_risk(stats_, t, sugg.dst)});
      }
      std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.trust != b.trust) return a.trust > b.trust;
        if (a.dest_risk != b.dest_risk) return a.dest_risk < b.dest_risk;
        return a.sender < b.sender;
      });

      if (cands.empty()) {
        autonomous_path(in.id, t, src);
        in.open_issues.erase(tag);
        continue;
      }

      const Candidate& top = cands[0];
      if (effective(in, t, src, top.s.dst, col_it->second, nullptr)) {
        migrate(in.id, t, src, top.s.dst,
                migration_time(col_it->second.total_kb, reg_.coef(t, src, top.s.dst),
                               in.resources));
        feedback(in, top.sender, t, true, trust_counters_);
        push(EventType::trust_positive, in.id, t, top.sender);
        push(EventType::suggestion_accepted, in.id, t, src, top.s.dst);
        for (size_t k = 1; k < cands.size(); ++k) {
          feedback(in, cands[k].sender, t, false, trust_counters_);
          push(EventType::trust_negative, in.id, t, cands[k].sender);
        }
      } else {
        feedback(in, top.sender, t, false, trust_counters_);
        push(EventType::trust_negative, in.id, t, top.sender);
        push(EventType::suggestion_rejected, in.id, t, src, top.s.dst);
        record_decision(in.id, t, src, top.s.dst, false);
        autonomous_path(in.id, t, src);
      }
      in.open_issues.erase(tag);
    }
  }
}

void Simulation::listen_to_informs() {
  for (Institution& in : world_.institutions) {
    // Only migrations away from formats this institution actually holds matter.
    std::map<std::pair<int, int>, std::vector<std::pair<int, Suggestion>>> groups;
    for (const Message& m : in.mailbox.inbox) {
      if (m.kind != MsgKind::inform || !m.suggestion) continue;
      const int t = m.media_type;
      auto it = in.pastors[t].collections.find(m.suggestion->src);
      if (it == in.pastors[t].collections.end() || it->second.files == 0) continue;
      groups[{t, m.suggestion->src}].emplace_back(m.sender, *m.suggestion);
    }

    for (auto& [key, informers] : groups) {
      const int t = key.first;
      const int src = key.second;
      if (in.busy_until[t] >= cycle_) continue;

      int best = -1;
      Suggestion best_s;
      double best_trust = 0, best_risk = 0;
      for (const auto& [sender, sugg] : informers) {
        double trust = trust_evaluation(world_, in.id, sender, t).aggregate;
        if (100.0 * trust < cfg_.inform_threshold) continue;
        double dest_risk = format_risk(stats_, t, sugg.dst);
        if (best < 0 || trust > best_trust ||
            (trust == best_trust && (dest_risk < best_risk ||
                                     (dest_risk == best_risk && sender < best)))) {
          best = sender;
          best_s = sugg;
          best_trust = trust;
          best_risk = dest_risk;
        }
      }
      if (best < 0) continue;

      const FormatCollection& col = in.pastors[t].collections.at(src);
      if (effective(in, t, src, best_s.dst, col, nullptr)) {
        migrate(in.id, t, src, best_s.dst,
                migration_time(col.total_kb, reg_.coef(t, src, best_s.dst), in.resources));
        feedback(in, best, t, true, trust_counters_);
        push(EventType::trust_positive, in.id, t, best);
        push(EventType::inform_accepted, in.id, t, src, best_s.dst);
      } else {
        feedback(in, best, t, false, trust_counters_);
        push(EventType::trust_negative, in.id, t, best);
        push(EventType::inform_refused, in.id, t, src, best_s.dst);
        record_decision(in.id, t, src, best_s.dst, false);
      }
    }
  }
}

// One uniform draw per institution per cycle keeps the stream layout stable;
// the rest is drawn only when the mutation actually fires.
void Simulation::random_mutations() {
  const double p = cfg_.mutation_probability / 100.0;
  for (Institution& in : world_.institutions) {
    double u = rng_.uniform();
    if (u >= p) continue;
    int t = static_cast<int>(rng_.uniform_int(0, kMediaTypes - 1));
    bool create = rng_.uniform_int(0, 1) == 0;
    if (create) {
      std::vector<int> absent;
      for (int f = 0; f < reg_.format_count(t); ++f)
        if (!in.pastors[t].collections.count(f)) absent.push_back(f);
      if (absent.empty()) continue;
      int f = absent[rng_.uniform_int(0, static_cast<long long>(absent.size()) - 1)];
      long long files = std::clamp<long long>(
          std::llround(rng_.log_uniform(static_cast<double>(cfg_.endow_small_files_min),
                                        static_cast<double>(cfg_.endow_small_files_max))),
          cfg_.endow_small_files_min, cfg_.endow_small_files_max);
      files = std::max<long long>(
          1, std::llround(files * std::pow(1.0 + f, -cfg_.popularity_file_bias)));
      create_collection(world_, stats_, cfg_, in.id, t, f, files, cycle_, rng_);
      push(EventType::collection_created, in.id, t, f);
    } else {
      auto& held = in.pastors[t].collections;
      if (held.empty()) continue;
      std::vector<int> formats;
      formats.reserve(held.size());
      for (const auto& [f, col] : held) formats.push_back(f);
      int f = formats[rng_.uniform_int(0, static_cast<long long>(formats.size()) - 1)];
      delete_collection(world_, stats_, in.id, t, f);
      push(EventType::collection_deleted, in.id, t, f);
    }
  }
}

void Simulation::complete_migrations() {
  for (Institution& in : world_.institutions) {
    for (int t = 0; t < kMediaTypes; ++t) {
      if (in.busy_until[t] != 0 && in.busy_until[t] <= cycle_) {
        in.busy_until[t] = 0;
        push(EventType::migration_completed, in.id, t);
      }
    }
  }
}

bool Simulation::migrate(int inst, int t, int src, int dst, long long cycles) {
  if (src == dst) return false;
  Institution& in = world_.institutions[inst];
  if (in.busy_until[t] >= cycle_) return false;
  auto it = in.pastors[t].collections.find(src);
  if (it == in.pastors[t].collections.end()) return false;

  FormatCollection& src_col = it->second;
  const long long files = src_col.files;
  const double total_kb = src_col.total_kb;

  FormatCollection& dst_col = add_empty_collection(world_, stats_, inst, t, dst, cycle_);
  stats_.file_count[t][src] -= files;
  stats_.file_count[t][dst] += files;
  convert(src_col, dst_col);
  stats_.institution_count[t][src] -= 1;
  in.pastors[t].collections.erase(src);

  record_migration_size(stats_, t, src, dst, total_kb / 1e6, cycles);
  in.migrations_log.push_back(MigrationRecord{t, src, dst, total_kb, cycles, cycle_ + cycles});
  send_inform_all(world_, inst, t, Suggestion{src, dst}, cycle_,
                  trace_messages_ ? &trace_ : nullptr);
  in.busy_until[t] = cycle_ + cycles;
  push(EventType::migration_started, inst, t, src, dst);
  record_decision(inst, t, src, dst, true);
  return true;
}

}  // namespace presim
