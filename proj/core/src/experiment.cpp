#include "presim/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <thread>

namespace presim {

namespace fs = std::filesystem;

FormatRegistry registry_from_config(const SimConfig& cfg) {
  RegistryPaths paths = RegistryPaths::conventional(cfg.data_dir);
  for (int t = 0; t < kMediaTypes; ++t)
    if (!cfg.coef_files[t].empty()) paths.coef_files[t] = cfg.coef_files[t];
  if (!cfg.lang_file.empty()) paths.lang_file = cfg.lang_file;
  return load_registry(paths, stream_seed(cfg.seed, Stream::coefficients));
}

RunResult execute_run(const FormatRegistry& reg, const SimConfig& cfg) {
  Simulation sim(reg, cfg);
  sim.run();
  RunResult r;
  r.samples = sim.samples();
  r.migrations = sim.stats().total_migrations;
  r.false_negatives = sim.stats().false_negatives;
  r.rescan_mismatches = sim.rescan_mismatches();
  return r;
}

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void write_world_csv(const fs::path& p, const World& world) {
  std::ostringstream os;
  os << "id,kind,os,x,y,staff,resources";
  for (int t = 0; t < kMediaTypes; ++t) os << ',' << media_name(t) << "_files";
  for (int t = 0; t < kMediaTypes; ++t) os << ',' << media_name(t) << "_collections";
  os << '\n';
  char buf[64];
  for (const Institution& inst : world.institutions) {
    std::snprintf(buf, sizeof buf, "%.10g", inst.x);
    os << inst.id << ',' << kind_name(inst.kind) << ',' << os_name(inst.os) << ','
       << buf << ',';
    std::snprintf(buf, sizeof buf, "%.10g", inst.y);
    os << buf << ',' << inst.staff << ',';
    std::snprintf(buf, sizeof buf, "%.10g", inst.resources);
    os << buf;
    for (int t = 0; t < kMediaTypes; ++t) os << ',' << inst.files_total[t];
    for (int t = 0; t < kMediaTypes; ++t)
      os << ',' << inst.pastors[t].collections.size();
    os << '\n';
  }
  write_file(p, os.str());
}

std::string fmt_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void run_and_write(const SimConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  FormatRegistry reg = registry_from_config(cfg);
  Simulation sim(reg, cfg);
  sim.run();

  fs::path dir(out_dir);
  write_file(dir / "config.echo", config_echo(cfg));
  write_file(dir / "metrics.csv", metrics_csv(sim.samples()));
  write_file(dir / "summary.txt", summary_text(sim));

  fs::create_directories(dir / "fits");
  std::vector<SeriesPoint> pts;
  for (const MetricSample& s : sim.samples())
    pts.push_back({static_cast<double>(s.cycle), s.migrations_freq, s.freq_err});
  double decay_hi = std::min<double>(5000, static_cast<double>(cfg.cycles));
  try {
    FitResult decay = fit_sqrt_exp(pts, 200, decay_hi);
    write_file(dir / "fits" / "decay.txt", fit_report(decay));
  } catch (const std::exception&) {
    // Not enough usable points; the run is still valid.
  }
  if (cfg.cycles > 5000) {
    try {
      FitResult tail = fit_linear(pts, 5000, static_cast<double>(cfg.cycles));
      write_file(dir / "fits" / "tail.txt", fit_report(tail));
    } catch (const std::exception&) {
    }
  }

  if (sim.trace()) write_file(dir / "messages.log", sim.trace()->text());
  if (cfg.dump_world) write_world_csv(dir / "world.csv", sim.world());
}

std::vector<SweepRow> run_sweep(const FormatRegistry& reg, const SweepPlan& plan) {
  struct Job {
    SimConfig cfg;
    double value;
  };
  std::vector<Job> jobs;
  for (size_t vi = 0; vi < plan.values.size(); ++vi) {
    for (int rep = 0; rep < plan.repetitions; ++rep) {
      SimConfig cfg = plan.base;
      set_config_field(cfg, plan.param, fmt_value(plan.values[vi]));
      cfg.seed = plan.base.seed + vi * static_cast<size_t>(plan.repetitions) + rep;
      jobs.push_back({std::move(cfg), plan.values[vi]});
    }
  }

  std::vector<SweepRow> rows(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
      const Job& job = jobs[i];
      RunResult run = execute_run(reg, job.cfg);
      SweepRow row;
      row.value = job.value;
      row.seed = job.cfg.seed;
      std::vector<SeriesPoint> pts;
      for (const MetricSample& s : run.samples)
        pts.push_back({static_cast<double>(s.cycle), s.migrations_freq, s.freq_err});
      try {
        FitResult fit = fit_sqrt_exp(pts, plan.fit_lo, plan.fit_hi);
        row.c = fit.params[2];
        row.c_err = fit.errors[2];
        row.converged = fit.converged && !fit.degenerate;
      } catch (const std::exception&) {
        row.converged = false;
      }
      rows[i] = row;
    }
  };

  unsigned n = plan.threads > 0 ? static_cast<unsigned>(plan.threads)
                                : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, jobs.size() > 0 ? static_cast<unsigned>(jobs.size()) : 1u);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

void sweep_and_write(const SweepPlan& plan, const std::string& out_dir) {
  fs::create_directories(out_dir);
  FormatRegistry reg = registry_from_config(plan.base);
  std::vector<SweepRow> rows = run_sweep(reg, plan);

  fs::path dir(out_dir);
  std::ostringstream os;
  os << plan.param << ",seed,asymptote,asymptote_err,converged\n";
  for (const SweepRow& r : rows)
    os << fmt_value(r.value) << ',' << r.seed << ',' << fmt_value(r.c) << ','
       << fmt_value(r.c_err) << ',' << (r.converged ? 1 : 0) << '\n';
  write_file(dir / "aggregate.csv", os.str());
  write_file(dir / "config.echo", config_echo(plan.base));

  // Mean asymptote per swept value, then the saturation trend when there are
  // enough distinct values to constrain it.
  std::map<double, std::pair<double, int>> by_value;
  for (const SweepRow& r : rows)
    if (r.converged) {
      auto& acc = by_value[r.value];
      acc.first += r.c;
      acc.second += 1;
    }
  std::vector<SeriesPoint> means;
  for (const auto& [v, acc] : by_value)
    if (acc.second > 0)
      means.push_back({v, acc.first / acc.second, 1.0});
  if (means.size() >= 4) {
    try {
      FitResult sat = fit_saturation(means);
      fs::create_directories(dir / "fits");
      write_file(dir / "fits" / "saturation.txt", fit_report(sat));
    } catch (const std::exception&) {
    }
  }
}

FitResult fit_csv(const std::string& csv_path, const std::string& model, double lo,
                  double hi, const std::string& column) {
  std::ifstream in(csv_path);
  if (!in) throw LoadError("cannot open metrics file: " + csv_path);
  std::vector<MetricSample> samples = read_metrics_csv(in);
  std::string col = column.empty() ? "migrations_freq" : column;
  std::vector<double> y = metric_column(samples, col);

  std::vector<SeriesPoint> pts;
  for (size_t i = 0; i < samples.size(); ++i) {
    double sigma = col == "migrations_freq" ? samples[i].freq_err
                                            : std::max(0.01 * std::abs(y[i]), 1e-9);
    pts.push_back({static_cast<double>(samples[i].cycle), y[i], sigma});
  }

  if (model == "sqrt_exp") return fit_sqrt_exp(pts, lo, hi);
  if (model == "linear") return fit_linear(pts, lo, hi);
  if (model == "saturation") {
    std::vector<SeriesPoint> w;
    for (const SeriesPoint& p : pts)
      if (p.t >= lo && p.t <= hi) w.push_back(p);
    return fit_saturation(w);
  }
  throw std::invalid_argument("unknown fit model: " + model +
                              " (expected sqrt_exp, linear or saturation)");
}

std::string summary_text(const Simulation& sim) {
  const GlobalStatistics& st = sim.stats();
  std::ostringstream os;
  os << "cycles: " << sim.cycle() << '\n';
  os << "institutions: " << sim.world().institutions.size() << '\n';
  os << "migrations: " << st.total_migrations << '\n';
  os << "in_progress: " << sim.in_progress() << '\n';
  long long total = st.decisions_total();
  os << "decisions: " << total << '\n';
  auto pct = [total](long long part) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", total > 0 ? 100.0 * part / total : 0.0);
    return std::string(buf);
  };
  os << "  good: " << st.good_actions << " (" << pct(st.good_actions) << "%)\n";
  os << "  false_positive: " << st.false_positives << " (" << pct(st.false_positives)
     << "%)\n";
  os << "  false_negative: " << st.false_negatives << " (" << pct(st.false_negatives)
     << "%)\n";
  os << "  indifferent: " << st.indifferent_actions << " ("
     << pct(st.indifferent_actions) << "%)\n";
  const TrustCounters& tc = sim.trust_counters();
  os << "trust_variations: " << (tc.positive + tc.negative) << " (positive "
     << tc.positive << ", negative " << tc.negative << ")\n";
  os << "dropped_messages: " << sim.dropped_messages() << '\n';
  if (sim.config().debug_rescan)
    os << "rescan_mismatches: " << sim.rescan_mismatches() << '\n';
  return os.str();
}

}  // namespace presim
