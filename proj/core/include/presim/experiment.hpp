#pragma once

// Run orchestration shared by the CLI and the acceptance suite: execute a
// configured run, write the output layout, sweep a parameter, fit a CSV.

#include <optional>
#include <string>
#include <vector>

#include "presim/analysis.hpp"
#include "presim/config.hpp"
#include "presim/engine.hpp"
#include "presim/metrics.hpp"

namespace presim {

// Loads the registry named by cfg (data_dir + optional overrides).
FormatRegistry registry_from_config(const SimConfig& cfg);

struct RunResult {
  std::vector<MetricSample> samples;
  long long migrations = 0;
  long long false_negatives = 0;
  long long rescan_mismatches = 0;
};

RunResult execute_run(const FormatRegistry& reg, const SimConfig& cfg);

// Full artifact layout under out_dir: config.echo, metrics.csv, summary.txt,
// fits/, optional messages.log and world.csv.
void run_and_write(const SimConfig& cfg, const std::string& out_dir);

struct SweepPlan {
  SimConfig base;
  std::string param;            // any numeric config key
  std::vector<double> values;
  int repetitions = 1;
  // Decay-fit window used for the per-run asymptote column.
  double fit_lo = 200, fit_hi = 5000;
  int threads = 0;              // 0 = hardware concurrency
};

struct SweepRow {
  double value = 0;
  uint64_t seed = 0;
  double c = 0;       // fitted asymptote
  double c_err = 0;
  bool converged = false;
};

// Runs are independent; seeds derive from base.seed and the run index.
std::vector<SweepRow> run_sweep(const FormatRegistry& reg, const SweepPlan& plan);
void sweep_and_write(const SweepPlan& plan, const std::string& out_dir);

// model: sqrt_exp | linear | saturation; column defaults to migrations_freq,
// sigma comes from freq_err for that column, otherwise 1% of |y| floors.
FitResult fit_csv(const std::string& csv_path, const std::string& model,
                  double lo, double hi, const std::string& column);

std::string summary_text(const Simulation& sim);

}  // namespace presim
