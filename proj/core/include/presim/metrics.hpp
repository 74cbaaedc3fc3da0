#pragma once

// Periodic samples of the run.  The CSV layout here is the contract between
// the run and fit subcommands.

#include <iosfwd>
#include <string>
#include <vector>

#include "presim/registry.hpp"

namespace presim {

struct World;
struct TrustCounters;

struct MetricSample {
  long long cycle = 0;
  long long migrations_total = 0;
  double migrations_freq = 0;  // cumulative count / cycle
  double freq_err = 0;         // sqrt(count) / cycle (Poisson)
  long long in_progress = 0;
  long long trust_var_total = 0;
  long long trust_var_pos = 0;
  long long trust_var_neg = 0;
  double trust_var_total_freq = 0;
  double trust_var_pos_freq = 0;
  double trust_var_neg_freq = 0;
  double good_pct = 0;
  double false_pos_pct = 0;
  double false_neg_pct = 0;
  double indifferent_pct = 0;
};

// count >= 0, cycle >= 1.
std::pair<double, double> frequency_with_error(long long count, long long cycle);

MetricSample take_sample(const World& world, const GlobalStatistics& stats,
                         const TrustCounters& counters, long long cycle);

extern const char* kMetricsHeader;
void write_metrics_csv(std::ostream& os, const std::vector<MetricSample>& samples);
std::string metrics_csv(const std::vector<MetricSample>& samples);
// Throws LoadError on malformed header or rows.
std::vector<MetricSample> read_metrics_csv(std::istream& is);
// Column values by header name (for fitting arbitrary metrics).
std::vector<double> metric_column(const std::vector<MetricSample>& samples,
                                  const std::string& name);

}  // namespace presim
