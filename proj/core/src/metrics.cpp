#include "presim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "presim/trust.hpp"
#include "presim/world.hpp"

namespace presim {

std::pair<double, double> frequency_with_error(long long count, long long cycle) {
  if (cycle < 1) throw std::invalid_argument("frequency needs cycle >= 1");
  if (count < 0) throw std::invalid_argument("negative count");
  double c = static_cast<double>(cycle);
  return {static_cast<double>(count) / c, std::sqrt(static_cast<double>(count)) / c};
}

MetricSample take_sample(const World& world, const GlobalStatistics& stats,
                         const TrustCounters& counters, long long cycle) {
  MetricSample s;
  s.cycle = cycle;
  s.migrations_total = stats.total_migrations;
  std::tie(s.migrations_freq, s.freq_err) = frequency_with_error(stats.total_migrations, cycle);
  for (const Institution& in : world.institutions)
    for (int t = 0; t < kMediaTypes; ++t)
      if (in.busy_until[t] >= cycle) s.in_progress += 1;
  s.trust_var_pos = counters.positive;
  s.trust_var_neg = counters.negative;
  s.trust_var_total = counters.positive + counters.negative;
  s.trust_var_total_freq = static_cast<double>(s.trust_var_total) / cycle;
  s.trust_var_pos_freq = static_cast<double>(s.trust_var_pos) / cycle;
  s.trust_var_neg_freq = static_cast<double>(s.trust_var_neg) / cycle;
  long long decisions = stats.decisions_total();
  if (decisions > 0) {
    double d = static_cast<double>(decisions);
    s.good_pct = 100.0 * stats.good_actions / d;
    s.false_pos_pct = 100.0 * stats.false_positives / d;
    s.false_neg_pct = 100.0 * stats.false_negatives / d;
    s.indifferent_pct = 100.0 * stats.indifferent_actions / d;
  }
  return s;
}

const char* kMetricsHeader =
    "cycle,migrations_total,migrations_freq,freq_err,in_progress,"
    "trust_var_total,trust_var_pos,trust_var_neg,"
    "trust_var_total_freq,trust_var_pos_freq,trust_var_neg_freq,"
    "good_pct,false_pos_pct,false_neg_pct,indifferent_pct";

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_metrics_csv(std::ostream& os, const std::vector<MetricSample>& samples) {
  os << kMetricsHeader << '\n';
  for (const MetricSample& s : samples) {
    os << s.cycle << ',' << s.migrations_total << ',' << fmt(s.migrations_freq) << ','
       << fmt(s.freq_err) << ',' << s.in_progress << ',' << s.trust_var_total << ','
       << s.trust_var_pos << ',' << s.trust_var_neg << ',' << fmt(s.trust_var_total_freq)
       << ',' << fmt(s.trust_var_pos_freq) << ',' << fmt(s.trust_var_neg_freq) << ','
       << fmt(s.good_pct) << ',' << fmt(s.false_pos_pct) << ',' << fmt(s.false_neg_pct)
       << ',' << fmt(s.indifferent_pct) << '\n';
  }
}

std::string metrics_csv(const std::vector<MetricSample>& samples) {
  std::ostringstream os;
  write_metrics_csv(os, samples);
  return os.str();
}

std::vector<MetricSample> read_metrics_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw LoadError("empty metrics CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMetricsHeader) throw LoadError("unexpected metrics CSV header: " + line);
  std::vector<MetricSample> out;
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw LoadError("bad value at metrics CSV line " + std::to_string(lineno));
      }
    }
    if (v.size() != 15)
      throw LoadError("expected 15 columns at metrics CSV line " + std::to_string(lineno));
    MetricSample s;
    s.cycle = static_cast<long long>(v[0]);
    s.migrations_total = static_cast<long long>(v[1]);
    s.migrations_freq = v[2];
    s.freq_err = v[3];
    s.in_progress = static_cast<long long>(v[4]);
    s.trust_var_total = static_cast<long long>(v[5]);
    s.trust_var_pos = static_cast<long long>(v[6]);
    s.trust_var_neg = static_cast<long long>(v[7]);
    s.trust_var_total_freq = v[8];
    s.trust_var_pos_freq = v[9];
    s.trust_var_neg_freq = v[10];
    s.good_pct = v[11];
    s.false_pos_pct = v[12];
    s.false_neg_pct = v[13];
    s.indifferent_pct = v[14];
    out.push_back(s);
  }
  return out;
}

std::vector<double> metric_column(const std::vector<MetricSample>& samples,
                                  const std::string& name) {
  std::vector<std::string> names;
  {
    std::stringstream ss(kMetricsHeader);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  int idx = -1;
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) idx = static_cast<int>(i);
  if (idx < 0) throw LoadError("unknown metrics column: " + name);
  std::vector<double> out;
  out.reserve(samples.size());
  for (const MetricSample& s : samples) {
    const double v[15] = {static_cast<double>(s.cycle),
                          static_cast<double>(s.migrations_total),
                          s.migrations_freq,
                          s.freq_err,
                          static_cast<double>(s.in_progress),
                          static_cast<double>(s.trust_var_total),
                          static_cast<double>(s.trust_var_pos),
                          static_cast<double>(s.trust_var_neg),
                          s.trust_var_total_freq,
                          s.trust_var_pos_freq,
                          s.trust_var_neg_freq,
                          s.good_pct,
                          s.false_pos_pct,
                          s.false_neg_pct,
                          s.indifferent_pct};
    out.push_back(v[idx]);
  }
  return out;
}

}  // namespace presim
