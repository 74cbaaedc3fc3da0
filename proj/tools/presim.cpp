// presim: run one simulation, sweep a parameter, or fit a metrics CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "presim/experiment.hpp"

namespace {

// file < PRESIM_* environment < explicit flags.
presim::SimConfig resolve_config(const std::string& config_path,
                                 const std::map<std::string, std::string>& flags) {
  presim::SimConfig cfg = config_path.empty() ? presim::default_config()
                                              : presim::load_config_file(config_path);
  presim::apply_env_overrides(cfg);
  presim::apply_overrides(cfg, flags);
  return cfg;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("--values", "bad number: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--values", "no values given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator of cooperating digital archives"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flags;
  std::vector<std::string> sets;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Config file (key = value lines)");
    cmd->add_option_function<uint64_t>(
        "--seed", [&](uint64_t v) { flags["seed"] = std::to_string(v); }, "Master seed");
    cmd->add_option_function<long long>(
        "--cycles", [&](long long v) { flags["cycles"] = std::to_string(v); },
        "Cycles to run");
    cmd->add_option_function<long long>(
        "--institutions",
        [&](long long v) { flags["institutions"] = std::to_string(v); },
        "Number of institutions");
    auto dbl = [&](const char* name, const char* key, const char* help) {
      cmd->add_option_function<double>(
          name,
          [&flags, key](double v) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            flags[key] = buf;
          },
          help);
    };
    dbl("--risk-threshold", "risk_threshold", "Risk percent at which help is requested");
    dbl("--suggest-threshold", "suggest_threshold", "Trust percent to accept a suggestion");
    dbl("--inform-threshold", "inform_threshold", "Trust percent to copy an informed migration");
    dbl("--probability", "mutation_probability", "Mutation percent per institution per cycle");
    cmd->add_option("--data-dir", [&](const std::vector<std::string>& v) {
      flags["data_dir"] = v[0];
      return true;
    }, "Directory with format/application/compatibility files");
    cmd->add_flag_function("--trace-messages",
                           [&](int64_t) { flags["trace_messages"] = "true"; },
                           "Write messages.log");
    cmd->add_option("--set", sets, "Extra key=value override (repeatable)");
  };

  // run
  std::string run_out = "out/run";
  CLI::App* run = app.add_subcommand("run", "Run one simulation and write its artifacts");
  add_common(run);
  run->add_option("--out", run_out, "Output directory");
  run->add_flag_function("--dump-world", [&](int64_t) { flags["dump_world"] = "true"; },
                         "Write world.csv with the final institution table");
  run->add_flag_function("--debug-rescan",
                         [&](int64_t) { flags["debug_rescan"] = "true"; },
                         "Check incremental counters against a full rescan");

  // sweep
  std::string sweep_out = "out/sweep";
  std::string sweep_param = "mutation_probability";
  std::string sweep_values = "1,2,3,5,7";
  int repetitions = 1, threads = 0;
  double fit_lo = 200, fit_hi = 5000;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run a parameter sweep and fit each run's asymptote");
  add_common(sweep);
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--param", sweep_param, "Config key to sweep");
  sweep->add_option("--values", sweep_values, "Comma-separated values");
  sweep->add_option("--repetitions", repetitions, "Runs per value (distinct seeds)");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sweep->add_option("--fit-lo", fit_lo, "Decay-fit window start (cycle)");
  sweep->add_option("--fit-hi", fit_hi, "Decay-fit window end (cycle)");

  // fit
  std::string fit_csv_path, fit_model = "sqrt_exp", fit_column = "migrations_freq";
  std::string fit_out;
  double flo = 0, fhi = 1e18;
  CLI::App* fit = app.add_subcommand("fit", "Fit a model to a metrics.csv column");
  fit->add_option("csv", fit_csv_path, "metrics.csv produced by run")->required();
  fit->add_option("--model", fit_model, "sqrt_exp | linear | saturation");
  fit->add_option("--column", fit_column, "Metrics column to fit");
  fit->add_option("--lo", flo, "Window start (cycle)");
  fit->add_option("--hi", fhi, "Window end (cycle)");
  fit->add_option("--out", fit_out, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const std::string& s : sets) {
      size_t eq = s.find('=');
      if (eq == std::string::npos)
        throw presim::ConfigError("--set expects key=value, got: " + s);
      flags[s.substr(0, eq)] = s.substr(eq + 1);
    }

    if (run->parsed()) {
      presim::SimConfig cfg = resolve_config(config_path, flags);
      presim::run_and_write(cfg, run_out);
      std::cout << "wrote " << run_out << "/{config.echo,metrics.csv,summary.txt,fits}"
                << std::endl;
    } else if (sweep->parsed()) {
      presim::SweepPlan plan;
      plan.base = resolve_config(config_path, flags);
      plan.param = sweep_param;
      plan.values = parse_values(sweep_values);
      plan.repetitions = repetitions;
      plan.threads = threads;
      plan.fit_lo = fit_lo;
      plan.fit_hi = fit_hi;
      presim::sweep_and_write(plan, sweep_out);
      std::cout << "wrote " << sweep_out << "/aggregate.csv" << std::endl;
    } else if (fit->parsed()) {
      presim::FitResult r = presim::fit_csv(fit_csv_path, fit_model, flo, fhi, fit_column);
      std::string report = presim::fit_report(r);
      if (fit_out.empty()) {
        std::cout << report;
      } else {
        std::ofstream out(fit_out);
        if (!out) throw std::runtime_error("cannot write " + fit_out);
        out << report;
        std::cout << "wrote " << fit_out << std::endl;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "presim: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
