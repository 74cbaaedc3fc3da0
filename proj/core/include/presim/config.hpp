#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "presim/media.hpp"

namespace presim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value configuration.  Defaults reproduce the reference experiment;
// every knob can be set from a config file, PRESIM_* environment variables, or
// command-line flags (file < environment < flags).
struct SimConfig {
  long long institutions = 50;
  long long cycles = 10000;
  uint64_t seed = 1;
  double risk_threshold = 50;     // percent; failures at or above broadcast a request
  double suggest_threshold = 30;  // percent of aggregate trust
  double inform_threshold = 70;   // percent of aggregate trust
  double mutation_probability = 1;  // percent per institution per cycle
  std::array<long long, kMediaTypes> accept_limit = {500, 500, 500, 500};
  long long sample_every = 10;

  // World geometry and endowments.  The reference text never quantifies
  // these; values below are the documented defaults (see README).
  double world_width = 360;
  double world_height = 180;
  long long endow_large_coll_min = 12;
  long long endow_large_coll_max = 20;
  long long endow_large_files_min = 20000;
  long long endow_large_files_max = 60000;
  long long endow_small_coll_min = 2;
  long long endow_small_coll_max = 5;
  long long endow_small_files_min = 200;
  long long endow_small_files_max = 1000;
  long long clusters_max = 10;
  double cluster_kb_min = 10;
  double cluster_kb_max = 30000;
  double resources_min = 6e4;  // HS06
  double resources_max = 6e5;
  long long initial_apps_min = 2;
  long long initial_apps_max = 3;
  long long lang_groups = 5;
  double lang_cross = 0.2;
  // Endowment format draws follow rank popularity ~ 1/(1+index)^bias; the
  // bundled format lists are popularity-ordered.  0 = uniform.  Every
  // institution holds the top endow_core_formats formats of each type, and
  // endowed file counts scale by rank ~ 1/(1+index)^popularity_file_bias.
  double popularity_bias = 0.5;
  long long endow_core_formats = 2;
  double popularity_file_bias = 0.6;

  std::string data_dir = "data";
  std::array<std::string, kMediaTypes> coef_files = {"", "", "", ""};
  std::string lang_file;

  bool debug_rescan = false;
  bool dump_world = false;
  bool trace_messages = false;
};

SimConfig default_config();

// Set one field from its textual form; throws ConfigError naming the key on
// unknown keys or unparsable values.
void set_config_field(SimConfig& cfg, const std::string& key, const std::string& value);

// key=value lines, '#' comments, blank lines ignored.
SimConfig load_config_file(const std::string& path);
void apply_overrides(SimConfig& cfg, const std::map<std::string, std::string>& kv);
// PRESIM_<UPPERCASED_KEY>=value for every config key.
void apply_env_overrides(SimConfig& cfg);

// Canonical echo: parsing it back reproduces cfg exactly.
std::string config_echo(const SimConfig& cfg);

}  // namespace presim
