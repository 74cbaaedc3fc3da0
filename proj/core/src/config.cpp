#include "presim/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace presim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long long parse_ll(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for '" + key + "': " + v);
  }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad unsigned integer for '" + key + "': " + v);
  }
}

double parse_d(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number for '" + key + "': " + v);
  }
}

bool parse_b(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad boolean for '" + key + "': " + v + " (use true/false)");
}

std::string fmt_d(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Field {
  std::string key;
  std::function<void(SimConfig&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    auto ll = [&f](const std::string& k, long long SimConfig::* m) {
      f.push_back({k,
                   [k, m](SimConfig& c, const std::string& v) { c.*m = parse_ll(k, v); },
                   [m](const SimConfig& c) { return std::to_string(c.*m); }});
    };
    auto dd = [&f](const std::string& k, double SimConfig::* m) {
      f.push_back({k,
                   [k, m](SimConfig& c, const std::string& v) { c.*m = parse_d(k, v); },
                   [m](const SimConfig& c) { return fmt_d(c.*m); }});
    };
    auto bb = [&f](const std::string& k, bool SimConfig::* m) {
      f.push_back({k,
                   [k, m](SimConfig& c, const std::string& v) { c.*m = parse_b(k, v); },
                   [m](const SimConfig& c) { return c.*m ? "true" : "false"; }});
    };
    auto ss = [&f](const std::string& k, std::string SimConfig::* m) {
      f.push_back({k, [m](SimConfig& c, const std::string& v) { c.*m = v; },
                   [m](const SimConfig& c) { return c.*m; }});
    };

    ll("institutions", &SimConfig::institutions);
    ll("cycles", &SimConfig::cycles);
    f.push_back({"seed",
                 [](SimConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); },
                 [](const SimConfig& c) { return std::to_string(c.seed); }});
    dd("risk_threshold", &SimConfig::risk_threshold);
    dd("suggest_threshold", &SimConfig::suggest_threshold);
    dd("inform_threshold", &SimConfig::inform_threshold);
    dd("mutation_probability", &SimConfig::mutation_probability);
    for (int t = 0; t < kMediaTypes; ++t) {
      std::string k = std::string("accept_limit_") + media_name(t);
      f.push_back({k,
                   [k, t](SimConfig& c, const std::string& v) {
                     c.accept_limit[t] = parse_ll(k, v);
                   },
                   [t](const SimConfig& c) { return std::to_string(c.accept_limit[t]); }});
    }
    ll("sample_every", &SimConfig::sample_every);
    dd("world_width", &SimConfig::world_width);
    dd("world_height", &SimConfig::world_height);
    ll("endow_large_coll_min", &SimConfig::endow_large_coll_min);
    ll("endow_large_coll_max", &SimConfig::endow_large_coll_max);
    ll("endow_large_files_min", &SimConfig::endow_large_files_min);
    ll("endow_large_files_max", &SimConfig::endow_large_files_max);
    ll("endow_small_coll_min", &SimConfig::endow_small_coll_min);
    ll("endow_small_coll_max", &SimConfig::endow_small_coll_max);
    ll("endow_small_files_min", &SimConfig::endow_small_files_min);
    ll("endow_small_files_max", &SimConfig::endow_small_files_max);
    ll("clusters_max", &SimConfig::clusters_max);
    dd("cluster_kb_min", &SimConfig::cluster_kb_min);
    dd("cluster_kb_max", &SimConfig::cluster_kb_max);
    dd("resources_min", &SimConfig::resources_min);
    dd("resources_max", &SimConfig::resources_max);
    ll("initial_apps_min", &SimConfig::initial_apps_min);
    ll("initial_apps_max", &SimConfig::initial_apps_max);
    ll("lang_groups", &SimConfig::lang_groups);
    dd("lang_cross", &SimConfig::lang_cross);
    dd("popularity_bias", &SimConfig::popularity_bias);
    ll("endow_core_formats", &SimConfig::endow_core_formats);
    dd("popularity_file_bias", &SimConfig::popularity_file_bias);
    ss("data_dir", &SimConfig::data_dir);
    for (int t = 0; t < kMediaTypes; ++t) {
      std::string k = std::string("coef_file_") + media_name(t);
      f.push_back({k,
                   [t](SimConfig& c, const std::string& v) { c.coef_files[t] = v; },
                   [t](const SimConfig& c) { return c.coef_files[t]; }});
    }
    ss("lang_file", &SimConfig::lang_file);
    bb("debug_rescan", &SimConfig::debug_rescan);
    bb("dump_world", &SimConfig::dump_world);
    bb("trace_messages", &SimConfig::trace_messages);
    return f;
  }();
  return table;
}

}  // namespace

SimConfig default_config() { return SimConfig{}; }

void set_config_field(SimConfig& cfg, const std::string& key, const std::string& value) {
  for (const Field& f : fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown config key: " + key);
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    try {
      set_config_field(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

void apply_overrides(SimConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) set_config_field(cfg, k, v);
}

void apply_env_overrides(SimConfig& cfg) {
  for (const Field& f : fields()) {
    std::string env = "PRESIM_";
    for (char c : f.key) env += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(env.c_str())) set_config_field(cfg, f.key, v);
  }
}

std::string config_echo(const SimConfig& cfg) {
  std::ostringstream os;
  for (const Field& f : fields()) os << f.key << " = " << f.get(cfg) << '\n';
  return os.str();
}

}  // namespace presim
