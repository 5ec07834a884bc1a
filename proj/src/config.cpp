#include "hglance/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hglance/errors.hpp"

namespace hglance {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key, const std::string& where) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw TypeError(where + ": value for '" + key + "' is not a number: " + v);
  return d;
}

long long parse_int(const std::string& v, const std::string& key, const std::string& where) {
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw TypeError(where + ": value for '" + key + "' is not an integer: " + v);
  return i;
}

void require(bool ok, const std::string& where, const std::string& msg) {
  if (!ok) throw RangeError(where + ": " + msg);
}

}  // namespace

void apply_config_entry(TrainConfig& cfg, const std::string& key,
                        const std::string& value, const std::string& where) {
  if (key == "steps") {
    cfg.steps = static_cast<int>(parse_int(value, key, where));
    require(cfg.steps >= 1, where, "steps must be >= 1");
  } else if (key == "batch") {
    cfg.batch = static_cast<int>(parse_int(value, key, where));
    require(cfg.batch >= 1, where, "batch must be >= 1");
  } else if (key == "probes") {
    cfg.n_probes = static_cast<int>(parse_int(value, key, where));
    require(cfg.n_probes >= 1 && cfg.n_probes <= kMaxProbes, where,
            "probes must be in [1, 10]");
  } else if (key == "gamma") {
    cfg.gamma = parse_double(value, key, where);
    require(cfg.gamma >= 0.0 && cfg.gamma < 1.0, where, "gamma must be in [0, 1)");
  } else if (key == "alpha") {
    cfg.alpha = parse_double(value, key, where);
    require(cfg.alpha > 0.0, where, "alpha must be > 0");
  } else if (key == "beta") {
    cfg.beta = parse_double(value, key, where);
    require(cfg.beta >= 0.0, where, "beta must be >= 0");
  } else if (key == "sigma_min") {
    cfg.sigma_min = parse_double(value, key, where);
    require(cfg.sigma_min > 0.0 && cfg.sigma_min <= 0.5, where,
            "sigma_min must be in (0, 0.5]");
  } else if (key == "seed") {
    const long long s = parse_int(value, key, where);
    require(s >= 0, where, "seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "variant") {
    if (value == "fc") cfg.variant = Variant::Fc;
    else if (value == "nclass") cfg.variant = Variant::NClass;
    else throw TypeError(where + ": variant must be fc or nclass");
  } else if (key == "advantage") {
    if (value == "reward") cfg.advantage = AdvantageMode::Reward;
    else if (value == "return") cfg.advantage = AdvantageMode::Return;
    else throw TypeError(where + ": advantage must be reward or return");
  } else if (key == "optimizer") {
    if (value == "adam") cfg.optimizer = OptKind::Adam;
    else if (value == "sgd") cfg.optimizer = OptKind::Sgd;
    else throw TypeError(where + ": optimizer must be adam or sgd");
  } else if (key == "d_feature") {
    cfg.d_f = static_cast<int>(parse_int(value, key, where));
    require(cfg.d_f >= 1, where, "d_feature must be >= 1");
  } else if (key == "d_rep") {
    cfg.d_rep = static_cast<int>(parse_int(value, key, where));
    require(cfg.d_rep >= 1, where, "d_rep must be >= 1");
  } else if (key == "d_attn") {
    cfg.d_attn = static_cast<int>(parse_int(value, key, where));
    require(cfg.d_attn >= 1, where, "d_attn must be >= 1");
  } else if (key == "checkpoint_every") {
    cfg.checkpoint_every = static_cast<int>(parse_int(value, key, where));
    require(cfg.checkpoint_every >= 1, where, "checkpoint_every must be >= 1");
  } else if (key == "px_const") {
    cfg.sim.px_const = parse_double(value, key, where);
    require(std::abs(cfg.sim.px_const) <= 1.0, where, "px_const must be in [-1, 1]");
  } else if (key == "u_len_max") {
    cfg.sim.u_len_max = parse_double(value, key, where);
    require(cfg.sim.u_len_max > 0.0, where, "u_len_max must be > 0");
  } else if (key == "xy_init_absmax") {
    cfg.sim.xy_init_absmax = parse_double(value, key, where);
    require(cfg.sim.xy_init_absmax >= 0.0 && cfg.sim.xy_init_absmax <= 0.6, where,
            "xy_init_absmax must be in [0, 0.6]");
  } else if (key == "z_init_min") {
    cfg.sim.z_init_min = parse_double(value, key, where);
    require(cfg.sim.z_init_min < 0.0, where, "z_init_min must be < 0");
  } else if (key == "z_init_max") {
    cfg.sim.z_init_max = parse_double(value, key, where);
    require(cfg.sim.z_init_max < 0.0, where, "z_init_max must be < 0");
  } else if (key == "test_rz_min") {
    cfg.sim.test_rz_min = parse_double(value, key, where);
    require(std::abs(cfg.sim.test_rz_min) <= 180.0, where, "test_rz_min must be in [-180, 180]");
  } else if (key == "test_rz_max") {
    cfg.sim.test_rz_max = parse_double(value, key, where);
    require(std::abs(cfg.sim.test_rz_max) <= 180.0, where, "test_rz_max must be in [-180, 180]");
  } else if (key == "test_x_min") {
    cfg.sim.test_x_min = parse_double(value, key, where);
  } else if (key == "test_x_max") {
    cfg.sim.test_x_max = parse_double(value, key, where);
  } else {
    throw UnknownKey(where + ": unknown key '" + key + "'");
  }
}

void validate_config(const TrainConfig& cfg) {
  if (cfg.sim.z_init_min > cfg.sim.z_init_max)
    throw RangeError("z_init_min must be <= z_init_max");
  if (cfg.sim.test_rz_min > cfg.sim.test_rz_max)
    throw RangeError("test_rz_min must be <= test_rz_max");
  if (cfg.sim.test_x_min > cfg.sim.test_x_max)
    throw RangeError("test_x_min must be <= test_x_max");
}

TrainConfig parse_config_text(const std::string& text) {
  TrainConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos)
      throw TypeError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw TypeError(where + ": empty key");
    apply_config_entry(cfg, key, value, where);
  }
  validate_config(cfg);
  return cfg;
}

TrainConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

std::string config_to_text(const TrainConfig& cfg) {
  char buf[2048];
  std::snprintf(
      buf, sizeof(buf),
      "advantage = %s\n"
      "alpha = %.17g\n"
      "batch = %d\n"
      "beta = %.17g\n"
      "checkpoint_every = %d\n"
      "d_attn = %d\n"
      "d_feature = %d\n"
      "d_rep = %d\n"
      "gamma = %.17g\n"
      "optimizer = %s\n"
      "probes = %d\n"
      "px_const = %.17g\n"
      "seed = %llu\n"
      "sigma_min = %.17g\n"
      "steps = %d\n"
      "test_rz_max = %.17g\n"
      "test_rz_min = %.17g\n"
      "test_x_max = %.17g\n"
      "test_x_min = %.17g\n"
      "u_len_max = %.17g\n"
      "variant = %s\n"
      "xy_init_absmax = %.17g\n"
      "z_init_max = %.17g\n"
      "z_init_min = %.17g\n",
      cfg.advantage == AdvantageMode::Reward ? "reward" : "return", cfg.alpha, cfg.batch,
      cfg.beta, cfg.checkpoint_every, cfg.d_attn, cfg.d_f, cfg.d_rep, cfg.gamma,
      cfg.optimizer == OptKind::Adam ? "adam" : "sgd", cfg.n_probes, cfg.sim.px_const,
      static_cast<unsigned long long>(cfg.seed), cfg.sigma_min, cfg.steps,
      cfg.sim.test_rz_max, cfg.sim.test_rz_min, cfg.sim.test_x_max, cfg.sim.test_x_min,
      cfg.sim.u_len_max, cfg.variant == Variant::Fc ? "fc" : "nclass",
      cfg.sim.xy_init_absmax, cfg.sim.z_init_max, cfg.sim.z_init_min);
  return buf;
}

int threads_from_env() {
  const char* env = std::getenv("HGLANCE_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 0)
    throw ConfigError("HGLANCE_THREADS must be a non-negative integer");
  return static_cast<int>(v);
}

}  // namespace hglance
