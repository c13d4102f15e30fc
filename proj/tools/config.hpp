#pragma once

// Run configuration: a flat text file of `key = value` lines. `#` starts a
// comment, `[section]` prefixes the following keys with `section.`. Angles
// and times accept `pi` multiples: `pi`, `pi/4`, `3*pi/2`, `0.5*pi`.

#include "susyjc/susyjc.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace susyjc::cli {

enum class PathKind { analytic, dense, both };
enum class FieldKind { fock, coherent, cat };

struct RunConfig {
  Model model = Model::ajc;
  PathKind path = PathKind::analytic;
  Frame frame = Frame::lab;
  double omega_a = 2.0;  // JC-side atomic frequency; the AJC partner runs at omega_a - 2 omega_c
  double lambda = 0.1;
  double omega_c = 1.0;
  FieldKind field_kind = FieldKind::cat;
  int field_m = 1;
  Complex alpha = 4.0;
  double vartheta = 0.0;
  double theta = 0.0;
  double phi = kPi / 4;
  int n_trunc = 250;
  double t_max = 300.0;
  int n_steps = 600;
  int sweep_theta_count = 0;  // 0: no sweep section
  std::vector<int> moments_k{2};
  std::vector<int> amplitude_k{2};
  std::vector<double> wigner_times;
  PhaseSpaceGrid wigner_grid{-6.0, 6.0, -6.0, 6.0, 121};
  WignerConvention convention = WignerConvention::paper;
  int validate_samples = 10;
  bool skip_partner_shift = false;
  std::string output = ".";
  int threads = 1;

  ModelParams params() const { return {omega_a, lambda, omega_c}; }

  FieldState field() const {
    switch (field_kind) {
      case FieldKind::fock: return make_fock_state(field_m, n_trunc);
      case FieldKind::coherent: return make_coherent_state(alpha, n_trunc);
      case FieldKind::cat: return make_cat_state(alpha, vartheta, n_trunc);
    }
    throw ConfigError("unknown field kind");
  }

  InitialSpec initial(double theta_value) const {
    return InitialSpec::bloch(theta_value, phi, field(), params());
  }
  InitialSpec initial() const { return initial(theta); }

  /// t_i = t_max i / n_steps, i = 0..n_steps; a single t = 0 when t_max = 0.
  std::vector<double> times() const {
    if (t_max == 0.0) return {0.0};
    std::vector<double> t(n_steps + 1);
    for (int i = 0; i <= n_steps; ++i) t[i] = t_max * i / n_steps;
    return t;
  }

  /// Uniform on [0, pi].
  std::vector<double> sweep_thetas() const {
    if (sweep_theta_count == 1) return {0.0};
    std::vector<double> th(sweep_theta_count);
    for (int i = 0; i < sweep_theta_count; ++i) th[i] = kPi * i / (sweep_theta_count - 1);
    return th;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_plain(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

inline double parse_real(const std::string& key, const std::string& raw) {
  std::string text = trim(raw);
  const auto pi = text.find("pi");
  if (pi == std::string::npos) return parse_plain(key, text);
  double value = kPi;
  std::string head = trim(text.substr(0, pi));
  std::string tail = trim(text.substr(pi + 2));
  if (head == "-") {
    value = -value;
  } else if (!head.empty()) {
    if (head.back() != '*') throw ConfigError("key '" + key + "': malformed pi expression '" + text + "'");
    value *= parse_plain(key, trim(head.substr(0, head.size() - 1)));
  }
  if (!tail.empty()) {
    if (tail.front() != '/') throw ConfigError("key '" + key + "': malformed pi expression '" + text + "'");
    const double d = parse_plain(key, trim(tail.substr(1)));
    if (d == 0.0) throw ConfigError("key '" + key + "': division by zero");
    value /= d;
  }
  return value;
}

inline int parse_int(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

inline std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

inline bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

template <typename Enum>
Enum parse_choice(const std::string& key, const std::string& raw,
                  const std::map<std::string, Enum>& choices) {
  const auto it = choices.find(trim(raw));
  if (it == choices.end()) {
    std::string allowed;
    for (const auto& [name, _] : choices) allowed += (allowed.empty() ? "" : "|") + name;
    throw ConfigError("key '" + key + "': expected one of " + allowed + ", got '" + trim(raw) + "'");
  }
  return it->second;
}

}  // namespace detail

/// Flat key/value map after section prefixing. Duplicate keys are an error.
inline std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (!kv.emplace(key, detail::trim(line.substr(eq + 1))).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

inline void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (c.n_trunc < 2) fail("n_trunc must be >= 2");
  if (!(c.omega_c > 0.0)) fail("omega_c must be > 0");
  if (c.lambda < 0.0) fail("lambda must be >= 0");
  if (c.t_max < 0.0) fail("time.t_max must be >= 0");
  if (c.n_steps < 1) fail("time.n_steps must be >= 1");
  if (c.field_kind == FieldKind::fock && (c.field_m < 0 || c.field_m > c.n_trunc)) {
    fail("field.m must be in 0..n_trunc");
  }
  if (c.sweep_theta_count < 0) fail("sweep.theta_count must be >= 0");
  for (int k : c.moments_k) {
    if (k < 1 || k > kMaxMomentOrder) fail("moments.k entries must be in 1.." + std::to_string(kMaxMomentOrder));
  }
  for (int k : c.amplitude_k) {
    if (k < 1 || k > c.n_trunc) fail("field_amplitude.k entries must be in 1..n_trunc");
  }
  for (double t : c.wigner_times) {
    if (t < 0.0) fail("wigner.times must be >= 0");
  }
  if (!(c.wigner_grid.re_min < c.wigner_grid.re_max) || !(c.wigner_grid.im_min < c.wigner_grid.im_max)) {
    fail("wigner grid bounds must be ordered");
  }
  if (c.wigner_grid.points_per_axis < 2) fail("wigner.points must be >= 2");
  if (c.validate_samples < 1) fail("validate.samples must be >= 1");
  if (c.threads < 1) fail("threads must be >= 1");
}

inline RunConfig parse_config(std::istream& in) {
  using namespace detail;
  RunConfig c;
  for (const auto& [key, value] : read_key_values(in)) {
    if (key == "model") {
      c.model = parse_choice<Model>(key, value, {{"jc", Model::jc}, {"ajc", Model::ajc}});
    } else if (key == "path") {
      c.path = parse_choice<PathKind>(key, value, {{"analytic", PathKind::analytic}, {"dense", PathKind::dense}, {"both", PathKind::both}});
    } else if (key == "frame") {
      c.frame = parse_choice<Frame>(key, value, {{"lab", Frame::lab}, {"rotating", Frame::rotating}});
    } else if (key == "omega_a") {
      c.omega_a = parse_real(key, value);
    } else if (key == "lambda") {
      c.lambda = parse_real(key, value);
    } else if (key == "omega_c") {
      c.omega_c = parse_real(key, value);
    } else if (key == "n_trunc") {
      c.n_trunc = parse_int(key, value);
    } else if (key == "threads") {
      c.threads = parse_int(key, value);
    } else if (key == "output") {
      c.output = value;
    } else if (key == "field.kind") {
      c.field_kind = parse_choice<FieldKind>(key, value, {{"fock", FieldKind::fock}, {"coherent", FieldKind::coherent}, {"cat", FieldKind::cat}});
    } else if (key == "field.m") {
      c.field_m = parse_int(key, value);
    } else if (key == "field.alpha") {
      c.alpha.real(parse_real(key, value));
    } else if (key == "field.alpha_im") {
      c.alpha.imag(parse_real(key, value));
    } else if (key == "field.vartheta") {
      c.vartheta = parse_real(key, value);
    } else if (key == "qubit.theta") {
      c.theta = parse_real(key, value);
    } else if (key == "qubit.phi") {
      c.phi = parse_real(key, value);
    } else if (key == "time.t_max") {
      c.t_max = parse_real(key, value);
    } else if (key == "time.n_steps") {
      c.n_steps = parse_int(key, value);
    } else if (key == "sweep.theta_count") {
      c.sweep_theta_count = parse_int(key, value);
    } else if (key == "moments.k") {
      c.moments_k.clear();
      for (const auto& item : split_list(value)) c.moments_k.push_back(parse_int(key, item));
    } else if (key == "field_amplitude.k") {
      c.amplitude_k.clear();
      for (const auto& item : split_list(value)) c.amplitude_k.push_back(parse_int(key, item));
    } else if (key == "wigner.times") {
      c.wigner_times.clear();
      for (const auto& item : split_list(value)) c.wigner_times.push_back(parse_real(key, item));
    } else if (key == "wigner.re_min") {
      c.wigner_grid.re_min = parse_real(key, value);
    } else if (key == "wigner.re_max") {
      c.wigner_grid.re_max = parse_real(key, value);
    } else if (key == "wigner.im_min") {
      c.wigner_grid.im_min = parse_real(key, value);
    } else if (key == "wigner.im_max") {
      c.wigner_grid.im_max = parse_real(key, value);
    } else if (key == "wigner.points") {
      c.wigner_grid.points_per_axis = parse_int(key, value);
    } else if (key == "wigner.convention") {
      c.convention = parse_choice<WignerConvention>(key, value, {{"paper", WignerConvention::paper}, {"standard", WignerConvention::standard}});
    } else if (key == "validate.samples") {
      c.validate_samples = parse_int(key, value);
    } else if (key == "validate.skip_partner_shift") {
      c.skip_partner_shift = parse_bool(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

inline RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace susyjc::cli
