#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "maser/cli.hpp"
#include "maser/stationary.hpp"

namespace maser::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Line and column of a byte offset in the source text, both 1-based.
std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void reject_unknown(const json& object, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& object, const std::string& path, const std::string& key) {
  const json& v = object.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

double number_or(const json& object, const std::string& path, const std::string& key, double fallback) {
  return object.contains(key) ? number(object, path, key) : fallback;
}

int integer(const json& object, const std::string& path, const std::string& key) {
  const json& v = object.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<int>();
}

std::complex<double> complex_value(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

CouplingScheme parse_scheme(const json& j, double scale) {
  const std::string path = "scheme";
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("type") || !j.at("type").is_string()) throw ConfigError(path + ".type", "expected a string");
  const std::string type = j.at("type").get<std::string>();
  CouplingScheme scheme;
  if (type == "resonant" || type == "uniform") {
    reject_unknown(j, path, {"type", "gamma"});
    const double gamma = number_or(j, path, "gamma", 2.0) / scale;
    scheme = type == "resonant" ? CouplingScheme::resonant(gamma) : CouplingScheme::uniform(gamma);
  } else if (type == "intermediate") {
    reject_unknown(j, path, {"type", "gamma", "ratio"});
    scheme = CouplingScheme::intermediate(number_or(j, path, "gamma", 2.0) / scale, number_or(j, path, "ratio", 0.25));
  } else if (type == "custom") {
    reject_unknown(j, path, {"type", "gamma_c_10", "gamma_c_20", "gamma_h_10", "gamma_h_20"});
    CouplingTable t;
    t.gamma_c_10 = number_or(j, path, "gamma_c_10", 0.0) / scale;
    t.gamma_c_20 = number_or(j, path, "gamma_c_20", 0.0) / scale;
    t.gamma_h_10 = number_or(j, path, "gamma_h_10", 0.0) / scale;
    t.gamma_h_20 = number_or(j, path, "gamma_h_20", 0.0) / scale;
    scheme = CouplingScheme::custom(t);
  } else {
    throw ConfigError(path + ".type", "expected resonant, intermediate, uniform or custom, got \"" + type + "\"");
  }
  try {
    build_table(scheme);
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
  return scheme;
}

Axis parse_axis(const json& j, const std::string& path, double scale) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(j, path, {"axis", "min", "max", "count"});
  for (const char* key : {"axis", "min", "max", "count"}) {
    if (!j.contains(key)) throw ConfigError(join(path, key), "missing");
  }
  if (!j.at("axis").is_string()) throw ConfigError(path + ".axis", "expected a string");
  Axis a;
  a.name = j.at("axis").get<std::string>();
  if (a.name != "omega20" && a.name != "lambda" && a.name != "omega") {
    throw ConfigError(path + ".axis", "expected omega20, lambda or omega");
  }
  a.min = number(j, path, "min") / scale;
  a.max = number(j, path, "max") / scale;
  a.count = integer(j, path, "count");
  if (a.count < 2) throw ConfigError(path + ".count", "must be at least 2");
  if (!(a.min < a.max)) throw ConfigError(path, "min must be smaller than max");
  return a;
}

InitialState parse_initial(const json& j, const std::string& path) {
  InitialState s;
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "ground") return s;
    if (name == "stationary") {
      s.kind = InitialState::Kind::Stationary;
      return s;
    }
    throw ConfigError(path, "expected \"ground\", \"stationary\" or an object");
  }
  if (!j.is_object()) throw ConfigError(path, "expected a string or an object");
  if (j.contains("bare")) {
    reject_unknown(j, path, {"bare"});
    const json& m = j.at("bare");
    if (!m.is_array() || m.size() != 3) throw ConfigError(path + ".bare", "expected a 3x3 array");
    s.kind = InitialState::Kind::BareMatrix;
    for (int r = 0; r < 3; ++r) {
      if (!m[r].is_array() || m[r].size() != 3) throw ConfigError(path + ".bare", "expected a 3x3 array");
      for (int c = 0; c < 3; ++c) {
        s.bare(r, c) = complex_value(m[r][c], path + ".bare[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    return s;
  }
  reject_unknown(j, path, {"rotating", "coh01", "coh02"});
  if (!j.contains("rotating")) throw ConfigError(path + ".rotating", "missing");
  const json& v = j.at("rotating");
  if (!v.is_array() || v.size() != 5) throw ConfigError(path + ".rotating", "expected 5 numbers");
  s.kind = InitialState::Kind::Rotating;
  for (int i = 0; i < 5; ++i) {
    if (!v[i].is_number()) throw ConfigError(path + ".rotating", "expected 5 numbers");
    s.core(i) = v[i].get<double>();
  }
  if (j.contains("coh01")) s.coh01 = complex_value(j.at("coh01"), path + ".coh01");
  if (j.contains("coh02")) s.coh02 = complex_value(j.at("coh02"), path + ".coh02");
  return s;
}

double max_lambda_over_grid(double eta_c) {
  // Largest admissible lambda over all omega20, attained at omega20 = (1 + k^2) / (2k).
  const double k = 1.0 - eta_c;
  return (1.0 - k * k) / (2.0 * std::sqrt(k) * (2.0 - eta_c));
}

double max_lambda_at(double eta_c, double omega20) {
  const auto b = hamiltonian_bounds(eta_c, omega20);
  return std::sqrt(std::max(b.max_lambda_sq, 0.0));
}

void default_axes(RunConfig& c, bool omega_optimal_requested) {
  if (!c.axes.empty()) return;
  const double eta_c = 1.0 - c.beta_h / c.beta_c;
  const bool grid = c.mode == Mode::Sweep || (c.mode == Mode::TurScan && omega_optimal_requested);
  if (grid) {
    c.axes = {{"omega20", 1.0, 1.0 / (1.0 - eta_c), 101}, {"lambda", 0.0, max_lambda_over_grid(eta_c), 101}};
    return;
  }
  switch (c.mode) {
    case Mode::Sweep:
      c.axes = {{"omega20", 1.0, 1.0 / (1.0 - eta_c), 101}, {"lambda", 0.0, max_lambda_over_grid(eta_c), 101}};
      break;
    case Mode::Fcs:
    case Mode::Flows:
      c.axes = {{"lambda", 0.0, max_lambda_at(eta_c, c.omega20), 101}};
      break;
    case Mode::TurScan:
      c.axes = {{"omega", 0.05, 10.0, 400}};
      break;
    default:
      break;
  }
}

void check_axes(const RunConfig& c, bool omega_optimal_requested) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < c.axes.size(); ++i) {
    const auto path = "grid[" + std::to_string(i) + "]";
    if (!seen.insert(c.axes[i].name).second) throw ConfigError(path + ".axis", "axis swept twice");
    if (c.axes[i].name == "omega" && omega_optimal_requested) {
      throw ConfigError("omega", "frequency policy \"optimal\" cannot be combined with an omega axis");
    }
  }
  const std::size_t limit = c.mode == Mode::Sweep || c.mode == Mode::TurScan ? 2 : 1;
  if (c.mode == Mode::Stationary || c.mode == Mode::Dynamics) {
    if (!c.axes.empty()) throw ConfigError("grid", std::string("not allowed in mode ") + to_string(c.mode));
  } else if (c.axes.size() > limit) {
    throw ConfigError("grid", "at most " + std::to_string(limit) + " axes in mode " + to_string(c.mode));
  }
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "stationary") return Mode::Stationary;
  if (name == "sweep") return Mode::Sweep;
  if (name == "dynamics") return Mode::Dynamics;
  if (name == "fcs") return Mode::Fcs;
  if (name == "flows") return Mode::Flows;
  if (name == "tur-scan") return Mode::TurScan;
  throw ConfigError("mode", "unknown mode \"" + name + "\"");
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Stationary: return "stationary";
    case Mode::Sweep: return "sweep";
    case Mode::Dynamics: return "dynamics";
    case Mode::Fcs: return "fcs";
    case Mode::Flows: return "flows";
    case Mode::TurScan: return "tur-scan";
  }
  return "unknown";
}

double Axis::value(int i) const {
  if (i == count - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

EngineParams RunConfig::params_at(double omega20_ratio, double lambda_ratio, std::optional<double> drive) const {
  EngineParams p;
  p.omega0 = 0.0;
  p.omega1 = 1.0;
  p.omega2 = omega20_ratio;
  p.lambda = lambda_ratio;
  p.beta_c = beta_c;
  p.beta_h = beta_h;
  p.couplings = build_table(scheme);
  p.omega = drive.value_or(1.0);
  if (!drive && validate(p).ok()) p.omega = maser::optimal_frequency(p);
  return p;
}

EngineParams RunConfig::params() const { return params_at(omega20, lambda, omega); }

ordered_json RunConfig::resolved() const {
  ordered_json j;
  j["mode"] = to_string(mode);
  j["omega10"] = omega10;
  j["units"] = "energies in omega10, inverse temperatures times omega10";
  j["omega20"] = omega20;
  j["lambda"] = lambda;
  j["beta_c"] = beta_c;
  j["beta_h"] = beta_h;
  ordered_json s;
  s["type"] = to_string(scheme.kind);
  const auto table = build_table(scheme);
  if (scheme.kind != SchemeKind::Custom) s["gamma"] = scheme.gamma;
  if (scheme.kind == SchemeKind::Intermediate) s["ratio"] = scheme.ratio;
  s["gamma_c_10"] = table.gamma_c_10;
  s["gamma_c_20"] = table.gamma_c_20;
  s["gamma_h_10"] = table.gamma_h_10;
  s["gamma_h_20"] = table.gamma_h_20;
  j["scheme"] = s;
  if (omega) {
    j["omega"] = *omega;
  } else {
    j["omega"] = "optimal";
  }
  ordered_json grid = ordered_json::array();
  for (const auto& a : axes) grid.push_back({{"axis", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}});
  j["grid"] = grid;
  if (mode == Mode::Dynamics) {
    ordered_json d;
    d["t_end"] = integration.t_end;
    d["dt"] = integration.dt;
    d["sample_every"] = integration.sample_every;
    static const char* names[] = {"ground", "stationary", "rotating", "bare"};
    d["initial"] = names[static_cast<int>(initial.kind)];
    j["dynamics"] = d;
  }
  j["workers"] = workers;
  return j;
}

RunConfig parse_config(const std::string& text, Mode mode) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(location(text, e.byte > 0 ? e.byte - 1 : 0), "syntax error: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("line 1, column 1", "top level must be an object");
  reject_unknown(j, "", {"mode", "omega10", "omega20", "lambda", "beta_c", "beta_h", "scheme", "omega", "grid",
                         "dynamics", "workers"});

  RunConfig c;
  c.mode = mode;
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) throw ConfigError("mode", "expected a string");
    if (parse_mode(j.at("mode").get<std::string>()) != mode) {
      throw ConfigError("mode", "config mode differs from the mode given on the command line");
    }
  }

  c.omega10 = number_or(j, "", "omega10", 1.0);
  if (!(c.omega10 > 0.0)) throw ConfigError("omega10", "must be positive");
  const double scale = c.omega10;
  c.omega20 = number_or(j, "", "omega20", 2.5 * scale) / scale;
  c.lambda = number_or(j, "", "lambda", 0.5 * scale) / scale;
  c.beta_c = number_or(j, "", "beta_c", 5.0 / scale) * scale;
  c.beta_h = number_or(j, "", "beta_h", 1.0 / scale) * scale;
  if (!(c.beta_c > 0.0)) throw ConfigError("beta_c", "must be positive");
  if (!(c.beta_h > 0.0)) throw ConfigError("beta_h", "must be positive");
  if (c.beta_h > c.beta_c) throw ConfigError("beta_h", "must not exceed beta_c");
  if (!(c.omega20 > 1.0)) throw ConfigError("omega20", "must exceed omega10");
  if (!(c.lambda >= 0.0)) throw ConfigError("lambda", "must be non-negative");

  if (j.contains("scheme")) c.scheme = parse_scheme(j.at("scheme"), scale);

  bool optimal_requested = false;
  if (j.contains("omega")) {
    const json& w = j.at("omega");
    if (w.is_string()) {
      if (w.get<std::string>() != "optimal") throw ConfigError("omega", "expected a number or \"optimal\"");
      optimal_requested = true;
    } else {
      c.omega = number(j, "", "omega") / scale;
      if (!(*c.omega > 0.0)) throw ConfigError("omega", "must be positive");
    }
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.is_object()) {
      c.axes.push_back(parse_axis(g, "grid", scale));
    } else if (g.is_array()) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        c.axes.push_back(parse_axis(g[i], "grid[" + std::to_string(i) + "]", scale));
      }
    } else {
      throw ConfigError("grid", "expected an axis object or an array of them");
    }
  }
  check_axes(c, optimal_requested);
  default_axes(c, optimal_requested);
  for (const auto& a : c.axes) {
    if (a.name == "omega20" && !(a.min >= 1.0)) throw ConfigError("grid.omega20", "min must be at least omega10");
    if (a.name == "lambda" && !(a.min >= 0.0)) throw ConfigError("grid.lambda", "min must be non-negative");
    if (a.name == "omega" && !(a.min > 0.0)) throw ConfigError("grid.omega", "min must be positive");
  }

  if (j.contains("dynamics")) {
    if (mode != Mode::Dynamics) throw ConfigError("dynamics", "only allowed in mode dynamics");
    const json& d = j.at("dynamics");
    if (!d.is_object()) throw ConfigError("dynamics", "expected an object");
    reject_unknown(d, "dynamics", {"t_end", "dt", "sample_every", "initial"});
    c.integration.t_end = number_or(d, "dynamics", "t_end", c.integration.t_end * scale) / scale;
    c.integration.dt = number_or(d, "dynamics", "dt", c.integration.dt * scale) / scale;
    if (d.contains("sample_every")) c.integration.sample_every = integer(d, "dynamics", "sample_every");
    if (!(c.integration.dt > 0.0)) throw ConfigError("dynamics.dt", "must be positive");
    if (!(c.integration.t_end >= 0.0)) throw ConfigError("dynamics.t_end", "must be non-negative");
    if (c.integration.sample_every < 1) throw ConfigError("dynamics.sample_every", "must be at least 1");
    if (d.contains("initial")) c.initial = parse_initial(d.at("initial"), "dynamics.initial");
  }

  if (j.contains("workers")) {
    c.workers = integer(j, "", "workers");
    if (c.workers < 1) throw ConfigError("workers", "must be at least 1");
  }
  return c;
}

RunConfig load_config(const std::string& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), mode);
}

}  // namespace maser::cli
