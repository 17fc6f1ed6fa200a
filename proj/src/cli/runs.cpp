#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "maser/cli.hpp"
#include "maser/decomposition.hpp"
#include "maser/fcs.hpp"

namespace maser::cli {

namespace {

constexpr const char* kNA = "NA";

// Evaluates fn(0..n-1) on a pool of workers and returns the results in index
// order. If any evaluation throws, the exception of the lowest index wins.
template <class Fn>
auto parallel_map(std::size_t n, int workers, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::clamp(workers, 1, 256));
  if (count == 1 || n < 2) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < std::min(count, n); ++k) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string flag_for(const ValidationReport& report) {
  std::string s = "invalid:";
  for (const auto& v : report.violations) s += " " + v;
  return s;
}

struct Point {
  double omega20 = 0.0;
  double lambda = 0.0;
  std::optional<double> omega;
};

std::vector<Point> grid_points(const RunConfig& c) {
  std::vector<Point> points{{c.omega20, c.lambda, c.omega}};
  for (const auto& axis : c.axes) {
    std::vector<Point> expanded;
    expanded.reserve(points.size() * static_cast<std::size_t>(axis.count));
    for (const auto& base : points) {
      for (int i = 0; i < axis.count; ++i) {
        Point p = base;
        const double x = axis.value(i);
        if (axis.name == "omega20") p.omega20 = x;
        if (axis.name == "lambda") p.lambda = x;
        if (axis.name == "omega") p.omega = x;
        expanded.push_back(p);
      }
    }
    points = std::move(expanded);
  }
  return points;
}

void require_invariants(const ThermoReport& t, const EngineParams& p) {
  const auto failed = check_invariants(t, p);
  if (failed.empty()) return;
  std::string what = "invariant violated at omega20=" + format_number(p.omega2) +
                     " lambda=" + format_number(p.lambda) + " omega=" + format_number(p.omega) + ":";
  for (const auto& f : failed) what += " " + f;
  throw InvariantError(what);
}

void require_split(const DecompositionReport& d, const ThermoReport& t, const EngineParams& p) {
  const double scale = std::abs(t.qdot_h) + std::abs(t.qdot_c) + std::abs(d.qd_h);
  const bool ok = std::abs(d.qd_h + d.qd_c) <= 1e-10 * scale && std::abs(d.qd_h + d.qnd_h - t.qdot_h) <= 1e-10 * scale &&
                  std::abs(d.qd_c + d.qnd_c - t.qdot_c) <= 1e-10 * scale;
  if (!ok) {
    throw InvariantError("heat split inconsistent at omega20=" + format_number(p.omega2) +
                         " lambda=" + format_number(p.lambda));
  }
}

using Row = std::vector<std::string>;

void append(Row& row, std::initializer_list<double> values) {
  for (double v : values) row.push_back(format_number(v));
}

void append_na(Row& row, std::size_t n) { row.insert(row.end(), n, kNA); }

const std::vector<std::string> kPointColumns = {
    "omega20_over_omega10", "lambda_over_omega10",  "omega_over_omega10",  "domain_flag",
    "P_over_omega10sq",     "Qc_over_omega10sq",    "Qh_over_omega10sq",   "P0_over_omega10sq",
    "sigma_dot_over_omega10", "eta_ssd",            "eta_carnot",          "eta",
    "Qd_h_over_omega10sq",  "Qd_c_over_omega10sq",  "Qnd_h_over_omega10sq", "Qnd_c_over_omega10sq",
    "eta_nd",               "inv_eta_nd",           "pattern",             "varP_over_omega10cube",
    "var1_over_omega10cube", "var2_over_omega10cube", "var3_over_omega10cube", "var4_over_omega10cube",
    "U"};
constexpr std::size_t kAlwaysColumns = 7;  // P .. eta_carnot
constexpr std::size_t kEngineColumns = 14;  // eta .. U

Row point_row(const RunConfig& c, const Point& pt) {
  const EngineParams p = c.params_at(pt.omega20, pt.lambda, pt.omega);
  Row row;
  append(row, {pt.omega20, pt.lambda});
  const auto report = validate(p);
  if (!report.ok()) {
    row.push_back(pt.omega ? format_number(*pt.omega) : kNA);
    row.push_back(flag_for(report));
    append_na(row, kAlwaysColumns + kEngineColumns);
    return row;
  }
  row.push_back(format_number(p.omega));

  const auto sol = solve_stationary(p);
  const auto t = thermo_report(sol);
  require_invariants(t, p);
  row.push_back(t.domain.reason);
  append(row, {t.P, t.qdot_c, t.qdot_h, t.P0, entropy_production(sol, t), t.eta_ssd, t.eta_carnot});

  if (!t.domain.in()) {
    append_na(row, kEngineColumns);
    return row;
  }
  const auto d = decompose_heat(sol, t);
  require_split(d, t, p);
  const auto f = fcs_report(sol, t);
  append(row, {t.eta, d.qd_h, d.qd_c, d.qnd_h, d.qnd_c, d.eta_nd, d.inv_eta_nd});
  row.push_back(to_string(d.pattern));
  append(row, {f.variance.var_total, f.variance.var1, f.variance.var2, f.variance.var3, f.variance.var4,
               f.tur_product});
  return row;
}

CsvTable point_table(const RunConfig& c) {
  const auto points = grid_points(c);
  CsvTable table;
  table.header = kPointColumns;
  table.rows = parallel_map(points.size(), c.workers, [&](std::size_t i) { return point_row(c, points[i]); });
  return table;
}

// Leading coordinates shared by the scan modes.
Row coordinates(const Point& pt, const EngineParams& p, bool valid) {
  Row row;
  append(row, {pt.omega20, pt.lambda});
  row.push_back(valid || pt.omega ? format_number(valid ? p.omega : *pt.omega) : kNA);
  return row;
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return kNA;
  if (x == 0.0) return "0";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, result.ptr);
}

std::string CsvTable::to_string() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw InvariantError("csv row width differs from header");
    line(r);
  }
  return out;
}

CsvTable run_stationary(const RunConfig& config) { return point_table(config); }

CsvTable run_sweep(const RunConfig& config) { return point_table(config); }

CsvTable run_fcs(const RunConfig& config) {
  const auto points = grid_points(config);
  CsvTable table;
  table.header = {"omega20_over_omega10",  "lambda_over_omega10",       "omega_over_omega10",
                  "domain_flag",           "P_over_omega10sq",          "mean_tilted_over_omega10sq",
                  "varP_over_omega10cube", "var_tilted_over_omega10cube", "var1_over_omega10cube",
                  "var2_over_omega10cube", "var3_over_omega10cube",     "var4_over_omega10cube",
                  "sigma_dot_over_omega10", "U"};
  table.rows = parallel_map(points.size(), config.workers, [&](std::size_t i) {
    const auto& pt = points[i];
    const EngineParams p = config.params_at(pt.omega20, pt.lambda, pt.omega);
    const auto report = validate(p);
    Row row = coordinates(pt, p, report.ok());
    if (!report.ok()) {
      row.push_back(flag_for(report));
      append_na(row, 10);
      return row;
    }
    const auto sol = solve_stationary(p);
    const auto t = thermo_report(sol);
    require_invariants(t, p);
    const auto f = fcs_report(sol, t);
    const auto tilted = cumulants_from_eigenvalue(p);
    row.push_back(t.domain.reason);
    append(row, {t.P, tilted.mean, f.variance.var_total, tilted.variance, f.variance.var1, f.variance.var2,
                 f.variance.var3, f.variance.var4, f.sigma_dot, f.tur_product});
    return row;
  });
  return table;
}

CsvTable run_flows(const RunConfig& config) {
  const auto points = grid_points(config);
  CsvTable table;
  table.header = {"omega20_over_omega10", "lambda_over_omega10",  "omega_over_omega10",   "domain_flag",
                  "inv_eta_nd",           "eta_nd",               "Qd_h_over_omega10sq",  "Qd_c_over_omega10sq",
                  "Qnd_h_over_omega10sq", "Qnd_c_over_omega10sq", "pattern"};
  table.rows = parallel_map(points.size(), config.workers, [&](std::size_t i) {
    const auto& pt = points[i];
    const EngineParams p = config.params_at(pt.omega20, pt.lambda, pt.omega);
    const auto report = validate(p);
    Row row = coordinates(pt, p, report.ok());
    if (!report.ok()) {
      row.push_back(flag_for(report));
      append_na(row, 7);
      return row;
    }
    const auto sol = solve_stationary(p);
    const auto t = thermo_report(sol);
    require_invariants(t, p);
    row.push_back(t.domain.reason);
    if (!t.domain.in()) {
      append_na(row, 7);
      return row;
    }
    const auto d = decompose_heat(sol, t);
    require_split(d, t, p);
    append(row, {d.inv_eta_nd, d.eta_nd, d.qd_h, d.qd_c, d.qnd_h, d.qnd_c});
    row.push_back(to_string(d.pattern));
    return row;
  });
  return table;
}

CsvTable run_tur_scan(const RunConfig& config) {
  const auto points = grid_points(config);
  CsvTable table;
  table.header = {"omega20_over_omega10", "lambda_over_omega10",   "omega_over_omega10",
                  "domain_flag",          "P_over_omega10sq",      "sigma_dot_over_omega10",
                  "varP_over_omega10cube", "U",                    "U_resonant_floor"};
  table.rows = parallel_map(points.size(), config.workers, [&](std::size_t i) {
    const auto& pt = points[i];
    const EngineParams p = config.params_at(pt.omega20, pt.lambda, pt.omega);
    const auto report = validate(p);
    Row row = coordinates(pt, p, report.ok());
    if (!report.ok()) {
      row.push_back(flag_for(report));
      append_na(row, 5);
      return row;
    }
    const auto sol = solve_stationary(p);
    const auto t = thermo_report(sol);
    require_invariants(t, p);
    row.push_back(t.domain.reason);
    const double affinity = p.beta_c * sol.spec.eps10 - p.beta_h * sol.spec.eps20;
    if (!t.domain.in()) {
      append(row, {t.P, entropy_production(sol, t)});
      append_na(row, 3);
      return row;
    }
    const auto f = fcs_report(sol, t);
    append(row, {t.P, f.sigma_dot, f.variance.var_total, f.tur_product, resonant_tur_floor(affinity)});
    return row;
  });
  return table;
}

CsvTable run_dynamics(const RunConfig& config) {
  const EngineParams p = config.params();
  const auto report = validate(p);
  if (!report.ok()) throw ConfigError("parameters", report.summary());

  DynamicalState initial;
  switch (config.initial.kind) {
    case InitialState::Kind::Ground: initial = DynamicalState::ground(); break;
    case InitialState::Kind::Stationary: initial = DynamicalState::from_stationary(stationary_state(p)); break;
    case InitialState::Kind::Rotating:
      initial.core = config.initial.core;
      initial.coh01 = config.initial.coh01;
      initial.coh02 = config.initial.coh02;
      try {
        Eigen::Matrix3cd rho = bare_density_matrix(p, initial, 0.0);
        DynamicalState::from_bare_matrix(p, rho);
      } catch (const InvalidArgument& e) {
        throw ConfigError("dynamics.initial", e.what());
      }
      break;
    case InitialState::Kind::BareMatrix:
      try {
        initial = DynamicalState::from_bare_matrix(p, config.initial.bare);
      } catch (const InvalidArgument& e) {
        throw ConfigError("dynamics.initial.bare", e.what());
      }
      break;
  }

  Trajectory traj;
  try {
    traj = integrate(p, initial, config.integration);
  } catch (const InvalidArgument& e) {
    throw ConfigError("dynamics.dt", e.what());
  }
  const auto obs = observables(traj, p);

  CsvTable table;
  table.header = {"t_times_omega10",      "rho0",
                  "rho1",                 "rho2",
                  "delta1",               "delta2",
                  "trace",                "min_eigenvalue",
                  "coh01_abs",            "coh02_abs",
                  "Qc_over_omega10sq",    "Qh_over_omega10sq",
                  "Wdot_over_omega10sq",  "first_law_residual_over_omega10sq"};
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& x = traj.states[k];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(bare_density_matrix(p, sample_state(traj, k), traj.times[k]),
                                                        Eigen::EigenvaluesOnly);
    Row row;
    append(row, {traj.times[k], x(0), x(1), x(2), x(3), x(4), x(0) + x(1) + x(2), eig.eigenvalues().minCoeff(),
                 traj.aux_coherences[k][0], traj.aux_coherences[k][1], obs.qdot_c[k], obs.qdot_h[k], obs.wdot[k],
                 obs.qdot_c[k] + obs.qdot_h[k] - obs.wdot[k] - obs.denergy_dt[k]});
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable run(const RunConfig& config) {
  switch (config.mode) {
    case Mode::Stationary: return run_stationary(config);
    case Mode::Sweep: return run_sweep(config);
    case Mode::Dynamics: return run_dynamics(config);
    case Mode::Fcs: return run_fcs(config);
    case Mode::Flows: return run_flows(config);
    case Mode::TurScan: return run_tur_scan(config);
  }
  throw ConfigError("mode", "unknown mode");
}

}  // namespace maser::cli
