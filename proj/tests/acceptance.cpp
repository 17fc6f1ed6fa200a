// Acceptance checks. Prints one PASS/FAIL line per criterion.
// Exit status is non-zero only for failures that are not listed as known
// physical deviations (see README).
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "maser/cli.hpp"
#include "maser/decomposition.hpp"
#include "maser/dynamics.hpp"
#include "maser/fcs.hpp"
#include "maser/stationary.hpp"
#include "support/sampling.hpp"

using namespace maser;

namespace {

struct Outcome {
  bool pass = true;
  bool known_deviation = false;
  std::string detail;
  std::vector<std::string> notes;
};

int unexpected_failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  std::printf("%s criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
  if (!o.pass && !o.known_deviation) ++unexpected_failures;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const char* kSchemes[] = {R"({"type": "resonant", "gamma": 2})", R"({"type": "intermediate", "gamma": 2, "ratio": 0.25})",
                          R"({"type": "uniform", "gamma": 2})"};
const char* kSchemeNames[] = {"resonant", "intermediate", "uniform"};
const SchemeKind kKinds[] = {SchemeKind::Resonant, SchemeKind::Intermediate, SchemeKind::Uniform};

cli::RunConfig sweep_config(int scheme, double beta_c = 5.0, double beta_h = 1.0) {
  const std::string text = std::string(R"({"beta_c": )") + std::to_string(beta_c) + R"(, "beta_h": )" +
                           std::to_string(beta_h) + R"(, "scheme": )" + kSchemes[scheme] + "}";
  return cli::parse_config(text, cli::Mode::Sweep);
}

// Valid parameter points of the default sweep grid at the optimal frequency.
std::vector<EngineParams> sweep_points(int scheme) {
  const auto c = sweep_config(scheme);
  std::vector<EngineParams> out;
  const auto& a = c.axes[0];
  const auto& b = c.axes[1];
  for (int i = 0; i < a.count; ++i) {
    for (int j = 0; j < b.count; ++j) {
      const auto p = c.params_at(a.value(i), b.value(j), std::nullopt);
      if (validate(p).ok()) out.push_back(p);
    }
  }
  return out;
}

EngineParams reference_point(CouplingScheme scheme) {
  EngineParams p;
  p.omega2 = 2.5;
  p.lambda = 0.5;
  p.beta_c = 5.0;
  p.beta_h = 1.0;
  p.couplings = build_table(scheme);
  p.omega = optimal_frequency(p);
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double loglog_slope(const std::function<double(double)>& f, double lo, double hi) {
  const int n = 21;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    const double x = std::log(lo) + (std::log(hi) - std::log(lo)) * k / (n - 1);
    const double y = std::log(f(std::exp(x)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome criterion1() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto p = sampling::random_engine(rng, SchemeKind::Resonant);
    const auto s = spectrum(p);
    worst = std::max(worst, std::abs(efficiency(p).eta - (1.0 - s.eps10 / s.eps20)));
  }
  return {worst <= 1e-12, false, "200 sets, max |eta - (1 - eps10/eps20)| = " + fmt("%.3g", worst), {}};
}

Outcome criterion2() {
  double worst = -1.0;
  int evaluated = 0;
  for (int s = 0; s < 3; ++s) {
    for (const auto& p : sweep_points(s)) {
      const auto t = thermo_report(p);
      if (!(t.qdot_h > 0.0)) continue;
      ++evaluated;
      worst = std::max(worst, t.eta);
    }
  }
  return {worst <= 0.8 + 1e-12, false, std::to_string(evaluated) + " points with Qh > 0, max eta = " + fmt("%.15g", worst), {}};
}

Outcome criterion3() {
  std::mt19937_64 rng(1003);
  double worst_linear = 0.0;
  double worst_ode = 0.0;
  for (auto kind : kKinds) {
    for (int k = 0; k < 50; ++k) {
      const auto p = sampling::random_params(rng, kind);
      const auto closed = solve_stationary_closed_form(p).state.vector();
      const auto linear = stationary_state_linear_solve(p).vector();
      const double scale = closed.cwiseAbs().maxCoeff();
      worst_linear = std::max(worst_linear, (closed - linear).cwiseAbs().maxCoeff() / scale);

      // Long-time RK4 run from the ground state, long enough for the slowest mode to decay by e^-30.
      const auto s = spectrum(p);
      const Matrix5 m = generator(p, s, rates(p, s));
      const auto ev = Eigen::EigenSolver<Matrix5>(m).eigenvalues();
      double slowest = 1e300;
      for (int i = 0; i < 5; ++i)
        if (std::abs(ev(i)) > 1e-9) slowest = std::min(slowest, -ev(i).real());
      IntegrationOptions o;
      o.t_end = 30.0 / slowest;
      o.dt = 0.05 / spectral_radius(p);
      o.sample_every = 1 << 30;
      const auto traj = integrate(p, DynamicalState::ground(), o);
      worst_ode = std::max(worst_ode, (closed - traj.final_state.core).cwiseAbs().maxCoeff() / scale);
    }
  }
  const double worst = std::max(worst_linear, worst_ode);
  return {worst <= 1e-6, false,
          "150 sets, closed vs linear " + fmt("%.2g", worst_linear) + ", closed vs RK4 " + fmt("%.2g", worst_ode), {}};
}

Outcome criterion4() {
  Outcome o;
  const auto p = reference_point(CouplingScheme::resonant(2.0));
  const double predicted = p.omega;
  auto power_at = [&](double w) {
    auto q = p;
    q.omega = w;
    return power(q);
  };
  // Golden-section search on a bracket well around the prediction.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.2 * predicted, b = 3.0 * predicted;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  while (b - a > 1e-10 * predicted) {
    if (power_at(c) > power_at(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  const double argmax = 0.5 * (a + b);
  const double err = rel(argmax, predicted);
  o.pass = err < 1e-3;
  o.detail = "omega* = " + fmt("%.10g", predicted) + ", argmax P = " + fmt("%.10g", argmax) + " (rel " + fmt("%.2g", err) + ")";

  // eta is flat in omega for the resonant table, so its peak is tested on the other two schemes.
  for (int s = 1; s < 3; ++s) {
    const auto q = reference_point(kKinds[s] == SchemeKind::Intermediate ? CouplingScheme::intermediate(2.0, 0.25)
                                                              : CouplingScheme::uniform(2.0));
    const int n = 2001;
    const double lo = 0.2 * q.omega, hi = 3.0 * q.omega, step = (hi - lo) / (n - 1);
    int best_p = 0, best_eta = 0;
    double max_p = -1e300, max_eta = -1e300;
    for (int i = 0; i < n; ++i) {
      auto r = q;
      r.omega = lo + step * i;
      const auto t = thermo_report(r);
      if (t.P > max_p) max_p = t.P, best_p = i;
      if (t.qdot_h > 0.0 && t.eta > max_eta) max_eta = t.eta, best_eta = i;
    }
    const int predicted_index = static_cast<int>(std::lround((q.omega - lo) / step));
    const bool ok = std::abs(best_p - predicted_index) <= 1 && std::abs(best_eta - predicted_index) <= 1;
    o.pass = o.pass && ok;
    o.notes.push_back(std::string(kSchemeNames[s]) + ": grid step " + fmt("%.4g", step) + ", argmax P at " +
                      fmt("%.6g", lo + step * best_p) + ", argmax eta at " + fmt("%.6g", lo + step * best_eta) +
                      ", omega* = " + fmt("%.6g", q.omega));
  }
  return o;
}

Outcome criterion5() {
  const auto p = reference_point(CouplingScheme::resonant(2.0));
  const double slope_p = loglog_slope([&](double w) {
    auto q = p;
    q.omega = w;
    return power(q);
  }, 1e-3, 1e-2);
  const auto r = reference_point(CouplingScheme::intermediate(2.0, 0.25));
  const double p0 = thermo_report(r).P0;
  const double slope_eta = loglog_slope([&](double w) {
    auto q = r;
    q.omega = w;
    return efficiency(q).eta;
  }, 1e-3, 1e-2);
  const bool ok = p0 > 0.0 && std::abs(slope_p - 2.0) <= 0.05 && std::abs(slope_eta - 2.0) <= 0.05;
  return {ok, false,
          "slope P (resonant) = " + fmt("%.6f", slope_p) + ", slope eta (intermediate, P0 = " + fmt("%.3g", p0) +
              ") = " + fmt("%.6f", slope_eta),
          {}};
}

Outcome criterion6() {
  double worst_first = 0.0;
  double worst_second = 0.0;
  int count = 0;
  auto visit = [&](const EngineParams& p) {
    const auto t = thermo_report(p);
    const double residual = std::abs(t.qdot_c + t.qdot_h - t.P);
    const double first = residual == 0.0 ? 0.0 : residual / std::abs(t.P);
    worst_first = std::max(worst_first, first);
    worst_second = std::min(worst_second, -p.beta_c * t.qdot_c - p.beta_h * t.qdot_h);
    ++count;
  };
  for (int s = 0; s < 3; ++s)
    for (const auto& p : sweep_points(s)) visit(p);
  std::mt19937_64 rng(1006);
  for (auto kind : kKinds)
    for (int k = 0; k < 200; ++k) visit(sampling::random_params(rng, kind));
  const bool ok = worst_first < 1e-12 && worst_second >= -1e-14;
  return {ok, false,
          std::to_string(count) + " points, max |Qc+Qh-P|/|P| = " + fmt("%.2g", worst_first) +
              ", min entropy production = " + fmt("%.3g", worst_second),
          {}};
}

Outcome criterion7() {
  double worst = 0.0;
  double min_resonant_eta_nd = 1e300;
  int count = 0;
  for (int s = 0; s < 3; ++s) {
    for (const auto& p : sweep_points(s)) {
      const auto sol = solve_stationary(p);
      const auto t = thermo_report(sol);
      if (!t.domain.in()) continue;
      const auto d = decompose_heat(sol, t);
      const double scale = std::abs(t.qdot_h) + std::abs(t.qdot_c);
      worst = std::max({worst, std::abs(d.qd_h + d.qd_c) / scale, std::abs(d.qd_h + d.qnd_h - t.qdot_h) / scale,
                        std::abs(d.qd_c + d.qnd_c - t.qdot_c) / scale});
      if (s == 0) min_resonant_eta_nd = std::min(min_resonant_eta_nd, d.eta_nd);
      ++count;
    }
  }
  const bool ok = worst <= 1e-12 && min_resonant_eta_nd > 1.0;
  return {ok, false,
          std::to_string(count) + " in-domain sweep points, max identity residual = " + fmt("%.2g", worst) +
              ", min resonant eta_nd = " + fmt("%.6g", min_resonant_eta_nd),
          {}};
}

Outcome criterion8() {
  std::mt19937_64 rng(1008);
  double worst_var = 0.0;
  double worst_mean = 0.0;
  for (auto kind : kKinds) {
    for (int k = 0; k < 50; ++k) {
      const auto p = sampling::random_engine(rng, kind);
      const auto fd = cumulants_from_eigenvalue(p);
      worst_var = std::max(worst_var, rel(fd.variance, power_variance(p).var_total));
      worst_mean = std::max(worst_mean, rel(fd.mean, power(p)));
    }
  }
  const bool ok = worst_var <= 1e-5 && worst_mean <= 1e-6;
  return {ok, false, "150 sets, max rel var error = " + fmt("%.2g", worst_var) + ", max rel mean error = " + fmt("%.2g", worst_mean),
          {}};
}

Outcome criterion9() {
  Outcome o;
  double min_u = 1e300;
  int count = 0;
  for (int s : {0, 2}) {
    for (const auto& p : sweep_points(s)) {
      const auto sol = solve_stationary(p);
      const auto t = thermo_report(sol);
      if (!t.domain.in()) continue;
      const auto v = power_variance(sol, t);
      if (!v.determinate) continue;
      min_u = std::min(min_u, fcs_report(sol, t).tur_product);
      ++count;
    }
  }
  const bool satisfied = min_u >= 2.0;

  EngineParams scan;
  scan.omega2 = 2.6;
  scan.lambda = 0.6;
  scan.beta_c = 1.0;
  scan.beta_h = 0.2;
  scan.couplings = build_table(CouplingScheme::resonant(2.0));
  double lowest = 1e300, at = 0.0;
  for (int i = 0; i < 400; ++i) {
    auto p = scan;
    p.omega = 0.05 + (10.0 - 0.05) * i / 399.0;
    if (!engine_domain(p).in()) continue;
    const double u = tur_product(p);
    if (u < lowest) lowest = u, at = p.omega;
  }
  const bool violated = lowest < 2.0;

  double floor_gap = 1e300;
  std::mt19937_64 rng(1009);
  double worst_identity = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto p = sampling::random_engine(rng, SchemeKind::Resonant);
    const auto sol = solve_stationary(p);
    const auto t = thermo_report(sol);
    const auto f = fcs_report(sol, t);
    const double x = p.beta_c * sol.spec.eps10 - p.beta_h * sol.spec.eps20;
    const double part = f.sigma_dot * f.variance.var1 / (t.P * t.P);
    worst_identity = std::max(worst_identity, rel(part, x / std::tanh(0.5 * x)));
    floor_gap = std::min(floor_gap, part - 2.0);
  }
  for (double x = 1e-8; x < 100.0; x *= 1.3) floor_gap = std::min(floor_gap, resonant_tur_floor(x) - 2.0);
  const bool floor_ok = floor_gap >= 0.0 && worst_identity < 1e-9;

  o.pass = satisfied && violated && floor_ok;
  o.detail = "min U at omega* = 2 + " + fmt("%.3g", min_u - 2.0) + " over " + std::to_string(count) + " points; scan min U = " +
             fmt("%.6g", lowest) + " at omega = " + fmt("%.4g", at) + "; var1-only identity error " +
             fmt("%.2g", worst_identity) + ", floor margin " + fmt("%.3g", floor_gap);
  o.notes.push_back("scan temperatures beta_c = 1, beta_h = 0.2 (high-temperature panel)");
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(1010);
  double worst_p = 0.0, worst_delta = 0.0, worst_p0 = 0.0, worst_sigma_undriven = 0.0, worst_sigma_driven = 0.0;
  bool all_out = true;
  for (auto kind : kKinds) {
    for (int k = 0; k < 50; ++k) {
      auto p = sampling::random_params(rng, kind);
      auto undriven = p;
      undriven.lambda = 0.0;
      const auto sol = solve_stationary(undriven);
      worst_p = std::max(worst_p, std::abs(thermo_report(sol).P));
      worst_delta = std::max(worst_delta, std::abs(sol.state.delta0));

      auto equal = p;
      equal.beta_h = equal.beta_c;
      const auto t = thermo_report(equal);
      worst_p0 = std::max(worst_p0, std::abs(t.P0));
      all_out = all_out && t.domain.status == DomainStatus::Out;
      worst_sigma_driven = std::max(worst_sigma_driven, std::abs(entropy_production(equal)));
      equal.lambda = 0.0;
      worst_sigma_undriven = std::max(worst_sigma_undriven, std::abs(entropy_production(equal)));
    }
  }
  const bool trivial_ok = worst_p <= 1e-14 && worst_delta <= 1e-14 && worst_p0 <= 1e-14 && all_out &&
                          worst_sigma_undriven <= 1e-14;
  const bool driven_ok = worst_sigma_driven <= 1e-14;
  o.pass = trivial_ok && driven_ok;
  o.known_deviation = trivial_ok && !driven_ok;
  o.detail = "lambda=0: max |P| " + fmt("%.2g", worst_p) + ", max |Delta0| " + fmt("%.2g", worst_delta) +
             "; beta_c=beta_h: max |P0| " + fmt("%.2g", worst_p0) + ", verdict out " + (all_out ? "yes" : "no") +
             ", max |sigma_dot| undriven " + fmt("%.2g", worst_sigma_undriven) + ", driven " +
             fmt("%.3g", worst_sigma_driven);
  if (!driven_ok) {
    o.notes.push_back("known deviation: at equal temperatures sigma_dot = -beta (Qc + Qh) = -beta P, and the drive");
    o.notes.push_back("does work on the system (P < 0), so sigma_dot > 0 whenever lambda > 0. It vanishes only");
    o.notes.push_back("for lambda = 0, which is checked above and holds exactly.");
  }
  return o;
}

Outcome criterion11() {
  Outcome o;
  o.detail = "default sweep grid, 1 vs 8 workers:";
  for (int s = 0; s < 3; ++s) {
    auto c = sweep_config(s);
    c.workers = 1;
    const auto one = cli::run_sweep(c).to_string();
    c.workers = 8;
    const auto eight = cli::run_sweep(c).to_string();
    const bool same = one == eight;
    o.pass = o.pass && same;
    o.detail += std::string(" ") + kSchemeNames[s] + (same ? " identical" : " DIFFERENT");
  }
  return o;
}

}  // namespace

int main() {
  report(1, "resonant efficiency equals 1 - eps10/eps20", criterion1);
  report(2, "efficiency below Carnot on the sweep grids", criterion2);
  report(3, "closed form, linear solve and long-time integration agree", criterion3);
  report(4, "optimal drive frequency", criterion4);
  report(5, "low-frequency omega^2 scaling", criterion5);
  report(6, "first and second law", criterion6);
  report(7, "heat split identities and resonant eta_nd > 1", criterion7);
  report(8, "power variance against the tilted generator", criterion8);
  report(9, "uncertainty relation bound and violation", criterion9);
  report(10, "degenerate limits", criterion10);
  report(11, "sweep determinism", criterion11);
  return unexpected_failures == 0 ? 0 : 1;
}
