#include "maser/stationary.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "maser/error.hpp"

namespace maser {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_valid(const EngineParams& params, const char* where) {
  const auto report = validate(params);
  if (!report.ok()) throw InvalidArgument(std::string(where) + ": invalid parameters (" + report.summary() + ")");
}

// Strict "x > 0" with a relative margin: +1 pass, -1 fail, 0 boundary.
int strict_sign(double x, double scale) {
  const double margin = kBoundaryMargin * std::abs(scale);
  if (x > margin) return 1;
  if (x < -margin) return -1;
  return 0;
}

}  // namespace

Vector5 StationaryState::vector() const {
  Vector5 v;
  v << rho0, rho1, rho2, delta1, delta2;
  return v;
}

StationaryState StationaryState::from_vector(const Vector5& v) {
  return {v(0), v(1), v(2), v(3), v(4), v(4)};
}

Matrix5 generator(const EngineParams& p, const SpectralData& s, const DissipatorRates& r) {
  const double drive = p.omega * std::sin(s.theta);
  const double damping = 0.5 * (r.g1 + r.g2);
  const double detuning = s.eps21 - p.omega * std::cos(s.theta);
  Matrix5 m;
  // clang-format off
  m << -(r.g1m + r.g2m), r.g1,   r.g2,         0.0,       0.0,
       r.g1m,           -r.g1,   0.0,          0.0,      -drive,
       r.g2m,            0.0,   -r.g2,         0.0,       drive,
       0.0,              0.0,    0.0,         -damping,  -detuning,
       0.0,              0.5 * drive, -0.5 * drive, detuning, -damping;
  // clang-format on
  return m;
}

Matrix5 liouvillian(const EngineParams& p, const SpectralData& s, const DissipatorRates& r) {
  Matrix5 m = generator(p, s, r);
  m.row(0) << 1.0, 1.0, 1.0, 0.0, 0.0;
  return m;
}

StationarySolution solve_stationary_closed_form(const EngineParams& p) {
  require_valid(p, "solve_stationary");
  StationarySolution sol;
  sol.params = p;
  sol.spec = spectrum(p);
  sol.rates = rates(p, sol.spec);

  const auto& s = sol.spec;
  const auto& r = sol.rates;
  const double sin_t = std::sin(s.theta);
  const double damping = 0.5 * (r.g1 + r.g2);
  const double detuning = s.eps21 - p.omega * std::cos(s.theta);

  sol.G = damping + detuning * detuning / damping;
  if (!(sol.G > 0.0)) throw InvariantError("solve_stationary: G must be positive");
  sol.drive = p.omega * p.omega * sin_t * sin_t / (2.0 * sol.G);

  const double r1 = r.ratio1();
  const double r2 = r.ratio2();
  const double occupancy = 1.0 + r1 + r2;
  const double inv_sum = 1.0 / r.g1 + 1.0 / r.g2;
  const double inv_diff = 1.0 / r.g1 - 1.0 / r.g2;

  sol.Z = (1.0 + sol.drive * inv_sum) * occupancy + sol.drive * inv_diff * (r2 - r1);
  if (!(sol.Z > 0.0) || !std::isfinite(sol.Z)) throw InvariantError("solve_stationary: Z is not positive");

  const double P = s.eps21 * sol.drive * (r2 - r1) / sol.Z;
  auto& st = sol.state;
  st.rho0 = (1.0 - inv_diff * P / s.eps21) / occupancy;
  st.delta0 = -(p.omega * sin_t / (2.0 * sol.G)) * (r2 - r1) / sol.Z;
  st.rho1 = r1 * st.rho0 - p.omega * sin_t / r.g1 * st.delta0;
  st.rho2 = r2 * st.rho0 + p.omega * sin_t / r.g2 * st.delta0;
  st.delta2 = st.delta0;
  st.delta1 = -detuning / damping * st.delta0;
  return sol;
}

StationaryState stationary_state_linear_solve(const EngineParams& p) {
  require_valid(p, "stationary_state_linear_solve");
  const SpectralData s = spectrum(p);
  const DissipatorRates r = rates(p, s);
  const Matrix5 l = liouvillian(p, s, r);
  Vector5 rhs = Vector5::Zero();
  rhs(0) = 1.0;
  const Vector5 v = l.fullPivLu().solve(rhs);
  return StationaryState::from_vector(v);
}

StationarySolution solve_stationary(const EngineParams& p) {
  StationarySolution sol = solve_stationary_closed_form(p);
  const Matrix5 l = liouvillian(p, sol.spec, sol.rates);
  Vector5 rhs = Vector5::Zero();
  rhs(0) = 1.0;
  const Vector5 solved = l.fullPivLu().solve(rhs);
  const double err = (solved - sol.state.vector()).lpNorm<Eigen::Infinity>();
  if (!(err <= 1e-10 * solved.lpNorm<Eigen::Infinity>())) {
    throw InvariantError("solve_stationary: closed form and linear solve disagree (err " + std::to_string(err) + ")");
  }
  return sol;
}

StationaryState stationary_state(const EngineParams& p) { return solve_stationary(p).state; }

double direct_flow_coefficient(const StationarySolution& sol) {
  const auto& p = sol.params;
  const auto& s = sol.spec;
  const auto& r = sol.rates;
  // g q (1 - q) = (cross-reservoir down rate) * (own down rate) / g
  const double mix1 = r.channel1.hot_down * r.channel1.cold_down / r.g1;
  const double mix2 = r.channel2.cold_down * r.channel2.hot_down / r.g2;
  const double p0 = s.eps10 * mix1 * (std::exp(-p.beta_h * s.eps10) - std::exp(-p.beta_c * s.eps10)) +
                    s.eps20 * mix2 * (std::exp(-p.beta_h * s.eps20) - std::exp(-p.beta_c * s.eps20));
  return p0;
}

namespace {

double closed_form_power(const StationarySolution& sol) {
  const auto& r = sol.rates;
  return sol.spec.eps21 * sol.drive * (r.ratio2() - r.ratio1()) / sol.Z;
}

double ssd_efficiency(const StationarySolution& sol) {
  const auto& s = sol.spec;
  const double ratio = s.eps10 / s.eps20;
  return (1.0 - ratio) / (1.0 - sol.rates.q2 - ratio * sol.rates.q1);
}

}  // namespace

HeatFluxes heat_fluxes(const StationarySolution& sol) {
  const auto& s = sol.spec;
  const auto& r = sol.rates;
  const double P = closed_form_power(sol);
  const double leak = sol.state.rho0 * direct_flow_coefficient(sol);
  HeatFluxes q;
  q.cold = (s.eps20 * r.q2 - s.eps10 * (1.0 - r.q1)) / s.eps21 * P - leak;
  q.hot = (s.eps20 * (1.0 - r.q2) - s.eps10 * r.q1) / s.eps21 * P + leak;
  return q;
}

HeatFluxes heat_fluxes(const EngineParams& params) { return heat_fluxes(solve_stationary(params)); }

HeatFluxes heat_fluxes_from_populations(const EngineParams&, const SpectralData& s, const DissipatorRates& r,
                                        double rho0, double rho1, double rho2) {
  // Tr[D_alpha[rho] H]: each down jump of channel n releases eps_n0, each up jump absorbs it.
  HeatFluxes q;
  q.cold = -s.eps10 * (r.channel1.cold_down * rho1 - r.channel1.cold_up * rho0) -
           s.eps20 * (r.channel2.cold_down * rho2 - r.channel2.cold_up * rho0);
  q.hot = -s.eps10 * (r.channel1.hot_down * rho1 - r.channel1.hot_up * rho0) -
          s.eps20 * (r.channel2.hot_down * rho2 - r.channel2.hot_up * rho0);
  return q;
}

HamiltonianBounds hamiltonian_bounds(double eta_carnot, double omega20_ratio) {
  const double k = 1.0 - eta_carnot;
  HamiltonianBounds b;
  b.max_omega20_ratio = 1.0 / k;
  b.max_lambda_sq = (omega20_ratio - k) * (1.0 - k * omega20_ratio) / ((2.0 - eta_carnot) * (2.0 - eta_carnot));
  return b;
}

DomainVerdict engine_domain(const StationarySolution& sol) {
  const auto& p = sol.params;
  const auto& s = sol.spec;
  const auto& r = sol.rates;
  DomainVerdict v;

  const double r1 = r.ratio1();
  const double r2 = r.ratio2();
  v.rate_ratio_ok = strict_sign(r2 - r1, std::max(r1, r2)) > 0;

  const double hot_side = p.beta_h * s.eps20;
  const double cold_side = p.beta_c * s.eps10;
  v.temperature_ok = strict_sign(cold_side - hot_side, cold_side + hot_side) > 0;

  if (v.temperature_ok) {
    const double lhs = r.q1 / r.q10 + r.q2 / r.q20;
    v.q_plane_ok = strict_sign(1.0 - lhs, 1.0) > 0;
  }

  const double ratio20 = p.omega20() / p.omega10();
  const double lam = p.lambda / p.omega10();
  const auto bounds = hamiltonian_bounds(p.eta_carnot(), ratio20);
  v.hamiltonian_bounds_ok = strict_sign(bounds.max_omega20_ratio - ratio20, bounds.max_omega20_ratio) > 0 &&
                            strict_sign(bounds.max_lambda_sq - lam * lam, std::max(bounds.max_lambda_sq, 1.0)) > 0;

  const double P = closed_form_power(sol);
  const double leak = sol.state.rho0 * direct_flow_coefficient(sol);
  const HeatFluxes q = heat_fluxes(sol);
  const double a_hot = (s.eps20 * (1.0 - r.q2) - s.eps10 * r.q1) / s.eps21;
  const double a_cold = (s.eps20 * r.q2 - s.eps10 * (1.0 - r.q1)) / s.eps21;

  // Z > 0 and drive >= 0, so sign(P) = sign(g2^-/g2 - g1^-/g1) unless the drive vanishes.
  const int p_sign = sol.drive > 0.0 ? strict_sign(r2 - r1, std::max(r1, r2)) : -1;
  const int hot_sign = strict_sign(q.hot, std::abs(a_hot * P) + std::abs(leak));
  const int cold_sign = strict_sign(-q.cold, std::abs(a_cold * P) + std::abs(leak));
  v.power_positive = p_sign > 0;
  v.hot_positive = hot_sign > 0;
  v.cold_negative = cold_sign > 0;

  if (p_sign < 0) {
    v.status = DomainStatus::Out;
    v.reason = "out: P<=0";
  } else if (hot_sign < 0) {
    v.status = DomainStatus::Out;
    v.reason = "out: Qh<=0";
  } else if (cold_sign < 0) {
    v.status = DomainStatus::Out;
    v.reason = "out: Qc>=0";
  } else if (p_sign == 0) {
    v.status = DomainStatus::Boundary;
    v.reason = "boundary: P";
  } else if (hot_sign == 0) {
    v.status = DomainStatus::Boundary;
    v.reason = "boundary: Qh";
  } else if (cold_sign == 0) {
    v.status = DomainStatus::Boundary;
    v.reason = "boundary: Qc";
  } else {
    v.status = DomainStatus::In;
    v.reason = "in";
  }
  return v;
}

DomainVerdict engine_domain(const EngineParams& params) { return engine_domain(solve_stationary(params)); }

ThermoReport thermo_report(const StationarySolution& sol) {
  ThermoReport t;
  t.P = closed_form_power(sol);
  const HeatFluxes q = heat_fluxes(sol);
  t.qdot_c = q.cold;
  t.qdot_h = q.hot;
  t.eta_ssd = ssd_efficiency(sol);
  t.eta_carnot = sol.params.eta_carnot();
  t.eta = t.qdot_h > 0.0 ? t.P / t.qdot_h : kNaN;
  t.P0 = direct_flow_coefficient(sol);
  t.G = sol.G;
  t.Z = sol.Z;
  t.T0 = 2.0 * std::numbers::pi / sol.params.omega;
  t.domain = engine_domain(sol);
  t.is_engine = t.domain.in();
  return t;
}

ThermoReport thermo_report(const EngineParams& params) { return thermo_report(solve_stationary(params)); }

double power(const EngineParams& params) { return closed_form_power(solve_stationary(params)); }

Efficiency efficiency(const EngineParams& params) {
  const auto sol = solve_stationary(params);
  const ThermoReport t = thermo_report(sol);
  if (!(t.qdot_h > 0.0)) throw DomainError("efficiency: no heat is absorbed from the hot bath (Qh <= 0)");
  return {t.eta, t.eta_ssd, t.is_engine};
}

double optimal_frequency(const EngineParams& params) {
  require_valid(params, "optimal_frequency");
  const SpectralData s = spectrum(params);
  const DissipatorRates r = rates(params, s);
  const double half_width = 0.5 * (r.g1 + r.g2);
  return (s.eps21 * s.eps21 + half_width * half_width) / (params.omega2 - params.omega1);
}

std::vector<std::string> check_invariants(const ThermoReport& t, const EngineParams& p) {
  std::vector<std::string> failed;
  const double first_law = t.qdot_c + t.qdot_h - t.P;
  if (!(std::abs(first_law) <= 1e-10 * (std::abs(t.qdot_c) + std::abs(t.qdot_h) + std::abs(t.P)))) {
    failed.emplace_back("first law");
  }
  const double entropy = -p.beta_c * t.qdot_c - p.beta_h * t.qdot_h;
  if (!(entropy >= -1e-12 * (p.beta_c * std::abs(t.qdot_c) + p.beta_h * std::abs(t.qdot_h)))) {
    failed.emplace_back("second law");
  }
  if (!(t.G > 0.0) || !(t.Z > 0.0)) failed.emplace_back("G, Z positive");
  if (t.is_engine) {
    if (!(t.eta > 0.0 && t.eta <= t.eta_ssd * (1.0 + 1e-12))) failed.emplace_back("eta <= eta_ssd");
    if (!(t.eta <= t.eta_carnot + 1e-12)) failed.emplace_back("eta <= eta_carnot");
  }
  return failed;
}

}  // namespace maser
