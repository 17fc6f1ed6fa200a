#include "maser/fcs.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "maser/error.hpp"

namespace maser {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CountingDerivatives {
  Matrix5 first = Matrix5::Zero();
  Matrix5 second = Matrix5::Zero();
};

// d/dchi and d^2/dchi^2 of the tilted generator at chi_c = chi_h = 0 along chi_c = chi_h = chi.
CountingDerivatives counting_derivatives(const SpectralData& s, const DissipatorRates& r) {
  CountingDerivatives d;
  d.first(0, 1) = -s.eps10 * r.g1;
  d.first(0, 2) = -s.eps20 * r.g2;
  d.first(1, 0) = s.eps10 * r.g1m;
  d.first(2, 0) = s.eps20 * r.g2m;
  d.second(0, 1) = s.eps10 * s.eps10 * r.g1;
  d.second(0, 2) = s.eps20 * s.eps20 * r.g2;
  d.second(1, 0) = s.eps10 * s.eps10 * r.g1m;
  d.second(2, 0) = s.eps20 * s.eps20 * r.g2m;
  return d;
}

Eigen::Matrix<double, 1, 5> trace_row() {
  Eigen::Matrix<double, 1, 5> row;
  row << 1.0, 1.0, 1.0, 0.0, 0.0;
  return row;
}

}  // namespace

Matrix5 TiltedLiouvillian::with_normalization_row() const {
  Matrix5 m = matrix;
  m.row(0) = trace_row();
  return m;
}

TiltedLiouvillian tilted_liouvillian(const EngineParams& params, double chi_c, double chi_h) {
  const SpectralData s = spectrum(params);
  const DissipatorRates r = rates(params, s);
  TiltedLiouvillian t;
  t.chi_c = chi_c;
  t.chi_h = chi_h;
  t.matrix = generator(params, s, r);
  const auto& c1 = r.channel1;
  const auto& c2 = r.channel2;
  t.matrix(0, 1) = c1.cold_down * std::exp(-chi_c * s.eps10) + c1.hot_down * std::exp(-chi_h * s.eps10);
  t.matrix(0, 2) = c2.cold_down * std::exp(-chi_c * s.eps20) + c2.hot_down * std::exp(-chi_h * s.eps20);
  t.matrix(1, 0) = c1.cold_up * std::exp(chi_c * s.eps10) + c1.hot_up * std::exp(chi_h * s.eps10);
  t.matrix(2, 0) = c2.cold_up * std::exp(chi_c * s.eps20) + c2.hot_up * std::exp(chi_h * s.eps20);
  return t;
}

TiltedLiouvillian tilted_liouvillian(const EngineParams& params, double chi) {
  return tilted_liouvillian(params, chi, chi);
}

double leading_eigenvalue(const Matrix5& m) {
  Eigen::EigenSolver<Matrix5> solver(m, false);
  if (solver.info() != Eigen::Success) throw InvariantError("leading_eigenvalue: eigensolver failed");
  const auto& values = solver.eigenvalues();
  int best = 0;
  for (int k = 1; k < values.size(); ++k) {
    if (values(k).real() > values(best).real()) best = k;
  }
  return values(best).real();
}

double entropy_production(const StationarySolution& sol, const ThermoReport& t) {
  // (beta_c - beta_h) [(1/eta_ssd - 1/eta_C) P + rho0 P0], using (beta_c - beta_h) / eta_C = beta_c
  // so the expression stays finite at beta_c == beta_h.
  const auto& p = sol.params;
  return (p.beta_c - p.beta_h) * (t.P / t.eta_ssd + sol.state.rho0 * t.P0) - p.beta_c * t.P;
}

double entropy_production(const EngineParams& params) {
  const auto sol = solve_stationary(params);
  return entropy_production(sol, thermo_report(sol));
}

VarianceParts power_variance(const StationarySolution& sol, const ThermoReport& t) {
  const auto& s = sol.spec;
  const auto& r = sol.rates;
  const double r1 = r.ratio1();
  const double r2 = r.ratio2();
  const double gap = r2 - r1;

  VarianceParts v;
  if (std::abs(gap) <= kBoundaryMargin * std::max(r1, r2)) {
    v.determinate = false;
    v.var1 = v.var2 = v.var3 = v.var4 = kNaN;
    v.var_total = cumulants_perturbative(sol.params).variance;
    return v;
  }

  const double P = t.P;
  const double occupancy = 1.0 + r1 + r2;
  const double inv_sum = 1.0 / r.g1 + 1.0 / r.g2;
  const double inv_diff = 1.0 / r.g1 - 1.0 / r.g2;
  const double lorentz = inv_sum - 4.0 / (r.g1 + r.g2) + 4.0 / sol.G;

  v.var1 = s.eps21 * (r1 + r2) / gap * P;
  v.var2 = -((inv_sum + inv_diff * gap) / occupancy + lorentz) * P * P;
  v.var3 = (inv_diff * inv_diff + inv_sum * lorentz * occupancy) * P * P * P / (s.eps21 * gap);
  v.var4 = (inv_sum * (1.0 + 1.0 / occupancy) + inv_diff * gap / occupancy + lorentz) * inv_diff * P * P * P /
           s.eps21;
  v.var_total = v.var1 + v.var2 + v.var3 + v.var4;
  return v;
}

VarianceParts power_variance(const EngineParams& params) {
  const auto sol = solve_stationary(params);
  return power_variance(sol, thermo_report(sol));
}

FcsReport fcs_report(const StationarySolution& sol, const ThermoReport& t) {
  FcsReport f;
  f.sigma_dot = entropy_production(sol, t);
  f.variance = power_variance(sol, t);
  f.tur_product = t.P != 0.0 ? f.sigma_dot * f.variance.var_total / (t.P * t.P) : kNaN;
  return f;
}

FcsReport fcs_report(const EngineParams& params) {
  const auto sol = solve_stationary(params);
  return fcs_report(sol, thermo_report(sol));
}

double tur_product(const EngineParams& params) {
  const auto sol = solve_stationary(params);
  const ThermoReport t = thermo_report(sol);
  if (t.P == 0.0) throw DomainError("tur_product: undefined at zero power");
  return fcs_report(sol, t).tur_product;
}

Cumulants cumulants_from_eigenvalue(const EngineParams& params, const FiniteDifferenceOptions& options) {
  const SpectralData s = spectrum(params);
  const double h = options.relative_step / s.eps20;
  auto f = [&](double chi) { return leading_eigenvalue(tilted_liouvillian(params, chi).matrix); };

  const double f0 = f(0.0);
  auto differences = [&](double step) {
    const double plus = f(step);
    const double minus = f(-step);
    return std::pair{(plus - minus) / (2.0 * step), (plus - 2.0 * f0 + minus) / (step * step)};
  };

  auto [d1, d2] = differences(h);
  if (options.richardson) {
    const auto [d1_half, d2_half] = differences(0.5 * h);
    d1 = (4.0 * d1_half - d1) / 3.0;
    d2 = (4.0 * d2_half - d2) / 3.0;
  }
  return {d1, d2};
}

Cumulants cumulants_perturbative(const EngineParams& params) {
  const SpectralData s = spectrum(params);
  const DissipatorRates r = rates(params, s);
  const Matrix5 m0 = generator(params, s, r);
  const auto derivs = counting_derivatives(s, r);

  Matrix5 normalized = m0;
  normalized.row(0) = trace_row();
  Eigen::FullPivLU<Matrix5> lu(normalized);

  Vector5 rhs = Vector5::Zero();
  rhs(0) = 1.0;
  const Vector5 rho = lu.solve(rhs);

  const double first = trace_row() * derivs.first * rho;
  // M0 x = first * rho - M1 rho with tr(x) = 0; row 0 of that system is redundant.
  Vector5 source = first * rho - derivs.first * rho;
  source(0) = 0.0;
  const Vector5 x = lu.solve(source);
  const double second = (trace_row() * derivs.second * rho).value() + 2.0 * (trace_row() * derivs.first * x).value();
  return {first, second};
}

Cumulants cumulants_time_domain(const EngineParams& params, double horizon) {
  if (!(horizon > 0.0)) throw InvalidArgument("cumulants_time_domain: horizon must be positive");
  const SpectralData s = spectrum(params);
  const DissipatorRates r = rates(params, s);
  const Matrix5 m0 = generator(params, s, r);
  const auto derivs = counting_derivatives(s, r);

  using Matrix15 = Eigen::Matrix<double, 15, 15>;
  using Vector15 = Eigen::Matrix<double, 15, 1>;
  Matrix15 block = Matrix15::Zero();
  block.block<5, 5>(0, 0) = m0;
  block.block<5, 5>(5, 0) = derivs.first;
  block.block<5, 5>(5, 5) = m0;
  block.block<5, 5>(10, 0) = derivs.second;
  block.block<5, 5>(10, 5) = 2.0 * derivs.first;
  block.block<5, 5>(10, 10) = m0;

  Vector15 start = Vector15::Zero();
  start.head<5>() = stationary_state_linear_solve(params).vector();

  auto moments = [&](double t) {
    const Matrix15 prop = (block * t).exp();
    const Vector15 y = prop * start;
    const double m1 = trace_row() * y.segment<5>(5);
    const double m2 = trace_row() * y.segment<5>(10);
    return std::pair{m1, m2 - m1 * m1};
  };
  const auto [mean_1, var_1] = moments(horizon);
  const auto [mean_2, var_2] = moments(2.0 * horizon);
  return {(mean_2 - mean_1) / horizon, (var_2 - var_1) / horizon};
}

double resonant_tur_floor(double x) {
  if (std::abs(x) < 1e-8) return 2.0 + x * x / 6.0;
  return x / std::tanh(0.5 * x);
}

}  // namespace maser
