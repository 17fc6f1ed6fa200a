#include "maser/dynamics.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "maser/error.hpp"

namespace maser {

namespace {

using cd = std::complex<double>;

struct Model {
  SpectralData spec;
  DissipatorRates rates;
  Matrix5 core;
  Eigen::Matrix2cd coherences;
};

Model build_model(const EngineParams& params) {
  const auto report = validate(params);
  if (!report.ok()) throw InvalidArgument("dynamics: invalid parameters (" + report.summary() + ")");
  Model m;
  m.spec = spectrum(params);
  m.rates = rates(params, m.spec);
  m.core = generator(params, m.spec, m.rates);
  m.coherences = coherence_generator(params, m.spec, m.rates);
  return m;
}

Eigen::Vector2cd pack(const DynamicalState& s) { return {s.coh01, s.coh02}; }

}  // namespace

DynamicalState DynamicalState::ground() {
  DynamicalState s;
  s.core(0) = 1.0;
  return s;
}

DynamicalState DynamicalState::from_stationary(const StationaryState& state) {
  DynamicalState s;
  s.core = state.vector();
  return s;
}

DynamicalState DynamicalState::from_bare_matrix(const EngineParams& params, const Eigen::Matrix3cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("initial density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - cd(1.0, 0.0)) > 1e-12) throw InvalidArgument("initial density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(rho);
  if (solver.eigenvalues().minCoeff() < -1e-12) {
    throw InvalidArgument("initial density matrix is not positive semidefinite");
  }

  const auto basis = instantaneous_eigenvectors(params, 0.0);
  auto element = [&](int m, int n) { return cd(basis[m].adjoint() * rho * basis[n]); };
  DynamicalState s;
  s.core << element(0, 0).real(), element(1, 1).real(), element(2, 2).real(), element(1, 2).real(),
      element(1, 2).imag();
  s.coh01 = element(0, 1);
  s.coh02 = element(0, 2);
  return s;
}

Eigen::Matrix2cd coherence_generator(const EngineParams& p, const SpectralData& s, const DissipatorRates& r) {
  const cd i(0.0, 1.0);
  const double mixing = 0.5 * p.omega * std::sin(s.theta);              // omega sin(theta/2) cos(theta/2)
  const double shift = 0.5 * p.omega * (1.0 - std::cos(s.theta));       // omega sin^2(theta/2)
  const double decay1 = 0.5 * (r.g1 + r.g1m + r.g2m);
  const double decay2 = 0.5 * (r.g2 + r.g1m + r.g2m);
  Eigen::Matrix2cd c;
  c(0, 0) = i * (s.eps10 - shift) - decay1;
  c(0, 1) = i * mixing;
  c(1, 0) = i * mixing;
  c(1, 1) = i * (s.eps20 - p.omega + shift) - decay2;
  return c;
}

Eigen::Matrix3cd bare_density_matrix(const EngineParams& params, const DynamicalState& state, double t) {
  const auto basis = instantaneous_eigenvectors(params, t);
  const cd phase = std::polar(1.0, params.omega * t);
  Eigen::Matrix3cd rr = Eigen::Matrix3cd::Zero();
  rr(0, 0) = state.core(0);
  rr(1, 1) = state.core(1);
  rr(2, 2) = state.core(2);
  rr(1, 2) = phase * cd(state.core(3), state.core(4));
  rr(0, 1) = state.coh01;
  rr(0, 2) = phase * state.coh02;
  rr(2, 1) = std::conj(rr(1, 2));
  rr(1, 0) = std::conj(rr(0, 1));
  rr(2, 0) = std::conj(rr(0, 2));

  Eigen::Matrix3cd frame;
  for (int k = 0; k < 3; ++k) frame.col(k) = basis[k];
  return frame * rr * frame.adjoint();
}

double spectral_radius(const EngineParams& params) {
  const Model m = build_model(params);
  Eigen::EigenSolver<Matrix5> core(m.core, false);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> coh(m.coherences, false);
  return std::max(core.eigenvalues().cwiseAbs().maxCoeff(), coh.eigenvalues().cwiseAbs().maxCoeff());
}

Trajectory integrate(const EngineParams& params, const DynamicalState& initial, const IntegrationOptions& options) {
  if (!(options.dt > 0.0) || !(options.t_end >= 0.0)) throw InvalidArgument("integrate: need dt > 0 and t_end >= 0");
  if (options.sample_every < 1) throw InvalidArgument("integrate: sample_every must be >= 1");
  const Model m = build_model(params);
  const double limit = 0.1 / spectral_radius(params);
  if (options.dt > limit) {
    throw InvalidArgument("integrate: dt = " + std::to_string(options.dt) + " exceeds 0.1 / spectral radius = " +
                          std::to_string(limit));
  }

  const long steps = static_cast<long>(std::ceil(options.t_end / options.dt - 1e-9));
  const double h = steps > 0 ? options.t_end / static_cast<double>(steps) : 0.0;

  Trajectory traj;
  Vector5 x = initial.core;
  Eigen::Vector2cd z = pack(initial);
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.aux_coherences.push_back({std::abs(z(0)), std::abs(z(1))});
    traj.coherences.push_back({z(0), z(1)});
  };

  record(0.0);
  for (long n = 1; n <= steps; ++n) {
    const Vector5 k1 = m.core * x;
    const Vector5 k2 = m.core * (x + 0.5 * h * k1);
    const Vector5 k3 = m.core * (x + 0.5 * h * k2);
    const Vector5 k4 = m.core * (x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Eigen::Vector2cd l1 = m.coherences * z;
    const Eigen::Vector2cd l2 = m.coherences * (z + 0.5 * h * l1);
    const Eigen::Vector2cd l3 = m.coherences * (z + 0.5 * h * l2);
    const Eigen::Vector2cd l4 = m.coherences * (z + h * l3);
    z += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);

    if (n % options.sample_every == 0 || n == steps) record(static_cast<double>(n) * h);
  }

  traj.final_state.core = x;
  traj.final_state.coh01 = z(0);
  traj.final_state.coh02 = z(1);

  auto obs = observables(traj, params);
  traj.qdot_c_series = std::move(obs.qdot_c);
  traj.qdot_h_series = std::move(obs.qdot_h);
  traj.wdot_series = std::move(obs.wdot);
  return traj;
}

DynamicalState propagate_exact(const EngineParams& params, const DynamicalState& initial, double t) {
  const Model m = build_model(params);
  DynamicalState out;
  out.core = (m.core * t).exp() * initial.core;
  const Eigen::Vector2cd z = (m.coherences * t).exp() * pack(initial);
  out.coh01 = z(0);
  out.coh02 = z(1);
  return out;
}

DynamicalState sample_state(const Trajectory& traj, std::size_t k) {
  DynamicalState s;
  s.core = traj.states.at(k);
  s.coh01 = traj.coherences.at(k)[0];
  s.coh02 = traj.coherences.at(k)[1];
  return s;
}

TimeSeriesObservables observables(const Trajectory& traj, const EngineParams& params) {
  const Model m = build_model(params);
  const auto& s = m.spec;
  TimeSeriesObservables o;
  const std::size_t n = traj.states.size();
  o.qdot_c.reserve(n);
  o.qdot_h.reserve(n);
  o.wdot.reserve(n);
  o.energy.reserve(n);
  o.denergy_dt.reserve(n);
  for (const auto& x : traj.states) {
    const HeatFluxes q = heat_fluxes_from_populations(params, s, m.rates, x(0), x(1), x(2));
    o.qdot_c.push_back(q.cold);
    o.qdot_h.push_back(q.hot);
    o.wdot.push_back(-2.0 * params.lambda * params.omega * x(4));
    o.energy.push_back(s.eps0 * x(0) + s.eps1 * x(1) + s.eps2 * x(2));
    const Vector5 dx = m.core * x;
    o.denergy_dt.push_back(s.eps0 * dx(0) + s.eps1 * dx(1) + s.eps2 * dx(2));
  }
  return o;
}

}  // namespace maser
