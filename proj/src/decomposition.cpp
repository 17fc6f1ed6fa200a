#include "maser/decomposition.hpp"

#include <cmath>
#include <complex>

#include "maser/error.hpp"

namespace maser {

const char* to_string(FlowPattern pattern) {
  switch (pattern) {
    case FlowPattern::I: return "pattern-i";
    case FlowPattern::II: return "pattern-ii";
    case FlowPattern::III: return "pattern-iii";
    case FlowPattern::Boundary: return "boundary";
    case FlowPattern::Unclassified: return "unclassified";
  }
  return "unclassified";
}

DensityEigensystem density_eigensystem(const StationaryState& st) {
  const double coherence = std::hypot(st.delta1, st.delta2);
  const double half_gap = 0.5 * (st.rho2 - st.rho1);
  const double mean = 0.5 * (st.rho1 + st.rho2);
  const double radius = std::hypot(half_gap, coherence);

  DensityEigensystem e;
  e.p0 = st.rho0;
  // p1 - p2 = (rho1 - rho2) / cos(Theta) with cos(Theta) >= 0.
  if (half_gap >= 0.0) {
    e.p1 = mean - radius;
    e.p2 = mean + radius;
  } else {
    e.p1 = mean + radius;
    e.p2 = mean - radius;
  }
  if (coherence == 0.0 && half_gap == 0.0) {
    e.big_theta = 0.0;
  } else if (half_gap == 0.0) {
    e.big_theta = 0.5 * std::acos(-1.0);
  } else {
    e.big_theta = std::atan(coherence / half_gap);
  }
  e.phi_offset = std::atan2(st.delta2, st.delta1);
  return e;
}

Eigen::Matrix3cd stationary_density_matrix(const EngineParams& params, const StationaryState& st, double t) {
  const auto basis = instantaneous_eigenvectors(params, t);
  const std::complex<double> coherence = std::polar(1.0, params.omega * t) * std::complex<double>(st.delta1, st.delta2);
  Eigen::Matrix3cd rho = st.rho0 * basis[0] * basis[0].adjoint() + st.rho1 * basis[1] * basis[1].adjoint() +
                         st.rho2 * basis[2] * basis[2].adjoint();
  rho += coherence * basis[1] * basis[2].adjoint();
  rho += std::conj(coherence) * basis[2] * basis[1].adjoint();
  return rho;
}

DecompositionReport decompose_heat(const StationarySolution& sol, const ThermoReport& thermo) {
  const auto& p = sol.params;
  const auto& s = sol.spec;
  const auto& r = sol.rates;

  const double rate_gap = r.ratio2() - r.ratio1();

  DecompositionReport d;
  const double field = 4.0 * p.lambda * p.lambda * p.omega * p.omega / (s.eps21 * s.eps21);
  d.g_aux1 = sol.G + field / r.g1;
  d.g_aux2 = sol.G + field / r.g2;
  const double weight = r.g1 * d.g_aux1 + r.g2 * d.g_aux2;

  // The q10/q20 form multiplied through by (e^{-beta_h eps20} - e^{-beta_c eps10}), which
  // stays finite at beta_c == beta_h: (1 - q1/q10 - q2/q20) * gap = g2^-/g2 - g1^-/g1.
  const double d10 = std::exp(-p.beta_h * s.eps10) - std::exp(-p.beta_c * s.eps10);
  const double d20 = std::exp(-p.beta_h * s.eps20) - std::exp(-p.beta_c * s.eps20);
  const double leak_terms = -r.g1 * (1.0 - r.q1) * r.q1 * d10 + r.g2 * (1.0 - r.q2) * r.q2 * d20;

  d.inv_eta_nd = (r.g1 * r.q1 * d.g_aux1 + r.g2 * (1.0 - r.q2) * d.g_aux2) / weight;
  if (leak_terms != 0.0) {
    if (std::abs(rate_gap) <= kBoundaryMargin * std::max(r.ratio1(), r.ratio2())) {
      throw DomainError("decompose_heat: engine boundary, 1 - q1/q10 - q2/q20 vanishes");
    }
    d.inv_eta_nd += leak_terms / rate_gap * (d.g_aux1 + d.g_aux2) / weight;
  }
  d.eta_nd = 1.0 / d.inv_eta_nd;

  d.qd_h = (1.0 / thermo.eta_ssd - d.inv_eta_nd) * thermo.P + sol.state.rho0 * thermo.P0;
  d.qd_c = -d.qd_h;
  d.qnd_h = thermo.qdot_h - d.qd_h;
  d.qnd_c = thermo.qdot_c - d.qd_c;
  d.eta_d = 0.0;
  d.pattern = thermo.is_engine ? classify_flow_pattern(d) : FlowPattern::Unclassified;
  return d;
}

DecompositionReport decompose_heat(const EngineParams& params) {
  const auto sol = solve_stationary(params);
  return decompose_heat(sol, thermo_report(sol));
}

FlowPattern classify_flow_pattern(const DecompositionReport& d, double rel_tol) {
  const double scale = std::max({std::abs(d.qd_h), std::abs(d.qnd_h), std::abs(d.qnd_c)});
  const double tol = rel_tol * scale;
  if (scale == 0.0 || std::abs(d.qd_h) <= tol || std::abs(d.qnd_h) <= tol || std::abs(d.qnd_c) <= tol) {
    return FlowPattern::Boundary;
  }
  if (d.qd_h < 0.0) return FlowPattern::Unclassified;
  if (d.qnd_h > 0.0 && d.qnd_c > 0.0) return FlowPattern::II;
  if (d.qnd_h < 0.0 && d.qnd_c > 0.0) return FlowPattern::I;
  if (d.qnd_h > 0.0 && d.qnd_c < 0.0) return FlowPattern::III;
  return FlowPattern::Unclassified;
}

}  // namespace maser
