#pragma once

#include <string>

#include <Eigen/Dense>

#include "maser/stationary.hpp"

namespace maser {

// Eigen-decomposition of the stationary density operator. The eigenvalues do
// not depend on time; the eigenvectors rotate with phase Phi(t) = omega t + phi_offset.
struct DensityEigensystem {
  double p0 = 1.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double big_theta = 0.0;   // tan(Theta) = |Delta| / ((rho2 - rho1) / 2), principal branch
  double phi_offset = 0.0;  // arg(Delta1 + i Delta2)
};

DensityEigensystem density_eigensystem(const StationaryState& state);

// Bare-basis 3x3 density matrix of the stationary state at time t.
Eigen::Matrix3cd stationary_density_matrix(const EngineParams& params, const StationaryState& state, double t);

// Heat-flow sign patterns inside the engine domain, ordered along 1/eta_nd:
//   I   nondiagonal hot flow reversed (1/eta_nd < 0)
//   II  both nondiagonal flows positive (eta_nd > 1)
//   III nondiagonal part acts as an ordinary engine (0 < eta_nd < 1)
enum class FlowPattern { I, II, III, Boundary, Unclassified };

const char* to_string(FlowPattern pattern);

struct DecompositionReport {
  double qd_h = 0.0;
  double qd_c = 0.0;
  double qnd_h = 0.0;
  double qnd_c = 0.0;
  double eta_nd = 0.0;
  double inv_eta_nd = 0.0;
  double eta_d = 0.0;
  double g_aux1 = 0.0;
  double g_aux2 = 0.0;
  FlowPattern pattern = FlowPattern::Unclassified;
};

// Throws DomainError when 1 - q1/q10 - q2/q20 vanishes.
DecompositionReport decompose_heat(const StationarySolution& sol, const ThermoReport& thermo);
DecompositionReport decompose_heat(const EngineParams& params);

// Tag from the sign quadruple (qd_h, qd_c, qnd_h, qnd_c); flows within the
// relative tolerance of zero give Boundary.
FlowPattern classify_flow_pattern(const DecompositionReport& report, double rel_tol = 1e-12);

}  // namespace maser
