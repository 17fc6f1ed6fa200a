#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace maser {

// Rates gamma_alpha(eps) at the two positive transition energies. The
// negative-energy rates always follow from detailed balance and are never stored.
struct CouplingTable {
  double gamma_c_10 = 0.0;
  double gamma_c_20 = 0.0;
  double gamma_h_10 = 0.0;
  double gamma_h_20 = 0.0;

  bool operator==(const CouplingTable&) const = default;
};

// Physical inputs of the driven three-level engine (hbar = k_B = 1).
//
// H(t) = diag(omega0, omega1, omega2)
//        + lambda e^{+i omega t} |1><2| + lambda e^{-i omega t} |2><1|
//
// The cold bath couples |0> <-> |1>, the hot bath |0> <-> |2>.
struct EngineParams {
  double omega0 = 0.0;
  double omega1 = 1.0;
  double omega2 = 2.0;
  double lambda = 0.0;  // drive amplitude
  double omega = 1.0;   // drive frequency
  double beta_c = 1.0;
  double beta_h = 0.5;
  CouplingTable couplings;

  double omega10() const { return omega1 - omega0; }
  double omega20() const { return omega2 - omega0; }
  // Carnot efficiency 1 - beta_h / beta_c.
  double eta_carnot() const { return 1.0 - beta_h / beta_c; }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Checks the ordering, drive-strength and temperature invariants. Never throws.
ValidationReport validate(const EngineParams& params);

// Time-independent eigen-energies of H(t) and the mixing angle of the 1-2 block.
struct SpectralData {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double theta = 0.0;  // tan(theta) = 2 lambda / (omega2 - omega1), theta in [0, pi/2)
  double eps10 = 0.0;
  double eps20 = 0.0;
  double eps21 = 0.0;
};

// Bare-basis Hamiltonian matrix at time t.
Eigen::Matrix3cd hamiltonian(const EngineParams& params, double t);

// Eigenvalues come from a dense eigensolve of H(0) and are checked against
// eps_{1,2} = (omega1 + omega2)/2 -/+ sqrt(((omega2 - omega1)/2)^2 + lambda^2).
// Throws DegenerateError when omega2 == omega1 and lambda == 0.
SpectralData spectrum(const EngineParams& params);

// |eps_0(t)>, |eps_1(t)>, |eps_2(t)> in the bare basis. eps_0 is always |0>.
std::array<Eigen::Vector3cd, 3> instantaneous_eigenvectors(const EngineParams& params, double t);

}  // namespace maser
