#pragma once

#include "maser/stationary.hpp"

namespace maser {

// Generator with counting fields: every jump releasing energy eps into reservoir
// alpha is weighted by exp(-chi_alpha eps). The counted quantity is the total
// heat absorbed from the baths, whose long-time rate is the power.
struct TiltedLiouvillian {
  double chi_c = 0.0;
  double chi_h = 0.0;
  Matrix5 matrix;  // dynamical generator, row 0 is d/dt rho0

  // Row 0 replaced by (1, 1, 1, 0, 0); equals liouvillian() at chi = 0.
  Matrix5 with_normalization_row() const;
};

TiltedLiouvillian tilted_liouvillian(const EngineParams& params, double chi);
TiltedLiouvillian tilted_liouvillian(const EngineParams& params, double chi_c, double chi_h);

// Eigenvalue with the largest real part.
double leading_eigenvalue(const Matrix5& m);

// <sigma> averaged over a period, computed as -beta_c Q_c - beta_h Q_h.
double entropy_production(const StationarySolution& sol, const ThermoReport& thermo);
double entropy_production(const EngineParams& params);

struct VarianceParts {
  double var1 = 0.0;
  double var2 = 0.0;
  double var3 = 0.0;
  double var4 = 0.0;
  double var_total = 0.0;
  // False at the zero-power boundary (g2^-/g2 == g1^-/g1): the parts are NaN
  // and var_total comes from the perturbative oracle.
  bool determinate = true;
};

VarianceParts power_variance(const StationarySolution& sol, const ThermoReport& thermo);
VarianceParts power_variance(const EngineParams& params);

struct FcsReport {
  double sigma_dot = 0.0;
  VarianceParts variance;
  double tur_product = 0.0;  // NaN when P == 0
};

FcsReport fcs_report(const StationarySolution& sol, const ThermoReport& thermo);
FcsReport fcs_report(const EngineParams& params);

// sigma_dot * var P / P^2. Throws DomainError at P == 0.
double tur_product(const EngineParams& params);

struct Cumulants {
  double mean = 0.0;
  double variance = 0.0;
};

struct FiniteDifferenceOptions {
  // Step in units of 1 / eps20.
  double relative_step = 1e-2;
  bool richardson = true;
};

// Oracle: central finite differences of the leading tilted eigenvalue at chi = 0.
Cumulants cumulants_from_eigenvalue(const EngineParams& params, const FiniteDifferenceOptions& options = {});

// Oracle: Rayleigh-Schroedinger expansion of the leading eigenvalue using the
// Drazin inverse of the generator (first and second order in chi).
Cumulants cumulants_perturbative(const EngineParams& params);

// Oracle: propagates rho, d rho/d chi and d^2 rho/d chi^2 from the stationary
// state with a block matrix exponential and reads off the growth of the first
// two cumulants of the counted heat between horizon and 2 * horizon.
Cumulants cumulants_time_domain(const EngineParams& params, double horizon);

// Resonant-coupling lower envelope x / tanh(x / 2), x = beta_c eps10 - beta_h eps20.
double resonant_tur_floor(double x);

}  // namespace maser
