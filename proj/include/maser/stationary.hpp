#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maser/dissipator.hpp"
#include "maser/model.hpp"

namespace maser {

using Vector5 = Eigen::Matrix<double, 5, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;

// Relative margin used when testing strict inequalities of the engine domain.
inline constexpr double kBoundaryMargin = 1e-12;

// Rotating-frame variables (rho0, rho1, rho2, Delta1, Delta2) with
// <eps_1(t)|rho|eps_2(t)> = e^{i omega t} (Delta1 + i Delta2).
struct StationaryState {
  double rho0 = 1.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta0 = 0.0;  // stationary value of Delta2 (closed form)

  Vector5 vector() const;
  static StationaryState from_vector(const Vector5& v);
};

// Stationary Liouvillian: row 0 is the normalization row (1, 1, 1, 0, 0), rows 1-4
// are d/dt of rho1, rho2, Delta1, Delta2. The stationary vector solves L v = e_0.
Matrix5 liouvillian(const EngineParams& params, const SpectralData& spec, const DissipatorRates& rates);

// Full dynamical generator d/dt v = M v (row 0 is d/dt rho0 instead of normalization).
Matrix5 generator(const EngineParams& params, const SpectralData& spec, const DissipatorRates& rates);

// Everything the closed forms need, evaluated once per parameter point.
struct StationarySolution {
  EngineParams params;
  SpectralData spec;
  DissipatorRates rates;
  double G = 0.0;
  double Z = 0.0;
  double drive = 0.0;  // omega^2 sin^2(theta) / (2 G)
  StationaryState state;
};

// Closed-form stationary solution, cross-checked against a dense solve of
// liouvillian() (1e-10 relative). Throws InvalidArgument on invalid params,
// InvariantError when the two routes disagree.
StationarySolution solve_stationary(const EngineParams& params);

// Closed form only, no cross-check.
StationarySolution solve_stationary_closed_form(const EngineParams& params);

// Dense 5x5 solve of L v = e_0.
StationaryState stationary_state_linear_solve(const EngineParams& params);

StationaryState stationary_state(const EngineParams& params);

enum class DomainStatus { In, Out, Boundary };

struct DomainVerdict {
  DomainStatus status = DomainStatus::Out;
  bool rate_ratio_ok = false;          // g1^-/g1 < g2^-/g2
  bool temperature_ok = false;         // beta_c eps10 > beta_h eps20
  bool q_plane_ok = false;             // q1/q10 + q2/q20 < 1
  bool hamiltonian_bounds_ok = false;  // omega20/omega10 and lambda bounds
  bool power_positive = false;
  bool hot_positive = false;
  bool cold_negative = false;
  std::string reason = "out";  // "in", "boundary: ...", "out: P<=0", ...

  bool in() const { return status == DomainStatus::In; }
};

struct ThermoReport {
  double P = 0.0;
  double qdot_c = 0.0;
  double qdot_h = 0.0;
  double eta = 0.0;  // P / qdot_h, NaN when qdot_h <= 0
  double eta_ssd = 0.0;
  double eta_carnot = 0.0;
  double P0 = 0.0;
  double G = 0.0;
  double Z = 0.0;
  double T0 = 0.0;
  bool is_engine = false;
  DomainVerdict domain;
};

ThermoReport thermo_report(const StationarySolution& sol);
ThermoReport thermo_report(const EngineParams& params);

double power(const EngineParams& params);

struct HeatFluxes {
  double cold = 0.0;
  double hot = 0.0;
};

// Closed forms in terms of q1, q2, P and rho0 P0.
HeatFluxes heat_fluxes(const StationarySolution& sol);
HeatFluxes heat_fluxes(const EngineParams& params);

// Per-reservoir heat currents evaluated directly from the jump rates and the
// given populations. Valid at any time, not only at stationarity.
HeatFluxes heat_fluxes_from_populations(const EngineParams& params, const SpectralData& spec,
                                        const DissipatorRates& rates, double rho0, double rho1, double rho2);

// rho0 * P0 is the direct hot -> cold leak.
double direct_flow_coefficient(const StationarySolution& sol);

struct Efficiency {
  double eta = 0.0;
  double eta_ssd = 0.0;
  bool is_engine = false;
};

// Throws DomainError when qdot_h <= 0; otherwise is_engine marks P > 0, qdot_c < 0.
Efficiency efficiency(const EngineParams& params);

DomainVerdict engine_domain(const StationarySolution& sol);
DomainVerdict engine_domain(const EngineParams& params);

// Drive frequency maximizing P (and eta): (eps21^2 + (g1 + g2)^2 / 4) / (omega2 - omega1).
double optimal_frequency(const EngineParams& params);

// Hamiltonian-parameter bounds implied by beta_c eps10 > beta_h eps20 for omega0 = 0,
// expressed in units of omega10.
struct HamiltonianBounds {
  double max_omega20_ratio = 0.0;  // omega20 / omega10 < 1 / (1 - eta_C)
  double max_lambda_sq = 0.0;      // (lambda / omega10)^2 bound at the given omega20
};
HamiltonianBounds hamiltonian_bounds(double eta_carnot, double omega20_ratio);

// First law, second law and sign structure. Returns the violated checks.
std::vector<std::string> check_invariants(const ThermoReport& report, const EngineParams& params);

}  // namespace maser
