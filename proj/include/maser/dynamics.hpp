#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "maser/stationary.hpp"

namespace maser {

// Full state in the rotating eigenframe: the five coupled variables plus the
// two ground-state coherences, which evolve in a closed 2x2 block of their own.
//   coh01 = <0|rho|eps_1(t)>
//   coh02 = e^{-i omega t} <0|rho|eps_2(t)>
struct DynamicalState {
  Vector5 core = Vector5::Zero();
  std::complex<double> coh01{0.0, 0.0};
  std::complex<double> coh02{0.0, 0.0};

  static DynamicalState ground();
  static DynamicalState from_stationary(const StationaryState& state);
  // Converts a bare-basis density matrix given at t = 0. Throws InvalidArgument
  // if it is not Hermitian, not unit-trace or not positive semidefinite.
  static DynamicalState from_bare_matrix(const EngineParams& params, const Eigen::Matrix3cd& rho);
};

// Generator of the coherence block (coh01, coh02).
Eigen::Matrix2cd coherence_generator(const EngineParams& params, const SpectralData& spec,
                                     const DissipatorRates& rates);

// Bare-basis density matrix at time t.
Eigen::Matrix3cd bare_density_matrix(const EngineParams& params, const DynamicalState& state, double t);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector5> states;
  std::vector<std::array<double, 2>> aux_coherences;  // |<0|rho|eps_1>|, |<0|rho|eps_2>|
  std::vector<std::array<std::complex<double>, 2>> coherences;  // (coh01, coh02) at each sample
  std::vector<double> qdot_c_series;
  std::vector<double> qdot_h_series;
  std::vector<double> wdot_series;

  DynamicalState final_state;
};

struct IntegrationOptions {
  double t_end = 10.0;
  double dt = 1e-2;
  int sample_every = 1;  // record every n-th step (the final step is always recorded)
};

// Largest |eigenvalue| over both blocks of the generator.
double spectral_radius(const EngineParams& params);

// Fixed-step classical RK4. Throws InvalidArgument if dt > 0.1 / spectral_radius.
Trajectory integrate(const EngineParams& params, const DynamicalState& initial, const IntegrationOptions& options);

// Exact propagation with the matrix exponential (scaling and squaring).
DynamicalState propagate_exact(const EngineParams& params, const DynamicalState& initial, double t);

struct TimeSeriesObservables {
  std::vector<double> qdot_c;
  std::vector<double> qdot_h;
  std::vector<double> wdot;      // power output -Tr[rho dH/dt] = -2 lambda omega Delta2
  std::vector<double> energy;    // Tr[rho H]
  std::vector<double> denergy_dt;
};

TimeSeriesObservables observables(const Trajectory& trajectory, const EngineParams& params);

// State recorded at sample k.
DynamicalState sample_state(const Trajectory& trajectory, std::size_t k);

}  // namespace maser
