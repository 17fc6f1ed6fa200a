#pragma once

// Test-only reference implementations. Nothing here uses the library's rate
// or generator code: the GKLS equation is assembled directly in the bare basis
// from the coupling table, dense eigendecompositions of H(t) and the
// system-bath operators X_c = |0><1| + h.c., X_h = |0><2| + h.c.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "maser/model.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;

inline Mat3 lab_hamiltonian(const maser::EngineParams& p, double t) {
  Mat3 h = Mat3::Zero();
  h(0, 0) = p.omega0;
  h(1, 1) = p.omega1;
  h(2, 2) = p.omega2;
  h(1, 2) = p.lambda * std::polar(1.0, p.omega * t);
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

struct Eigen3 {
  Eigen::Vector3d values;
  Mat3 vectors;  // columns, ascending eigenvalues
};

inline Eigen3 dense_eigen(const Mat3& h) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct Jump {
  Mat3 op;
  double rate = 0.0;
};

// Jump operators of one reservoir: transitions |eps_n> <-> |eps_0> weighted by
// |<eps_0|X|eps_n>|^2 and the bath rate at the transition energy.
inline std::vector<Jump> reservoir_jumps(const maser::EngineParams& p, double t, bool hot) {
  const auto e = dense_eigen(lab_hamiltonian(p, t));
  Mat3 x = Mat3::Zero();
  const int partner = hot ? 2 : 1;
  x(0, partner) = 1.0;
  x(partner, 0) = 1.0;
  const double beta = hot ? p.beta_h : p.beta_c;
  const auto& c = p.couplings;
  std::vector<Jump> jumps;
  for (int n = 1; n <= 2; ++n) {
    const double gap = e.values(n) - e.values(0);
    const double gamma = hot ? (n == 1 ? c.gamma_h_10 : c.gamma_h_20) : (n == 1 ? c.gamma_c_10 : c.gamma_c_20);
    const cd element = e.vectors.col(0).adjoint() * x * e.vectors.col(n);
    const Mat3 down = element * e.vectors.col(0) * e.vectors.col(n).adjoint();
    jumps.push_back({down, gamma});
    jumps.push_back({down.adjoint(), gamma * std::exp(-beta * gap)});
  }
  return jumps;
}

inline Mat3 dissipate(const std::vector<Jump>& jumps, const Mat3& rho) {
  Mat3 out = Mat3::Zero();
  for (const auto& j : jumps) {
    const Mat3 ll = j.op.adjoint() * j.op;
    out += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (ll * rho + rho * ll));
  }
  return out;
}

inline Mat3 lab_rhs(const maser::EngineParams& p, double t, const Mat3& rho) {
  const Mat3 h = lab_hamiltonian(p, t);
  const cd i(0.0, 1.0);
  return -i * (h * rho - rho * h) + dissipate(reservoir_jumps(p, t, false), rho) +
         dissipate(reservoir_jumps(p, t, true), rho);
}

// Fixed-step RK4 of the time-dependent lab-frame GKLS equation.
inline Mat3 lab_evolve(const maser::EngineParams& p, Mat3 rho, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int k = 0; k < steps; ++k) {
    const Mat3 k1 = lab_rhs(p, t, rho);
    const Mat3 k2 = lab_rhs(p, t + 0.5 * h, rho + 0.5 * h * k1);
    const Mat3 k3 = lab_rhs(p, t + 0.5 * h, rho + 0.5 * h * k2);
    const Mat3 k4 = lab_rhs(p, t + h, rho + h * k3);
    rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return rho;
}

struct LabHeat {
  double cold = 0.0;
  double hot = 0.0;
  double diagonal_cold = 0.0;
  double diagonal_hot = 0.0;
};

// Heat currents Tr[D_alpha(rho) H] and their diagonal parts in the eigenbasis of rho.
inline LabHeat lab_heat(const maser::EngineParams& p, double t, const Mat3& rho) {
  const Mat3 h = lab_hamiltonian(p, t);
  const Mat3 dc = dissipate(reservoir_jumps(p, t, false), rho);
  const Mat3 dh = dissipate(reservoir_jumps(p, t, true), rho);
  LabHeat q;
  q.cold = (dc * h).trace().real();
  q.hot = (dh * h).trace().real();
  const auto basis = dense_eigen(rho).vectors;
  for (int n = 0; n < 3; ++n) {
    const auto v = basis.col(n);
    const double energy = cd(v.adjoint() * h * v).real();
    q.diagonal_cold += cd(v.adjoint() * dc * v).real() * energy;
    q.diagonal_hot += cd(v.adjoint() * dh * v).real() * energy;
  }
  return q;
}

// Golden-section maximization of a unimodal function on [a, b].
inline double golden_argmax(const std::function<double(double)>& f, double a, double b, double tol = 1e-10) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol * (std::abs(c) + std::abs(d))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Random valid density matrix: eigenvalues from a flat Dirichlet draw, Haar-ish unitary from QR.
inline Mat3 random_density_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::exponential_distribution<double> expo(1.0);
  Mat3 g;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g(r, c) = cd(gauss(rng), gauss(rng));
  const Mat3 q = Eigen::HouseholderQR<Mat3>(g).householderQ();
  Eigen::Vector3d w(expo(rng), expo(rng), expo(rng));
  w /= w.sum();
  return q * w.cast<cd>().asDiagonal() * q.adjoint();
}

}  // namespace oracle
