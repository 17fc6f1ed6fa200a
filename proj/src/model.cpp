#include "maser/model.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "maser/error.hpp"

namespace maser {

std::string ValidationReport::summary() const {
  if (violations.empty()) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i];
  }
  return out.str();
}

ValidationReport validate(const EngineParams& p) {
  ValidationReport report;
  auto require = [&](bool ok, const char* name) {
    if (!ok) report.violations.emplace_back(name);
  };
  const auto& c = p.couplings;
  const bool finite = std::isfinite(p.omega0) && std::isfinite(p.omega1) && std::isfinite(p.omega2) &&
                      std::isfinite(p.lambda) && std::isfinite(p.omega) && std::isfinite(p.beta_c) &&
                      std::isfinite(p.beta_h) && std::isfinite(c.gamma_c_10) && std::isfinite(c.gamma_c_20) &&
                      std::isfinite(c.gamma_h_10) && std::isfinite(c.gamma_h_20);
  require(finite, "finite");
  if (!finite) return report;

  require(p.omega0 < p.omega1 && p.omega1 < p.omega2, "omega0<omega1<omega2");
  require(p.lambda >= 0.0, "lambda>=0");
  require(p.lambda * p.lambda < p.omega10() * p.omega20(), "lambda^2<omega10*omega20");
  require(p.beta_h > 0.0 && p.beta_c >= p.beta_h, "beta_c>=beta_h>0");
  require(p.omega > 0.0, "omega>0");
  require(c.gamma_c_10 >= 0.0 && c.gamma_c_20 >= 0.0 && c.gamma_h_10 >= 0.0 && c.gamma_h_20 >= 0.0,
          "couplings>=0");
  return report;
}

Eigen::Matrix3cd hamiltonian(const EngineParams& p, double t) {
  using cd = std::complex<double>;
  const cd phase = std::polar(1.0, p.omega * t);
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 0) = p.omega0;
  h(1, 1) = p.omega1;
  h(2, 2) = p.omega2;
  h(1, 2) = p.lambda * phase;
  h(2, 1) = p.lambda * std::conj(phase);
  return h;
}

SpectralData spectrum(const EngineParams& p) {
  const double split = p.omega2 - p.omega1;
  if (split == 0.0 && p.lambda == 0.0) {
    throw DegenerateError("spectrum: omega1 == omega2 with lambda == 0 leaves theta undefined");
  }

  // H(0) is real symmetric.
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h(0, 0) = p.omega0;
  h(1, 1) = p.omega1;
  h(2, 2) = p.omega2;
  h(1, 2) = h(2, 1) = p.lambda;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h);
  if (solver.info() != Eigen::Success) throw InvariantError("spectrum: eigensolver failed");

  // |eps_0> = |0> exactly; pick it by support and keep the other two in ascending order.
  int ground = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(solver.eigenvectors()(0, k)) > std::abs(solver.eigenvectors()(0, ground))) ground = k;
  }
  double others[2];
  int n = 0;
  for (int k = 0; k < 3; ++k) {
    if (k != ground) others[n++] = solver.eigenvalues()(k);
  }

  SpectralData s;
  s.eps0 = solver.eigenvalues()(ground);
  s.eps1 = others[0];
  s.eps2 = others[1];
  s.theta = std::atan2(2.0 * p.lambda, split);
  s.eps10 = s.eps1 - s.eps0;
  s.eps20 = s.eps2 - s.eps0;
  s.eps21 = s.eps2 - s.eps1;

  const double centre = 0.5 * (p.omega1 + p.omega2);
  const double radius = std::hypot(0.5 * split, p.lambda);
  const double scale = std::max({std::abs(p.omega0), std::abs(p.omega1), std::abs(p.omega2), p.lambda, 1e-300});
  if (std::abs(s.eps0 - p.omega0) > 1e-10 * scale || std::abs(s.eps1 - (centre - radius)) > 1e-10 * scale ||
      std::abs(s.eps2 - (centre + radius)) > 1e-10 * scale) {
    throw InvariantError("spectrum: numerical eigenvalues disagree with the closed form");
  }
  return s;
}

std::array<Eigen::Vector3cd, 3> instantaneous_eigenvectors(const EngineParams& p, double t) {
  const SpectralData s = spectrum(p);
  const double c = std::cos(0.5 * s.theta);
  const double sn = std::sin(0.5 * s.theta);
  const std::complex<double> phase = std::polar(1.0, p.omega * t);

  std::array<Eigen::Vector3cd, 3> v;
  v[0] << 1.0, 0.0, 0.0;
  v[1] << 0.0, c, -sn * std::conj(phase);
  v[2] << 0.0, sn * phase, c;
  return v;
}

}  // namespace maser
