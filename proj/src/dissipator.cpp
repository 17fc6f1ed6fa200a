#include "maser/dissipator.hpp"

#include <cmath>
#include <limits>

#include "maser/error.hpp"

namespace maser {

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Resonant: return "resonant";
    case SchemeKind::Intermediate: return "intermediate";
    case SchemeKind::Uniform: return "uniform";
    case SchemeKind::Custom: return "custom";
  }
  return "unknown";
}

CouplingTable build_table(const CouplingScheme& scheme) {
  if (scheme.kind == SchemeKind::Custom) {
    const auto& t = scheme.table;
    if (!(t.gamma_c_10 >= 0.0 && t.gamma_c_20 >= 0.0 && t.gamma_h_10 >= 0.0 && t.gamma_h_20 >= 0.0)) {
      throw InvalidArgument("custom coupling table has a negative or NaN entry");
    }
    return t;
  }
  if (!(scheme.gamma > 0.0) || !std::isfinite(scheme.gamma)) {
    throw InvalidArgument("coupling scale gamma must be positive");
  }
  const double g = scheme.gamma;
  switch (scheme.kind) {
    case SchemeKind::Resonant:
      return {g, 0.0, 0.0, g};
    case SchemeKind::Intermediate:
      if (!(scheme.ratio > 0.0 && scheme.ratio < 1.0)) {
        throw InvalidArgument("intermediate coupling ratio must lie in (0, 1)");
      }
      return {g, scheme.ratio * g, scheme.ratio * g, g};
    case SchemeKind::Uniform:
      return {g, g, g, g};
    case SchemeKind::Custom:
      break;
  }
  throw InvalidArgument("unknown coupling scheme");
}

DissipatorRates rates(const EngineParams& p, const SpectralData& s) {
  const auto& t = p.couplings;
  // Weights |<0|L_alpha|eps_n>|^2: cos^2(theta/2) on the "own" transition, sin^2 on the cross one.
  const double own = 0.5 * (1.0 + std::cos(s.theta));
  const double cross = 0.5 * (1.0 - std::cos(s.theta));

  const double boltz_c10 = std::exp(-p.beta_c * s.eps10);
  const double boltz_h10 = std::exp(-p.beta_h * s.eps10);
  const double boltz_c20 = std::exp(-p.beta_c * s.eps20);
  const double boltz_h20 = std::exp(-p.beta_h * s.eps20);

  DissipatorRates r;
  r.channel1.cold_down = t.gamma_c_10 * own;
  r.channel1.hot_down = t.gamma_h_10 * cross;
  r.channel1.cold_up = r.channel1.cold_down * boltz_c10;
  r.channel1.hot_up = r.channel1.hot_down * boltz_h10;

  r.channel2.hot_down = t.gamma_h_20 * own;
  r.channel2.cold_down = t.gamma_c_20 * cross;
  r.channel2.hot_up = r.channel2.hot_down * boltz_h20;
  r.channel2.cold_up = r.channel2.cold_down * boltz_c20;

  r.g1 = r.channel1.down();
  r.g2 = r.channel2.down();
  if (!(r.g1 > 0.0) || !(r.g2 > 0.0)) {
    throw InvalidArgument("rates: a transition channel has no coupling (g1 or g2 vanishes)");
  }
  r.g1m = r.channel1.up();
  r.g2m = r.channel2.up();
  r.q1 = r.channel1.hot_down / r.g1;
  r.q2 = r.channel2.cold_down / r.g2;

  const double gap = boltz_h20 - boltz_c10;
  const double d10 = boltz_h10 - boltz_c10;
  const double d20 = boltz_h20 - boltz_c20;
  constexpr double inf = std::numeric_limits<double>::infinity();
  r.q10 = d10 != 0.0 ? gap / d10 : std::copysign(inf, gap);
  r.q20 = d20 != 0.0 ? gap / d20 : std::copysign(inf, gap);
  return r;
}

}  // namespace maser
