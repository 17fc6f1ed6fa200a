#pragma once

#include "maser/model.hpp"

namespace maser {

enum class SchemeKind { Resonant, Intermediate, Uniform, Custom };

// Named parametrizations of the coupling table.
//   Resonant:     gamma_c(eps10) = gamma_h(eps20) = gamma, cross entries 0
//   Intermediate: diagonal entries gamma, cross entries ratio * gamma, 0 < ratio < 1
//   Uniform:      all four entries gamma
//   Custom:       an explicit table
struct CouplingScheme {
  SchemeKind kind = SchemeKind::Resonant;
  double gamma = 1.0;
  double ratio = 0.0;
  CouplingTable table;

  static CouplingScheme resonant(double gamma) { return {SchemeKind::Resonant, gamma, 0.0, {}}; }
  static CouplingScheme intermediate(double gamma, double ratio) {
    return {SchemeKind::Intermediate, gamma, ratio, {}};
  }
  static CouplingScheme uniform(double gamma) { return {SchemeKind::Uniform, gamma, 0.0, {}}; }
  static CouplingScheme custom(const CouplingTable& table) { return {SchemeKind::Custom, 0.0, 0.0, table}; }
};

// Throws InvalidArgument for gamma <= 0, an intermediate ratio outside (0, 1),
// or a custom table with a negative entry.
CouplingTable build_table(const CouplingScheme& scheme);

const char* to_string(SchemeKind kind);

// Jump rates of one transition channel |0> <-> |eps_n>, resolved by reservoir.
// "down" is |eps_n> -> |0> (energy eps_n0 released), "up" is the reverse.
struct ChannelRates {
  double cold_down = 0.0;
  double hot_down = 0.0;
  double cold_up = 0.0;
  double hot_up = 0.0;

  double down() const { return cold_down + hot_down; }
  double up() const { return cold_up + hot_up; }
};

struct DissipatorRates {
  ChannelRates channel1;  // |0> <-> |eps_1>
  ChannelRates channel2;  // |0> <-> |eps_2>

  double g1 = 0.0;
  double g2 = 0.0;
  double g1m = 0.0;
  double g2m = 0.0;
  // Fractions of g1 (g2) carried by the "wrong" reservoir.
  double q1 = 0.0;
  double q2 = 0.0;
  // Engine thresholds: P > 0  <=>  q1/q10 + q2/q20 < 1 (when beta_c eps10 > beta_h eps20).
  // Infinite when beta_c == beta_h.
  double q10 = 0.0;
  double q20 = 0.0;

  double ratio1() const { return g1m / g1; }
  double ratio2() const { return g2m / g2; }
};

// Effective rates g1, g2, g1^-, g2^- with gamma_alpha(-eps) = exp(-beta_alpha eps) gamma_alpha(eps).
// Throws InvalidArgument if g1 or g2 vanishes.
DissipatorRates rates(const EngineParams& params, const SpectralData& spec);

}  // namespace maser
