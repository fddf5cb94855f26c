// Emission-source states: the single-qubit component states, the two
// entangled species psi1 and psi2(theta), and their weighted superposition.

#pragma once

#include "pairsrc/statevec.hpp"

namespace pairsrc {

inline constexpr double kSpecTolerance = 1e-9;
inline constexpr double kDegenerateNorm = 1e-12;

/// Emission parameters. Amplitudes are alpha1 = cos(gamma), alpha2 = sin(gamma).
struct SourceSpec {
  double gamma = 0.0;
  double p1 = 1.0;
  double p2 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;

  /// Fills p2 = +-sqrt(1 - p1^2) and theta2 = pi/2 - theta1.
  static SourceSpec from_primary(double gamma, double p1, double theta1,
                                 bool p2_negative = false);

  /// Throws std::invalid_argument naming the first violated constraint:
  /// p1^2+p2^2=1, theta1+theta2=pi/2, gamma in [0, pi/2].
  void validate() const;
};

struct ComponentStates {
  PureState phi;
  PureState eta;
  PureState varphi;
  PureState mu;
};

ComponentStates component_states(double theta);

/// (phi1 phi2 + eta1 eta2)/sqrt2 assembled at the given angle; equals beta00
/// for every theta.
PureState psi1(double theta = 0.0);

/// (varphi1 varphi2 - mu1 mu2)/sqrt2 = sin(theta) beta01 - cos(theta) beta10.
PureState psi2(double theta);

struct EmissionState {
  PureState state;  // normalized
  double raw_norm;  // squared norm of the unnormalized superposition
};

/// Closed form of the unnormalized squared norm:
/// 1 + 2 sin^2(gamma) p1 p2 sin(2 theta1). psi2(theta1) and psi2(theta2)
/// overlap by sin(2 theta1) when theta1 + theta2 = pi/2.
double emission_raw_norm(const SourceSpec& spec);

/// cos(gamma) psi1 + sin(gamma) (p1 psi2(theta1) + p2 psi2(theta2)).
/// Throws std::domain_error when the superposition cancels to (near) zero.
EmissionState emitted_state(const SourceSpec& spec);

}  // namespace pairsrc
