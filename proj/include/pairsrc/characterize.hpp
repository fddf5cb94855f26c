// Non-local Bell-basis characterization of an emitted pair.
//
// Ancillas 3 and 4 read out which Bell species the pair carries while the
// pair itself survives. Readout labels follow the convention
//   beta00 -> |0 0>, beta01 -> |0 1>, beta10 -> |1 1>, beta11 -> |1 0>,
// so the absent species beta11 is the outcome whose population is f10.

#pragma once

#include <array>
#include <vector>

#include "pairsrc/distortion.hpp"
#include "pairsrc/source.hpp"
#include "pairsrc/statevec.hpp"

namespace pairsrc {

struct Outcome {
  int i3 = 0;
  int j4 = 0;

  constexpr int index() const { return 2 * i3 + j4; }
  friend constexpr bool operator==(Outcome, Outcome) = default;
};

Outcome outcome_for(BellLabel label);
BellLabel label_for(Outcome outcome);

/// Four outcome weights keyed by readout bits.
struct Populations {
  double f00 = 0.0;
  double f01 = 0.0;
  double f10 = 0.0;
  double f11 = 0.0;

  double total() const { return f00 + f01 + f10 + f11; }
  double at(Outcome o) const;
  Populations normalized() const;
};

struct PopulationTable {
  Populations raw;
  Populations normalized;
};

struct SpeciesMoments {
  double C = 0.0;  // p1 cos(theta1) + p2 cos(theta2)
  double S = 0.0;  // p1 sin(theta1) + p2 sin(theta2)
};

SpeciesMoments species_moments(const SourceSpec& spec);

/// Closed-form outcome weights of the controlled emission:
///   f00 = cos^2 g cos^2 x + C^2 sin^2 g sin^2 x
///   f01 = S^2 sin^2 g
///   f10 = 0
///   f11 = C^2 sin^2 g cos^2 x + cos^2 g sin^2 x,       x = 2 pi n delta.
/// `raw` is evaluated as written and sums to the raw emission norm;
/// `normalized` divides by that sum.
PopulationTable populations_analytic(const SourceSpec& spec, const ControlKnob& knob);

/// Born-rule weights |<beta|state>|^2 routed through the readout labels.
PopulationTable populations_exact(const PureState& state12);

struct MeasurementRecord {
  Outcome outcome;
  PureState post_state;  // qubits 1,2 after readout
  double probability;
};

/// Samples one Bell-basis readout of a 2-qubit state.
MeasurementRecord nonlocal_bell_measurement(const PureState& state12, Rng& rng);

/// Gate list on the 4-qubit register (pair = qubits 0,1; ancillas = 2,3)
/// and the classical map from raw ancilla bits to readout labels.
struct CharacterizationCircuit {
  std::vector<UnitaryMatrix> gates;  // each 16x16, applied in order

  /// Raw copy bits (a, b) -> (a, a xor b).
  static Outcome relabel(int a, int b) { return {a, a ^ b}; }
};

/// CNOT(0->1), H(0), CNOT(0->2), CNOT(1->3), H(0), CNOT(0->1): the pair is
/// rotated into the computational basis, copied onto the ancillas, and
/// rotated back.
CharacterizationCircuit circuit_realization();

struct CircuitBranch {
  std::array<int, 2> raw_bits;
  Outcome outcome;
  PureState post_state;  // qubits 0,1
  double probability;
};

/// Runs the circuit on state12 (x) |00> and returns every ancilla readout
/// with nonzero probability.
std::vector<CircuitBranch> circuit_branches(const PureState& state12);

/// Runs the circuit once and samples the ancilla readout.
CircuitBranch run_circuit(const PureState& state12, Rng& rng);

}  // namespace pairsrc
