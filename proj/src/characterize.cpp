#include "pairsrc/characterize.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pairsrc {

namespace {

constexpr std::array<int, 2> kAncillas = {2, 3};

// Readouts below this weight are rounding residue of exact cancellations.
constexpr double kNegligibleProbability = 1e-24;

void require_pair(const PureState& s) {
  if (s.num_qubits() != 2) throw std::invalid_argument("expected a 2-qubit state");
}

// The circuit leaves (pair) (x) |ancilla bits>; read the pair back out.
PureState pair_slice(const PureState& full, int a, int b) {
  const std::size_t anc = static_cast<std::size_t>(2 * a + b);
  std::vector<Complex> amps(4);
  for (std::size_t p = 0; p < 4; ++p) amps[p] = full[(p << 2) | anc];
  return PureState(std::move(amps), PureState::Normalization::kNormalize);
}

CircuitBranch branch_from(const MeasurementResult& m) {
  const int a = m.bits[0];
  const int b = m.bits[1];
  return {{a, b}, CharacterizationCircuit::relabel(a, b), pair_slice(m.collapsed, a, b),
          m.probability};
}

PureState run_gates(const PureState& state12) {
  require_pair(state12);
  auto state = tensor(state12, PureState::basis(2, 0));
  const auto circuit = circuit_realization();
  for (const auto& g : circuit.gates) state = apply_unitary(state, g, {0, 1, 2, 3});
  return state;
}

}  // namespace

Outcome outcome_for(BellLabel label) { return {label.a, label.a ^ label.b}; }

BellLabel label_for(Outcome outcome) { return {outcome.i3, outcome.i3 ^ outcome.j4}; }

double Populations::at(Outcome o) const {
  switch (o.index()) {
    case 0: return f00;
    case 1: return f01;
    case 2: return f10;
    default: return f11;
  }
}

Populations Populations::normalized() const {
  const double t = total();
  if (!(t > 0.0)) throw std::domain_error("populations sum to zero");
  return {f00 / t, f01 / t, f10 / t, f11 / t};
}

SpeciesMoments species_moments(const SourceSpec& spec) {
  return {spec.p1 * std::cos(spec.theta1) + spec.p2 * std::cos(spec.theta2),
          spec.p1 * std::sin(spec.theta1) + spec.p2 * std::sin(spec.theta2)};
}

PopulationTable populations_analytic(const SourceSpec& spec, const ControlKnob& knob) {
  spec.validate();
  const auto m = species_moments(spec);
  const double x = 2.0 * std::numbers::pi * knob.ndelta();
  const double cg2 = std::pow(std::cos(spec.gamma), 2);
  const double sg2 = std::pow(std::sin(spec.gamma), 2);
  const double cx2 = std::pow(std::cos(x), 2);
  const double sx2 = std::pow(std::sin(x), 2);
  const double C2 = m.C * m.C;
  const double S2 = m.S * m.S;

  Populations raw;
  raw.f00 = cg2 * cx2 + C2 * sg2 * sx2;
  raw.f01 = S2 * sg2;
  raw.f10 = 0.0;
  raw.f11 = C2 * sg2 * cx2 + cg2 * sx2;
  return {raw, raw.normalized()};
}

PopulationTable populations_exact(const PureState& state12) {
  require_pair(state12);
  const auto c = bell_coefficients(state12);
  Populations p;
  double* slots[4] = {&p.f00, &p.f01, &p.f10, &p.f11};
  for (const auto label : kBellLabels) {
    *slots[outcome_for(label).index()] = std::norm(c[label.index()]);
  }
  return {p, p};
}

MeasurementRecord nonlocal_bell_measurement(const PureState& state12, Rng& rng) {
  require_pair(state12);
  const auto c = bell_coefficients(state12);
  std::array<double, 4> weights{};
  for (int k = 0; k < 4; ++k) weights[k] = std::norm(c[k]);
  const auto label = BellLabel::from_index(static_cast<int>(sample_index(weights, rng)));
  return {outcome_for(label), bell_state(label), weights[label.index()]};
}

CharacterizationCircuit circuit_realization() {
  const auto cx = gates::cnot();
  const auto h = gates::hadamard();
  auto on = [](const UnitaryMatrix& u, std::initializer_list<int> targets) {
    return embed(u, std::span<const int>(targets.begin(), targets.size()), 4);
  };
  CharacterizationCircuit circuit;
  circuit.gates = {on(cx, {0, 1}), on(h, {0}),     on(cx, {0, 2}),
                   on(cx, {1, 3}), on(h, {0}),     on(cx, {0, 1})};
  return circuit;
}

std::vector<CircuitBranch> circuit_branches(const PureState& state12) {
  const auto full = run_gates(state12);
  const auto probs = outcome_probabilities(full, kAncillas);
  std::vector<CircuitBranch> branches;
  for (int k = 0; k < 4; ++k) {
    if (probs[k] <= kNegligibleProbability) continue;
    const std::array<int, 2> bits = {k >> 1, k & 1};
    branches.push_back(branch_from(project_qubits(full, kAncillas, bits)));
  }
  return branches;
}

CircuitBranch run_circuit(const PureState& state12, Rng& rng) {
  return branch_from(measure_qubits(run_gates(state12), kAncillas, rng));
}

}  // namespace pairsrc
