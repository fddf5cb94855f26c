#include "pairsrc/source.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pairsrc {

namespace {

PureState qubit(double amp0, double amp1) { return PureState({amp0, amp1}); }

std::vector<Complex> add_scaled(std::span<const Complex> x, Complex a,
                                std::span<const Complex> y, Complex b) {
  std::vector<Complex> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

}  // namespace

SourceSpec SourceSpec::from_primary(double gamma, double p1, double theta1,
                                    bool p2_negative) {
  if (!(std::abs(p1) <= 1.0)) {
    throw std::invalid_argument("p1 must lie in [-1, 1] so that p1^2+p2^2=1 is solvable");
  }
  const double p2 = std::sqrt(std::max(0.0, 1.0 - p1 * p1));
  return {gamma, p1, p2_negative ? -p2 : p2, theta1, std::numbers::pi / 2 - theta1};
}

void SourceSpec::validate() const {
  for (double v : {gamma, p1, p2, theta1, theta2}) {
    if (!std::isfinite(v)) throw std::invalid_argument("source parameters must be finite");
  }
  if (std::abs(p1 * p1 + p2 * p2 - 1.0) > kSpecTolerance) {
    throw std::invalid_argument("violated p1^2+p2^2=1 (got " +
                                std::to_string(p1 * p1 + p2 * p2) + ")");
  }
  if (std::abs(theta1 + theta2 - std::numbers::pi / 2) > kSpecTolerance) {
    throw std::invalid_argument("violated theta1+theta2=pi/2 (got " +
                                std::to_string(theta1 + theta2) + ")");
  }
  if (gamma < -kSpecTolerance || gamma > std::numbers::pi / 2 + kSpecTolerance) {
    throw std::invalid_argument("violated gamma in [0, pi/2] (got " + std::to_string(gamma) +
                                ")");
  }
}

ComponentStates component_states(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return {qubit(c, s), qubit(s, -c), qubit(s, c), qubit(c, -s)};
}

PureState psi1(double theta) {
  const auto cs = component_states(theta);
  const auto pp = tensor(cs.phi, cs.phi);
  const auto ee = tensor(cs.eta, cs.eta);
  const double h = 1.0 / std::sqrt(2.0);
  return PureState(add_scaled(pp.amplitudes(), h, ee.amplitudes(), h));
}

PureState psi2(double theta) {
  const auto cs = component_states(theta);
  const auto vv = tensor(cs.varphi, cs.varphi);
  const auto mm = tensor(cs.mu, cs.mu);
  const double h = 1.0 / std::sqrt(2.0);
  return PureState(add_scaled(vv.amplitudes(), h, mm.amplitudes(), -h));
}

double emission_raw_norm(const SourceSpec& spec) {
  const double sg = std::sin(spec.gamma);
  return 1.0 + 2.0 * sg * sg * spec.p1 * spec.p2 * std::sin(2.0 * spec.theta1);
}

EmissionState emitted_state(const SourceSpec& spec) {
  spec.validate();
  const auto a = psi1();
  const auto b1 = psi2(spec.theta1);
  const auto b2 = psi2(spec.theta2);
  const double alpha1 = std::cos(spec.gamma);
  const double alpha2 = std::sin(spec.gamma);
  auto mix = add_scaled(b1.amplitudes(), alpha2 * spec.p1, b2.amplitudes(), alpha2 * spec.p2);
  auto raw = add_scaled(a.amplitudes(), alpha1, mix, 1.0);
  double n2 = 0.0;
  for (const auto& x : raw) n2 += std::norm(x);
  if (n2 < kDegenerateNorm) {
    throw std::domain_error("emission superposition cancels: squared norm " +
                            std::to_string(n2));
  }
  return {PureState(std::move(raw), PureState::Normalization::kNormalize), n2};
}

}  // namespace pairsrc
