#include "pairsrc/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pairsrc {

namespace {

__extension__ using Int128 = __int128;

constexpr Complex kI{0.0, 1.0};

std::array<Complex, 4> coefficients_of(const PureState& s) { return bell_coefficients(s); }

Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

}  // namespace

// ---------------------------------------------------------------------------
// Hamiltonian and evolution

bool HamiltonianMatrix::is_hermitian(double tol) const {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (std::abs(entries[r][c] - std::conj(entries[c][r])) > tol) return false;
  return true;
}

double HamiltonianMatrix::off_block_magnitude() const {
  // Block membership: index parity of the two bits (00,11 even; 01,10 odd).
  auto block = [](int i) { return ((i >> 1) ^ i) & 1; };
  double worst = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (block(r) != block(c)) worst = std::max(worst, std::abs(entries[r][c]));
  return worst;
}

HamiltonianMatrix hamiltonian(const FieldParams& fp) {
  HamiltonianMatrix h;
  const double J = fp.J;
  h.entries[0][0] = -J + fp.B1 + fp.B2;
  h.entries[1][1] = J + fp.B1 - fp.B2;
  h.entries[2][2] = J - fp.B1 + fp.B2;
  h.entries[3][3] = -J - fp.B1 - fp.B2;
  // XX + YY exchanges |01> and |10> with amplitude 2.
  h.entries[1][2] = -2.0 * J;
  h.entries[2][1] = -2.0 * J;
  return h;
}

PureState evolve(const PureState& state, const FieldParams& fp, double t) {
  if (state.num_qubits() != 2) throw std::invalid_argument("evolve needs a 2-qubit state");
  const auto h = hamiltonian(fp);

  std::vector<Complex> out(4);
  out[0] = std::exp(-kI * h(0, 0).real() * t) * state[0];
  out[3] = std::exp(-kI * h(3, 3).real() * t) * state[3];

  // {|01>,|10>} block: mean*I + vz*Z + vx*X.
  const double mean = 0.5 * (h(1, 1).real() + h(2, 2).real());
  const double vz = 0.5 * (h(1, 1).real() - h(2, 2).real());
  const double vx = h(1, 2).real();
  const double omega = std::hypot(vz, vx);
  const double c = std::cos(omega * t);
  const double s_over_omega = omega > 0.0 ? std::sin(omega * t) / omega : t;
  const Complex phase = std::exp(-kI * mean * t);
  const Complex u11 = phase * Complex(c, -s_over_omega * vz);
  const Complex u22 = phase * Complex(c, s_over_omega * vz);
  const Complex u12 = phase * Complex(0.0, -s_over_omega * vx);
  out[1] = u11 * state[1] + u12 * state[2];
  out[2] = u12 * state[1] + u22 * state[2];
  return PureState(std::move(out));
}

// ---------------------------------------------------------------------------
// Mismatch

double j_parameter(const FieldParams& fp) {
  const double bm = fp.b_minus();
  const double denom = std::sqrt(bm * bm + 4.0 * fp.J * fp.J);
  if (!(denom > 0.0)) {
    throw std::domain_error("j undefined: J = 0 and B1 = B2");
  }
  return fp.J / denom;
}

RationalApprox rational_approx(double j, std::int64_t max_den) {
  if (!std::isfinite(j) || std::abs(j) > 0.5) {
    throw std::invalid_argument("rational_approx needs |j| <= 1/2");
  }
  if (max_den < 1 || max_den > kMaxDenominator) {
    throw std::invalid_argument("max_den must be in [1, 2^31-1]");
  }
  // Below 2^-40 nothing with den <= 2^31 beats 0/1, and above it the exact
  // binary value fits the 128-bit arithmetic below.
  const double x = std::abs(j);
  if (x < 0x1.0p-40) return {0, 1, j};

  int exp2 = 0;
  const double frac = std::frexp(x, &exp2);  // x = frac * 2^exp2, frac in [0.5, 1)
  const auto mant = static_cast<Int128>(std::ldexp(frac, 53));
  const Int128 N = mant;
  const Int128 D = static_cast<Int128>(1) << (53 - exp2);  // exp2 >= -39

  // Continued-fraction convergents p0/q0, p1/q1 of N/D.
  Int128 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Int128 n = N, d = D;
  while (d != 0) {
    const Int128 a = n / d;
    const Int128 q2 = q0 + a * q1;
    if (q2 > max_den) break;
    const Int128 p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const Int128 r = n - a * d;
    n = d;
    d = r;
  }

  Int128 num = p1, den = q1;
  if (d != 0) {
    // Best semiconvergent below the bound versus the last convergent.
    const Int128 k = (max_den - q0) / q1;
    const Int128 sp = p0 + k * p1;
    const Int128 sq = q0 + k * q1;
    // |p/q - N/D| compared exactly as |p D - q N| / q; both numerators are
    // below D, so the cross products stay under 2^124.
    const Int128 err_conv = abs128(p1 * D - q1 * N);
    const Int128 err_semi = abs128(sp * D - sq * N);
    if (err_semi * q1 < err_conv * sq) {
      num = sp;
      den = sq;
    }
  }
  const auto q_num = static_cast<std::int64_t>(j < 0 ? -num : num);
  const auto q_den = static_cast<std::int64_t>(den);
  return {q_num, q_den, j - static_cast<double>(q_num) / static_cast<double>(q_den)};
}

double small_mismatch_estimate(const FieldParams& fp) {
  if (fp.J == 0.0) throw std::domain_error("mismatch estimate undefined for J = 0");
  const double bm = fp.b_minus();
  return -(bm * bm) / (4.0 * fp.J * fp.J);
}

ControlKnob::ControlKnob(std::uint64_t n, double delta) : n_(n), delta_(delta) {
  if (!std::isfinite(delta) || std::abs(delta) > 0.5) {
    throw std::invalid_argument("control mismatch must satisfy |delta| <= 1/2");
  }
}

ControlKnob ControlKnob::from_fields(std::uint64_t n, const FieldParams& fp,
                                     std::int64_t max_den) {
  const double j = j_parameter(fp);
  const auto q = rational_approx(j, max_den);
  ControlKnob knob(n, q.delta);
  knob.provenance_ = KnobProvenance{j, q.num, q.den};
  return knob;
}

// ---------------------------------------------------------------------------
// Post-control states

PureState controlled_psi1(const ControlKnob& knob) {
  const double x = 2.0 * std::numbers::pi * knob.ndelta();
  const Complex e = std::exp(kI * x);
  const double s = std::sin(x);
  return from_bell_coefficients({1.0 + kI * e * s, 0.0, -kI * e * s, 0.0});
}

PureState controlled_psi2(double theta, const ControlKnob& knob) {
  const double x = 2.0 * std::numbers::pi * knob.ndelta();
  const Complex e = std::exp(kI * x);
  const double ct = std::cos(theta);
  return from_bell_coefficients(
      {kI * e * std::sin(x) * ct, std::sin(theta), -e * std::cos(x) * ct, 0.0});
}

EmissionState controlled_emission(const SourceSpec& spec, const ControlKnob& knob) {
  spec.validate();
  const auto a = coefficients_of(controlled_psi1(knob));
  const auto b1 = coefficients_of(controlled_psi2(spec.theta1, knob));
  const auto b2 = coefficients_of(controlled_psi2(spec.theta2, knob));
  const double alpha1 = std::cos(spec.gamma);
  const double alpha2 = std::sin(spec.gamma);

  std::array<Complex, 4> raw{};
  double n2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    raw[k] = alpha1 * a[k] + alpha2 * (spec.p1 * b1[k] + spec.p2 * b2[k]);
    n2 += std::norm(raw[k]);
  }
  if (n2 < kDegenerateNorm) {
    throw std::domain_error("controlled superposition cancels: squared norm " +
                            std::to_string(n2));
  }
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& c : raw) c *= scale;
  return {from_bell_coefficients(raw), n2};
}

}  // namespace pairsrc
