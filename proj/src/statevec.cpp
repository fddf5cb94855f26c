#include "pairsrc/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pairsrc {

namespace {

int qubits_for_dim(std::size_t dim) {
  for (int k = 1; k <= kMaxQubits; ++k) {
    if (dim == (std::size_t{1} << k)) return k;
  }
  return -1;
}

void check_targets(std::span<const int> targets, int num_qubits) {
  if (targets.empty()) throw std::invalid_argument("empty qubit index list");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= num_qubits) {
      throw std::invalid_argument("qubit index " + std::to_string(targets[i]) +
                                  " out of range for " + std::to_string(num_qubits) +
                                  " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) {
        throw std::invalid_argument("repeated qubit index " + std::to_string(targets[i]));
      }
    }
  }
}

// Bit mask of qubit q in an n-qubit index (qubit 0 is the most significant).
std::size_t qubit_mask(int q, int n) { return std::size_t{1} << (n - 1 - q); }

// Index obtained by writing the m bits of `local` into the target positions.
std::size_t scatter(std::size_t base, std::size_t local, std::span<const int> targets,
                    int n) {
  const int m = static_cast<int>(targets.size());
  std::size_t idx = base;
  for (int i = 0; i < m; ++i) {
    if ((local >> (m - 1 - i)) & 1U) idx |= qubit_mask(targets[i], n);
  }
  return idx;
}

std::size_t gather(std::size_t idx, std::span<const int> targets, int n) {
  std::size_t local = 0;
  for (int q : targets) local = (local << 1) | ((idx & qubit_mask(q, n)) ? 1U : 0U);
  return local;
}

std::size_t target_mask(std::span<const int> targets, int n) {
  std::size_t mask = 0;
  for (int q : targets) mask |= qubit_mask(q, n);
  return mask;
}

}  // namespace

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(std::vector<Complex> amplitudes, Normalization mode)
    : amplitudes_(std::move(amplitudes)) {
  num_qubits_ = qubits_for_dim(amplitudes_.size());
  if (num_qubits_ < 0) {
    throw std::invalid_argument("amplitude vector length " +
                                std::to_string(amplitudes_.size()) +
                                " is not 2^k for k in 1..4");
  }
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw std::invalid_argument("state has zero or non-finite norm");
  }
  if (mode == Normalization::kNormalize) {
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : amplitudes_) a *= scale;
  } else if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state is not normalized: squared norm " +
                                std::to_string(n2));
  }
}

PureState PureState::basis(int num_qubits, std::size_t index) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1..4");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return PureState(std::move(amps));
}

PureState PureState::from_bits(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must be 0/1");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return basis(static_cast<int>(bits.size()), index);
}

double PureState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

// ---------------------------------------------------------------------------
// UnitaryMatrix

UnitaryMatrix::UnitaryMatrix(std::size_t dim, std::vector<Complex> entries, Unchecked)
    : dim_(dim), entries_(std::move(entries)) {}

UnitaryMatrix::UnitaryMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (qubits_for_dim(dim) < 0) {
    throw std::invalid_argument("unitary dimension must be 2, 4, 8 or 16");
  }
  if (entries_.size() != dim * dim) {
    throw std::invalid_argument("unitary entry count does not match dimension");
  }
  if (unitarity_defect() > kUnitaryTolerance) {
    throw std::invalid_argument("matrix is not unitary within tolerance");
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return UnitaryMatrix(dim, std::move(e));
}

int UnitaryMatrix::num_qubits() const { return qubits_for_dim(dim_); }

UnitaryMatrix UnitaryMatrix::adjoint() const {
  std::vector<Complex> e(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) e[c * dim_ + r] = std::conj(entries_[r * dim_ + c]);
  }
  return UnitaryMatrix(dim_, std::move(e), Unchecked{});
}

double UnitaryMatrix::unitarity_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        s += entries_[r * dim_ + k] * std::conj(entries_[c * dim_ + k]);
      }
      worst = std::max(worst, std::abs(s - (r == c ? 1.0 : 0.0)));
    }
  }
  return worst;
}

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("unitary product dimension mismatch");
  const std::size_t d = a.dim_;
  std::vector<Complex> e(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      const Complex ark = a.entries_[r * d + k];
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < d; ++c) e[r * d + c] += ark * b.entries_[k * d + c];
    }
  }
  return UnitaryMatrix(d, std::move(e), UnitaryMatrix::Unchecked{});
}

UnitaryMatrix kron(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  const std::size_t d = a.dim_ * b.dim_;
  if (qubits_for_dim(d) < 0) throw std::invalid_argument("kron exceeds 4 qubits");
  std::vector<Complex> e(d * d);
  for (std::size_t ar = 0; ar < a.dim_; ++ar)
    for (std::size_t ac = 0; ac < a.dim_; ++ac)
      for (std::size_t br = 0; br < b.dim_; ++br)
        for (std::size_t bc = 0; bc < b.dim_; ++bc)
          e[(ar * b.dim_ + br) * d + (ac * b.dim_ + bc)] =
              a.entries_[ar * a.dim_ + ac] * b.entries_[br * b.dim_ + bc];
  return UnitaryMatrix(d, std::move(e), UnitaryMatrix::Unchecked{});
}

UnitaryMatrix embed(const UnitaryMatrix& u, std::span<const int> targets, int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1..4");
  }
  check_targets(targets, num_qubits);
  if (u.dim() != (std::size_t{1} << targets.size())) {
    throw std::invalid_argument("unitary dimension does not match target count");
  }
  const std::size_t d = std::size_t{1} << num_qubits;
  const std::size_t mask = target_mask(targets, num_qubits);
  std::vector<Complex> e(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      e[r * d + c] = u(gather(r, targets, num_qubits), gather(c, targets, num_qubits));
    }
  }
  return UnitaryMatrix(d, std::move(e), UnitaryMatrix::Unchecked{});
}

namespace gates {

UnitaryMatrix pauli_x() { return UnitaryMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
UnitaryMatrix pauli_y() {
  return UnitaryMatrix(2, {0.0, Complex(0, -1), Complex(0, 1), 0.0});
}
UnitaryMatrix pauli_z() { return UnitaryMatrix(2, {1.0, 0.0, 0.0, -1.0}); }
UnitaryMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return UnitaryMatrix(2, {h, h, h, -h});
}
UnitaryMatrix cnot() {
  return UnitaryMatrix(4, {1, 0, 0, 0,  //
                           0, 1, 0, 0,  //
                           0, 0, 0, 1,  //
                           0, 0, 1, 0});
}

}  // namespace gates

// ---------------------------------------------------------------------------
// Bell basis

PureState bell_state(BellLabel label) {
  if ((label.a != 0 && label.a != 1) || (label.b != 0 && label.b != 1)) {
    throw std::invalid_argument("Bell label bits must be 0 or 1");
  }
  const double h = 1.0 / std::sqrt(2.0);
  const double sign = label.a == 0 ? 1.0 : -1.0;
  std::vector<Complex> amps(4);
  if (label.b == 0) {
    amps[0] = h;
    amps[3] = sign * h;
  } else {
    amps[1] = h;
    amps[2] = sign * h;
  }
  return PureState(std::move(amps));
}

std::array<Complex, 4> bell_coefficients(const PureState& state) {
  if (state.num_qubits() != 2) {
    throw std::invalid_argument("Bell coefficients need a 2-qubit state");
  }
  const double h = 1.0 / std::sqrt(2.0);
  return {h * (state[0] + state[3]), h * (state[1] + state[2]),
          h * (state[0] - state[3]), h * (state[1] - state[2])};
}

PureState from_bell_coefficients(const std::array<Complex, 4>& c) {
  const double h = 1.0 / std::sqrt(2.0);
  return PureState({h * (c[0] + c[2]), h * (c[1] + c[3]), h * (c[1] - c[3]),
                    h * (c[0] - c[2])});
}

// ---------------------------------------------------------------------------
// Products and gates

Complex inner(const PureState& bra, const PureState& ket) {
  if (bra.num_qubits() != ket.num_qubits()) {
    throw std::invalid_argument("inner product of states with different qubit counts");
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < bra.dim(); ++i) s += std::conj(bra[i]) * ket[i];
  return s;
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.num_qubits() + b.num_qubits() > kMaxQubits) {
    throw std::invalid_argument("tensor product exceeds 4 qubits");
  }
  std::vector<Complex> amps;
  amps.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes())
    for (const auto& y : b.amplitudes()) amps.push_back(x * y);
  return PureState(std::move(amps));
}

PureState apply_unitary(const PureState& state, const UnitaryMatrix& u,
                        std::span<const int> targets) {
  const int n = state.num_qubits();
  check_targets(targets, n);
  if (u.dim() != (std::size_t{1} << targets.size())) {
    throw std::invalid_argument("unitary dimension " + std::to_string(u.dim()) +
                                " does not match " + std::to_string(targets.size()) +
                                " target qubits");
  }
  const std::size_t mask = target_mask(targets, n);
  const std::size_t m = u.dim();
  std::vector<Complex> out(state.dim());
  std::vector<std::size_t> idx(m);
  for (std::size_t base = 0; base < state.dim(); ++base) {
    if (base & mask) continue;
    for (std::size_t l = 0; l < m; ++l) idx[l] = scatter(base, l, targets, n);
    for (std::size_t r = 0; r < m; ++r) {
      Complex s = 0.0;
      for (std::size_t c = 0; c < m; ++c) s += u(r, c) * state[idx[c]];
      out[idx[r]] = s;
    }
  }
  return PureState(std::move(out));
}

PureState apply_unitary(const PureState& state, const UnitaryMatrix& u,
                        std::initializer_list<int> targets) {
  return apply_unitary(state, u, std::span<const int>(targets.begin(), targets.size()));
}

double fidelity_up_to_phase(const PureState& a, const PureState& b) {
  return std::min(1.0, std::abs(inner(a, b)));
}

// ---------------------------------------------------------------------------
// Measurement

std::vector<double> outcome_probabilities(const PureState& state,
                                          std::span<const int> indices) {
  const int n = state.num_qubits();
  check_targets(indices, n);
  std::vector<double> probs(std::size_t{1} << indices.size());
  for (std::size_t i = 0; i < state.dim(); ++i) {
    probs[gather(i, indices, n)] += state.probability(i);
  }
  return probs;
}

MeasurementResult project_qubits(const PureState& state, std::span<const int> indices,
                                 std::span<const int> bits) {
  const int n = state.num_qubits();
  check_targets(indices, n);
  if (bits.size() != indices.size()) {
    throw std::invalid_argument("outcome bit count does not match measured qubits");
  }
  std::size_t wanted = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("outcome bits must be 0 or 1");
    wanted = (wanted << 1) | static_cast<std::size_t>(b);
  }
  std::vector<Complex> amps(state.dim());
  double p = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (gather(i, indices, n) == wanted) {
      amps[i] = state[i];
      p += state.probability(i);
    }
  }
  if (!(p > 0.0)) {
    throw std::domain_error("collapse onto a zero-probability outcome");
  }
  return {std::vector<int>(bits.begin(), bits.end()),
          PureState(std::move(amps), PureState::Normalization::kNormalize), p};
}

std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    last_nonzero = k;
    acc += weights[k];
    if (u < acc) return k;
  }
  return last_nonzero;
}

MeasurementResult measure_qubits(const PureState& state, std::span<const int> indices,
                                 Rng& rng) {
  const auto probs = outcome_probabilities(state, indices);
  const std::size_t k = sample_index(probs, rng);
  const int m = static_cast<int>(indices.size());
  std::vector<int> bits(m);
  for (int i = 0; i < m; ++i) bits[i] = static_cast<int>((k >> (m - 1 - i)) & 1U);
  return project_qubits(state, indices, bits);
}

}  // namespace pairsrc
