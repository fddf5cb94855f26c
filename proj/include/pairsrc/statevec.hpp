// Dense complex state-vector algebra for registers of 1 to 4 qubits.
//
// Qubit 0 is the leftmost ket position and the most significant bit of the
// amplitude index: for |q0 q1 q2> the amplitude index is q0*4 + q1*2 + q2.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace pairsrc {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 4;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kUnitaryTolerance = 1e-12;

/// 64-bit seeded deterministic random stream.
///
/// Uniform variates are built from the raw mt19937_64 output rather than
/// std::uniform_real_distribution so a seed yields the same sequence on
/// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

class PureState {
 public:
  enum class Normalization { kRequireUnit, kNormalize };

  /// Rejects vectors whose squared norm differs from 1 by more than
  /// kNormTolerance unless kNormalize is requested. Zero vectors are
  /// always rejected.
  explicit PureState(std::vector<Complex> amplitudes,
                     Normalization mode = Normalization::kRequireUnit);

  static PureState basis(int num_qubits, std::size_t index);
  /// Computational basis state from a bit string such as "0110".
  static PureState from_bits(std::string_view bits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  double probability(std::size_t i) const { return std::norm(amplitudes_[i]); }
  double norm_squared() const;

 private:
  int num_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

/// Square unitary matrix on 2^k dimensions, k in 1..4. Row-major storage.
class UnitaryMatrix {
 public:
  /// Throws std::invalid_argument unless entries.size() == dim*dim, dim is a
  /// supported power of two, and U U^dagger = I within kUnitaryTolerance.
  UnitaryMatrix(std::size_t dim, std::vector<Complex> entries);

  static UnitaryMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  int num_qubits() const;
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  std::span<const Complex> entries() const { return entries_; }

  UnitaryMatrix adjoint() const;
  /// Maximum entry-wise deviation of U U^dagger from the identity.
  double unitarity_defect() const;

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

 private:
  struct Unchecked {};
  UnitaryMatrix(std::size_t dim, std::vector<Complex> entries, Unchecked);

  std::size_t dim_;
  std::vector<Complex> entries_;

  friend UnitaryMatrix kron(const UnitaryMatrix& a, const UnitaryMatrix& b);
  friend UnitaryMatrix embed(const UnitaryMatrix& u, std::span<const int> targets,
                             int num_qubits);
};

UnitaryMatrix kron(const UnitaryMatrix& a, const UnitaryMatrix& b);

/// Lifts u acting on `targets` to the full num_qubits register.
UnitaryMatrix embed(const UnitaryMatrix& u, std::span<const int> targets, int num_qubits);

namespace gates {
UnitaryMatrix pauli_x();
UnitaryMatrix pauli_y();
UnitaryMatrix pauli_z();
UnitaryMatrix hadamard();
/// Control is the first target, the flipped qubit the second.
UnitaryMatrix cnot();
}  // namespace gates

struct BellLabel {
  int a = 0;
  int b = 0;

  /// Position in the ordering beta00, beta01, beta10, beta11.
  constexpr int index() const { return 2 * a + b; }
  static constexpr BellLabel from_index(int i) { return {i >> 1, i & 1}; }
  friend constexpr bool operator==(BellLabel, BellLabel) = default;
};

inline constexpr std::array<BellLabel, 4> kBellLabels = {
    BellLabel{0, 0}, BellLabel{0, 1}, BellLabel{1, 0}, BellLabel{1, 1}};

/// b00 = (|00>+|11>)/sqrt2, b01 = (|01>+|10>)/sqrt2,
/// b10 = (|00>-|11>)/sqrt2, b11 = (|01>-|10>)/sqrt2.
PureState bell_state(BellLabel label);

/// c_ab = <beta_ab|state>, indexed by BellLabel::index().
std::array<Complex, 4> bell_coefficients(const PureState& state);

/// Inverse of bell_coefficients; the coefficient vector must be normalized.
PureState from_bell_coefficients(const std::array<Complex, 4>& coefficients);

Complex inner(const PureState& bra, const PureState& ket);

PureState tensor(const PureState& a, const PureState& b);

PureState apply_unitary(const PureState& state, const UnitaryMatrix& u,
                        std::span<const int> targets);
PureState apply_unitary(const PureState& state, const UnitaryMatrix& u,
                        std::initializer_list<int> targets);

/// |<a|b>|, equal to 1 iff the states agree up to a global phase.
double fidelity_up_to_phase(const PureState& a, const PureState& b);

struct MeasurementResult {
  std::vector<int> bits;  // one per measured index, in request order
  PureState collapsed;
  double probability;
};

/// Born weights of every outcome on `indices`. Outcome k assigns bit
/// (k >> (m-1-i)) & 1 to indices[i], m = indices.size().
std::vector<double> outcome_probabilities(const PureState& state,
                                          std::span<const int> indices);

/// Projects onto a fixed outcome. Throws std::domain_error when that outcome
/// has zero probability.
MeasurementResult project_qubits(const PureState& state, std::span<const int> indices,
                                 std::span<const int> bits);

/// Samples a computational-basis outcome on `indices` by the Born rule.
MeasurementResult measure_qubits(const PureState& state, std::span<const int> indices,
                                 Rng& rng);

/// Picks an index from a discrete distribution using one uniform draw.
std::size_t sample_index(std::span<const double> weights, Rng& rng);

}  // namespace pairsrc
