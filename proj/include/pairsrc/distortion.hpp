// Heisenberg exchange distortion of a spin pair and the post-control states.
//
// Units: hbar = 1, so energies and inverse times share a unit.

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "pairsrc/source.hpp"
#include "pairsrc/statevec.hpp"

namespace pairsrc {

struct FieldParams {
  double J = 0.0;   // exchange coupling
  double B1 = 0.0;  // local field on spin 1
  double B2 = 0.0;  // local field on spin 2

  double b_minus() const { return B1 - B2; }
};

/// 4x4 matrix in the computational basis |00>,|01>,|10>,|11>.
struct HamiltonianMatrix {
  std::array<std::array<Complex, 4>, 4> entries{};

  const Complex& operator()(int r, int c) const { return entries[r][c]; }
  bool is_hermitian(double tol = 1e-12) const;
  /// Largest |entry| outside the {|00>,|11>} and {|01>,|10>} blocks.
  double off_block_magnitude() const;
};

/// H = -J (XX + YY + ZZ) + B1 Z(x)I + B2 I(x)Z.
HamiltonianMatrix hamiltonian(const FieldParams& fp);

/// exp(-i H t) applied to a 2-qubit state. H splits into a diagonal
/// {|00>,|11>} block and a real symmetric {|01>,|10>} block, each
/// exponentiated in closed form.
PureState evolve(const PureState& state, const FieldParams& fp, double t);

/// j = J / sqrt(B_-^2 + 4 J^2), in (-1/2, 1/2]. Throws std::domain_error
/// when J = 0 and B1 = B2.
double j_parameter(const FieldParams& fp);

struct RationalApprox {
  std::int64_t num;
  std::int64_t den;
  double delta;  // j - num/den
};

inline constexpr std::int64_t kMaxDenominator = 2147483647;

/// Best rational approximation num/den to j with 1 <= den <= max_den: no
/// fraction with a denominator in range lies strictly closer to j. Ties go to
/// the last continued-fraction convergent. Computed on the exact binary
/// value of j, so the result is optimal for the double actually passed in.
RationalApprox rational_approx(double j, std::int64_t max_den);

/// Small-field estimate -B_-^2 / (4 J^2) of the mismatch, reported as
/// stated; the leading term of j - 1/2 is -B_-^2 / (16 J^2).
double small_mismatch_estimate(const FieldParams& fp);

struct KnobProvenance {
  double j;
  std::int64_t q_num;
  std::int64_t q_den;
};

/// Control parameter pair (n, delta). Only the product n*delta enters the
/// post-control states and populations.
class ControlKnob {
 public:
  ControlKnob() = default;
  /// Directly specified mismatch. Requires |delta| <= 1/2.
  ControlKnob(std::uint64_t n, double delta);

  /// Derives delta = j - Q(j) from the fields and a denominator bound.
  static ControlKnob from_fields(std::uint64_t n, const FieldParams& fp,
                                 std::int64_t max_den);

  std::uint64_t n() const { return n_; }
  double delta() const { return delta_; }
  double ndelta() const { return static_cast<double>(n_) * delta_; }
  const std::optional<KnobProvenance>& provenance() const { return provenance_; }

 private:
  std::uint64_t n_ = 0;
  double delta_ = 0.0;
  std::optional<KnobProvenance> provenance_;
};

/// (1 + i e^{ix} sin x) beta00 - i e^{ix} sin x beta10 with x = 2 pi n delta.
PureState controlled_psi1(const ControlKnob& knob);

/// sin(theta) beta01 - e^{ix} cos x cos(theta) beta10
///   + i e^{ix} sin x cos(theta) beta00, x = 2 pi n delta.
PureState controlled_psi2(double theta, const ControlKnob& knob);

/// The emission superposition with each species replaced by its
/// post-control form. raw_norm does not depend on the knob.
EmissionState controlled_emission(const SourceSpec& spec, const ControlKnob& knob);

}  // namespace pairsrc
