// Population steering and parameter inference from measured populations.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pairsrc {

/// Bounds checks on steering quantities allow this much rounding slack;
/// accepted values are then clamped into range.
inline constexpr double kBoundSlack = 1e-12;

struct SteeringSolution {
  double s_squared;           // sin^2(2 pi n delta)
  double ndelta_principal;    // in [0, 1/4]
  double required_C_squared;
  double required_S_squared;
};

enum class SteeringFailure {
  kNegativePopulation,    // f00 < 0 or f11 < 0
  kProbabilityBound,      // f00 + f11 > 1
  kDegenerate,            // cos 2g + 1 - f00 - f11 = 0
  kMismatchOutOfRange,    // sin^2(2 pi n delta) outside [0, 1]
  kMomentOutOfRange,      // required C^2 or S^2 outside [0, 1]
};

const char* to_string(SteeringFailure failure);

/// Either a solution or the first violated bound; infeasibility is data.
class SteeringResult {
 public:
  static SteeringResult ok(SteeringSolution s) { return SteeringResult(s, {}, {}); }
  static SteeringResult fail(SteeringFailure f, std::string detail) {
    return SteeringResult({}, f, std::move(detail));
  }

  explicit operator bool() const { return solution_.has_value(); }
  const SteeringSolution& solution() const { return solution_.value(); }
  const std::optional<SteeringSolution>& maybe_solution() const { return solution_; }
  SteeringFailure failure() const { return failure_.value(); }
  const std::string& detail() const { return detail_; }

 private:
  SteeringResult(std::optional<SteeringSolution> s, std::optional<SteeringFailure> f,
                 std::string detail)
      : solution_(s), failure_(f), detail_(std::move(detail)) {}

  std::optional<SteeringSolution> solution_;
  std::optional<SteeringFailure> failure_;
  std::string detail_;
};

/// Mismatch that steers the source toward target f00, f11:
///   sin^2(2 pi n delta) = (cos^2 g - f00) / (cos 2g + 1 - f00 - f11)
/// with the moment the targets demand, S^2 = (1 - f00 - f11) / sin^2 g and
/// C^2 = 1 - S^2. The principal branch n delta in [0, 1/4] is returned;
/// other solutions are k/2 +- n delta.
///
/// Throws std::invalid_argument when gamma is outside (0, pi/2] or an input
/// is not finite. Violated bounds come back as a failed SteeringResult.
SteeringResult solve_ndelta(double gamma, double f00, double f11);

struct RegionPoint {
  double f00_target;
  double f11_target;
  std::optional<SteeringSolution> solution;

  bool feasible() const { return solution.has_value(); }
};

RegionPoint feasible(double gamma, double f00, double f11);

/// feasible() over the uniform resolution x resolution grid on [0,1]^2,
/// f00 = i/(R-1) on rows, f11 = k/(R-1) within a row.
std::vector<RegionPoint> region_grid(double gamma, int resolution);

struct EmissionEstimate {
  double sin2_gamma;
  double C_squared;
  double S_squared;
  double residual;  // |C^2 + S^2 - 1| before clamping
};

class InferenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// |cos 4 pi n delta| too small: f00 and f11 do not separate the source terms.
class SingularSystemError : public InferenceError {
 public:
  using InferenceError::InferenceError;
};

/// The data imply cos^2 gamma outside [0, 1] or a source with no psi2 weight.
class UnidentifiableError : public InferenceError {
 public:
  using InferenceError::InferenceError;
};

inline constexpr double kSingularCos4 = 1e-9;

/// Inverts f00 = a c^2 + b s^2, f11 = a s^2 + b c^2 for a = cos^2 g and
/// b = sin^2 g C^2, with c^2 = cos^2(2 pi n delta), s^2 = sin^2(2 pi n delta).
/// Frequencies must sum to 1 within 1e-6 (std::invalid_argument otherwise).
/// Estimates outside [0, 1] by sampling noise are clamped; the residual is
/// computed from the unclamped moments.
EmissionEstimate infer_parameters(double f00, double f01, double f11, double ndelta);

/// Principal n delta that reproduces (f00, f11) at the given gamma. Throws
/// InferenceError when the target is infeasible.
double infer_ndelta(double f00, double f11, double gamma);

}  // namespace pairsrc
