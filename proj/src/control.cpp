#include "pairsrc/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pairsrc {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool within_unit(double v) { return v >= -kBoundSlack && v <= 1.0 + kBoundSlack; }

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

const char* to_string(SteeringFailure failure) {
  switch (failure) {
    case SteeringFailure::kNegativePopulation: return "f00 >= 0 and f11 >= 0";
    case SteeringFailure::kProbabilityBound: return "f00 + f11 <= 1";
    case SteeringFailure::kDegenerate: return "cos(2 gamma) + 1 - f00 - f11 != 0";
    case SteeringFailure::kMismatchOutOfRange: return "0 <= sin^2(2 pi n delta) <= 1";
    case SteeringFailure::kMomentOutOfRange: return "0 <= C^2, S^2 <= 1";
  }
  return "unknown";
}

SteeringResult solve_ndelta(double gamma, double f00, double f11) {
  if (!std::isfinite(gamma) || !std::isfinite(f00) || !std::isfinite(f11)) {
    throw std::invalid_argument("steering inputs must be finite");
  }
  if (!(gamma > 0.0) || gamma > std::numbers::pi / 2 + kBoundSlack) {
    throw std::invalid_argument("steering needs gamma in (0, pi/2], got " + fmt(gamma));
  }
  if (f00 < 0.0 || f11 < 0.0) {
    return SteeringResult::fail(SteeringFailure::kNegativePopulation,
                                "f00=" + fmt(f00) + ", f11=" + fmt(f11));
  }
  if (f00 + f11 > 1.0 + kBoundSlack) {
    return SteeringResult::fail(SteeringFailure::kProbabilityBound,
                                "f00+f11=" + fmt(f00 + f11));
  }

  const double cg2 = std::pow(std::cos(gamma), 2);
  const double sg2 = std::pow(std::sin(gamma), 2);
  const double denom = std::cos(2.0 * gamma) + 1.0 - f00 - f11;
  if (std::abs(denom) <= kBoundSlack) {
    return SteeringResult::fail(SteeringFailure::kDegenerate, "denominator=" + fmt(denom));
  }
  const double s2 = (cg2 - f00) / denom;
  if (!within_unit(s2)) {
    return SteeringResult::fail(SteeringFailure::kMismatchOutOfRange,
                                "sin^2(2 pi n delta)=" + fmt(s2));
  }
  const double S2 = (1.0 - f00 - f11) / sg2;
  const double C2 = 1.0 - S2;
  if (!within_unit(S2) || !within_unit(C2)) {
    return SteeringResult::fail(SteeringFailure::kMomentOutOfRange,
                                "S^2=" + fmt(S2) + ", C^2=" + fmt(C2));
  }
  const double s2c = clamp_unit(s2);
  const double ndelta = std::asin(std::sqrt(s2c)) / (2.0 * std::numbers::pi);
  const double S2c = clamp_unit(S2);
  return SteeringResult::ok({s2c, ndelta, 1.0 - S2c, S2c});
}

RegionPoint feasible(double gamma, double f00, double f11) {
  auto r = solve_ndelta(gamma, f00, f11);
  return {f00, f11, r.maybe_solution()};
}

std::vector<RegionPoint> region_grid(double gamma, int resolution) {
  if (resolution < 2) throw std::invalid_argument("region resolution must be >= 2");
  const double last = static_cast<double>(resolution - 1);
  std::vector<RegionPoint> grid;
  grid.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    for (int k = 0; k < resolution; ++k) {
      // i/(R-1) rather than i*step keeps nodes such as 0.3 correctly rounded.
      grid.push_back(feasible(gamma, i / last, k / last));
    }
  }
  return grid;
}

EmissionEstimate infer_parameters(double f00, double f01, double f11, double ndelta) {
  if (!std::isfinite(f00) || !std::isfinite(f01) || !std::isfinite(f11) ||
      !std::isfinite(ndelta)) {
    throw std::invalid_argument("inference inputs must be finite");
  }
  if (std::abs(f00 + f01 + f11 - 1.0) > 1e-6) {
    throw std::invalid_argument("frequencies must sum to 1 (f00+f01+f11=" +
                                fmt(f00 + f01 + f11) + ")");
  }
  const double x = 2.0 * std::numbers::pi * ndelta;
  const double det = std::cos(2.0 * x);  // c^4 - s^4 = cos(4 pi n delta)
  if (std::abs(det) <= kSingularCos4) {
    throw SingularSystemError("singular inversion: |cos(4 pi n delta)| = " +
                              fmt(std::abs(det)));
  }
  const double c2 = std::pow(std::cos(x), 2);
  const double s2 = std::pow(std::sin(x), 2);
  const double a = (f00 * c2 - f11 * s2) / det;
  const double b = (f11 * c2 - f00 * s2) / det;
  if (!(a >= -1e-9 && a <= 1.0 + 1e-9)) {
    throw UnidentifiableError("inferred cos^2(gamma) = " + fmt(a) + " outside [0, 1]");
  }
  const double sin2_gamma = 1.0 - std::clamp(a, 0.0, 1.0);
  if (sin2_gamma < 1e-9) {
    throw UnidentifiableError("source carries no psi2 weight; C and S unidentifiable");
  }
  const double C2 = b / sin2_gamma;
  const double S2 = f01 / sin2_gamma;
  return {sin2_gamma, clamp_unit(C2), clamp_unit(S2), std::abs(C2 + S2 - 1.0)};
}

double infer_ndelta(double f00, double f11, double gamma) {
  const auto r = solve_ndelta(gamma, f00, f11);
  if (!r) {
    throw InferenceError(std::string("infeasible target: violated ") + to_string(r.failure()) +
                         " (" + r.detail() + ")");
  }
  return r.solution().ndelta_principal;
}

}  // namespace pairsrc
