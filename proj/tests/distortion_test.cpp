#include "pairsrc/distortion.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace pairsrc;
using pairsrc::testing::kPi;
using pairsrc::testing::max_abs_diff;
using pairsrc::testing::random_state;

// ---------- hamiltonian ----------

TEST(Hamiltonian, PureExchange) {
  const auto h = hamiltonian({1.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(h(0, 0).real(), -1.0);
  EXPECT_DOUBLE_EQ(h(1, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(h(2, 2).real(), 1.0);
  EXPECT_DOUBLE_EQ(h(3, 3).real(), -1.0);
  EXPECT_DOUBLE_EQ(h(1, 2).real(), -2.0);
  EXPECT_DOUBLE_EQ(h(2, 1).real(), -2.0);
}

TEST(Hamiltonian, PureFields) {
  const auto h = hamiltonian({0.0, 1.0, -1.0});
  const double diag[4] = {0.0, 2.0, -2.0, 0.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_DOUBLE_EQ(std::abs(h(i, j)), i == j ? std::abs(diag[i]) : 0.0);
  EXPECT_DOUBLE_EQ(h(1, 1).real(), 2.0);
  EXPECT_DOUBLE_EQ(h(2, 2).real(), -2.0);
}

TEST(Hamiltonian, SingletEigenvalueWithUniformField) {
  const FieldParams fp{0.7, 0.3, 0.3};
  const auto h = hamiltonian(fp);
  const auto singlet = bell_state({1, 1});
  for (int i = 0; i < 4; ++i) {
    Complex hv = 0.0;
    for (int j = 0; j < 4; ++j) hv += h(i, j) * singlet[j];
    EXPECT_NEAR(std::abs(hv - 3.0 * fp.J * singlet[i]), 0.0, 1e-14);
  }
}

TEST(Hamiltonian, HermitianAndBlockDiagonal) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto h =
        hamiltonian({rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)});
    EXPECT_TRUE(h.is_hermitian(1e-12));
    EXPECT_LE(h.off_block_magnitude(), 1e-12);
  }
}

// ---------- evolve ----------

TEST(Evolve, ZeroTimeIsIdentity) {
  Rng rng(1);
  const auto s = random_state(2, rng);
  EXPECT_LT(max_abs_diff(evolve(s, {1.3, 0.2, -0.4}, 0.0), s), 1e-15);
}

TEST(Evolve, Beta01StationaryWithoutGradient) {
  const auto b01 = bell_state({0, 1});
  for (double t : {0.1, 0.9, 3.7, 12.0}) {
    const auto out = evolve(b01, {0.8, 0.5, 0.5}, t);
    EXPECT_NEAR(fidelity_up_to_phase(out, b01), 1.0, 1e-12);
  }
}

TEST(Evolve, UniformFieldMixesBeta00AndBeta10) {
  // Expected coefficients frozen from an independent dense matrix
  // exponential of the 4x4 Hamiltonian (J=1, B1=1, B2=0, t=0.7).
  const auto out = evolve(bell_state({0, 0}), {1.0, 1.0, 0.0}, 0.7);
  const auto c = bell_coefficients(out);
  EXPECT_NEAR(c[0].real(), 0.5849835714501204, 1e-12);
  EXPECT_NEAR(c[0].imag(), 0.49272486499422996, 1e-12);
  EXPECT_NEAR(c[2].real(), 0.41501642854987936, 1e-12);
  EXPECT_NEAR(c[2].imag(), -0.49272486499422996, 1e-12);
  EXPECT_GT(std::abs(c[2]), 0.1);
  EXPECT_NEAR(std::norm(c[0]) + std::norm(c[2]), 1.0, 1e-12);
}

TEST(Evolve, MatchesTaylorSeriesOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const FieldParams fp{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double hnorm = pairsrc::testing::frobenius(hamiltonian(fp));
    const double t = rng.uniform(-1, 1) * 10.0 / hnorm;
    const auto s = random_state(2, rng);
    const auto expected = pairsrc::testing::apply(pairsrc::testing::taylor_expm(hamiltonian(fp), t), s);
    const auto got = evolve(s, fp, t);
    for (int i = 0; i < 4; ++i) {
      ASSERT_LT(std::abs(got[i] - expected[i]), 1e-10) << "trial " << trial;
    }
    EXPECT_NEAR(got.norm_squared(), 1.0, 1e-12);
  }
}

TEST(Evolve, SemigroupProperty) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const FieldParams fp{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double t1 = rng.uniform(-3, 3);
    const double t2 = rng.uniform(-3, 3);
    const auto s = random_state(2, rng);
    EXPECT_LT(max_abs_diff(evolve(s, fp, t1 + t2), evolve(evolve(s, fp, t1), fp, t2)), 1e-12);
  }
}

TEST(Evolve, NeedsTwoQubits) {
  EXPECT_THROW(evolve(PureState::basis(1, 0), {1, 0, 0}, 1.0), std::invalid_argument);
}

// ---------- j and Q(j) ----------

TEST(JParameter, Values) {
  EXPECT_DOUBLE_EQ(j_parameter({1.0, 0.4, 0.4}), 0.5);
  EXPECT_NEAR(j_parameter({1.0, 2.0 * std::sqrt(3.0), 0.0}), 0.25, 1e-15);
  const FieldParams fp{0.9, 1.7, -0.2};
  const FieldParams scaled{0.9 * 3.5, 1.7 * 3.5, -0.2 * 3.5};
  EXPECT_NEAR(j_parameter(fp), j_parameter(scaled), 1e-15);
  EXPECT_THROW(j_parameter({0.0, 1.0, 1.0}), std::domain_error);
  EXPECT_DOUBLE_EQ(j_parameter({0.0, 1.0, 0.0}), 0.0);
}

TEST(JParameter, RangeIsHalfOpenHalfInterval) {
  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const double j = j_parameter({rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)});
    EXPECT_GT(j, -0.5);
    EXPECT_LE(j, 0.5);
  }
}

TEST(RationalApprox, ExactHalf) {
  const auto r = rational_approx(0.5, 10);
  EXPECT_EQ(r.num, 1);
  EXPECT_EQ(r.den, 2);
  EXPECT_EQ(r.delta, 0.0);
}

TEST(RationalApprox, NearHalf) {
  const auto r = rational_approx(0.49, 10);
  EXPECT_EQ(r.num, 1);
  EXPECT_EQ(r.den, 2);
  EXPECT_NEAR(r.delta, -0.01, 1e-15);
}

TEST(RationalApprox, InversePi) {
  // Exhaustive search over denominators <= 120 picks 7/22.
  const auto oracle = pairsrc::testing::brute_force_best(1.0 / kPi, 120);
  EXPECT_EQ(oracle.num, 7);
  EXPECT_EQ(oracle.den, 22);
  const auto r = rational_approx(1.0 / kPi, 120);
  EXPECT_EQ(r.num, 7);
  EXPECT_EQ(r.den, 22);
  EXPECT_NEAR(r.delta, 1.0 / kPi - 7.0 / 22.0, 1e-16);
}

TEST(RationalApprox, NegativeAndTinyValues) {
  const auto r = rational_approx(-0.3183098861837907, 120);
  EXPECT_EQ(r.num, -7);
  EXPECT_EQ(r.den, 22);
  const auto z = rational_approx(1e-15, 1000);
  EXPECT_EQ(z.num, 0);
  EXPECT_EQ(z.den, 1);
  EXPECT_DOUBLE_EQ(z.delta, 1e-15);
}

TEST(RationalApprox, LargeDenominatorBound) {
  const auto r = rational_approx(1.0 / kPi, 2147483647);
  EXPECT_GT(r.den, 1000000);
  EXPECT_LT(std::abs(r.delta), 1.0 / (static_cast<double>(r.den) * 2147483647.0) * 1.0001);
}

TEST(RationalApprox, BestNeedNotMeetPerDenominatorBound) {
  const auto r = rational_approx(-0.2, 3);
  EXPECT_EQ(r.num, -1);
  EXPECT_EQ(r.den, 3);
  EXPECT_GT(std::abs(r.delta), 1.0 / (3.0 * 3.0));
}

TEST(RationalApprox, Errors) {
  EXPECT_THROW(rational_approx(0.6, 10), std::invalid_argument);
  EXPECT_THROW(rational_approx(0.2, 0), std::invalid_argument);
}

TEST(RationalApprox, NeverBeatenByExhaustiveSearch) {
  Rng rng(404);
  for (int trial = 0; trial < 2000; ++trial) {
    const double j = rng.uniform(-0.5, 0.5);
    const std::int64_t max_den = 1 + static_cast<std::int64_t>(rng.next() % 50);
    const auto r = rational_approx(j, max_den);
    const auto best = pairsrc::testing::brute_force_best(j, max_den);
    ASSERT_LE(pairsrc::testing::compare_distance({r.num, r.den}, best, j), 0)
        << "j=" << j << " max_den=" << max_den;
    ASSERT_LE(r.den, max_den);
    // Some q <= N lies within 1/(q (N+1)) of j, so the best one is within 1/(N+1).
    EXPECT_LE(std::abs(r.delta), 1.0 / static_cast<double>(max_den + 1) + 1e-16);
    EXPECT_NEAR(r.delta, j - static_cast<double>(r.num) / static_cast<double>(r.den), 1e-15);
  }
}

TEST(SmallMismatch, Estimate) {
  EXPECT_DOUBLE_EQ(small_mismatch_estimate({1.0, 0.3, 0.3}), 0.0);
  EXPECT_NEAR(small_mismatch_estimate({1.0, 0.2, 0.0}), -0.01, 1e-15);
  EXPECT_THROW(small_mismatch_estimate({0.0, 0.2, 0.0}), std::domain_error);
}

TEST(SmallMismatch, ExactMismatchDiffersFromEstimate) {
  // 1/sqrt(4.04) - 1/2 against its binomial series in B^2.
  const double exact = j_parameter({1.0, 0.2, 0.0}) - 0.5;
  EXPECT_NEAR(exact, -0.002481404895005368, 1e-15);
  EXPECT_NEAR(exact, -0.04 / 16 + 3 * 0.0016 / 256 - 5 * 0.000064 / 2048, 1e-8);
  EXPECT_GT(std::abs(exact - small_mismatch_estimate({1.0, 0.2, 0.0})), 0.007);
}

// ---------- knob ----------

TEST(ControlKnob, DirectAndDerived) {
  const ControlKnob k(3, 0.05);
  EXPECT_DOUBLE_EQ(k.ndelta(), 0.15000000000000002);
  EXPECT_FALSE(k.provenance().has_value());
  EXPECT_THROW(ControlKnob(1, 0.7), std::invalid_argument);

  const auto d = ControlKnob::from_fields(2, {1.0, 0.2, 0.0}, 10);
  ASSERT_TRUE(d.provenance().has_value());
  EXPECT_EQ(d.provenance()->q_num, 1);
  EXPECT_EQ(d.provenance()->q_den, 2);
  EXPECT_NEAR(d.delta(),
              d.provenance()->j - static_cast<double>(d.provenance()->q_num) /
                                      static_cast<double>(d.provenance()->q_den),
              1e-15);
}

// ---------- post-control states ----------

TEST(ControlledPsi1, ZeroMismatchIsBeta00) {
  EXPECT_LT(max_abs_diff(controlled_psi1(ControlKnob(5, 0.0)), bell_state({0, 0})), 1e-15);
}

TEST(ControlledPsi1, QuarterMismatchIsBeta10UpToPhase) {
  EXPECT_NEAR(fidelity_up_to_phase(controlled_psi1(ControlKnob(1, 0.25)), bell_state({1, 0})),
              1.0, 1e-12);
}

TEST(ControlledPsi1, OverlapWithBeta00) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto knob = pairsrc::testing::random_knob(rng);
    const double expected = std::abs(std::cos(2 * kPi * knob.ndelta()));
    EXPECT_NEAR(std::abs(inner(bell_state({0, 0}), controlled_psi1(knob))), expected, 1e-12);
  }
}

TEST(ControlledPsi1, MatchesFactoredForm) {
  // e^{ix} (cos x beta00 - i sin x beta10)
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto knob = pairsrc::testing::random_knob(rng);
    const double x = 2 * kPi * knob.ndelta();
    const Complex e = std::polar(1.0, x);
    const auto ref =
        from_bell_coefficients({e * std::cos(x), 0.0, -Complex(0, 1) * e * std::sin(x), 0.0});
    EXPECT_LT(max_abs_diff(controlled_psi1(knob), ref), 1e-12);
  }
}

TEST(ControlledPsi2, ReducesToPsi2) {
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const double t = rng.uniform(-kPi, kPi);
    EXPECT_LT(max_abs_diff(controlled_psi2(t, ControlKnob(4, 0.0)), psi2(t)), 1e-12);
    EXPECT_LT(max_abs_diff(controlled_psi2(kPi / 2, pairsrc::testing::random_knob(rng)),
                           bell_state({0, 1})),
              1e-12);
  }
}

TEST(ControlledStates, UnitNormAndOrthogonal) {
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const auto knob = pairsrc::testing::random_knob(rng);
    const double t = rng.uniform(-kPi, kPi);
    const auto a = controlled_psi1(knob);
    const auto b = controlled_psi2(t, knob);
    EXPECT_NEAR(a.norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(b.norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(inner(a, b)), 0.0, 1e-12);
  }
}

TEST(ControlledEmission, ZeroKnobEqualsEmittedState) {
  Rng rng(15);
  for (int i = 0; i < 100; ++i) {
    const auto spec = pairsrc::testing::random_spec(rng);
    const auto a = controlled_emission(spec, ControlKnob(1, 0.0));
    const auto b = emitted_state(spec);
    EXPECT_LT(max_abs_diff(a.state, b.state), 1e-12);
    EXPECT_NEAR(a.raw_norm, b.raw_norm, 1e-12);
  }
}

TEST(ControlledEmission, WorkedExample) {
  const auto spec = SourceSpec::from_primary(kPi / 4, 1.0, kPi / 2);
  const auto e = controlled_emission(spec, ControlKnob(1, 0.125));
  const auto c = bell_coefficients(e.state);
  EXPECT_NEAR(std::norm(c[0]), 0.25, 1e-12);
  EXPECT_NEAR(std::norm(c[1]), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(c[2]), 0.25, 1e-12);
  EXPECT_NEAR(std::norm(c[3]), 0.0, 1e-12);
}

TEST(ControlledEmission, RawNormIsKnobIndependent) {
  Rng rng(16);
  const auto spec = SourceSpec::from_primary(1.1, 0.6, 0.4);
  const double expected = emission_raw_norm(spec);
  for (int i = 0; i < 100; ++i) {
    EXPECT_NEAR(controlled_emission(spec, pairsrc::testing::random_knob(rng)).raw_norm, expected,
                1e-12);
  }
}
