#include <cmath>
#include <complex>
#include <numbers>

#include "qkd2e/entangled_source.hpp"
#include "test_support.hpp"

using namespace qkd2e;
using namespace qkd2e::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form Franson oracle: with time-bin part (|ss> + e^{i phi}|ll>)/sqrt 2
// and analyzers (|s> +- e^{i theta}|l>)/sqrt 2, the outcome amplitude is
// (1 + s_a s_b e^{i(phi - alpha - beta)}) / (2 sqrt 2).
double franson_same_oracle(double phi, double alpha, double beta) {
  double p_same = 0.0;
  for (int sa : {1, -1}) {
    for (int sb : {1, -1}) {
      const std::complex<double> amp =
          (1.0 + double(sa * sb) * std::polar(1.0, phi - alpha - beta)) / (2.0 * std::sqrt(2.0));
      if (sa == sb) p_same += std::norm(amp);
    }
  }
  return p_same;
}

}  // namespace

TEST(Labels, PairLayout) {
  ASSERT_EQ(photon_labels().size(), 4u);
  EXPECT_EQ(photon_labels()[0], "sH");
  EXPECT_EQ(photon_labels()[3], "lV");
  ASSERT_EQ(pair_labels().size(), 16u);
  EXPECT_EQ(pair_labels()[0], "sH⊗sH");
  EXPECT_EQ(pair_labels()[15], "lV⊗lV");
}

TEST(Source, PumpSuperpositionNormalized) {
  const StateVector p = pump_superposition(0.4);
  EXPECT_NEAR(p.norm(), 1.0, kInvariantTol);
  EXPECT_NEAR(std::arg(p[1]), 0.4, 1e-12);
}

TEST(Source, BiphotonAmplitudes) {
  const StateVector s = biphoton_state({.pump_phase = kPi / 3});
  EXPECT_NEAR(s.norm(), 1.0, kInvariantTol);
  EXPECT_NEAR(std::abs(s[s.index_of("sH⊗sH")]), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(s[s.index_of("sV⊗sV")]), 0.5, 1e-12);
  EXPECT_NEAR(std::arg(s[s.index_of("lH⊗lH")]), kPi / 3, 1e-12);
  EXPECT_NEAR(std::abs(s[s.index_of("sH⊗sV")]), 0.0, 1e-15);
}

TEST(Source, NormalizedOverParameterGridProperty) {
  for (double wh = 0.0; wh <= 1.0; wh += 0.125) {
    for (double ws = 0.0; ws <= 1.0; ws += 0.125) {
      const StateVector s = biphoton_state({0.7, wh, ws});
      EXPECT_NEAR(s.norm(), 1.0, kInvariantTol);
    }
  }
}

TEST(Source, RejectsInvalidWeights) {
  EXPECT_THROW(biphoton_state({0.0, 1.2, 0.5}), std::invalid_argument);
  EXPECT_THROW(biphoton_state({0.0, 0.5, -0.1}), std::invalid_argument);
  EXPECT_THROW(biphoton_state({std::nan(""), 0.5, 0.5}), std::invalid_argument);
}

TEST(Source, DiagonalBasisFormInvariance) {
  for (double phi : {0.0, 0.5, kPi}) {
    const auto r = basis_invariance_check({.pump_phase = phi});
    EXPECT_TRUE(r.holds) << "phi=" << phi << " residual=" << r.residual;
  }
  // Unequal polarization weights break the invariance.
  EXPECT_FALSE(basis_invariance_check({0.0, 0.9, std::sqrt(0.5)}).holds);
}

TEST(Analyzers, BasesAreOrthonormal) {
  for (double a : {0.0, 0.3, kPi / 4, 2.0}) {
    for (const MeasurementBasis& b : {pol_basis(a), phase_basis(a)}) {
      EXPECT_NEAR(std::abs(inner(b[0], b[1])), 0.0, kInvariantTol);
      EXPECT_NEAR(b[0].norm(), 1.0, kInvariantTol);
    }
  }
  const MeasurementBasis pb = photon_basis({0.2, 0.9});
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(std::abs(inner(pb[i], pb[j])), i == j ? 1.0 : 0.0, kInvariantTol);
    }
  }
  EXPECT_THROW(pol_basis(INFINITY), std::invalid_argument);
}

TEST(Franson, MatchesClosedFormOracleOnGrid) {
  for (double phi = 0.0; phi < 2 * kPi; phi += 0.7) {
    for (double a = 0.0; a < 2 * kPi; a += 0.9) {
      for (double b = 0.0; b < 2 * kPi; b += 1.1) {
        const auto c = franson_coincidence({phi, a, b});
        EXPECT_NEAR(c.p_same, franson_same_oracle(phi, a, b), kInvariantTol);
        EXPECT_NEAR(c.p_same + c.p_different, 1.0, kInvariantTol);
      }
    }
  }
}

TEST(Franson, MatchedBobPhaseGivesPerfectCorrelation) {
  for (double phi : {0.0, 0.4, 2.5}) {
    for (double a : {0.0, kPi / 2}) {
      EXPECT_NEAR(franson_coincidence({phi, a, matched_bob_phase(phi, a)}).p_same, 1.0,
                  kInvariantTol);
    }
  }
}

// Polarization correlation against a 4-dim density-matrix oracle on the
// reduced pol state (|HH> + |VV>)/sqrt 2.
TEST(Polarization, SameAngleCorrelationOracle) {
  const StateVector s = biphoton_state();
  CMatrix bell = CMatrix::Zero(4, 1);
  bell(0, 0) = bell(3, 0) = std::sqrt(0.5);
  const CMatrix rho = bell * bell.adjoint();
  for (double a : {0.0, 0.3, kPi / 4, 1.2}) {
    const MeasurementBasis pb = pol_basis(a);
    const std::array<std::size_t, 2> sub{factor::alice_pol, factor::bob_pol};
    const auto p = marginal_distribution(s, kPairFactors, sub, tensor(pb, pb));
    const double oracle = trace_real(kron(projector(pb[0]), projector(pb[0])) * rho) +
                          trace_real(kron(projector(pb[1]), projector(pb[1])) * rho);
    EXPECT_NEAR(p[0] + p[3], oracle, kInvariantTol);
    EXPECT_NEAR(oracle, 1.0, kInvariantTol);
  }
}
