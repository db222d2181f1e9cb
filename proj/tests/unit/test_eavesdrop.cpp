#include <array>
#include <cmath>
#include <numbers>

#include "qkd2e/eavesdrop.hpp"
#include "test_support.hpp"

using namespace qkd2e;
using namespace qkd2e::testing;

namespace {

constexpr double kPi = std::numbers::pi;

std::uint8_t measure(StateVector& s, std::size_t factor, const MeasurementBasis& b, Rng& rng) {
  const std::array<std::size_t, 1> sub{factor};
  Measurement m = partial_measure(s, kPairFactors, sub, b, rng.uniform());
  s = std::move(m.state);
  return static_cast<std::uint8_t>(m.outcome);
}

// Alice's marginal on `factor` averaged over every branch of Eve's
// measurement on Bob's photon.
std::vector<double> alice_marginal_after(const StateVector& psi, std::size_t alice_f,
                                         const MeasurementBasis& alice_b,
                                         std::span<const std::size_t> eve_sub,
                                         const MeasurementBasis& eve_b) {
  std::vector<double> out(alice_b.dim(), 0.0);
  const std::array<std::size_t, 1> a{alice_f};
  for (const auto& br : measurement_branches(psi, kPairFactors, eve_sub, eve_b)) {
    if (br.probability < kZeroProbability) continue;
    const StateVector c(br.collapsed, psi.label_set());
    const auto m = marginal_distribution(c, kPairFactors, a, alice_b);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += br.probability * m[k];
  }
  return out;
}

}  // namespace

TEST(Names, ParseRoundTrip) {
  for (Channel c : {Channel::single_pol, Channel::single_phase, Channel::double_dof}) {
    EXPECT_EQ(parse_channel(to_string(c)), c);
  }
  for (Strategy s : {Strategy::none, Strategy::fixed_basis, Strategy::breidbart,
                     Strategy::random_rotation}) {
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  }
  EXPECT_EQ(parse_strategy("so4"), Strategy::random_rotation);
  EXPECT_THROW(parse_strategy("mitm"), std::invalid_argument);
  EXPECT_THROW(parse_channel("triple"), std::invalid_argument);
}

TEST(Bases, MatchedBobPhasesAndBreidbartMidpoints) {
  const PartyBases bob = matched_bob_bases(PartyBases{}, 0.0);
  EXPECT_DOUBLE_EQ(bob.phase.first, 0.0);
  EXPECT_DOUBLE_EQ(bob.phase.second, -kPi / 2);
  EXPECT_DOUBLE_EQ(breidbart_angle(bob.pol), kPi / 8);
  EXPECT_DOUBLE_EQ(breidbart_angle(bob.phase), -kPi / 4);
}

TEST(Config, Validation) {
  EavesdropConfig c;
  c.strategy = Strategy::breidbart;
  c.eta = 1.5;
  EXPECT_THROW(c.validate(Channel::double_dof), std::invalid_argument);
  c.eta = 0.5;
  EXPECT_NO_THROW(c.validate(Channel::double_dof));
  c.strategy = Strategy::random_rotation;
  c.rotation_dim = 2;
  EXPECT_THROW(c.validate(Channel::double_dof), std::invalid_argument);
  c.rotation_dim = 0;
  EXPECT_EQ(c.effective_rotation_dim(Channel::double_dof), 4u);
  EXPECT_EQ(c.effective_rotation_dim(Channel::single_phase), 2u);
  c.strategy = Strategy::fixed_basis;
  c.fixed_choice = DofChoice{0, 2};
  EXPECT_THROW(c.validate(Channel::double_dof), std::invalid_argument);
}

// Eve in Bob's basis 0 learns Alice's basis-0 bit exactly and is blind in the
// conjugate basis.
TEST(FixedBasis, EveAliceErrorByBasis) {
  const StateVector psi = biphoton_state();
  const PartyBases alice{};
  const PartyBases bob = matched_bob_bases(alice, 0.0);
  for (Dof dof : {Dof::pol, Dof::phase}) {
    const Channel ch = dof == Dof::pol ? Channel::single_pol : Channel::single_phase;
    const auto d = static_cast<std::size_t>(dof);
    Rng rng(21 + d);
    std::array<int, 2> errors{};
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const std::uint8_t basis = i % 2;
      Interception hit = intercept_fixed(psi, ch, bob, {0, 0}, rng);
      StateVector s = hit.state;
      const std::uint8_t a = measure(s, alice_factor(dof), dof_basis(dof, alice[dof][basis]), rng);
      errors[basis] += hit.record.guess[d][basis] != a;
    }
    EXPECT_EQ(errors[0], 0);
    EXPECT_TRUE(within_binomial(errors[1] / (n / 2.0), 0.5, n / 2));
  }
}

TEST(Breidbart, SymmetricErrorInBothBases) {
  const StateVector psi = biphoton_state();
  const PartyBases alice{};
  const PartyBases bob = matched_bob_bases(alice, 0.0);
  const double q1 = (2.0 - std::numbers::sqrt2) / 4.0;
  for (Dof dof : {Dof::pol, Dof::phase}) {
    const auto d = static_cast<std::size_t>(dof);
    Rng rng(31 + d);
    std::array<int, 2> errors{};
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
      const std::uint8_t basis = i % 2;
      Interception hit = intercept_breidbart(psi, Channel::double_dof, bob, rng);
      StateVector s = hit.state;
      const std::uint8_t a = measure(s, alice_factor(dof), dof_basis(dof, alice[dof][basis]), rng);
      errors[basis] += hit.record.guess[d][basis] != a;
    }
    EXPECT_TRUE(within_binomial(errors[0] / (n / 2.0), q1, n / 2)) << to_string(dof);
    EXPECT_TRUE(within_binomial(errors[1] / (n / 2.0), q1, n / 2)) << to_string(dof);
  }
}

TEST(Breidbart, ExactEveAliceErrorFromBranches) {
  // P(Eve's outcome differs from Alice's at the same legitimate angle) computed
  // from the Born rule is sin^2(pi/8) for either basis.
  const StateVector psi = biphoton_state();
  const double q1 = (2.0 - std::numbers::sqrt2) / 4.0;
  const std::array<std::size_t, 2> sub{factor::alice_pol, factor::bob_pol};
  for (double alice_angle : {0.0, kPi / 4}) {
    const auto p = marginal_distribution(psi, kPairFactors, sub,
                                         tensor(pol_basis(alice_angle), pol_basis(kPi / 8)));
    EXPECT_NEAR(p[1] + p[2], q1, 1e-12);
  }
}

TEST(Interception, AliceMarginalUnchangedExactly) {
  const StateVector psi = biphoton_state({.pump_phase = 0.3});
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const double eve_angle = 2 * kPi * rng.uniform();
    const double alice_angle = 2 * kPi * rng.uniform();
    for (Dof dof : {Dof::pol, Dof::phase}) {
      const std::array<std::size_t, 1> eve_sub{bob_factor(dof)};
      const MeasurementBasis ab = dof_basis(dof, alice_angle);
      const auto before = marginal_distribution(
          psi, kPairFactors, std::array<std::size_t, 1>{alice_factor(dof)}, ab);
      const auto after = alice_marginal_after(psi, alice_factor(dof), ab, eve_sub,
                                              dof_basis(dof, eve_angle));
      EXPECT_NEAR(before[0], after[0], kInvariantTol);
    }
    // Whole-photon SO(4) measurement.
    const RotationMatrix r = haar_rotation(4, rng);
    const std::array<std::size_t, 2> photon{factor::bob_timebin, factor::bob_pol};
    const MeasurementBasis eb = rotate_basis(MeasurementBasis::computational(photon_labels()), r);
    const MeasurementBasis ab = pol_basis(alice_angle);
    const auto before = marginal_distribution(
        psi, kPairFactors, std::array<std::size_t, 1>{factor::alice_pol}, ab);
    const auto after = alice_marginal_after(psi, factor::alice_pol, ab, photon, eb);
    EXPECT_NEAR(before[0], after[0], kInvariantTol);
  }
}

TEST(Rotation, IdentitySo2EqualsFixedBasisZero) {
  const StateVector psi = biphoton_state();
  const PartyBases bob = matched_bob_bases(PartyBases{}, 0.0);
  Rng a(51), b(51);
  for (int i = 0; i < 200; ++i) {
    const Interception rot =
        intercept_rotated(psi, Channel::single_pol, bob, RotationMatrix::identity(2), a);
    const Interception fix = intercept_fixed(psi, Channel::single_pol, bob, {0, 0}, b);
    EXPECT_EQ(rot.state, fix.state);
    EXPECT_EQ(rot.record.guess[0][0], fix.record.guess[0][0]);
  }
}

TEST(Rotation, So4RecordsGuessesForBothDofs) {
  const StateVector psi = biphoton_state();
  const PartyBases bob = matched_bob_bases(PartyBases{}, 0.0);
  Rng rng(52);
  const Interception hit = intercept_random_rotation(psi, Channel::double_dof, bob, 4, rng);
  EXPECT_EQ(hit.record.basis, "so4");
  ASSERT_EQ(hit.record.outcomes.size(), 1u);
  EXPECT_LT(hit.record.outcomes[0], 4u);
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t b = 0; b < 2; ++b) EXPECT_GE(hit.record.guess[d][b], 0);
  }
  EXPECT_NEAR(hit.state.norm(), 1.0, kInvariantTol);
  EXPECT_THROW(intercept_random_rotation(psi, Channel::single_pol, bob, 4, rng),
               std::invalid_argument);
  EXPECT_THROW(intercept_random_rotation(psi, Channel::double_dof, bob, 2, rng),
               std::invalid_argument);
}

TEST(ApplyStrategy, EtaExtremes) {
  const StateVector psi = biphoton_state();
  const PartyBases bob = matched_bob_bases(PartyBases{}, 0.0);
  EavesdropConfig c;
  c.strategy = Strategy::breidbart;
  Rng rng(61);
  c.eta = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto out = apply_strategy(c, psi, Channel::double_dof, bob, {0, 0}, rng);
    EXPECT_FALSE(out.record.has_value());
    EXPECT_EQ(out.state, psi);
  }
  c.eta = 1.0;
  for (int i = 0; i < 50; ++i) {
    EXPECT_TRUE(apply_strategy(c, psi, Channel::double_dof, bob, {0, 0}, rng).record);
  }
}
