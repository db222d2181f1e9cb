#include <cmath>
#include <numbers>

#include "qkd2e/info_analysis.hpp"
#include "qkd2e/protocol.hpp"
#include "test_support.hpp"

using namespace qkd2e;
using namespace qkd2e::testing;

namespace {

// Independent oracle: 1 - H2(p) written out with natural logs.
double capacity_oracle(double p) {
  if (p <= 0.0 || p >= 1.0) return 1.0;
  return 1.0 + (p * std::log(p) + (1 - p) * std::log(1 - p)) / std::log(2.0);
}

const AttackAnalytics& row(const std::vector<AttackAnalytics>& t, Strategy s, ChannelKind c,
                           ErrorModel m) {
  for (const auto& r : t) {
    if (r.strategy == s && r.channel == c && r.model == m) return r;
  }
  throw std::runtime_error("row not found");
}

}  // namespace

TEST(Bsc, MatchesOracleAndKnownValues) {
  EXPECT_DOUBLE_EQ(bsc_information(0.0), 1.0);
  EXPECT_DOUBLE_EQ(bsc_information(1.0), 1.0);
  EXPECT_NEAR(bsc_information(0.5), 0.0, 1e-15);
  EXPECT_NEAR(bsc_information(0.25), 0.18872187554086717, 1e-12);
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    EXPECT_NEAR(bsc_information(p), capacity_oracle(p), 1e-12) << p;
  }
  EXPECT_THROW(bsc_information(-0.01), std::invalid_argument);
  EXPECT_THROW(bsc_information(NAN), std::invalid_argument);
}

TEST(Bsc, SymmetricAndMonotoneProperty) {
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    EXPECT_NEAR(bsc_information(p), bsc_information(1 - p), 1e-12);
    const double info = bsc_information(p);
    EXPECT_GE(info, -1e-15);
    EXPECT_LE(info, 1.0);
    if (i > 0 && i <= 50) {
      EXPECT_LT(info, bsc_information((i - 1) / 100.0));
    }
  }
  const ChannelInfoReport r = channel_info(0.1);
  EXPECT_DOUBLE_EQ(r.p, 0.1);
  EXPECT_DOUBLE_EQ(r.information, bsc_information(0.1));
}

TEST(Composition, XorAndCascadeIdentities) {
  for (int i = 0; i <= 20; ++i) {
    const double e = i / 20.0;
    EXPECT_NEAR(xor_error(e), cascade_error(e, e), 1e-15);
    EXPECT_NEAR(xor_error(e), xor_error(1 - e), 1e-15);
    EXPECT_LE(xor_error(e), 0.5 + 1e-15);
    // Flipping twice: probability that exactly one of two flips happens.
    EXPECT_NEAR(cascade_error(e, 0.3), e * 0.7 + (1 - e) * 0.3, 1e-15);
  }
  EXPECT_DOUBLE_EQ(xor_error(0.25), 0.375);
  EXPECT_DOUBLE_EQ(xor_error(0.375), 15.0 / 32.0);
  EXPECT_THROW(xor_error(1.1), std::invalid_argument);
  EXPECT_THROW(cascade_error(0.1, -0.1), std::invalid_argument);
}

TEST(Strategies, PerBasisAndPerDofErrors) {
  const double q1b = (2.0 - std::numbers::sqrt2) / 4.0;
  EXPECT_DOUBLE_EQ(per_basis_eve_error(Strategy::fixed_basis), 0.25);
  EXPECT_NEAR(per_basis_eve_error(Strategy::breidbart), q1b, 1e-15);
  EXPECT_NEAR(q1b, std::pow(std::sin(std::numbers::pi / 8), 2), 1e-15);
  EXPECT_THROW(per_basis_eve_error(Strategy::random_rotation), std::invalid_argument);
  EXPECT_THROW(per_basis_eve_error(Strategy::none), std::invalid_argument);

  EXPECT_DOUBLE_EQ(per_dof_induced_error(Strategy::fixed_basis, ErrorModel::physical), 0.25);
  EXPECT_DOUBLE_EQ(per_dof_induced_error(Strategy::fixed_basis, ErrorModel::cascade), 0.375);
  EXPECT_NEAR(per_dof_induced_error(Strategy::breidbart, ErrorModel::physical), 0.25, 1e-15);
  EXPECT_NEAR(per_dof_induced_error(Strategy::breidbart, ErrorModel::cascade), 0.25, 1e-15);
}

TEST(Strategies, AnalyticsRows) {
  const auto fs = strategy_analytics(Strategy::fixed_basis, ChannelKind::single,
                                     ErrorModel::physical);
  EXPECT_DOUBLE_EQ(fs.p2, 0.75);
  EXPECT_DOUBLE_EQ(fs.q_ab, 0.25);
  EXPECT_NEAR(fs.info_alice_eve, capacity_oracle(0.25), 1e-12);
  EXPECT_NEAR(fs.info_alice_bob, capacity_oracle(0.25), 1e-12);

  const auto fd = strategy_analytics(Strategy::fixed_basis, ChannelKind::double_dof,
                                     ErrorModel::cascade);
  EXPECT_DOUBLE_EQ(fd.p2, 0.625);
  EXPECT_DOUBLE_EQ(fd.q_ab, 15.0 / 32.0);

  const auto bd = strategy_analytics(Strategy::breidbart, ChannelKind::double_dof,
                                     ErrorModel::physical);
  EXPECT_NEAR(bd.q_ab, 0.375, 1e-15);
  EXPECT_NEAR(bd.p2, 0.75, 1e-15);
  EXPECT_NEAR(bd.info_alice_eve, 0.188722, 1e-6);

  EXPECT_THROW(strategy_analytics(Strategy::random_rotation, ChannelKind::single,
                                  ErrorModel::physical),
               std::invalid_argument);
  EXPECT_EQ(analytics_table().size(), 8u);
}

// At equal Eve information, how much larger the double channel's error is.
TEST(Ratios, EqualInformationRatios) {
  const auto t = analytics_table();
  auto ratio = [&](Strategy s, ErrorModel ms, ErrorModel md) {
    return equal_info_error_ratio(row(t, s, ChannelKind::single, ms),
                                  row(t, s, ChannelKind::double_dof, md));
  };
  EXPECT_NEAR(ratio(Strategy::fixed_basis, ErrorModel::physical, ErrorModel::cascade), 7.7,
              0.02 * 7.7);
  EXPECT_NEAR(ratio(Strategy::breidbart, ErrorModel::cascade, ErrorModel::cascade), 19.0 / 6.0,
              0.02 * 19.0 / 6.0);
  EXPECT_NEAR(ratio(Strategy::breidbart, ErrorModel::physical, ErrorModel::physical),
              19.0 / 6.0, 0.02 * 19.0 / 6.0);

  // Oracle from the closed form (q_d * I_s / I_d) / q_s.
  const double is = capacity_oracle(0.25);
  const double id = capacity_oracle(0.375);
  EXPECT_NEAR(ratio(Strategy::fixed_basis, ErrorModel::physical, ErrorModel::physical),
              (0.375 * is / id) / 0.25, 1e-12);

  AttackAnalytics zero;
  EXPECT_THROW(equal_info_error_ratio(zero, row(t, Strategy::breidbart, ChannelKind::double_dof,
                                                ErrorModel::cascade)),
               std::invalid_argument);
}

TEST(HuttnerEkert, BoundScalesLinearly) {
  EXPECT_DOUBLE_EQ(huttner_ekert_bound({}, ChannelKind::single), 0.299);
  EXPECT_DOUBLE_EQ(huttner_ekert_bound({}, ChannelKind::double_dof), 0.118);
  EXPECT_NEAR(huttner_ekert_bound({0.5, 0.8}, ChannelKind::single), 0.299 * 0.4, 1e-15);
  EXPECT_THROW(huttner_ekert_bound({-0.1, 1.0}, ChannelKind::single), std::invalid_argument);
  EXPECT_THROW(huttner_ekert_bound({1.0, NAN}, ChannelKind::single), std::invalid_argument);
}

TEST(Names, RoundTrip) {
  EXPECT_EQ(parse_channel_kind(to_string(ChannelKind::double_dof)), ChannelKind::double_dof);
  EXPECT_EQ(parse_error_model(to_string(ErrorModel::cascade)), ErrorModel::cascade);
  EXPECT_THROW(parse_error_model("nope"), std::invalid_argument);
}

// The physical-model q_AB rows agree with simulated sessions.
TEST(MonteCarlo, PhysicalQberMatchesAnalytics) {
  for (Strategy st : {Strategy::fixed_basis, Strategy::breidbart}) {
    SessionConfig c;
    c.channel = Channel::double_dof;
    c.n_pairs = 100000;
    c.seed = 77;
    c.eve = EavesdropConfig{};
    c.eve->strategy = st;
    c.eve->eta = 1.0;
    const SiftResult s = sift(run_session(c));
    const SiftedKey x = xor_key(s.key(Dof::pol), s.key(Dof::phase));
    const auto single = strategy_analytics(st, ChannelKind::single, ErrorModel::physical);
    const auto dbl = strategy_analytics(st, ChannelKind::double_dof, ErrorModel::physical);
    EXPECT_TRUE(within_binomial(s.key(Dof::pol).qber(), single.q_ab, s.key(Dof::pol).length()));
    EXPECT_TRUE(within_binomial(x.qber(), dbl.q_ab, x.length())) << to_string(st);
  }
}
