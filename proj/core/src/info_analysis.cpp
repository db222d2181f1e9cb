#include "qkd2e/info_analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkd2e {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

const char* to_string(ChannelKind kind) {
  return kind == ChannelKind::single ? "single" : "double";
}

const char* to_string(ErrorModel model) {
  return model == ErrorModel::cascade ? "cascade" : "physical";
}

ChannelKind parse_channel_kind(const std::string& name) {
  if (name == "single") return ChannelKind::single;
  if (name == "double") return ChannelKind::double_dof;
  throw std::invalid_argument("unknown channel kind '" + name + "'");
}

ErrorModel parse_error_model(const std::string& name) {
  if (name == "cascade") return ErrorModel::cascade;
  if (name == "physical") return ErrorModel::physical;
  throw std::invalid_argument("unknown error model '" + name + "'");
}

double bsc_information(double p) {
  check_probability(p, "p");
  return 1.0 + xlog2x(p) + xlog2x(1.0 - p);
}

ChannelInfoReport channel_info(double p) { return {p, bsc_information(p)}; }

double xor_error(double e) {
  check_probability(e, "e");
  return 2.0 * e * (1.0 - e);
}

double cascade_error(double e1, double e2) {
  check_probability(e1, "e1");
  check_probability(e2, "e2");
  return e1 + e2 - 2.0 * e1 * e2;
}

double per_basis_eve_error(Strategy strategy) {
  switch (strategy) {
    // Right basis half the time (no error), conjugate basis otherwise (1/2).
    case Strategy::fixed_basis: return 0.25;
    // sin^2(pi/8) from either legitimate basis.
    case Strategy::breidbart: return (2.0 - std::numbers::sqrt2) / 4.0;
    default: break;
  }
  throw std::invalid_argument(std::string("no closed form for strategy ") +
                              to_string(strategy));
}

double per_dof_induced_error(Strategy strategy, ErrorModel model) {
  const double q1 = per_basis_eve_error(strategy);
  if (model == ErrorModel::cascade) return cascade_error(q1, q1);
  // Physical: Bob's error given Eve's resent eigenstate is correlated with
  // Eve's own error. Fixed basis: matched basis is transparent, conjugate
  // basis gives 1/2, so 1/4 overall. Breidbart: Eve errs with sin^2(pi/8) and
  // Bob errs against her eigenstate with the same probability, independently
  // of whether she erred, which reduces to the cascade form.
  if (strategy == Strategy::fixed_basis) return 0.5 * 0.0 + 0.5 * 0.5;
  return cascade_error(q1, q1);
}

AttackAnalytics strategy_analytics(Strategy strategy, ChannelKind channel,
                                   ErrorModel model) {
  if (strategy != Strategy::fixed_basis && strategy != Strategy::breidbart) {
    throw std::invalid_argument(std::string("no closed form for strategy ") +
                                to_string(strategy) + "; use the Monte Carlo engine");
  }
  AttackAnalytics a;
  a.strategy = strategy;
  a.channel = channel;
  a.model = model;
  a.q1 = per_basis_eve_error(strategy);
  const double dof_error = per_dof_induced_error(strategy, model);
  if (channel == ChannelKind::single) {
    a.p2 = 1.0 - a.q1;
    a.q_ab = dof_error;
  } else {
    a.p2 = 1.0 - xor_error(a.q1);
    a.q_ab = xor_error(dof_error);
  }
  a.info_alice_eve = bsc_information(a.p2);
  a.info_alice_bob = bsc_information(1.0 - a.q_ab);
  return a;
}

std::vector<AttackAnalytics> analytics_table() {
  std::vector<AttackAnalytics> rows;
  for (Strategy s : {Strategy::fixed_basis, Strategy::breidbart}) {
    for (ChannelKind c : {ChannelKind::single, ChannelKind::double_dof}) {
      for (ErrorModel m : {ErrorModel::cascade, ErrorModel::physical}) {
        rows.push_back(strategy_analytics(s, c, m));
      }
    }
  }
  return rows;
}

double equal_info_error_ratio(const AttackAnalytics& single,
                              const AttackAnalytics& double_channel) {
  if (double_channel.info_alice_eve == 0.0) {
    throw std::invalid_argument("double-channel Alice-Eve information is zero");
  }
  if (single.q_ab == 0.0) {
    throw std::invalid_argument("single-channel induced error is zero");
  }
  // Equal information: eta_d * I_d = eta_s * I_s.
  const double eta_ratio = single.info_alice_eve / double_channel.info_alice_eve;
  return (double_channel.q_ab * eta_ratio) / single.q_ab;
}

double huttner_ekert_bound(const ErrorCorrectionParams& params, ChannelKind channel,
                           const HuttnerEkertCoefficients& coefficients) {
  check_probability(params.eta, "eta");
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  const double c =
      channel == ChannelKind::single ? coefficients.single : coefficients.double_dof;
  return c * params.eta * params.alpha;
}

}  // namespace qkd2e
