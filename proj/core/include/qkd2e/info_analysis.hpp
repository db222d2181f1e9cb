#pragma once

// Closed-form information accounting for intercept-resend attacks on single
// and double entangled channels.

#include <string>
#include <vector>

#include "qkd2e/eavesdrop.hpp"

namespace qkd2e {

/// Number of entangled DOFs carrying the key.
enum class ChannelKind { single, double_dof };

/// How Alice-Bob errors are composed from Eve's per-basis error.
enum class ErrorModel {
  /// Alice->Eve and Eve->Bob as independent binary symmetric channels.
  cascade,
  /// Correlated intercept-resend statistics of the actual quantum state.
  physical,
};

const char* to_string(ChannelKind kind);
const char* to_string(ErrorModel model);
ChannelKind parse_channel_kind(const std::string& name);
ErrorModel parse_error_model(const std::string& name);

struct ChannelInfoReport {
  double p = 0.0;
  double information = 0.0;
};

struct AttackAnalytics {
  Strategy strategy = Strategy::none;
  ChannelKind channel = ChannelKind::single;
  ErrorModel model = ErrorModel::physical;
  /// Eve's error on a single basis.
  double q1 = 0.0;
  /// Probability that Eve's key bit is correct.
  double p2 = 0.0;
  double info_alice_eve = 0.0;
  /// Induced Alice-Bob key error rate at eta = 1.
  double q_ab = 0.0;
  double info_alice_bob = 0.0;
};

struct ErrorCorrectionParams {
  double eta = 1.0;
  /// Key-length reduction factor of the error-correction step.
  double alpha = 1.0;
};

/// Opaque cited coefficients of the post-error-correction bound.
struct HuttnerEkertCoefficients {
  double single = 0.299;
  double double_dof = 0.118;
};

/// Binary symmetric channel capacity at correct-transmission probability p:
/// 1 + p log2 p + (1-p) log2(1-p), with 0 log 0 = 0.
/// Throws std::invalid_argument for p outside [0, 1].
double bsc_information(double p);
ChannelInfoReport channel_info(double p);

/// Error of the XOR of two independent bits each wrong with rate e.
double xor_error(double e);

/// Error of two independent binary symmetric channels in series.
double cascade_error(double e1, double e2);

/// Eve's per-basis error for the fixed-basis (1/4) and Breidbart
/// ((2-sqrt 2)/4) attacks. Throws for other strategies.
double per_basis_eve_error(Strategy strategy);

/// Per-DOF Alice-Bob error of a full interception under `model`.
double per_dof_induced_error(Strategy strategy, ErrorModel model);

/// Full analytic table row. Throws std::invalid_argument for strategies
/// without a closed form (random rotation, none).
AttackAnalytics strategy_analytics(Strategy strategy, ChannelKind channel,
                                   ErrorModel model);

/// All strategy x channel x model rows with a closed form.
std::vector<AttackAnalytics> analytics_table();

/// Ratio of induced Alice-Bob error (double / single) when Eve tunes the
/// intercepted fraction on each channel to extract equal information.
/// Throws std::invalid_argument if the double-channel information is zero.
double equal_info_error_ratio(const AttackAnalytics& single,
                              const AttackAnalytics& double_channel);

/// Upper bound on Eve's information after error correction.
double huttner_ekert_bound(const ErrorCorrectionParams& params, ChannelKind channel,
                           const HuttnerEkertCoefficients& coefficients = {});

}  // namespace qkd2e
