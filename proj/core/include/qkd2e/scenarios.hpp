#pragma once

// Report builders behind the command-line tool. Each command has a plain
// result struct and JSON/CSV writers; named scenarios bundle the commands
// into fixed, reproducible reports. Outputs carry no timestamps, so equal
// inputs give byte-identical text.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkd2e/info_analysis.hpp"
#include "qkd2e/protocol.hpp"
#include "qkd2e/serialize.hpp"
#include "qkd2e/wigner.hpp"

namespace qkd2e {

/// Library version string, e.g. "0.3.0".
const char* library_version();

// --- session summaries ---------------------------------------------------

/// Observed error rate with an optional analytic prediction.
struct RateCheck {
  std::uint64_t errors = 0;
  std::uint64_t count = 0;
  double rate = 0.0;
  std::optional<double> predicted;
  /// Binomial standard error at the predicted rate.
  double sigma = 0.0;
  /// |rate - predicted| / sigma; unset without a prediction or when sigma = 0.
  std::optional<double> z;

  bool within(double n_sigma) const;
};

RateCheck make_rate_check(const ErrorTally& tally, std::optional<double> predicted);

struct DofSummary {
  Dof dof = Dof::pol;
  RateCheck qber;
  /// Eve's bit versus Alice's on intercepted sifted pairs.
  RateCheck eve_alice;
};

struct SessionSummary {
  Protocol protocol = Protocol::bb84x2;
  Channel channel = Channel::double_dof;
  Strategy strategy = Strategy::none;
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t pairs = 0;
  std::uint64_t kept_pairs = 0;
  double retention = 0.0;
  double intercepted_fraction = 0.0;
  std::vector<DofSummary> dofs;
  /// Double channel only.
  std::optional<RateCheck> xor_qber;
  RateCheck per_bit;
  std::optional<DofChoice> eve_session_choice;
};

/// Predicted per-DOF QBER, Eve-Alice error and XOR QBER under the physical
/// model for a full interception scaled by eta. Unset where no closed form
/// exists.
struct Predictions {
  std::optional<double> dof_qber;
  std::optional<double> eve_alice;
  std::optional<double> xor_qber;
};

Predictions physical_predictions(Strategy strategy, double eta);

SessionSummary summarize(const SessionLog& log);
std::string summary_json(const SessionSummary& summary);

// --- paper-table command -------------------------------------------------

/// A computed value next to the figure printed in the source text.
struct Annotation {
  std::string section;
  std::string strategy;
  std::string channel;
  std::string model;
  std::string quantity;
  double computed = 0.0;
  std::optional<double> printed;
  /// printed value as it appears in the text, e.g. "15/32".
  std::string printed_text;
  std::string note;

  std::optional<double> deviation() const;
};

inline constexpr const char* kAnnotationCsvHeader =
    "section,strategy,channel,model,quantity,computed,printed,deviation";

struct PaperTable {
  std::vector<AttackAnalytics> rows;
  /// Printed-value annotations for rows and for the equal-information ratios.
  std::vector<Annotation> annotations;
};

PaperTable paper_table(std::optional<ErrorModel> model = std::nullopt);
std::string paper_table_json(const PaperTable& table);
std::string annotations_csv(const std::vector<Annotation>& annotations);

// --- Wigner --------------------------------------------------------------

struct WignerOptions {
  WignerSettings settings = default_wigner_settings();
  double rel_uncertainty = 0.1;
  /// Interception fraction for the Monte Carlo run.
  double eta = 0.0;
  /// Monte Carlo pairs; 0 skips the simulation.
  std::uint64_t pairs = 0;
  std::uint64_t seed = 0;
  Channel channel = Channel::single_pol;
  double detection_efficiency = 1.0;
  unsigned threads = 0;
};

struct WignerMonteCarlo {
  Dof dof = Dof::pol;
  WignerEstimate estimate;
  double predicted = 0.0;
  std::uint64_t detected_pairs = 0;
  double z() const;
};

struct WignerResult {
  WignerOptions options;
  WignerReport single_channel;
  WignerReport double_channel;
  std::vector<WignerSweepRow> sweep;
  std::vector<WignerMonteCarlo> monte_carlo;
  LhvCheck lhv;
};

/// Throws std::invalid_argument on non-finite angles or invalid options.
WignerResult wigner_command(const WignerOptions& options);
std::string wigner_result_json(const WignerResult& result);

// --- random-rotation comparison ------------------------------------------

struct So4Options {
  std::uint64_t pairs = 200000;
  std::uint64_t seed = 0;
  unsigned bootstrap = 500;
  unsigned threads = 0;
};

struct So4Arm {
  Channel channel = Channel::single_pol;
  std::vector<DofSummary> dofs;
  ErrorTally per_bit;
  std::optional<ErrorTally> xor_bits;
};

struct So4Report {
  So4Options options;
  So4Arm single_pol;
  So4Arm single_phase;
  So4Arm double_dof;
  /// Per-bit QBER pooled over both single-channel arms.
  double e2 = 0.0;
  /// Per-bit QBER of the double-channel arm.
  double e4 = 0.0;
  /// e4 / e2; NaN when e2 = 0 or an arm kept no bits.
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// XOR-key QBER over e2; NaN as above.
  double xor_ratio = 0.0;
};

/// Runs the three arms with the same seed at eta = 1 and bootstraps a 95%
/// interval for the ratio by resampling sifted pairs.
So4Report so4_command(const So4Options& options);
std::string so4_report_json(const So4Report& report);
std::vector<Annotation> so4_annotations(const So4Report& report);

// --- named scenarios -----------------------------------------------------

struct ScenarioOptions {
  std::uint64_t seed = 0;
  /// 0 uses each scenario's default.
  std::uint64_t pairs = 0;
  unsigned threads = 0;
};

/// Names accepted by run_scenario.
const std::vector<std::string>& scenario_names();

/// Throws std::invalid_argument for an unknown name.
std::string run_scenario(const std::string& name, OutputFormat format,
                         const ScenarioOptions& options);

}  // namespace qkd2e
