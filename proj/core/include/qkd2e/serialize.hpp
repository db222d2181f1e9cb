#pragma once

// Text formats for logs and reports. All functions produce or consume plain
// strings; no JSON library types cross this interface.
//
// Session log (JSON Lines, one pair per line):
//   {"idx":N,"a_basis":{"pol":0,"phase":1},"b_basis":{...},"a_out":{...},
//    "b_out":{...},"eve":null|"descriptor",
//    "eve_out":null|{"outcomes":[...],"guess":{"pol":[g0,g1],...}},
//    "sifted":bool}
// Only the channel's key DOFs appear in the per-DOF objects.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qkd2e/info_analysis.hpp"
#include "qkd2e/protocol.hpp"
#include "qkd2e/wigner.hpp"

namespace qkd2e {

/// Shortest decimal text that parses back to the same double; "null" for
/// non-finite values.
std::string format_double(double value);

std::string pair_record_json(const PairRecord& record);

/// Throws std::invalid_argument on malformed input.
PairRecord parse_pair_record(const std::string& line);

void write_session_log(std::ostream& out, const SessionLog& log);

inline constexpr const char* kAnalyticsCsvHeader =
    "strategy,channel,model,q1,p2,I_AE,q_AB,I_AB";

std::string analytics_csv_row(const AttackAnalytics& row);
std::string analytics_csv(const std::vector<AttackAnalytics>& rows);
std::string analytics_json(const std::vector<AttackAnalytics>& rows);

std::string wigner_report_json(const WignerReport& report);

inline constexpr const char* kWignerSweepCsvHeader = "eta,W,stderr,detected";

std::string wigner_sweep_csv(const std::vector<WignerSweepRow>& rows);

enum class OutputFormat { json, csv };

const char* to_string(OutputFormat format);
OutputFormat parse_output_format(const std::string& name);

/// One command invocation inside a manifest. `args` maps long flag names
/// (without dashes) to their values.
struct ScenarioSpec {
  std::string name;
  std::string command;
  std::map<std::string, std::string> args;
  std::string output_path;
  OutputFormat format = OutputFormat::json;

  bool operator==(const ScenarioSpec&) const = default;
};

struct RunManifest {
  std::string tool_version;
  std::uint64_t seed = 0;
  std::vector<ScenarioSpec> scenarios;
  std::string timestamp;

  bool operator==(const RunManifest&) const = default;
};

std::string manifest_json(const RunManifest& manifest);

/// Throws std::invalid_argument on malformed input or duplicate scenario
/// names.
RunManifest parse_manifest(const std::string& text);

}  // namespace qkd2e
