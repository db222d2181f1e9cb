// qkd2e: seeded double-entanglement QKD experiments and reports.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qkd2e/scenarios.hpp"

namespace fs = std::filesystem;
using namespace qkd2e;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  unsigned threads = 0;
};

const CLI::Validator kFinite(
    [](std::string& s) -> std::string {
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) return "value must be a finite number";
      } catch (const std::exception&) {
        return "value must be a finite number";
      }
      return {};
    },
    "FINITE");

void add_common(CLI::App* cmd, Common& c, std::vector<std::string> formats) {
  cmd->add_option("--seed", c.seed, "Master seed (falls back to QKD2E_SEED)")
      ->envname("QKD2E_SEED");
  cmd->add_option("--out", c.out, "Output path (stdout when omitted)");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember(std::move(formats)))
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware)");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  p.replace_extension(suffix);
  return p.string();
}

WignerSettings settings_from_degrees(const std::vector<double>& deg) {
  constexpr double k = std::numbers::pi / 180.0;
  return {deg.at(0) * k, deg.at(1) * k, deg.at(2) * k};
}

struct Options {
  Common common;
  std::string protocol = "bb84x2";
  std::string channel = "double";
  std::uint64_t pairs = 1000;
  std::string eve = "none";
  double eta = 1.0;
  std::string model;
  double rel_uncertainty = 0.1;
  std::vector<double> angles{0.0, 30.0, 60.0};
  double efficiency = 1.0;
  std::string log_path;
  unsigned bootstrap = 500;
  std::string scenario;
  std::string manifest;
};

int cmd_simulate(const Options& o) {
  const Protocol protocol = parse_protocol(o.protocol);
  const Channel channel = parse_channel(o.channel);
  if (protocol == Protocol::ekert_wigner) {
    WignerOptions w;
    w.settings = settings_from_degrees(o.angles);
    w.rel_uncertainty = o.rel_uncertainty;
    w.eta = o.eve == "none" ? 0.0 : o.eta;
    w.pairs = o.pairs;
    w.seed = o.common.seed;
    w.channel = channel;
    w.detection_efficiency = o.efficiency;
    w.threads = o.common.threads;
    write_text(o.common.out, wigner_result_json(wigner_command(w)));
    return 0;
  }
  SessionConfig c;
  c.protocol = protocol;
  c.n_pairs = o.pairs;
  c.channel = channel;
  c.seed = o.common.seed;
  c.threads = o.common.threads;
  const Strategy strategy = parse_strategy(o.eve);
  if (strategy != Strategy::none) {
    EavesdropConfig eve;
    eve.strategy = strategy;
    eve.eta = o.eta;
    c.eve = eve;
  }
  const SessionLog log = run_session(c);
  std::string log_path = o.log_path;
  if (log_path.empty() && !o.common.out.empty()) log_path = sibling(o.common.out, ".jsonl");
  if (!log_path.empty()) {
    std::ofstream f(log_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + log_path + "' for writing");
    write_session_log(f, log);
  }
  write_text(o.common.out, summary_json(summarize(log)));
  return 0;
}

int cmd_paper_table(const Options& o) {
  std::optional<ErrorModel> model;
  if (!o.model.empty()) model = parse_error_model(o.model);
  const PaperTable table = paper_table(model);
  if (o.common.format == "json") {
    write_text(o.common.out, paper_table_json(table));
    return 0;
  }
  const std::string rows = analytics_csv(table.rows);
  const std::string notes = annotations_csv(table.annotations);
  if (o.common.out.empty()) {
    std::cout << rows << '\n' << notes;
  } else {
    write_text(o.common.out, rows);
    write_text(sibling(o.common.out, ".annotations.csv"), notes);
  }
  return 0;
}

int cmd_wigner(const Options& o, bool eta_given) {
  WignerOptions w;
  w.settings = settings_from_degrees(o.angles);
  w.rel_uncertainty = o.rel_uncertainty;
  w.eta = eta_given ? o.eta : 0.0;
  w.pairs = o.pairs;
  w.seed = o.common.seed;
  w.channel = parse_channel(o.channel);
  w.detection_efficiency = o.efficiency;
  w.threads = o.common.threads;
  const WignerResult r = wigner_command(w);
  write_text(o.common.out,
             o.common.format == "csv" ? wigner_sweep_csv(r.sweep) : wigner_result_json(r));
  return 0;
}

int cmd_so4(const Options& o) {
  So4Options s;
  s.pairs = o.pairs;
  s.seed = o.common.seed;
  s.bootstrap = o.bootstrap;
  s.threads = o.common.threads;
  const So4Report r = so4_command(s);
  write_text(o.common.out, o.common.format == "csv" ? annotations_csv(so4_annotations(r))
                                                    : so4_report_json(r));
  return 0;
}

int cmd_scenario(const Options& o, bool pairs_given) {
  ScenarioOptions s;
  s.seed = o.common.seed;
  s.pairs = pairs_given ? o.pairs : 0;
  s.threads = o.common.threads;
  write_text(o.common.out,
             run_scenario(o.scenario, parse_output_format(o.common.format), s));
  return 0;
}

int run_cli(std::vector<std::string> args);

int cmd_run(const Options& o) {
  std::ifstream f(o.manifest, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read manifest '" + o.manifest + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const RunManifest m = parse_manifest(buf.str());
  const fs::path base = fs::path(o.manifest).parent_path();
  for (const auto& spec : m.scenarios) {
    if (spec.command == "run") throw std::runtime_error("manifests cannot nest 'run'");
    std::vector<std::string> args{spec.command};
    auto positional = spec.args.find("scenario");
    if (spec.command == "scenario") {
      args.push_back(positional != spec.args.end() ? positional->second : spec.name);
    }
    for (const auto& [key, value] : spec.args) {
      if (key == "scenario") continue;
      args.push_back("--" + key);
      args.push_back(value);
    }
    if (!spec.args.count("seed")) {
      args.push_back("--seed");
      args.push_back(std::to_string(m.seed));
    }
    args.push_back("--format");
    args.push_back(to_string(spec.format));
    if (!spec.output_path.empty()) {
      fs::path out(spec.output_path);
      if (out.is_relative()) out = base / out;
      args.push_back("--out");
      args.push_back(out.string());
    }
    const int rc = run_cli(args);
    if (rc != 0) {
      std::cerr << "scenario '" << spec.name << "' failed with exit code " << rc << '\n';
      return rc;
    }
  }
  return 0;
}

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Double-entanglement QKD simulator and report generator", "qkd2e"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  Options o;
  const std::vector<std::string> protocols{"bb84x2", "ekert-wigner"};
  const std::vector<std::string> channels{"single-pol", "single-phase", "double"};
  const std::vector<std::string> eves{"none", "fixed-basis", "breidbart", "so4"};

  auto* sim = app.add_subcommand("simulate", "Run one seeded key-distribution session");
  add_common(sim, o.common, {"json"});
  sim->add_option("--protocol", o.protocol)->check(CLI::IsMember(protocols))->capture_default_str();
  sim->add_option("--channel", o.channel)->check(CLI::IsMember(channels))->capture_default_str();
  sim->add_option("--pairs", o.pairs)->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--eve", o.eve)->check(CLI::IsMember(eves))->capture_default_str();
  sim->add_option("--eta", o.eta, "Intercepted fraction")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sim->add_option("--angles", o.angles, "Wigner angles chi,psi,omega in degrees")
      ->delimiter(',')->expected(3)->check(kFinite);
  sim->add_option("--rel-uncertainty", o.rel_uncertainty)->check(CLI::PositiveNumber);
  sim->add_option("--efficiency", o.efficiency, "Per-photon detection efficiency")
      ->check(CLI::Range(0.0, 1.0));
  sim->add_option("--log", o.log_path, "JSON Lines log path (default: --out with .jsonl)");

  auto* table = app.add_subcommand("paper-table", "Closed-form attack analytics");
  add_common(table, o.common, {"json", "csv"});
  table->add_option("--model", o.model)->check(CLI::IsMember({"cascade", "physical"}));

  auto* wig = app.add_subcommand("wigner", "Wigner inequality thresholds and eta sweep");
  add_common(wig, o.common, {"json", "csv"});
  auto* wig_eta = wig->add_option("--eta", o.eta, "Intercepted fraction for the Monte Carlo run")
                      ->check(CLI::Range(0.0, 1.0));
  wig->add_option("--pairs", o.pairs, "Monte Carlo pairs (0 = analytic only)");
  wig->add_option("--angles", o.angles, "chi,psi,omega in degrees")
      ->delimiter(',')->expected(3)->check(kFinite);
  wig->add_option("--rel-uncertainty", o.rel_uncertainty)->check(CLI::PositiveNumber)
      ->capture_default_str();
  wig->add_option("--channel", o.channel)->check(CLI::IsMember(channels));
  wig->add_option("--efficiency", o.efficiency)->check(CLI::Range(0.0, 1.0));

  auto* so4 = app.add_subcommand("so4", "Random-rotation attack, double versus single");
  add_common(so4, o.common, {"json", "csv"});
  so4->add_option("--pairs", o.pairs)->check(CLI::PositiveNumber);
  so4->add_option("--bootstrap", o.bootstrap, "Bootstrap replicates")->capture_default_str();

  auto* scen = app.add_subcommand("scenario", "Run a named scenario");
  add_common(scen, o.common, {"json", "csv"});
  scen->add_option("name", o.scenario)->required()->check(CLI::IsMember(scenario_names()));
  auto* scen_pairs = scen->add_option("--pairs", o.pairs)->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "Execute every scenario in a manifest");
  run->add_option("manifest", o.manifest)->required();

  // Subcommand defaults that differ from the shared struct.
  wig->preparse_callback([&](std::size_t) {
    o.pairs = 0;
    o.channel = "single-pol";
  });
  so4->preparse_callback([&](std::size_t) { o.pairs = 200000; });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*sim) return cmd_simulate(o);
    if (*table) return cmd_paper_table(o);
    if (*wig) return cmd_wigner(o, wig_eta->count() > 0);
    if (*so4) return cmd_so4(o);
    if (*scen) return cmd_scenario(o, scen_pairs->count() > 0);
    if (*run) return cmd_run(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(std::move(args));
}
