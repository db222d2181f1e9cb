#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "qkd2e/info_analysis.hpp"
#include "qkd2e/serialize.hpp"
#include "test_support.hpp"

using namespace qkd2e;
using nlohmann::json;

namespace {

SessionLog attacked_log(Strategy strategy, Channel channel) {
  SessionConfig c;
  c.channel = channel;
  c.n_pairs = 300;
  c.seed = 5;
  c.eve = EavesdropConfig{};
  c.eve->strategy = strategy;
  c.eve->eta = 0.5;
  return run_session(c);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(NAN), "null");
  EXPECT_EQ(format_double(INFINITY), "null");
  for (double v : {0.1, 1.0 / 3.0, 2.220446049250313e-16, -7.7657}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(PairRecord, RoundTripsEveryStrategyAndChannel) {
  const std::vector<std::pair<Strategy, Channel>> cases{
      {Strategy::fixed_basis, Channel::single_pol},
      {Strategy::breidbart, Channel::double_dof},
      {Strategy::random_rotation, Channel::double_dof},
      {Strategy::random_rotation, Channel::single_phase}};
  for (const auto& [st, ch] : cases) {
    const SessionLog log = attacked_log(st, ch);
    for (const PairRecord& r : log.pairs) {
      const std::string line = pair_record_json(r);
      ASSERT_EQ(parse_pair_record(line), r) << line;
    }
  }
}

TEST(PairRecord, LayoutUsesKeyDofsOnly) {
  const SessionLog log = attacked_log(Strategy::fixed_basis, Channel::single_pol);
  std::ostringstream os;
  write_session_log(os, log);
  const auto ls = lines(os.str());
  ASSERT_EQ(ls.size(), log.pairs.size());
  bool saw_eve = false, saw_none = false;
  for (const auto& l : ls) {
    const json j = json::parse(l);
    EXPECT_TRUE(j.at("a_basis").contains("pol"));
    EXPECT_FALSE(j.at("a_basis").contains("phase"));
    if (j.at("eve").is_null()) {
      saw_none = true;
      EXPECT_TRUE(j.at("eve_out").is_null());
    } else {
      saw_eve = true;
      EXPECT_TRUE(j.at("eve_out").at("guess").contains("pol"));
    }
  }
  EXPECT_TRUE(saw_eve);
  EXPECT_TRUE(saw_none);
}

TEST(PairRecord, RejectsMalformed) {
  EXPECT_THROW(parse_pair_record("{"), std::invalid_argument);
  EXPECT_THROW(parse_pair_record(R"({"idx":1})"), std::invalid_argument);
  EXPECT_THROW(parse_pair_record(
                   R"({"idx":1,"a_basis":{"pol":2},"b_basis":{},"a_out":{},"b_out":{},)"
                   R"("eve":null,"eve_out":null,"sifted":false})"),
               std::invalid_argument);
}

TEST(Manifest, RoundTrip) {
  RunManifest m;
  m.tool_version = "1.2.3";
  m.seed = 99;
  m.timestamp = "2026-01-01T00:00:00Z";
  m.scenarios.push_back({"a", "scenario", {{"scenario", "breidbart"}}, "out/a.json",
                         OutputFormat::json});
  m.scenarios.push_back({"b", "paper-table", {{"model", "cascade"}}, "b.csv", OutputFormat::csv});
  EXPECT_EQ(parse_manifest(manifest_json(m)), m);
  const json j = json::parse(manifest_json(m));
  EXPECT_EQ(j.at("scenarios").at(1).at("outputPath"), "b.csv");
}

TEST(Manifest, RejectsDuplicatesAndBadFormat) {
  const std::string dup = R"({"toolVersion":"x","seed":1,"timestamp":"t","scenarios":[
      {"name":"a","command":"so4"},{"name":"a","command":"wigner"}]})";
  EXPECT_THROW(parse_manifest(dup), std::invalid_argument);
  const std::string fmt = R"({"toolVersion":"x","seed":1,"timestamp":"t","scenarios":[
      {"name":"a","command":"so4","format":"xml"}]})";
  EXPECT_THROW(parse_manifest(fmt), std::invalid_argument);
  EXPECT_THROW(parse_manifest("[]"), std::invalid_argument);
}

TEST(Csv, AnalyticsHeaderAndRows) {
  const std::string csv = analytics_csv(analytics_table());
  const auto ls = lines(csv);
  ASSERT_EQ(ls.size(), 9u);
  EXPECT_EQ(ls[0], kAnalyticsCsvHeader);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    EXPECT_EQ(std::count(ls[i].begin(), ls[i].end(), ','), 7) << ls[i];
  }
  EXPECT_EQ(ls[1].rfind("fixed-basis,single,", 0), 0u);
}

TEST(Csv, WignerSweep) {
  const std::string csv = wigner_sweep_csv({{0.0, -0.125, 0.0125, false}, {0.1, -0.1, 0.0125, true}});
  EXPECT_EQ(csv, "eta,W,stderr,detected\n0,-0.125,0.0125,false\n0.1,-0.1,0.0125,true\n");
}

TEST(Json, AnalyticsAndWignerReportAreValidJson) {
  const json a = json::parse(analytics_json(analytics_table()));
  EXPECT_EQ(a.at("analytics").size(), 8u);
  const json w = json::parse(wigner_report_json(wigner_report(default_wigner_settings(), 0.0, 0.1, 1)));
  EXPECT_NEAR(w.at("W").get<double>(), -0.125, 1e-12);
  EXPECT_EQ(w.at("dof"), "pol");
}

TEST(Names, OutputFormat) {
  EXPECT_EQ(parse_output_format("csv"), OutputFormat::csv);
  EXPECT_STREQ(to_string(OutputFormat::json), "json");
  EXPECT_THROW(parse_output_format("yaml"), std::invalid_argument);
}
