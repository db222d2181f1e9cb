#include "qkd2e/serialize.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "json_util.hpp"

namespace qkd2e {

using nlohmann::json;

namespace {

json dof_object(const DofBits& bits) {
  json obj = json::object();
  for (Dof dof : {Dof::pol, Dof::phase}) {
    const auto& v = bits[static_cast<std::size_t>(dof)];
    if (v) obj[to_string(dof)] = *v;
  }
  return obj;
}

DofBits parse_dof_object(const json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("per-DOF field must be an object");
  DofBits bits;
  for (Dof dof : {Dof::pol, Dof::phase}) {
    if (auto it = obj.find(to_string(dof)); it != obj.end()) {
      const int v = it->get<int>();
      if (v < 0 || v > 1) throw std::invalid_argument("per-DOF value must be 0 or 1");
      bits[static_cast<std::size_t>(dof)] = static_cast<std::uint8_t>(v);
    }
  }
  return bits;
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string pair_record_json(const PairRecord& record) {
  json j;
  j["idx"] = record.index;
  j["a_basis"] = dof_object(record.alice_basis);
  j["b_basis"] = dof_object(record.bob_basis);
  j["a_out"] = dof_object(record.alice_out);
  j["b_out"] = dof_object(record.bob_out);
  if (record.eve) {
    j["eve"] = record.eve->basis;
    json guess = json::object();
    for (Dof dof : {Dof::pol, Dof::phase}) {
      const auto& g = record.eve->guess[static_cast<std::size_t>(dof)];
      if (g[0] >= 0) guess[to_string(dof)] = {g[0], g[1]};
    }
    j["eve_out"] = {{"outcomes", record.eve->outcomes}, {"guess", guess}};
  } else {
    j["eve"] = nullptr;
    j["eve_out"] = nullptr;
  }
  j["sifted"] = record.sifted;
  return j.dump();
}

PairRecord parse_pair_record(const std::string& line) {
  try {
    const json j = json::parse(line);
    PairRecord r;
    r.index = j.at("idx").get<std::uint64_t>();
    r.alice_basis = parse_dof_object(j.at("a_basis"));
    r.bob_basis = parse_dof_object(j.at("b_basis"));
    r.alice_out = parse_dof_object(j.at("a_out"));
    r.bob_out = parse_dof_object(j.at("b_out"));
    r.sifted = j.at("sifted").get<bool>();
    if (!j.at("eve").is_null()) {
      EveRecord e;
      e.pair_index = r.index;
      e.basis = j.at("eve").get<std::string>();
      const json& out = j.at("eve_out");
      e.outcomes = out.at("outcomes").get<std::vector<std::uint32_t>>();
      for (Dof dof : {Dof::pol, Dof::phase}) {
        const json& g = out.at("guess");
        if (auto it = g.find(to_string(dof)); it != g.end()) {
          auto& dst = e.guess[static_cast<std::size_t>(dof)];
          dst = {it->at(0).get<std::int8_t>(), it->at(1).get<std::int8_t>()};
        }
      }
      r.eve_intercepted = true;
      r.eve = std::move(e);
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed pair record: ") + e.what());
  }
}

void write_session_log(std::ostream& out, const SessionLog& log) {
  for (const auto& rec : log.pairs) out << pair_record_json(rec) << '\n';
}

std::string analytics_csv_row(const AttackAnalytics& a) {
  std::ostringstream os;
  os << to_string(a.strategy) << ',' << to_string(a.channel) << ',' << to_string(a.model)
     << ',' << format_double(a.q1) << ',' << format_double(a.p2) << ','
     << format_double(a.info_alice_eve) << ',' << format_double(a.q_ab) << ','
     << format_double(a.info_alice_bob);
  return os.str();
}

std::string analytics_csv(const std::vector<AttackAnalytics>& rows) {
  std::string out = std::string(kAnalyticsCsvHeader) + "\n";
  for (const auto& r : rows) out += analytics_csv_row(r) + "\n";
  return out;
}

std::string analytics_json(const std::vector<AttackAnalytics>& rows) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(detail::analytics_to_json(r));
  return json{{"analytics", arr}}.dump(2);
}

std::string wigner_report_json(const WignerReport& report) {
  return detail::wigner_report_to_json(report).dump(2);
}

std::string wigner_sweep_csv(const std::vector<WignerSweepRow>& rows) {
  std::string out = std::string(kWignerSweepCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += format_double(r.eta) + "," + format_double(r.w) + "," +
           format_double(r.std_error) + "," + (r.detected ? "true" : "false") + "\n";
  }
  return out;
}

const char* to_string(OutputFormat format) {
  return format == OutputFormat::json ? "json" : "csv";
}

OutputFormat parse_output_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

std::string manifest_json(const RunManifest& m) {
  json scenarios = json::array();
  for (const auto& s : m.scenarios) {
    scenarios.push_back({{"name", s.name},
                         {"command", s.command},
                         {"args", s.args},
                         {"outputPath", s.output_path},
                         {"format", to_string(s.format)}});
  }
  return json{{"toolVersion", m.tool_version},
              {"seed", m.seed},
              {"scenarios", scenarios},
              {"timestamp", m.timestamp}}
      .dump(2);
}

RunManifest parse_manifest(const std::string& text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    m.tool_version = j.at("toolVersion").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.timestamp = j.at("timestamp").get<std::string>();
    std::set<std::string> names;
    for (const auto& s : j.at("scenarios")) {
      ScenarioSpec spec;
      spec.name = s.at("name").get<std::string>();
      spec.command = s.at("command").get<std::string>();
      if (auto it = s.find("args"); it != s.end()) {
        spec.args = it->get<std::map<std::string, std::string>>();
      }
      spec.output_path = s.value("outputPath", std::string{});
      spec.format = parse_output_format(s.value("format", std::string{"json"}));
      if (!names.insert(spec.name).second) {
        throw std::invalid_argument("duplicate scenario name '" + spec.name + "'");
      }
      m.scenarios.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

}  // namespace qkd2e
