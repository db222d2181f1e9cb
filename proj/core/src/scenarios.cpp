#include "qkd2e/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "json_util.hpp"

namespace qkd2e {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kDefaultAttackPairs = 100000;
constexpr std::uint64_t kDefaultWignerPairs = 1000000;

json optional_number(const std::optional<double>& v) {
  return v ? detail::number(*v) : json(nullptr);
}

json rate_json(const RateCheck& r) {
  return {{"errors", r.errors},
          {"count", r.count},
          {"rate", r.rate},
          {"predicted", optional_number(r.predicted)},
          {"sigma", r.sigma},
          {"z", optional_number(r.z)}};
}

json tally_json(const ErrorTally& t) {
  return {{"errors", t.errors}, {"count", t.count}, {"rate", t.rate()}};
}

json dof_summaries_json(const std::vector<DofSummary>& dofs) {
  json out = json::object();
  for (const auto& d : dofs) {
    out[to_string(d.dof)] = {{"qber", rate_json(d.qber)},
                             {"eveAlice", rate_json(d.eve_alice)}};
  }
  return out;
}

json annotation_json(const Annotation& a) {
  return {{"section", a.section},
          {"strategy", a.strategy},
          {"channel", a.channel},
          {"model", a.model},
          {"quantity", a.quantity},
          {"computed", detail::number(a.computed)},
          {"printed", optional_number(a.printed)},
          {"printedText", a.printed_text},
          {"deviation", optional_number(a.deviation())},
          {"note", a.note}};
}

json annotations_json(const std::vector<Annotation>& annotations) {
  json arr = json::array();
  for (const auto& a : annotations) arr.push_back(annotation_json(a));
  return arr;
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

// --- printed figures -----------------------------------------------------

struct Printed {
  const char* quantity;
  double value;
  const char* text;
  const char* note;
};

std::vector<Printed> printed_figures(Strategy strategy, ChannelKind channel) {
  const double breidbart_q1 = (2.0 - std::numbers::sqrt2) / 4.0;
  if (strategy == Strategy::fixed_basis) {
    if (channel == ChannelKind::double_dof) {
      return {{"q1", 0.25, "1/4", ""},
              {"p2", 0.625, "5/8", ""},
              {"I_AE", 0.046, "0.046", ""},
              {"q_AB", 15.0 / 32.0, "15/32", "cascade accounting"},
              {"I_AB", 0.0028, "0.0028", ""}};
    }
    return {{"q1", 0.25, "1/4", ""},
            {"I_AE", 0.189, "0.189", ""},
            {"q_AB", 0.375, "3/8", "cascade accounting; the physical value is 1/4"},
            {"I_AB", 0.046, "0.046", ""}};
  }
  if (channel == ChannelKind::double_dof) {
    return {{"q1", breidbart_q1, "(2-sqrt2)/4", ""},
            {"p2", 0.25, "1/4", "printed value; q1^2 + (1-q1)^2 evaluates to 3/4"},
            {"I_AE", 0.189, "0.189", ""},
            {"q_AB", 0.375, "3/8", ""},
            {"I_AB", 0.046, "0.046", ""}};
  }
  return {{"q1", breidbart_q1, "(2-sqrt2)/4", ""},
          {"I_AE", 0.399, "0.399", "also printed as 0.389 per unit eta; 0.399 is consistent"},
          {"q_AB", 0.25, "1/4", ""},
          {"I_AB", 0.189, "0.189", ""}};
}

double quantity_of(const AttackAnalytics& a, const std::string& q) {
  if (q == "q1") return a.q1;
  if (q == "p2") return a.p2;
  if (q == "I_AE") return a.info_alice_eve;
  if (q == "q_AB") return a.q_ab;
  return a.info_alice_bob;
}

std::vector<Annotation> row_annotations(const AttackAnalytics& a) {
  std::vector<Annotation> out;
  for (const auto& p : printed_figures(a.strategy, a.channel)) {
    Annotation n;
    n.section = "analytics";
    n.strategy = to_string(a.strategy);
    n.channel = to_string(a.channel);
    n.model = to_string(a.model);
    n.quantity = p.quantity;
    n.computed = quantity_of(a, p.quantity);
    n.printed = p.value;
    n.printed_text = p.text;
    n.note = p.note;
    out.push_back(std::move(n));
  }
  return out;
}

Annotation ratio_annotation(Strategy strategy, ErrorModel single_model,
                            ErrorModel double_model, std::optional<double> printed,
                            std::string printed_text, std::string note) {
  const auto s = strategy_analytics(strategy, ChannelKind::single, single_model);
  const auto d = strategy_analytics(strategy, ChannelKind::double_dof, double_model);
  Annotation n;
  n.section = "ratio";
  n.strategy = to_string(strategy);
  n.channel = "double/single";
  n.model = single_model == double_model
                ? std::string(to_string(single_model))
                : std::string(to_string(double_model)) + "/" + to_string(single_model);
  n.quantity = "equal_info_error_ratio";
  n.computed = equal_info_error_ratio(s, d);
  n.printed = printed;
  n.printed_text = std::move(printed_text);
  n.note = std::move(note);
  return n;
}

std::vector<Annotation> ratio_annotations(Strategy strategy,
                                          std::optional<ErrorModel> model) {
  std::vector<Annotation> out;
  const bool cascade = !model || *model == ErrorModel::cascade;
  const bool physical = !model || *model == ErrorModel::physical;
  if (strategy == Strategy::fixed_basis) {
    if (!model) {
      out.push_back(ratio_annotation(
          strategy, ErrorModel::physical, ErrorModel::cascade, 7.7, "7.7",
          "double channel at the cascade figure 15/32, single channel at the physical 1/4"));
    }
    if (cascade) {
      out.push_back(ratio_annotation(strategy, ErrorModel::cascade, ErrorModel::cascade,
                                     std::nullopt, "", "single accounting, cascade"));
    }
    if (physical) {
      out.push_back(ratio_annotation(strategy, ErrorModel::physical, ErrorModel::physical,
                                     std::nullopt, "", "single accounting, physical"));
    }
  } else {
    for (ErrorModel m : {ErrorModel::cascade, ErrorModel::physical}) {
      if ((m == ErrorModel::cascade && !cascade) || (m == ErrorModel::physical && !physical)) {
        continue;
      }
      out.push_back(ratio_annotation(strategy, m, m, 19.0 / 6.0, "19/6", ""));
    }
  }
  return out;
}

std::vector<Annotation> huttner_annotations(const HuttnerEkertCoefficients& c = {}) {
  std::vector<Annotation> out;
  for (ChannelKind kind : {ChannelKind::single, ChannelKind::double_dof}) {
    Annotation n;
    n.section = "bound";
    n.strategy = "error-correction";
    n.channel = to_string(kind);
    n.model = "cited";
    n.quantity = "I_AE_bound_per_eta_alpha";
    n.computed = huttner_ekert_bound({1.0, 1.0}, kind, c);
    n.printed = kind == ChannelKind::single ? 0.299 : 0.118;
    n.printed_text = kind == ChannelKind::single ? "0.299" : "0.118";
    out.push_back(std::move(n));
  }
  return out;
}

// --- sessions ------------------------------------------------------------

SessionConfig attack_config(Strategy strategy, Channel channel, std::uint64_t pairs,
                            std::uint64_t seed, unsigned threads, double eta = 1.0) {
  SessionConfig c;
  c.protocol = Protocol::bb84x2;
  c.n_pairs = pairs;
  c.channel = channel;
  c.seed = seed;
  c.threads = threads;
  if (strategy != Strategy::none) {
    EavesdropConfig eve;
    eve.strategy = strategy;
    eve.eta = eta;
    c.eve = eve;
  }
  return c;
}

// Per-unit error counts for bootstrap resampling: one unit per sifted pair.
struct BootstrapArm {
  std::vector<std::uint8_t> unit_errors;
  std::uint64_t bits_per_unit = 1;
};

BootstrapArm bootstrap_arm(const SiftResult& sifted, Channel channel) {
  BootstrapArm arm;
  const auto dofs = key_dofs(channel);
  arm.bits_per_unit = dofs.size();
  const std::size_t n = sifted.key(dofs.front()).length();
  arm.unit_errors.assign(n, 0);
  for (Dof dof : dofs) {
    const auto& k = sifted.key(dof);
    for (std::size_t i = 0; i < n; ++i) arm.unit_errors[i] += k.alice[i] != k.bob[i];
  }
  return arm;
}

std::pair<std::uint64_t, std::uint64_t> resample(const BootstrapArm& arm, Rng& rng) {
  const std::size_t n = arm.unit_errors.size();
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < n; ++i) errors += arm.unit_errors[rng.below(n)];
  return {errors, n * arm.bits_per_unit};
}

double safe_ratio(double num, double den) {
  return den > 0.0 && std::isfinite(num) ? num / den : kNaN;
}

So4Arm so4_arm(const SessionLog& log, const SiftResult& sifted) {
  So4Arm arm;
  arm.channel = log.config.channel;
  const SessionSummary s = summarize(log);
  arm.dofs = s.dofs;
  arm.per_bit = per_bit_errors(sifted);
  if (log.config.channel == Channel::double_dof) {
    const SiftedKey x = xor_key(sifted.key(Dof::pol), sifted.key(Dof::phase));
    arm.xor_bits = ErrorTally{x.errors(), x.length()};
  }
  return arm;
}

json so4_arm_json(const So4Arm& arm) {
  json j = {{"channel", to_string(arm.channel)},
            {"dofs", dof_summaries_json(arm.dofs)},
            {"perBit", tally_json(arm.per_bit)}};
  j["xor"] = arm.xor_bits ? tally_json(*arm.xor_bits) : json(nullptr);
  return j;
}

json session_summary_to_json(const SessionSummary& s) {
  json j = {{"protocol", to_string(s.protocol)},
            {"channel", to_string(s.channel)},
            {"eve", to_string(s.strategy)},
            {"eta", s.eta},
            {"seed", s.seed},
            {"pairs", s.pairs},
            {"keptPairs", s.kept_pairs},
            {"retention", s.retention},
            {"interceptedFraction", s.intercepted_fraction},
            {"dofs", dof_summaries_json(s.dofs)},
            {"perBit", rate_json(s.per_bit)}};
  j["xor"] = s.xor_qber ? rate_json(*s.xor_qber) : json(nullptr);
  if (s.eve_session_choice) {
    j["eveSessionChoice"] = {{"pol", (*s.eve_session_choice)[0]},
                             {"phase", (*s.eve_session_choice)[1]}};
  } else {
    j["eveSessionChoice"] = nullptr;
  }
  return j;
}

std::string attack_scenario(Strategy strategy, OutputFormat format,
                            const ScenarioOptions& options) {
  std::vector<AttackAnalytics> rows;
  std::vector<Annotation> notes;
  for (const auto& r : analytics_table()) {
    if (r.strategy != strategy) continue;
    rows.push_back(r);
    auto a = row_annotations(r);
    notes.insert(notes.end(), a.begin(), a.end());
  }
  auto ratios = ratio_annotations(strategy, std::nullopt);
  notes.insert(notes.end(), ratios.begin(), ratios.end());
  if (format == OutputFormat::csv) return analytics_csv(rows);

  const std::uint64_t pairs = options.pairs ? options.pairs : kDefaultAttackPairs;
  json mc = json::array();
  for (Channel ch : {Channel::single_pol, Channel::single_phase, Channel::double_dof}) {
    const SessionLog log =
        run_session(attack_config(strategy, ch, pairs, options.seed, options.threads));
    mc.push_back(session_summary_to_json(summarize(log)));
  }
  json rows_json = json::array();
  for (const auto& r : rows) rows_json.push_back(detail::analytics_to_json(r));
  const json out = {
      {"scenario", to_string(strategy)},
      {"analytics", rows_json},
      {"annotations", annotations_json(notes)},
      {"monteCarlo", mc},
      {"dualAccounting",
       {{"physicalSingleQber", per_dof_induced_error(strategy, ErrorModel::physical)},
        {"cascadeSingleQber", per_dof_induced_error(strategy, ErrorModel::cascade)}}}};
  return out.dump(2) + "\n";
}

}  // namespace

const char* library_version() { return QKD2E_VERSION; }

// --- session summaries ---------------------------------------------------

bool RateCheck::within(double n_sigma) const {
  if (!predicted) return true;
  if (count == 0) return false;
  if (sigma == 0.0) return rate == *predicted;
  return z && *z <= n_sigma;
}

RateCheck make_rate_check(const ErrorTally& tally, std::optional<double> predicted) {
  RateCheck r;
  r.errors = tally.errors;
  r.count = tally.count;
  r.rate = tally.rate();
  r.predicted = predicted;
  if (predicted && tally.count > 0) {
    r.sigma = std::sqrt(*predicted * (1.0 - *predicted) / double(tally.count));
    if (r.sigma > 0.0) r.z = std::abs(r.rate - *predicted) / r.sigma;
  }
  return r;
}

Predictions physical_predictions(Strategy strategy, double eta) {
  Predictions p;
  if (strategy == Strategy::none || eta == 0.0) {
    p.dof_qber = 0.0;
    p.xor_qber = 0.0;
    return p;
  }
  if (strategy != Strategy::fixed_basis && strategy != Strategy::breidbart) return p;
  const double dof = per_dof_induced_error(strategy, ErrorModel::physical);
  p.dof_qber = eta * dof;
  // Eve's two DOF measurements err independently on an intercepted pair.
  p.xor_qber = eta * xor_error(dof);
  p.eve_alice = per_basis_eve_error(strategy);
  return p;
}

SessionSummary summarize(const SessionLog& log) {
  const SessionConfig& c = log.config;
  SessionSummary s;
  s.protocol = c.protocol;
  s.channel = c.channel;
  s.strategy = c.eve ? c.eve->strategy : Strategy::none;
  s.eta = c.eve ? c.eve->eta : 0.0;
  s.seed = c.seed;
  s.pairs = log.pairs.size();
  s.eve_session_choice = log.eve_session_choice;
  s.intercepted_fraction = intercepted_fraction(log);

  const SiftResult sifted = sift(log);
  s.kept_pairs = sifted.kept_pairs;
  s.retention = sifted.retention();
  const Predictions pred = c.injected_flip_rate > 0.0
                               ? Predictions{}
                               : physical_predictions(s.strategy, s.eta);
  for (Dof dof : key_dofs(c.channel)) {
    const SiftedKey& k = sifted.key(dof);
    DofSummary d;
    d.dof = dof;
    d.qber = make_rate_check({k.errors(), k.length()}, pred.dof_qber);
    d.eve_alice = make_rate_check(eve_alice_error(log, dof), pred.eve_alice);
    s.dofs.push_back(d);
  }
  if (c.channel == Channel::double_dof) {
    const SiftedKey x = xor_key(sifted.key(Dof::pol), sifted.key(Dof::phase));
    s.xor_qber = make_rate_check({x.errors(), x.length()}, pred.xor_qber);
  }
  s.per_bit = make_rate_check(per_bit_errors(sifted), pred.dof_qber);
  return s;
}

std::string summary_json(const SessionSummary& summary) {
  return session_summary_to_json(summary).dump(2) + "\n";
}

// --- paper-table command -------------------------------------------------

std::optional<double> Annotation::deviation() const {
  if (!printed) return std::nullopt;
  return computed - *printed;
}

PaperTable paper_table(std::optional<ErrorModel> model) {
  PaperTable t;
  for (const auto& r : analytics_table()) {
    if (model && r.model != *model) continue;
    t.rows.push_back(r);
    auto a = row_annotations(r);
    t.annotations.insert(t.annotations.end(), a.begin(), a.end());
  }
  for (Strategy s : {Strategy::fixed_basis, Strategy::breidbart}) {
    auto r = ratio_annotations(s, model);
    t.annotations.insert(t.annotations.end(), r.begin(), r.end());
  }
  auto h = huttner_annotations();
  t.annotations.insert(t.annotations.end(), h.begin(), h.end());
  return t;
}

std::string paper_table_json(const PaperTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) rows.push_back(detail::analytics_to_json(r));
  return json{{"analytics", rows}, {"annotations", annotations_json(table.annotations)}}
             .dump(2) +
         "\n";
}

std::string annotations_csv(const std::vector<Annotation>& annotations) {
  std::ostringstream os;
  os << kAnnotationCsvHeader << '\n';
  for (const auto& a : annotations) {
    os << a.section << ',' << a.strategy << ',' << a.channel << ',' << a.model << ','
       << a.quantity << ',' << format_double(a.computed) << ',' << csv_optional(a.printed)
       << ',' << csv_optional(a.deviation()) << '\n';
  }
  return os.str();
}

// --- Wigner --------------------------------------------------------------

double WignerMonteCarlo::z() const {
  return estimate.std_error > 0.0 ? std::abs(estimate.w - predicted) / estimate.std_error
                                  : kNaN;
}

WignerResult wigner_command(const WignerOptions& o) {
  for (double a : {o.settings.chi, o.settings.psi, o.settings.omega}) {
    if (!std::isfinite(a)) throw std::invalid_argument("Wigner angles must be finite");
  }
  if (!(o.eta >= 0.0 && o.eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  WignerResult r;
  r.options = o;
  r.single_channel = wigner_report(o.settings, o.eta, o.rel_uncertainty, 1);
  r.double_channel = wigner_report(o.settings, o.eta, o.rel_uncertainty, 2);
  std::vector<double> etas;
  for (int i = 0; i <= 20; ++i) etas.push_back(i / 100.0);
  r.sweep = wigner_sweep(etas, o.settings, o.rel_uncertainty, 1);
  r.lhv = lhv_enumeration();

  if (o.pairs > 0) {
    SessionConfig c;
    c.protocol = Protocol::ekert_wigner;
    c.n_pairs = o.pairs;
    c.channel = o.channel;
    c.seed = o.seed;
    c.threads = o.threads;
    if (o.eta > 0.0) {
      EavesdropConfig eve;
      eve.strategy = Strategy::fixed_basis;
      eve.eta = o.eta;
      c.eve = eve;
    }
    const WignerRunData data =
        wigner_session(c, o.settings, {.detection_efficiency = o.detection_efficiency});
    for (Dof dof : key_dofs(o.channel)) {
      WignerMonteCarlo mc;
      mc.dof = dof;
      mc.estimate = estimate_wigner(data, dof);
      mc.predicted = intercepted_wigner(o.settings, o.eta, 0.0, dof);
      mc.detected_pairs = data.detected_pairs;
      r.monte_carlo.push_back(mc);
    }
  }
  return r;
}

std::string wigner_result_json(const WignerResult& r) {
  const auto& s = r.options.settings;
  json sweep = json::array();
  for (const auto& row : r.sweep) {
    sweep.push_back({{"eta", row.eta},
                     {"W", row.w},
                     {"stderr", row.std_error},
                     {"detected", row.detected}});
  }
  json mc = json::array();
  for (const auto& m : r.monte_carlo) {
    mc.push_back({{"dof", to_string(m.dof)},
                  {"W", m.estimate.w},
                  {"stderr", m.estimate.std_error},
                  {"predicted", m.predicted},
                  {"z", detail::number(m.z())},
                  {"detectedPairs", m.detected_pairs}});
  }
  const json out = {
      {"anglesDeg", {{"chi", degrees(s.chi)}, {"psi", degrees(s.psi)}, {"omega", degrees(s.omega)}}},
      {"relUncertainty", r.options.rel_uncertainty},
      {"eta", r.options.eta},
      {"pairs", r.options.pairs},
      {"seed", r.options.seed},
      {"channel", to_string(r.options.channel)},
      {"detectionEfficiency", r.options.detection_efficiency},
      {"singleChannel", detail::wigner_report_to_json(r.single_channel)},
      {"doubleChannel", detail::wigner_report_to_json(r.double_channel)},
      {"thresholds",
       {{"single", r.single_channel.max_undetected_eta},
        {"double", r.double_channel.max_undetected_eta},
        {"printedSingle", 0.067},
        {"printedDouble", 0.047},
        {"doubleCombination", "two independent tests, threshold scaled by 1/sqrt(2)"}}},
      {"sweep", sweep},
      {"monteCarlo", mc},
      {"lhv",
       {{"assignments", r.lhv.assignments},
        {"correlated", r.lhv.correlated},
        {"minWCorrelated", r.lhv.min_w_correlated},
        {"minWOverall", r.lhv.min_w_overall},
        {"negativesBreakCorrelation", r.lhv.negatives_break_correlation},
        {"holds", r.lhv.holds()}}}};
  return out.dump(2) + "\n";
}

// --- random-rotation comparison ------------------------------------------

So4Report so4_command(const So4Options& o) {
  So4Report r;
  r.options = o;
  std::array<BootstrapArm, 3> boot;
  const std::array<Channel, 3> channels{Channel::single_pol, Channel::single_phase,
                                        Channel::double_dof};
  std::array<So4Arm*, 3> arms{&r.single_pol, &r.single_phase, &r.double_dof};
  for (std::size_t i = 0; i < 3; ++i) {
    const SessionLog log = run_session(
        attack_config(Strategy::random_rotation, channels[i], o.pairs, o.seed, o.threads));
    const SiftResult sifted = sift(log);
    *arms[i] = so4_arm(log, sifted);
    boot[i] = bootstrap_arm(sifted, channels[i]);
  }

  const ErrorTally single{r.single_pol.per_bit.errors + r.single_phase.per_bit.errors,
                          r.single_pol.per_bit.count + r.single_phase.per_bit.count};
  r.e2 = single.count ? single.rate() : kNaN;
  r.e4 = r.double_dof.per_bit.count ? r.double_dof.per_bit.rate() : kNaN;
  r.ratio = safe_ratio(r.e4, r.e2);
  r.xor_ratio = r.double_dof.xor_bits && r.double_dof.xor_bits->count
                    ? safe_ratio(r.double_dof.xor_bits->rate(), r.e2)
                    : kNaN;

  std::vector<double> samples;
  samples.reserve(o.bootstrap);
  for (unsigned b = 0; b < o.bootstrap; ++b) {
    Rng rng = Rng::stream(o.seed, Rng::Domain::bootstrap, b);
    const auto [e_pol, n_pol] = resample(boot[0], rng);
    const auto [e_phase, n_phase] = resample(boot[1], rng);
    const auto [e_dbl, n_dbl] = resample(boot[2], rng);
    const double e2 = n_pol + n_phase ? double(e_pol + e_phase) / double(n_pol + n_phase) : kNaN;
    const double e4 = n_dbl ? double(e_dbl) / double(n_dbl) : kNaN;
    const double ratio = safe_ratio(e4, e2);
    if (std::isfinite(ratio)) samples.push_back(ratio);
  }
  if (samples.empty()) {
    r.ci_low = r.ci_high = kNaN;
  } else {
    std::sort(samples.begin(), samples.end());
    auto at = [&](double q) {
      const auto idx = static_cast<std::size_t>(q * double(samples.size() - 1) + 0.5);
      return samples[std::min(idx, samples.size() - 1)];
    };
    r.ci_low = at(0.025);
    r.ci_high = at(0.975);
  }
  return r;
}

std::string so4_report_json(const So4Report& r) {
  const json out = {
      {"pairs", r.options.pairs},
      {"seed", r.options.seed},
      {"bootstrap", r.options.bootstrap},
      {"arms",
       {{"single-pol", so4_arm_json(r.single_pol)},
        {"single-phase", so4_arm_json(r.single_phase)},
        {"double", so4_arm_json(r.double_dof)}}},
      {"e2", detail::number(r.e2)},
      {"e4", detail::number(r.e4)},
      {"ratio", detail::number(r.ratio)},
      {"ci95", {detail::number(r.ci_low), detail::number(r.ci_high)}},
      {"xorRatio", detail::number(r.xor_ratio)},
      {"metric", "per-bit QBER, double channel over pooled single channels"},
      {"annotations", annotations_json(so4_annotations(r))}};
  return out.dump(2) + "\n";
}

std::vector<Annotation> so4_annotations(const So4Report& r) {
  Annotation n;
  n.section = "so4";
  n.strategy = to_string(Strategy::random_rotation);
  n.channel = "double/single";
  n.model = "montecarlo";
  n.quantity = "error_ratio";
  n.computed = r.ratio;
  n.printed = 1.25;
  n.printed_text = "1.25 about";
  std::vector<Annotation> out{n};
  n.quantity = "xor_error_ratio";
  n.computed = r.xor_ratio;
  n.printed = std::nullopt;
  n.printed_text.clear();
  out.push_back(n);
  return out;
}

// --- named scenarios -----------------------------------------------------

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"fixed-basis", "breidbart", "wigner-threshold",
                                              "so4-ratio", "huttner-bound"};
  return names;
}

std::string run_scenario(const std::string& name, OutputFormat format,
                         const ScenarioOptions& options) {
  if (name == "fixed-basis") return attack_scenario(Strategy::fixed_basis, format, options);
  if (name == "breidbart") return attack_scenario(Strategy::breidbart, format, options);
  if (name == "wigner-threshold") {
    WignerOptions w;
    w.pairs = options.pairs ? options.pairs : kDefaultWignerPairs;
    w.seed = options.seed;
    w.threads = options.threads;
    const WignerResult r = wigner_command(w);
    return format == OutputFormat::csv ? wigner_sweep_csv(r.sweep) : wigner_result_json(r);
  }
  if (name == "so4-ratio") {
    So4Options s;
    if (options.pairs) s.pairs = options.pairs;
    s.seed = options.seed;
    s.threads = options.threads;
    const So4Report r = so4_command(s);
    return format == OutputFormat::csv ? annotations_csv(so4_annotations(r))
                                       : so4_report_json(r);
  }
  if (name == "huttner-bound") {
    const auto notes = huttner_annotations();
    if (format == OutputFormat::csv) return annotations_csv(notes);
    const HuttnerEkertCoefficients c;
    const json out = {{"coefficients", {{"single", c.single}, {"double", c.double_dof}}},
                      {"eta", 1.0},
                      {"alpha", 1.0},
                      {"single", huttner_ekert_bound({}, ChannelKind::single, c)},
                      {"double", huttner_ekert_bound({}, ChannelKind::double_dof, c)},
                      {"annotations", annotations_json(notes)}};
    return out.dump(2) + "\n";
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

}  // namespace qkd2e
