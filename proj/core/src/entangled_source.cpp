#include "qkd2e/entangled_source.hpp"

#include <cmath>

namespace qkd2e {

namespace {

Labels joined(const Labels& slow, const Labels& fast, const char* sep) {
  std::vector<std::string> out;
  for (const auto& a : slow.names()) {
    for (const auto& b : fast.names()) out.push_back(a + sep + b);
  }
  return Labels(std::move(out));
}

void check_weight(double w, const char* name) {
  if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

const char* to_string(Dof dof) { return dof == Dof::pol ? "pol" : "phase"; }

const Labels& pol_labels() {
  static const Labels labels{"H", "V"};
  return labels;
}

const Labels& timebin_labels() {
  static const Labels labels{"s", "l"};
  return labels;
}

const Labels& photon_labels() {
  static const Labels labels =
      joined(timebin_labels(), pol_labels(), "");
  return labels;
}

const Labels& pair_labels() {
  static const Labels labels =
      joined(photon_labels(), photon_labels(), "⊗");
  return labels;
}

StateVector pump_superposition(double pump_phase) {
  const double r = std::numbers::sqrt2 / 2.0;
  return StateVector::normalized({Amplitude{r, 0.0}, std::polar(r, pump_phase)},
                                 timebin_labels());
}

StateVector biphoton_state(const SourceParams& params) {
  check_weight(params.pol_weight_h, "pol_weight_h");
  check_weight(params.timebin_weight_s, "timebin_weight_s");
  if (!std::isfinite(params.pump_phase)) {
    throw std::invalid_argument("pump phase must be finite");
  }
  const double wh = params.pol_weight_h;
  const double wv = std::sqrt(std::max(0.0, 1.0 - wh * wh));
  const double ws = params.timebin_weight_s;
  const double wl = std::sqrt(std::max(0.0, 1.0 - ws * ws));
  const Amplitude long_phase = std::polar(1.0, params.pump_phase);

  std::vector<Amplitude> amps(16, Amplitude{0.0, 0.0});
  const Labels& labels = pair_labels();
  auto at = [&](const char* a, const char* b) -> Amplitude& {
    const std::string key = std::string(a) + "⊗" + b;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == key) return amps[i];
    }
    throw std::logic_error("unknown pair label " + key);
  };
  at("sH", "sH") = ws * wh;
  at("sV", "sV") = ws * wv;
  at("lV", "lV") = long_phase * (wl * wv);
  at("lH", "lH") = long_phase * (wl * wh);
  return StateVector::normalized(std::move(amps), labels);
}

MeasurementBasis pol_basis(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("angle must be finite");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return MeasurementBasis(
      {StateVector::normalized({c, s}, pol_labels()),
       StateVector::normalized({-s, c}, pol_labels())},
      "pol(" + std::to_string(angle) + ")");
}

MeasurementBasis phase_basis(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("phase must be finite");
  const Amplitude e = std::polar(1.0, theta);
  const double r = std::numbers::sqrt2 / 2.0;
  return MeasurementBasis(
      {StateVector::normalized({r, r * e}, timebin_labels()),
       StateVector::normalized({r, -r * e}, timebin_labels())},
      "phase(" + std::to_string(theta) + ")");
}

MeasurementBasis photon_basis(const AnalyzerSetting& setting) {
  return tensor(phase_basis(setting.phase), pol_basis(setting.pol_angle));
}

InvarianceResult basis_invariance_check(const SourceParams& params) {
  const StateVector psi = biphoton_state(params);
  // Per-photon basis: time-bin computational ⊗ |+->.
  const MeasurementBasis pm = pol_basis(std::numbers::pi / 4.0);
  const MeasurementBasis per_photon =
      tensor(MeasurementBasis::computational(timebin_labels()), pm);
  const MeasurementBasis pair = tensor(per_photon, per_photon);

  // Expected coefficients: index = 4 * a + b with a, b = 2 t + sign.
  const Amplitude half{0.5, 0.0};
  const Amplitude long_half = 0.5 * std::polar(1.0, params.pump_phase);
  double residual = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      Amplitude expected{0.0, 0.0};
      if (a == b) expected = (a < 2) ? half : long_half;
      const Amplitude got = inner(pair[4 * a + b], psi);
      residual = std::max(residual, std::abs(got - expected));
    }
  }
  return {residual < kInvariantTol, residual};
}

FransonCoincidence franson_coincidence(const InterferometerSettings& settings) {
  SourceParams params;
  params.pump_phase = settings.pump_phase;
  const StateVector psi = biphoton_state(params);
  const MeasurementBasis joint =
      tensor(phase_basis(settings.alice_phase), phase_basis(settings.bob_phase));
  const std::array<std::size_t, 2> timebins{factor::alice_timebin,
                                            factor::bob_timebin};
  const auto p = marginal_distribution(psi, kPairFactors, timebins, joint);
  return {p[0] + p[3], p[1] + p[2]};
}

double matched_bob_phase(double pump_phase, double alice_phase) {
  return pump_phase - alice_phase;
}

}  // namespace qkd2e
