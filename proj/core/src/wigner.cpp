#include "qkd2e/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qkd2e/eavesdrop.hpp"

namespace qkd2e {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;
constexpr double kZeroSlope = 1e-12;

double alice_analyzer(Dof dof, double angle) {
  return dof == Dof::pol ? angle : wigner_phase_angle(angle);
}

double bob_analyzer(Dof dof, double angle, double pump_phase) {
  return dof == Dof::pol ? angle
                         : matched_bob_phase(pump_phase, wigner_phase_angle(angle));
}

// P(Alice 0, Bob 1) on the two factors of `dof`.
double joint_01(const StateVector& state, Dof dof, double alice_angle,
                double bob_angle, double pump_phase) {
  const std::array<std::size_t, 2> sub{alice_factor(dof), bob_factor(dof)};
  const MeasurementBasis joint =
      tensor(dof_basis(dof, alice_analyzer(dof, alice_angle)),
             dof_basis(dof, bob_analyzer(dof, bob_angle, pump_phase)));
  return marginal_distribution(state, kPairFactors, sub, joint)[1];
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0, 1]");
  }
}

double binomial_variance(const SettingCount& c) {
  const double p = double(c.coincidences) / double(c.trials);
  return p * (1.0 - p) / double(c.trials);
}

}  // namespace

WignerSettings default_wigner_settings() {
  return {0.0, 30.0 * kDegree, 60.0 * kDegree};
}

double coincidence_probability(Dof dof, double alice_angle, double bob_angle,
                               std::optional<double> intercept_angle,
                               double pump_phase) {
  for (double a : {alice_angle, bob_angle, intercept_angle.value_or(0.0), pump_phase}) {
    if (!std::isfinite(a)) throw std::invalid_argument("angles must be finite");
  }
  const StateVector source = biphoton_state({.pump_phase = pump_phase});
  if (!intercept_angle) {
    return joint_01(source, dof, alice_angle, bob_angle, pump_phase);
  }
  const std::array<std::size_t, 1> eve_sub{bob_factor(dof)};
  const MeasurementBasis eve_basis =
      dof_basis(dof, bob_analyzer(dof, *intercept_angle, pump_phase));
  double total = 0.0;
  for (const auto& branch :
       measurement_branches(source, kPairFactors, eve_sub, eve_basis)) {
    if (branch.probability < kZeroProbability) continue;
    const StateVector collapsed(branch.collapsed, source.labels());
    total += branch.probability *
             joint_01(collapsed, dof, alice_angle, bob_angle, pump_phase);
  }
  return total;
}

double quantum_wigner(const WignerSettings& settings, Dof dof, double pump_phase) {
  return wigner_value(settings, [&](double a, double b) {
    return coincidence_probability(dof, a, b, std::nullopt, pump_phase);
  });
}

double intercepted_wigner(const WignerSettings& settings, double eta,
                          double eve_angle, Dof dof, double pump_phase) {
  check_eta(eta);
  const double w_quantum = quantum_wigner(settings, dof, pump_phase);
  const double w_intercepted = wigner_value(settings, [&](double a, double b) {
    return coincidence_probability(dof, a, b, eve_angle, pump_phase);
  });
  return (1.0 - eta) * w_quantum + eta * w_intercepted;
}

double wigner_shift_slope(const WignerSettings& settings, double eve_angle, Dof dof) {
  return intercepted_wigner(settings, 1.0, eve_angle, dof) -
         quantum_wigner(settings, dof);
}

double max_undetected_fraction(double rel_uncertainty, unsigned n_tests,
                               const WignerSettings& settings, double eve_angle) {
  if (!(rel_uncertainty > 0.0)) {
    throw std::invalid_argument("relative uncertainty must be positive");
  }
  if (n_tests == 0) throw std::invalid_argument("at least one Wigner test is required");
  const double slope = wigner_shift_slope(settings, eve_angle);
  if (std::abs(slope) < kZeroSlope) {
    throw std::invalid_argument("interception at this angle does not shift W");
  }
  const double w_quantum = quantum_wigner(settings);
  return rel_uncertainty * std::abs(w_quantum) /
         (std::abs(slope) * std::sqrt(double(n_tests)));
}

WignerEstimate estimate_wigner(const DofWignerCounts& counts) {
  const std::array<const SettingCount*, 3> cells{&counts.chi_psi(), &counts.psi_omega(),
                                                 &counts.chi_omega()};
  for (const auto* c : cells) {
    if (c->trials == 0) {
      throw std::invalid_argument("no trials at a Wigner setting pair");
    }
  }
  auto freq = [](const SettingCount& c) {
    return double(c.coincidences) / double(c.trials);
  };
  WignerEstimate est;
  est.terms = {freq(*cells[0]), freq(*cells[1]), freq(*cells[2])};
  est.w = est.terms.value();
  double variance = 0.0;
  for (const auto* c : cells) variance += binomial_variance(*c);
  est.std_error = std::sqrt(variance);
  return est;
}

WignerEstimate estimate_wigner(const WignerRunData& data, Dof dof) {
  const auto& counts = data.dofs[static_cast<std::size_t>(dof)];
  if (!counts) {
    throw std::invalid_argument(std::string("run has no ") + to_string(dof) +
                                " Wigner statistics");
  }
  return estimate_wigner(*counts);
}

int LocalAssignment::wigner() const {
  auto p = [&](std::size_t a, std::size_t b) {
    return int(alice[a] == 0 && bob[b] == 1);
  };
  return p(0, 1) + p(1, 2) - p(0, 2);
}

LhvCheck lhv_enumeration() {
  LhvCheck check;
  check.min_w_correlated = 1;
  check.min_w_overall = 1;
  for (unsigned bits = 0; bits < 64; ++bits) {
    LocalAssignment la;
    for (std::size_t k = 0; k < 3; ++k) {
      la.alice[k] = (bits >> k) & 1u;
      la.bob[k] = (bits >> (k + 3)) & 1u;
    }
    const int w = la.wigner();
    ++check.assignments;
    check.min_w_overall = std::min(check.min_w_overall, w);
    if (la.perfectly_correlated()) {
      ++check.correlated;
      check.min_w_correlated = std::min(check.min_w_correlated, w);
      if (w < 0) check.negatives_break_correlation = false;
    }
  }
  return check;
}

WignerReport wigner_report(const WignerSettings& settings, double eta,
                           double rel_uncertainty, unsigned n_tests,
                           double eve_angle, Dof dof) {
  check_eta(eta);
  WignerReport r;
  r.dof = dof;
  r.settings = settings;
  r.eta = eta;
  r.eve_angle = eve_angle;
  r.rel_uncertainty = rel_uncertainty;
  r.n_tests = n_tests;
  r.p_pairs = wigner_terms(settings, [&](double a, double b) {
    return (1.0 - eta) * coincidence_probability(dof, a, b) +
           eta * coincidence_probability(dof, a, b, eve_angle);
  });
  r.w = r.p_pairs.value();
  r.slope = wigner_shift_slope(settings, eve_angle, dof);
  r.max_undetected_eta = max_undetected_fraction(rel_uncertainty, n_tests, settings, eve_angle);
  return r;
}

std::vector<WignerSweepRow> wigner_sweep(const std::vector<double>& etas,
                                         const WignerSettings& settings,
                                         double rel_uncertainty, unsigned n_tests,
                                         double eve_angle) {
  if (!(rel_uncertainty > 0.0) || n_tests == 0) {
    throw std::invalid_argument("sweep needs positive uncertainty and n_tests >= 1");
  }
  const double w_quantum = quantum_wigner(settings);
  const double sigma = rel_uncertainty * std::abs(w_quantum) / std::sqrt(double(n_tests));
  std::vector<WignerSweepRow> rows;
  rows.reserve(etas.size());
  for (double eta : etas) {
    WignerSweepRow row;
    row.eta = eta;
    row.w = intercepted_wigner(settings, eta, eve_angle);
    row.std_error = sigma;
    row.detected = std::abs(row.w - w_quantum) > sigma;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qkd2e
