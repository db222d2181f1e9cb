#pragma once

// Wigner inequality W = p(chi,psi) + p(psi,omega) - p(chi,omega) >= 0 for
// local hidden variables, evaluated on the biphoton state.
//
// p(a, b) is the probability that Alice's analyzer at a gives outcome 0 and
// Bob's analyzer at b gives outcome 1. Angles are polarization angles; the
// phase DOF uses Alice phase 2a and Bob phase (pump_phase - 2b), which gives
// the same correlation function on the Bloch equator.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qkd2e/entangled_source.hpp"
#include "qkd2e/protocol.hpp"

namespace qkd2e {

/// Optimal violating settings: 0, 30 and 60 degrees.
WignerSettings default_wigner_settings();

/// Born-rule coincidence probability on `dof`. With `intercept_angle` set,
/// Eve has measured Bob's photon on that DOF at the given analyzer angle and
/// resent the eigenstate; the result averages over her outcomes.
double coincidence_probability(Dof dof, double alice_angle, double bob_angle,
                               std::optional<double> intercept_angle = std::nullopt,
                               double pump_phase = 0.0);

struct WignerTerms {
  double chi_psi = 0.0;
  double psi_omega = 0.0;
  double chi_omega = 0.0;

  double value() const { return chi_psi + psi_omega - chi_omega; }
};

/// The three coincidence probabilities of `settings` under `p`.
template <class P>
WignerTerms wigner_terms(const WignerSettings& s, P&& p) {
  return {p(s.chi, s.psi), p(s.psi, s.omega), p(s.chi, s.omega)};
}

template <class P>
double wigner_value(const WignerSettings& s, P&& p) {
  return wigner_terms(s, std::forward<P>(p)).value();
}

/// Quantum W without eavesdropping.
double quantum_wigner(const WignerSettings& settings, Dof dof = Dof::pol,
                      double pump_phase = 0.0);

/// (1 - eta) W_quantum + eta W_intercepted, Eve measuring at `eve_angle`.
/// Throws std::invalid_argument for eta outside [0, 1].
double intercepted_wigner(const WignerSettings& settings, double eta,
                          double eve_angle = 0.0, Dof dof = Dof::pol,
                          double pump_phase = 0.0);

/// dW/d eta for interception at `eve_angle`.
double wigner_shift_slope(const WignerSettings& settings, double eve_angle = 0.0,
                          Dof dof = Dof::pol);

/// Largest eta whose shift stays within rel_uncertainty |W_quantum| / sqrt(n)
/// for n independent Wigner tests. Throws std::invalid_argument if
/// rel_uncertainty <= 0, n_tests == 0, or the slope vanishes.
double max_undetected_fraction(double rel_uncertainty, unsigned n_tests,
                               const WignerSettings& settings = default_wigner_settings(),
                               double eve_angle = 0.0);

struct WignerEstimate {
  double w = 0.0;
  double std_error = 0.0;
  WignerTerms terms;
};

/// Empirical W with binomial standard error, treating the three setting
/// pairs as independent. Throws std::invalid_argument on zero trials.
WignerEstimate estimate_wigner(const DofWignerCounts& counts);
WignerEstimate estimate_wigner(const WignerRunData& data, Dof dof);

/// Deterministic local assignment: Alice's and Bob's outcomes at chi, psi,
/// omega.
struct LocalAssignment {
  std::array<std::uint8_t, 3> alice{};
  std::array<std::uint8_t, 3> bob{};

  bool perfectly_correlated() const { return alice == bob; }
  int wigner() const;
};

struct LhvCheck {
  std::size_t assignments = 0;
  std::size_t correlated = 0;
  int min_w_correlated = 0;
  int min_w_overall = 0;
  /// Every negative-W assignment breaks the same-setting correlation.
  bool negatives_break_correlation = true;

  bool holds() const { return min_w_correlated >= 0 && negatives_break_correlation; }
};

/// Enumerates all 64 deterministic assignments.
LhvCheck lhv_enumeration();

struct WignerReport {
  Dof dof = Dof::pol;
  WignerSettings settings;
  WignerTerms p_pairs;
  double w = 0.0;
  double eta = 0.0;
  double eve_angle = 0.0;
  double rel_uncertainty = 0.1;
  unsigned n_tests = 1;
  double slope = 0.0;
  double max_undetected_eta = 0.0;
};

/// Analytic report at interception fraction `eta`; w is recomputed from
/// p_pairs.
WignerReport wigner_report(const WignerSettings& settings, double eta,
                           double rel_uncertainty, unsigned n_tests,
                           double eve_angle = 0.0, Dof dof = Dof::pol);

struct WignerSweepRow {
  double eta = 0.0;
  double w = 0.0;
  /// Assumed measurement uncertainty rel_uncertainty |W_quantum| / sqrt(n).
  double std_error = 0.0;
  bool detected = false;
};

/// Analytic W(eta) on `etas`; a row is detected when its shift from
/// W_quantum exceeds std_error.
std::vector<WignerSweepRow> wigner_sweep(const std::vector<double>& etas,
                                         const WignerSettings& settings,
                                         double rel_uncertainty, unsigned n_tests,
                                         double eve_angle = 0.0);

}  // namespace qkd2e
