#pragma once

// JSON builders shared by the report writers. Private to the core library.

#include <cmath>

#include "json.hpp"
#include "qkd2e/info_analysis.hpp"
#include "qkd2e/wigner.hpp"

namespace qkd2e::detail {

/// Non-finite values become null.
inline nlohmann::json number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline nlohmann::json analytics_to_json(const AttackAnalytics& a) {
  return {{"strategy", to_string(a.strategy)},
          {"channel", to_string(a.channel)},
          {"model", to_string(a.model)},
          {"q1", a.q1},
          {"p2", a.p2},
          {"I_AE", a.info_alice_eve},
          {"q_AB", a.q_ab},
          {"I_AB", a.info_alice_bob}};
}

inline nlohmann::json settings_to_json(const WignerSettings& s) {
  return {{"chi", s.chi}, {"psi", s.psi}, {"omega", s.omega}};
}

inline nlohmann::json wigner_report_to_json(const WignerReport& r) {
  return {{"dof", to_string(r.dof)},
          {"settings", settings_to_json(r.settings)},
          {"pPairs",
           {{"chi_psi", r.p_pairs.chi_psi},
            {"psi_omega", r.p_pairs.psi_omega},
            {"chi_omega", r.p_pairs.chi_omega}}},
          {"W", r.w},
          {"eta", r.eta},
          {"eveAngle", r.eve_angle},
          {"relUncertainty", r.rel_uncertainty},
          {"nTests", r.n_tests},
          {"slope", r.slope},
          {"maxUndetectedEta", r.max_undetected_eta}};
}

}  // namespace qkd2e::detail
