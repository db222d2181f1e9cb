#pragma once

// Doubly-entangled biphoton source: pump time-bin superposition, the
// polarization x time-bin entangled pair, and the analyzer bases used by the
// two receivers.
//
// Layout of the 16-dim pair space: photon A (Alice) is the slow index. Each
// photon is time-bin (s, l) x polarization (H, V), time-bin slower, giving
// per-photon labels sH, sV, lH, lV and factor order
//   0: A time-bin   1: A polarization   2: B time-bin   3: B polarization

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "qkd2e/quantum_core.hpp"

namespace qkd2e {

/// Factor dimensions of the pair space, see file comment.
inline constexpr std::array<std::size_t, 4> kPairFactors{2, 2, 2, 2};

namespace factor {
inline constexpr std::size_t alice_timebin = 0;
inline constexpr std::size_t alice_pol = 1;
inline constexpr std::size_t bob_timebin = 2;
inline constexpr std::size_t bob_pol = 3;
}  // namespace factor

/// Degree of freedom carrying a key bit.
enum class Dof { pol = 0, phase = 1 };

const char* to_string(Dof dof);

struct SourceParams {
  double pump_phase = 0.0;
  /// Amplitude of the H pair term; V gets sqrt(1 - w^2).
  double pol_weight_h = std::numbers::sqrt2 / 2.0;
  /// Amplitude of the short-path term; long gets sqrt(1 - w^2).
  double timebin_weight_s = std::numbers::sqrt2 / 2.0;
};

struct InterferometerSettings {
  double pump_phase = 0.0;
  double alice_phase = 0.0;
  double bob_phase = 0.0;
};

struct AnalyzerSetting {
  double pol_angle = 0.0;
  double phase = 0.0;
};

struct InvarianceResult {
  bool holds;
  double residual;
};

struct FransonCoincidence {
  double p_same;
  double p_different;
};

const Labels& pol_labels();      // H, V
const Labels& timebin_labels();  // s, l
const Labels& photon_labels();   // sH, sV, lH, lV
const Labels& pair_labels();     // sH⊗sH ... lV⊗lV

/// (|s> + e^{i phi}|l>)/sqrt(2).
StateVector pump_superposition(double pump_phase);

/// w_s w_H |sH,sH> + w_s w_V |sV,sV> + e^{i phi} w_l (w_V |lV,lV> + w_H |lH,lH>)
/// Throws std::invalid_argument if a weight is outside [0, 1] or not finite.
StateVector biphoton_state(const SourceParams& params = {});

/// Linear polarization analyzer: {(cos a, sin a), (-sin a, cos a)} over H, V.
MeasurementBasis pol_basis(double angle);

/// Time-bin analyzer in the central slot: (|s> +- e^{i theta}|l>)/sqrt(2).
MeasurementBasis phase_basis(double theta);

/// Phase basis ⊗ polarization basis on one photon (outcome = 2 t + p).
MeasurementBasis photon_basis(const AnalyzerSetting& setting);

/// Re-expresses the pair state in the |+-> polarization basis on both photons
/// and compares it with the form-invariant pattern (1/2 on s++, s--, and
/// e^{i phi}/2 on l++, l--). Holds when residual < kInvariantTol.
InvarianceResult basis_invariance_check(const SourceParams& params);

/// Time-bin coincidence statistics for pump, Alice and Bob interferometer
/// phases, by Born rule on the pair state.
FransonCoincidence franson_coincidence(const InterferometerSettings& settings);

/// Bob's analyzer phase that is perfectly correlated with Alice's phase
/// `alice_phase` for pump phase `pump_phase`.
double matched_bob_phase(double pump_phase, double alice_phase);

/// Fraction of events kept by central-slot post-selection per interferometer.
inline constexpr double kCentralSlotFraction = 0.5;

}  // namespace qkd2e
