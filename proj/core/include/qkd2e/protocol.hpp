#pragma once

// Seeded key-distribution sessions over the biphoton source.
//
// bb84x2: each party picks one of two bases per key DOF uniformly at random,
// measures, and publicly compares bases; pairs where every key DOF matches
// are kept. On the double channel the final key bit is the XOR of the
// polarization and phase bits.
//
// ekert-wigner: Alice picks from {chi, psi, key} and Bob from {psi, omega,
// key}; key-key rounds give key bits, the rest feed Wigner statistics.
//
// Pair i draws all of its randomness from substream i of the master seed, so
// results do not depend on the number of worker threads.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkd2e/eavesdrop.hpp"

namespace qkd2e {

enum class Protocol { bb84x2, ekert_wigner };

const char* to_string(Protocol protocol);
Protocol parse_protocol(const std::string& name);

struct SessionConfig {
  Protocol protocol = Protocol::bb84x2;
  std::uint64_t n_pairs = 1000;
  Channel channel = Channel::double_dof;
  std::optional<EavesdropConfig> eve;
  std::uint64_t seed = 0;
  double pump_phase = 0.0;
  PartyBases alice{};
  /// Defaults to matched_bob_bases(alice, pump_phase).
  std::optional<PartyBases> bob;
  /// Independent flip probability applied to each of Bob's key bits after
  /// measurement. Zero for physical runs; used to probe error composition.
  double injected_flip_rate = 0.0;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;

  PartyBases bob_bases() const;

  /// Throws std::invalid_argument on an invalid configuration.
  void validate() const;
};

/// Per-DOF values, indexed by Dof; unset for DOFs the channel does not use.
using DofBits = std::array<std::optional<std::uint8_t>, 2>;

struct PairRecord {
  std::uint64_t index = 0;
  DofBits alice_basis;
  DofBits bob_basis;
  DofBits alice_out;
  DofBits bob_out;
  bool eve_intercepted = false;
  std::optional<EveRecord> eve;
  bool sifted = false;

  bool operator==(const PairRecord&) const = default;
};

struct SessionLog {
  SessionConfig config;
  std::vector<PairRecord> pairs;
  /// Eve's per-session fixed-basis choice, when the attack uses one.
  std::optional<DofChoice> eve_session_choice;
  /// Central-slot post-selection factor per interferometer (metadata only).
  double post_selection_factor = kCentralSlotFraction;
};

/// Runs a bb84x2 session. Throws std::invalid_argument on invalid config.
SessionLog run_session(const SessionConfig& config);

struct SiftedKey {
  std::vector<std::uint8_t> alice;
  std::vector<std::uint8_t> bob;
  /// Pair index each bit came from.
  std::vector<std::uint64_t> indices;

  std::size_t length() const { return alice.size(); }
  bool empty() const { return alice.empty(); }
  std::size_t errors() const;
  /// Hamming distance / length; 0 for an empty key.
  double qber() const;
};

enum class SiftMode {
  /// Keep a pair only if every key DOF's bases match.
  all_key_dofs,
  /// Keep a pair for DOF d whenever the bases match on d.
  per_dof,
};

struct SiftResult {
  std::array<std::optional<SiftedKey>, 2> keys;
  std::uint64_t total_pairs = 0;
  /// Pairs kept for every key DOF (all_key_dofs) or for the first key DOF.
  std::uint64_t kept_pairs = 0;
  double retention() const;
  const SiftedKey& key(Dof dof) const;
};

/// Throws std::invalid_argument on an empty log.
SiftResult sift(const SessionLog& log, SiftMode mode = SiftMode::all_key_dofs);

/// Bitwise XOR of two keys sifted on the same pairs. Throws
/// std::invalid_argument if the pair indices differ.
SiftedKey xor_key(const SiftedKey& pol, const SiftedKey& phase);

struct ErrorTally {
  std::uint64_t errors = 0;
  std::uint64_t count = 0;
  double rate() const { return count ? double(errors) / double(count) : 0.0; }
};

/// Eve's bit against Alice's on intercepted pairs sifted on `dof`, optionally
/// restricted to pairs whose sifted basis is `basis`.
ErrorTally eve_alice_error(const SessionLog& log, Dof dof,
                           std::optional<std::uint8_t> basis = std::nullopt);

/// Fraction of pairs with the interception flag set.
double intercepted_fraction(const SessionLog& log);

/// Per-bit QBER over every sifted key bit of every key DOF.
ErrorTally per_bit_errors(const SiftResult& sifted);

// --- Wigner variant ------------------------------------------------------

struct WignerSettings {
  double chi = 0.0;
  double psi = 0.0;
  double omega = 0.0;
};

struct WignerSessionOptions {
  /// Detection probability of each photon path.
  double detection_efficiency = 0.05;
  /// Polarization angle of the shared key basis.
  double key_angle = 0.0;
};

struct SettingCount {
  double alice_angle = 0.0;
  double bob_angle = 0.0;
  /// Rounds with Alice outcome 0 and Bob outcome 1.
  std::uint64_t coincidences = 0;
  /// Rounds where both photons were detected.
  std::uint64_t trials = 0;
};

/// Alice option index: 0 = chi, 1 = psi, 2 = key.
/// Bob option index:   0 = psi, 1 = omega, 2 = key.
struct DofWignerCounts {
  std::array<std::array<SettingCount, 3>, 3> grid{};
  ErrorTally key;

  const SettingCount& chi_psi() const { return grid[0][0]; }
  const SettingCount& psi_omega() const { return grid[1][1]; }
  const SettingCount& chi_omega() const { return grid[0][1]; }
};

struct WignerRunData {
  WignerSettings settings;
  double key_angle = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t detected_pairs = 0;
  std::uint64_t intercepted = 0;
  std::array<std::optional<DofWignerCounts>, 2> dofs;
};

/// Phase-analyzer value for a Wigner polarization angle: the phase analyzers
/// use twice the polarization angle on the Bloch equator.
double wigner_phase_angle(double pol_angle);

/// Runs an ekert-wigner session. Eve, when configured, intercepts Bob's photon
/// in the key basis of each key DOF (strategy must be none or fixed-basis).
/// Throws std::invalid_argument on non-finite angles or wrong protocol.
WignerRunData wigner_session(const SessionConfig& config,
                             const WignerSettings& settings,
                             const WignerSessionOptions& options = {});

}  // namespace qkd2e
