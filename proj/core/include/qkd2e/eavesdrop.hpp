#pragma once

// Intercept-resend attacks on Bob's photon. Every strategy measures Bob's
// photon of the pair state projectively and hands Bob the basis vector it
// found; Alice's photon is never touched.

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qkd2e/entangled_source.hpp"
#include "qkd2e/quantum_core.hpp"
#include "qkd2e/rng.hpp"

namespace qkd2e {

/// Which degrees of freedom carry key bits.
enum class Channel { single_pol, single_phase, double_dof };

const char* to_string(Channel channel);
Channel parse_channel(const std::string& name);

/// Key DOFs of a channel, polarization first.
std::vector<Dof> key_dofs(Channel channel);

/// Two analyzer angles; index 0 and 1 are the party's basis choices.
struct BasisPair {
  double first = 0.0;
  double second = 0.0;
  double operator[](std::size_t i) const { return i == 0 ? first : second; }
  bool operator==(const BasisPair&) const = default;
};

/// A party's two polarization angles and two phase-analyzer phases.
struct PartyBases {
  BasisPair pol{0.0, std::numbers::pi / 4.0};
  BasisPair phase{0.0, std::numbers::pi / 2.0};
  const BasisPair& operator[](Dof dof) const {
    return dof == Dof::pol ? pol : phase;
  }
  bool operator==(const PartyBases&) const = default;
};

/// Bob's bases perfectly correlated with Alice's for the given pump phase.
PartyBases matched_bob_bases(const PartyBases& alice, double pump_phase);

/// Measurement basis of `dof` on one photon at analyzer value `angle`.
MeasurementBasis dof_basis(Dof dof, double angle);

/// Pair-space factor holding Bob's (or Alice's) `dof`.
std::size_t bob_factor(Dof dof);
std::size_t alice_factor(Dof dof);

enum class Strategy { none, fixed_basis, breidbart, random_rotation };

const char* to_string(Strategy strategy);
Strategy parse_strategy(const std::string& name);

/// Per-DOF basis index, indexed by Dof.
using DofChoice = std::array<std::uint8_t, 2>;

struct EavesdropConfig {
  Strategy strategy = Strategy::none;
  /// Probability that any given pair is intercepted.
  double eta = 0.0;
  /// Fixed-basis attack: Eve's basis per DOF. Unset means the engine draws
  /// it once per session.
  std::optional<DofChoice> fixed_choice;
  /// Fixed-basis attack: draw the basis afresh for every pair instead.
  bool per_pair_choice = false;
  /// Random-rotation attack: 2 on single channels, 4 on the double channel.
  /// 0 picks the channel's natural dimension.
  std::size_t rotation_dim = 0;

  /// Throws std::invalid_argument on out-of-range eta or a rotation dimension
  /// incompatible with `channel`.
  void validate(Channel channel) const;
  std::size_t effective_rotation_dim(Channel channel) const;
};

/// What Eve learned from one intercepted pair.
struct EveRecord {
  std::uint64_t pair_index = 0;
  /// Human-readable basis descriptor.
  std::string basis;
  /// Per key DOF outcome bits (fixed, Breidbart) or one rotated-basis index.
  std::vector<std::uint32_t> outcomes;
  /// Eve's bit for `dof` if the sifted basis turns out to be `b`:
  /// guess[dof][b]; -1 for DOFs outside the channel.
  std::array<std::array<std::int8_t, 2>, 2> guess{{{-1, -1}, {-1, -1}}};

  bool operator==(const EveRecord&) const = default;
};

struct Interception {
  StateVector state;
  EveRecord record;
};

/// Measures Bob's key DOFs at the given analyzer values (one per DOF, indexed
/// by Dof) and resends the collapsed eigenstates.
Interception intercept_at(const StateVector& pair, Channel channel,
                          const std::array<double, 2>& analyzer,
                          std::string descriptor, Rng& rng);

/// Eve measures in one of the legitimate bases per DOF.
Interception intercept_fixed(const StateVector& pair, Channel channel,
                             const PartyBases& bob_bases, DofChoice choice,
                             Rng& rng);

/// Eve measures every key DOF midway between the two legitimate bases.
Interception intercept_breidbart(const StateVector& pair, Channel channel,
                                 const PartyBases& bob_bases, Rng& rng);

/// Midpoint analyzer value between the two bases of a pair.
double breidbart_angle(const BasisPair& bases);

/// Eve measures Bob's photon in a Haar-rotated computational basis: dim 2
/// rotates the single key DOF, dim 4 the whole photon (time-bin ⊗ pol).
Interception intercept_random_rotation(const StateVector& pair, Channel channel,
                                       const PartyBases& bob_bases,
                                       std::size_t dim, Rng& rng);

/// Same with an explicit rotation instead of a Haar draw.
Interception intercept_rotated(const StateVector& pair, Channel channel,
                               const PartyBases& bob_bases,
                               const RotationMatrix& rotation, Rng& rng);

struct StrategyOutcome {
  StateVector state;
  std::optional<EveRecord> record;
};

/// Intercepts with probability eta using the configured attack, otherwise
/// passes the pair through untouched. `session_choice` is the fixed-basis
/// choice drawn for the session when config.fixed_choice is unset.
StrategyOutcome apply_strategy(const EavesdropConfig& config,
                               const StateVector& pair, Channel channel,
                               const PartyBases& bob_bases,
                               const DofChoice& session_choice, Rng& rng);

}  // namespace qkd2e
