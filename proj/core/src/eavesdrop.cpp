#include "qkd2e/eavesdrop.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qkd2e {

const char* to_string(Channel channel) {
  switch (channel) {
    case Channel::single_pol: return "single-pol";
    case Channel::single_phase: return "single-phase";
    case Channel::double_dof: return "double";
  }
  return "?";
}

Channel parse_channel(const std::string& name) {
  if (name == "single-pol") return Channel::single_pol;
  if (name == "single-phase") return Channel::single_phase;
  if (name == "double") return Channel::double_dof;
  throw std::invalid_argument("unknown channel '" + name + "'");
}

std::vector<Dof> key_dofs(Channel channel) {
  switch (channel) {
    case Channel::single_pol: return {Dof::pol};
    case Channel::single_phase: return {Dof::phase};
    case Channel::double_dof: return {Dof::pol, Dof::phase};
  }
  return {};
}

PartyBases matched_bob_bases(const PartyBases& alice, double pump_phase) {
  PartyBases bob = alice;
  bob.phase = {matched_bob_phase(pump_phase, alice.phase.first),
               matched_bob_phase(pump_phase, alice.phase.second)};
  return bob;
}

MeasurementBasis dof_basis(Dof dof, double angle) {
  return dof == Dof::pol ? pol_basis(angle) : phase_basis(angle);
}

std::size_t bob_factor(Dof dof) {
  return dof == Dof::pol ? factor::bob_pol : factor::bob_timebin;
}

std::size_t alice_factor(Dof dof) {
  return dof == Dof::pol ? factor::alice_pol : factor::alice_timebin;
}

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::none: return "none";
    case Strategy::fixed_basis: return "fixed-basis";
    case Strategy::breidbart: return "breidbart";
    case Strategy::random_rotation: return "random-rotation";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "none") return Strategy::none;
  if (name == "fixed-basis") return Strategy::fixed_basis;
  if (name == "breidbart") return Strategy::breidbart;
  if (name == "random-rotation" || name == "so4" || name == "so2") {
    return Strategy::random_rotation;
  }
  throw std::invalid_argument("unknown eavesdropping strategy '" + name + "'");
}

void EavesdropConfig::validate(Channel channel) const {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0, 1]");
  }
  if (fixed_choice) {
    for (auto c : *fixed_choice) {
      if (c > 1) throw std::invalid_argument("fixed basis choice must be 0 or 1");
    }
  }
  if (strategy == Strategy::random_rotation) {
    const std::size_t dim = effective_rotation_dim(channel);
    const std::size_t natural = channel == Channel::double_dof ? 4 : 2;
    if (dim != natural) {
      throw std::invalid_argument(
          "rotation dimension " + std::to_string(dim) + " does not match the " +
          to_string(channel) + " channel");
    }
  }
}

std::size_t EavesdropConfig::effective_rotation_dim(Channel channel) const {
  if (rotation_dim != 0) return rotation_dim;
  return channel == Channel::double_dof ? 4 : 2;
}

Interception intercept_at(const StateVector& pair, Channel channel,
                          const std::array<double, 2>& analyzer,
                          std::string descriptor, Rng& rng) {
  StateVector state = pair;
  EveRecord record;
  record.basis = std::move(descriptor);
  for (Dof dof : key_dofs(channel)) {
    const auto d = static_cast<std::size_t>(dof);
    const std::array<std::size_t, 1> sub{bob_factor(dof)};
    Measurement m = partial_measure(state, kPairFactors, sub,
                                    dof_basis(dof, analyzer[d]), rng.uniform());
    state = std::move(m.state);
    record.outcomes.push_back(static_cast<std::uint32_t>(m.outcome));
    const auto bit = static_cast<std::int8_t>(m.outcome);
    record.guess[d] = {bit, bit};
  }
  return {std::move(state), std::move(record)};
}

Interception intercept_fixed(const StateVector& pair, Channel channel,
                             const PartyBases& bob_bases, DofChoice choice,
                             Rng& rng) {
  const std::array<double, 2> analyzer{bob_bases.pol[choice[0]],
                                       bob_bases.phase[choice[1]]};
  std::ostringstream desc;
  desc << "fixed:pol=" << int(choice[0]) << ",phase=" << int(choice[1]);
  return intercept_at(pair, channel, analyzer, desc.str(), rng);
}

double breidbart_angle(const BasisPair& bases) {
  return 0.5 * (bases.first + bases.second);
}

Interception intercept_breidbart(const StateVector& pair, Channel channel,
                                 const PartyBases& bob_bases, Rng& rng) {
  const std::array<double, 2> analyzer{breidbart_angle(bob_bases.pol),
                                       breidbart_angle(bob_bases.phase)};
  return intercept_at(pair, channel, analyzer, "breidbart", rng);
}

Interception intercept_rotated(const StateVector& pair, Channel channel,
                               const PartyBases& bob_bases,
                               const RotationMatrix& rotation, Rng& rng) {
  const std::size_t dim = rotation.n();
  std::vector<std::size_t> sub;
  MeasurementBasis computational = [&] {
    if (dim == 4) {
      if (channel != Channel::double_dof) {
        throw std::invalid_argument("SO(4) interception requires the double channel");
      }
      sub = {factor::bob_timebin, factor::bob_pol};
      return MeasurementBasis::computational(photon_labels());
    }
    if (dim == 2) {
      if (channel == Channel::double_dof) {
        throw std::invalid_argument("SO(2) interception requires a single channel");
      }
      const Dof dof = key_dofs(channel).front();
      sub = {bob_factor(dof)};
      return MeasurementBasis::computational(dof == Dof::pol ? pol_labels()
                                                             : timebin_labels());
    }
    throw std::invalid_argument("unsupported rotation dimension " +
                                std::to_string(dim));
  }();
  const MeasurementBasis eve_basis = rotate_basis(computational, rotation);
  Measurement m =
      partial_measure(pair, kPairFactors, sub, eve_basis, rng.uniform());

  EveRecord record;
  record.basis = dim == 4 ? "so4" : "so2";
  record.outcomes = {static_cast<std::uint32_t>(m.outcome)};
  const StateVector& resent = eve_basis[m.outcome];
  const std::array<std::size_t, 2> photon_dims{2, 2};
  for (Dof dof : key_dofs(channel)) {
    const auto d = static_cast<std::size_t>(dof);
    for (std::size_t b = 0; b < 2; ++b) {
      const MeasurementBasis legit = dof_basis(dof, bob_bases[dof][b]);
      std::vector<double> p;
      if (dim == 4) {
        const std::array<std::size_t, 1> part{dof == Dof::phase ? 0u : 1u};
        p = marginal_distribution(resent, photon_dims, part, legit);
      } else {
        p = born_distribution(resent, legit);
      }
      record.guess[d][b] = p[0] >= p[1] ? 0 : 1;
    }
  }
  return {std::move(m.state), std::move(record)};
}

Interception intercept_random_rotation(const StateVector& pair, Channel channel,
                                       const PartyBases& bob_bases,
                                       std::size_t dim, Rng& rng) {
  const RotationMatrix rotation = haar_rotation(dim, rng);
  return intercept_rotated(pair, channel, bob_bases, rotation, rng);
}

StrategyOutcome apply_strategy(const EavesdropConfig& config,
                               const StateVector& pair, Channel channel,
                               const PartyBases& bob_bases,
                               const DofChoice& session_choice, Rng& rng) {
  if (config.strategy == Strategy::none) return {pair, std::nullopt};
  if (!rng.bernoulli(config.eta)) return {pair, std::nullopt};

  Interception hit = [&] {
    switch (config.strategy) {
      case Strategy::fixed_basis: {
        DofChoice choice = config.fixed_choice.value_or(session_choice);
        if (config.per_pair_choice) {
          choice = {static_cast<std::uint8_t>(rng.below(2)),
                    static_cast<std::uint8_t>(rng.below(2))};
        }
        return intercept_fixed(pair, channel, bob_bases, choice, rng);
      }
      case Strategy::breidbart:
        return intercept_breidbart(pair, channel, bob_bases, rng);
      case Strategy::random_rotation:
        return intercept_random_rotation(
            pair, channel, bob_bases, config.effective_rotation_dim(channel), rng);
      case Strategy::none:
        break;
    }
    throw std::logic_error("unreachable strategy");
  }();
  return {std::move(hit.state), std::move(hit.record)};
}

}  // namespace qkd2e
