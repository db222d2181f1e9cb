#include "qkd2e/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace qkd2e {

namespace {

unsigned worker_count(std::uint64_t n, unsigned threads) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
}

// Runs body(begin, end, chunk) over [0, n) split into contiguous chunks, one
// per worker. The first exception thrown by any worker is rethrown.
template <typename Body>
void parallel_chunks(std::uint64_t n, unsigned threads, Body&& body) {
  const unsigned workers = worker_count(n, threads);
  if (workers <= 1) {
    body(std::uint64_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::uint64_t step = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(n, w * step);
    const std::uint64_t end = std::min<std::uint64_t>(n, begin + step);
    pool.emplace_back([&, begin, end, w] {
      try {
        body(begin, end, w);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void check_pair(const BasisPair& p, const char* what) {
  if (!std::isfinite(p.first) || !std::isfinite(p.second)) {
    throw std::invalid_argument(std::string(what) + " bases must be finite");
  }
  if (p.first == p.second) {
    throw std::invalid_argument(std::string(what) + " bases must differ");
  }
}

std::uint8_t measure_dof(StateVector& state, std::size_t factor_index, Dof dof,
                         double angle, Rng& rng) {
  const std::array<std::size_t, 1> sub{factor_index};
  Measurement m = partial_measure(state, kPairFactors, sub, dof_basis(dof, angle),
                                  rng.uniform());
  state = std::move(m.state);
  return static_cast<std::uint8_t>(m.outcome);
}

PairRecord simulate_pair(std::uint64_t index, const SessionConfig& config,
                         const StateVector& source, const PartyBases& bob,
                         const DofChoice& session_choice) {
  Rng rng = Rng::stream(config.seed, Rng::Domain::pairs, index);
  const auto dofs = key_dofs(config.channel);

  PairRecord rec;
  rec.index = index;
  for (Dof dof : dofs) {
    const auto d = static_cast<std::size_t>(dof);
    rec.alice_basis[d] = static_cast<std::uint8_t>(rng.below(2));
    rec.bob_basis[d] = static_cast<std::uint8_t>(rng.below(2));
  }

  StateVector state = source;
  if (config.eve) {
    StrategyOutcome out =
        apply_strategy(*config.eve, state, config.channel, bob, session_choice, rng);
    state = std::move(out.state);
    if (out.record) {
      rec.eve_intercepted = true;
      out.record->pair_index = index;
      rec.eve = std::move(out.record);
    }
  }

  for (Dof dof : dofs) {
    const auto d = static_cast<std::size_t>(dof);
    rec.alice_out[d] = measure_dof(state, alice_factor(dof), dof,
                                   config.alice[dof][*rec.alice_basis[d]], rng);
  }
  for (Dof dof : dofs) {
    const auto d = static_cast<std::size_t>(dof);
    rec.bob_out[d] =
        measure_dof(state, bob_factor(dof), dof, bob[dof][*rec.bob_basis[d]], rng);
  }
  if (config.injected_flip_rate > 0.0) {
    for (Dof dof : dofs) {
      const auto d = static_cast<std::size_t>(dof);
      if (rng.bernoulli(config.injected_flip_rate)) *rec.bob_out[d] ^= 1u;
    }
  }

  rec.sifted = std::all_of(dofs.begin(), dofs.end(), [&](Dof dof) {
    const auto d = static_cast<std::size_t>(dof);
    return rec.alice_basis[d] == rec.bob_basis[d];
  });
  return rec;
}

}  // namespace

const char* to_string(Protocol protocol) {
  return protocol == Protocol::bb84x2 ? "bb84x2" : "ekert-wigner";
}

Protocol parse_protocol(const std::string& name) {
  if (name == "bb84x2") return Protocol::bb84x2;
  if (name == "ekert-wigner") return Protocol::ekert_wigner;
  throw std::invalid_argument("unknown protocol '" + name + "'");
}

PartyBases SessionConfig::bob_bases() const {
  return bob.value_or(matched_bob_bases(alice, pump_phase));
}

void SessionConfig::validate() const {
  if (n_pairs < 1) throw std::invalid_argument("nPairs must be at least 1");
  if (!std::isfinite(pump_phase)) throw std::invalid_argument("pump phase must be finite");
  check_pair(alice.pol, "alice polarization");
  check_pair(alice.phase, "alice phase");
  const PartyBases b = bob_bases();
  check_pair(b.pol, "bob polarization");
  check_pair(b.phase, "bob phase");
  if (!(injected_flip_rate >= 0.0 && injected_flip_rate <= 1.0)) {
    throw std::invalid_argument("injected flip rate must lie in [0, 1]");
  }
  if (eve) eve->validate(channel);
}

SessionLog run_session(const SessionConfig& config) {
  config.validate();
  if (config.protocol != Protocol::bb84x2) {
    throw std::invalid_argument("run_session handles the bb84x2 protocol; use wigner_session");
  }
  SessionLog log;
  log.config = config;

  const StateVector source = biphoton_state({.pump_phase = config.pump_phase});
  const PartyBases bob = config.bob_bases();

  DofChoice session_choice{0, 0};
  if (config.eve && config.eve->strategy == Strategy::fixed_basis &&
      !config.eve->per_pair_choice) {
    if (config.eve->fixed_choice) {
      session_choice = *config.eve->fixed_choice;
    } else {
      Rng rng = Rng::stream(config.seed, Rng::Domain::eve_session, 0);
      session_choice = {static_cast<std::uint8_t>(rng.below(2)),
                        static_cast<std::uint8_t>(rng.below(2))};
    }
    log.eve_session_choice = session_choice;
  }

  log.pairs.resize(config.n_pairs);
  parallel_chunks(config.n_pairs, config.threads,
                  [&](std::uint64_t begin, std::uint64_t end, unsigned) {
                    for (std::uint64_t i = begin; i < end; ++i) {
                      log.pairs[i] = simulate_pair(i, config, source, bob, session_choice);
                    }
                  });
  return log;
}

// --- sifting -------------------------------------------------------------

std::size_t SiftedKey::errors() const {
  std::size_t e = 0;
  for (std::size_t i = 0; i < alice.size(); ++i) e += alice[i] != bob[i];
  return e;
}

double SiftedKey::qber() const {
  if (alice.empty()) return 0.0;
  return static_cast<double>(errors()) / static_cast<double>(alice.size());
}

double SiftResult::retention() const {
  return total_pairs ? static_cast<double>(kept_pairs) / static_cast<double>(total_pairs)
                     : 0.0;
}

const SiftedKey& SiftResult::key(Dof dof) const {
  const auto& k = keys[static_cast<std::size_t>(dof)];
  if (!k) throw std::invalid_argument(std::string("no sifted key for DOF ") + to_string(dof));
  return *k;
}

SiftResult sift(const SessionLog& log, SiftMode mode) {
  if (log.pairs.empty()) throw std::invalid_argument("cannot sift an empty session log");
  const auto dofs = key_dofs(log.config.channel);
  SiftResult out;
  out.total_pairs = log.pairs.size();
  for (Dof dof : dofs) out.keys[static_cast<std::size_t>(dof)] = SiftedKey{};

  auto push = [&](const PairRecord& rec, Dof dof) {
    const auto d = static_cast<std::size_t>(dof);
    auto& key = *out.keys[d];
    key.alice.push_back(*rec.alice_out[d]);
    key.bob.push_back(*rec.bob_out[d]);
    key.indices.push_back(rec.index);
  };
  auto matches = [](const PairRecord& rec, Dof dof) {
    const auto d = static_cast<std::size_t>(dof);
    return rec.alice_basis[d].has_value() && rec.alice_basis[d] == rec.bob_basis[d];
  };

  for (const auto& rec : log.pairs) {
    if (mode == SiftMode::all_key_dofs) {
      if (!std::all_of(dofs.begin(), dofs.end(),
                       [&](Dof dof) { return matches(rec, dof); })) {
        continue;
      }
      ++out.kept_pairs;
      for (Dof dof : dofs) push(rec, dof);
    } else {
      for (Dof dof : dofs) {
        if (matches(rec, dof)) push(rec, dof);
      }
      if (matches(rec, dofs.front())) ++out.kept_pairs;
    }
  }
  return out;
}

SiftedKey xor_key(const SiftedKey& pol, const SiftedKey& phase) {
  if (pol.indices != phase.indices) {
    throw std::invalid_argument("xor_key: keys were sifted on different pairs");
  }
  SiftedKey out;
  out.indices = pol.indices;
  out.alice.resize(pol.length());
  out.bob.resize(pol.length());
  for (std::size_t i = 0; i < pol.length(); ++i) {
    out.alice[i] = pol.alice[i] ^ phase.alice[i];
    out.bob[i] = pol.bob[i] ^ phase.bob[i];
  }
  return out;
}

ErrorTally eve_alice_error(const SessionLog& log, Dof dof,
                           std::optional<std::uint8_t> basis) {
  const auto d = static_cast<std::size_t>(dof);
  ErrorTally t;
  for (const auto& rec : log.pairs) {
    if (!rec.eve || !rec.alice_basis[d] || rec.alice_basis[d] != rec.bob_basis[d]) continue;
    const std::uint8_t b = *rec.alice_basis[d];
    if (basis && *basis != b) continue;
    const std::int8_t guess = rec.eve->guess[d][b];
    if (guess < 0) continue;
    ++t.count;
    t.errors += static_cast<std::uint8_t>(guess) != *rec.alice_out[d];
  }
  return t;
}

double intercepted_fraction(const SessionLog& log) {
  if (log.pairs.empty()) return 0.0;
  const auto n = std::count_if(log.pairs.begin(), log.pairs.end(),
                               [](const PairRecord& r) { return r.eve_intercepted; });
  return static_cast<double>(n) / static_cast<double>(log.pairs.size());
}

ErrorTally per_bit_errors(const SiftResult& sifted) {
  ErrorTally t;
  for (const auto& k : sifted.keys) {
    if (!k) continue;
    t.errors += k->errors();
    t.count += k->length();
  }
  return t;
}

// --- Wigner variant ------------------------------------------------------

double wigner_phase_angle(double pol_angle) { return 2.0 * pol_angle; }

WignerRunData wigner_session(const SessionConfig& config,
                             const WignerSettings& settings,
                             const WignerSessionOptions& options) {
  config.validate();
  if (config.protocol != Protocol::ekert_wigner) {
    throw std::invalid_argument("wigner_session requires the ekert-wigner protocol");
  }
  for (double a : {settings.chi, settings.psi, settings.omega, options.key_angle}) {
    if (!std::isfinite(a)) throw std::invalid_argument("Wigner angles must be finite");
  }
  if (!(options.detection_efficiency > 0.0 && options.detection_efficiency <= 1.0)) {
    throw std::invalid_argument("detection efficiency must lie in (0, 1]");
  }
  if (config.eve && config.eve->strategy != Strategy::none &&
      config.eve->strategy != Strategy::fixed_basis) {
    throw std::invalid_argument("Wigner sessions support only key-basis interception");
  }

  const auto dofs = key_dofs(config.channel);
  const double phi = config.pump_phase;
  const std::array<double, 3> alice_opts{settings.chi, settings.psi, options.key_angle};
  const std::array<double, 3> bob_opts{settings.psi, settings.omega, options.key_angle};
  auto alice_analyzer = [&](Dof dof, std::size_t opt) {
    return dof == Dof::pol ? alice_opts[opt] : wigner_phase_angle(alice_opts[opt]);
  };
  auto bob_analyzer = [&](Dof dof, std::size_t opt) {
    return dof == Dof::pol ? bob_opts[opt]
                           : matched_bob_phase(phi, wigner_phase_angle(bob_opts[opt]));
  };

  const StateVector source = biphoton_state({.pump_phase = phi});
  const bool eve_active = config.eve && config.eve->strategy == Strategy::fixed_basis;
  const std::array<double, 2> eve_analyzer{bob_analyzer(Dof::pol, 2),
                                           bob_analyzer(Dof::phase, 2)};

  auto fresh = [&] {
    WignerRunData data;
    data.settings = settings;
    data.key_angle = options.key_angle;
    for (Dof dof : dofs) {
      DofWignerCounts c;
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
          c.grid[a][b].alice_angle = alice_opts[a];
          c.grid[a][b].bob_angle = bob_opts[b];
        }
      }
      data.dofs[static_cast<std::size_t>(dof)] = c;
    }
    return data;
  };

  const unsigned workers = worker_count(config.n_pairs, config.threads);
  std::vector<WignerRunData> partial(workers, fresh());
  parallel_chunks(config.n_pairs, workers, [&](std::uint64_t begin, std::uint64_t end,
                                               unsigned w) {
    WignerRunData& acc = partial[w];
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng = Rng::stream(config.seed, Rng::Domain::wigner_pairs, i);
      std::array<std::size_t, 2> a_opt{};
      std::array<std::size_t, 2> b_opt{};
      for (Dof dof : dofs) {
        const auto d = static_cast<std::size_t>(dof);
        a_opt[d] = rng.below(3);
        b_opt[d] = rng.below(3);
      }
      StateVector state = source;
      if (eve_active && rng.bernoulli(config.eve->eta)) {
        state = intercept_at(state, config.channel, eve_analyzer, "key", rng).state;
        ++acc.intercepted;
      }
      std::array<std::uint8_t, 2> a_out{};
      std::array<std::uint8_t, 2> b_out{};
      for (Dof dof : dofs) {
        const auto d = static_cast<std::size_t>(dof);
        a_out[d] = measure_dof(state, alice_factor(dof), dof, alice_analyzer(dof, a_opt[d]), rng);
      }
      for (Dof dof : dofs) {
        const auto d = static_cast<std::size_t>(dof);
        b_out[d] = measure_dof(state, bob_factor(dof), dof, bob_analyzer(dof, b_opt[d]), rng);
      }
      const bool alice_detected = rng.bernoulli(options.detection_efficiency);
      const bool bob_detected = rng.bernoulli(options.detection_efficiency);
      if (!(alice_detected && bob_detected)) continue;
      ++acc.detected_pairs;
      for (Dof dof : dofs) {
        const auto d = static_cast<std::size_t>(dof);
        auto& counts = *acc.dofs[d];
        auto& cell = counts.grid[a_opt[d]][b_opt[d]];
        ++cell.trials;
        if (a_out[d] == 0 && b_out[d] == 1) ++cell.coincidences;
        if (a_opt[d] == 2 && b_opt[d] == 2) {
          ++counts.key.count;
          counts.key.errors += a_out[d] != b_out[d];
        }
      }
    }
  });

  WignerRunData total = fresh();
  total.pairs = config.n_pairs;
  for (const auto& part : partial) {
    total.detected_pairs += part.detected_pairs;
    total.intercepted += part.intercepted;
    for (Dof dof : dofs) {
      const auto d = static_cast<std::size_t>(dof);
      auto& dst = *total.dofs[d];
      const auto& src = *part.dofs[d];
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
          dst.grid[a][b].coincidences += src.grid[a][b].coincidences;
          dst.grid[a][b].trials += src.grid[a][b].trials;
        }
      }
      dst.key.errors += src.key.errors;
      dst.key.count += src.key.count;
    }
  }
  return total;
}

}  // namespace qkd2e
