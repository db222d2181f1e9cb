#pragma once

#include <cstdint>
#include <limits>

namespace qkd2e {

/// Seed-splitting random source.
///
/// Every pair in a session draws from its own substream, derived from the
/// master seed and the pair index by a counter-based split. A pair's
/// randomness therefore does not depend on how many pairs ran before it or
/// on which worker thread ran it.
///
/// The generator is xoshiro256** seeded through splitmix64. It satisfies
/// UniformRandomBitGenerator, so it plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  /// Stream domains keep independent uses of one master seed apart.
  enum class Domain : std::uint64_t {
    pairs = 1,
    eve_session = 2,
    wigner_pairs = 3,
    bootstrap = 4,
    test = 99,
  };

  explicit Rng(std::uint64_t seed);

  static Rng stream(std::uint64_t master, Domain domain, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// True with probability p.
  bool bernoulli(double p);

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal deviate (polar Box-Muller, spare value cached).
  double normal();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace qkd2e
