#pragma once

#include <cstdint>

#include "locc/measure.hpp"

namespace locc {

/// Counter-based generator: output i of stream s under seed k is
/// splitmix64_mix(key(k, s) + (i + 1) * 0x9E3779B97F4A7C15), with
/// key(k, s) = splitmix64_mix(k) ^ splitmix64_mix(s + 0x632BE59BD9B4E019).
/// Every draw depends only on (seed, stream, counter), so trials can be
/// reproduced individually and on any platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();  // [0, 1), 53 random bits
  double normal();   // Box-Muller, standard normal
  int uniform_int(int lo, int hi);  // inclusive

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

CMatrix random_ginibre(int rows, int cols, CounterRng& rng);
CMatrix random_unitary(int d, CounterRng& rng);
CVector random_pure_state(int d, CounterRng& rng);
/// Induced-measure mixed state of the given rank.
CMatrix random_density(int d, int rank, CounterRng& rng);
std::vector<double> random_probabilities(int n, CounterRng& rng);

/// Kraus operators cut from a random isometry d -> d * outcomes.
Instrument random_instrument(int d, int outcomes, Party party, CounterRng& rng);

/// Random ensemble of `count` states; each state is pure with probability 1/2.
Ensemble random_ensemble(const Dims& dims, int count, CounterRng& rng);

}  // namespace locc
