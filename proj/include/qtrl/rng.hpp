#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace qtrl {

// Deterministic random stream. All draws go through next_u64() and the
// conversions below; std::* distributions are avoided because their output
// is implementation-defined and the experiment logs must be reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Samples an index from a probability vector by walking the CDF.
  // Assumes the entries are non-negative and sum to ~1.
  int categorical(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t a = 0; a < probs.size(); ++a) {
      acc += probs[a];
      if (u < acc) return static_cast<int>(a);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// Stateless mix for deriving independent substream seeds (splitmix64 step).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qtrl
