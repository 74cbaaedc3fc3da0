#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace presim {

// Used to derive independent sub-stream seeds from the single master seed.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Named sub-streams.  Draw order within a stream is fixed by the engine; two
// runs with the same seed and config consume randomness identically.
enum class Stream : uint64_t { coefficients = 1, world = 2, run = 3 };

inline uint64_t stream_seed(uint64_t master, Stream s) {
  return splitmix64(master ^ (0x5851f42d4c957f2dull * static_cast<uint64_t>(s)));
}

// Thin wrapper over mt19937_64 with explicitly-defined distributions so output
// does not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive on both ends.
  long long uniform_int(long long lo, long long hi) {
    return lo + static_cast<long long>(uniform() * static_cast<double>(hi - lo + 1));
  }

  // Uniform in log space; lo and hi must be positive.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  bool chance(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace presim
