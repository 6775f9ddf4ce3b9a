#ifndef EVODYN_RNG_HPP
#define EVODYN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace evodyn {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of replicate `index` under `master`. Depends on nothing else, so
// results do not depend on how replicates are scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Random stream owned by a single simulation. Not thread-safe; give each
/// replicate its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform() {
    double u;
    do {
      u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    } while (u == 0.0);
    return u;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  double normal() { return normal_(engine_); }

  std::uint64_t next_u64() { return engine_(); }

  Rng split(std::uint64_t index) { return Rng(derive_seed(engine_(), index)); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace evodyn

#endif  // EVODYN_RNG_HPP
