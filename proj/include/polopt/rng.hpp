#pragma once

#include <cstdint>
#include <random>

namespace polopt {

// Deterministic uniform stream. Every randomized routine in the library draws
// through this wrapper (never through std:: distribution objects, whose output
// is implementation-defined), so a seed fully determines results across
// platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1): top 53 bits of the next engine word.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace polopt
