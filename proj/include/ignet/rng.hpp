#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace ignet {

// Deterministic random stream. std::mt19937_64 is fully specified by the
// standard; the distribution transforms are implemented here because the
// std distributions are implementation-defined and would break bit-exact
// reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1): 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller, one variate per call (no cached spare, keeps state minimal).
  double normal(double mu, double sigma);

  // Unbiased integer in [0, n), n >= 1.
  std::uint64_t uniform_int(std::uint64_t n);

  // Text round-trip of the full engine state (iostream format of mt19937_64).
  std::string serialize() const;
  static Rng deserialize(const std::string& state);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

// Stable seed for a named sub-stream (parameter init, batch order, ...).
std::uint64_t derive_seed(std::uint64_t base, std::string_view name);

}  // namespace ignet
