#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace qiren {

// Deterministic splitmix64 stream. Every consumer derives its own child
// stream via split(), so the draw order in one place never shifts the
// numbers seen somewhere else. All distributions are hand-rolled on top of
// the raw 64-bit output to keep results identical across platforms and
// library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, no cached second value: one draw consumes two uniforms,
  // which keeps the stream position independent of call history.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Child stream keyed by a label; children with different labels (or from
  // different parents) are independent for all practical purposes.
  Rng split(std::string_view tag) const {
    uint64_t h = 0xcbf29ce484222325ULL ^ state_;
    for (char c : tag) {
      h ^= static_cast<uint8_t>(c);
      h *= 0x100000001b3ULL;
    }
    Rng child(h);
    child.next_u64();  // decorrelate from the raw hash
    return Rng(child.next_u64());
  }

  Rng split(uint64_t index) const {
    Rng child(state_ ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    child.next_u64();
    return Rng(child.next_u64());
  }

 private:
  uint64_t state_;
};

}  // namespace qiren
