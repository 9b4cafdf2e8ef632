#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

namespace idms {

// xoroshiro128++ seeded through splitmix64. Self-contained so that a fixed
// seed replays bit-identically on every platform and standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    s0_ = splitmix64(seed);
    s1_ = splitmix64(seed);
    if (s0_ == 0 && s1_ == 0) s1_ = 0x9e3779b97f4a7c15ull;
  }

  uint64_t next() {
    uint64_t a = s0_;
    uint64_t b = s1_;
    uint64_t r = rotl(a + b, 17) + a;
    b ^= a;
    s0_ = rotl(a, 49) ^ b ^ (b << 21);
    s1_ = rotl(b, 28);
    return r;
  }

  // Uniform in [0, n). Modulo bias is irrelevant at simulation scales.
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  bool chance(double p) { return uniform(0.0, 1.0) < p; }

  // Independent deterministic substream; lets callers consume randomness for
  // one purpose without shifting draws for another.
  Rng fork(uint64_t stream) const {
    return Rng(splitmix64(s0_ ^ splitmix64(stream ^ 0xa5a5a5a5deadbeefull)));
  }

  template <typename T>
  void shuffle(T& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  static uint64_t splitmix64(uint64_t&& seed) {
    uint64_t s = seed;
    return splitmix64(s);
  }

  uint64_t s0_;
  uint64_t s1_;
};

}  // namespace idms
