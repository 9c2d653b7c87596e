#pragma once

#include <cstdint>

namespace censorlab {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter). Parallel replicas get independent streams without
// shared state, and a censored replay of a schedule sees exactly the same
// uniforms at the steps it keeps.
class CounterRng {
 public:
  CounterRng() : key_(mix(0)) {}
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(mix(mix(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))) {}

  static constexpr uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  uint64_t word(uint64_t counter) const { return mix(key_ ^ mix(counter)); }

  // uniform in [0, 1), 53 random bits
  double uniform(uint64_t counter) const {
    return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
  }

  // uniform site index in [0, n)
  int pick(uint64_t counter, int n) const {
    int v = static_cast<int>(uniform(counter) * n);
    return v >= n ? n - 1 : v;
  }

  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
};

// Convenience wrapper when draws are consumed sequentially.
class SequentialRng {
 public:
  explicit SequentialRng(uint64_t seed, uint64_t stream = 0)
      : rng_(seed, stream) {}

  double next_uniform() { return rng_.uniform(counter_++); }
  int next_pick(int n) { return rng_.pick(counter_++, n); }
  uint64_t next_word() { return rng_.word(counter_++); }
  uint64_t consumed() const { return counter_; }

 private:
  CounterRng rng_;
  uint64_t counter_ = 0;
};

}  // namespace censorlab
