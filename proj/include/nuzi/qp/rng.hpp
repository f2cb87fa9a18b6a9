#pragma once

#include <cstdint>
#include <vector>

namespace nuzi::qp {

/// SplitMix64 finalizer. Together with CounterRng this fixes the random
/// number stream bit-for-bit: draw i of stream s under seed k is
/// mix64(mix64(k ^ mix64(s)) + i), mapped to [0,1) by its top 53 bits.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream)
      : key_(mix64(seed ^ mix64(stream))) {}

  double uniform(uint64_t counter) const {
    return static_cast<double>(mix64(key_ + counter) >> 11) * 0x1.0p-53;
  }
  uint64_t bits(uint64_t counter) const { return mix64(key_ + counter); }

 private:
  uint64_t key_;
};

/// A drawing cursor over one stream, for generator-style consumption.
class RngCursor {
 public:
  RngCursor(uint64_t seed, uint64_t stream) : rng_(seed, stream) {}
  double uniform() { return rng_.uniform(counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(rng_.bits(counter_++) %
                                 static_cast<uint64_t>(hi - lo + 1));
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  CounterRng rng_;
  uint64_t counter_ = 0;
};

struct LifespanSample {
  std::vector<double> values;  // one per person, in [g, m g]
  double g = 22.5;
  double multiplier = 4.0;
  uint64_t seed = 0;
  int replication = 1;
};

/// R samples of N independent uniforms on [g, m g]. Replication r uses
/// stream r, so a run is reproducible draw-by-draw from (seed, r, i).
std::vector<LifespanSample> sample_lifespans(uint64_t seed, int n_persons,
                                             double g, double multiplier,
                                             int replications);

}  // namespace nuzi::qp
