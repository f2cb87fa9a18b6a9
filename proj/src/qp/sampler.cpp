#include "nuzi/qp/rng.hpp"

namespace nuzi::qp {

std::vector<LifespanSample> sample_lifespans(uint64_t seed, int n_persons,
                                             double g, double multiplier,
                                             int replications) {
  std::vector<LifespanSample> out;
  out.reserve(static_cast<size_t>(replications));
  for (int r = 1; r <= replications; ++r) {
    LifespanSample s;
    s.g = g;
    s.multiplier = multiplier;
    s.seed = seed;
    s.replication = r;
    s.values.resize(static_cast<size_t>(n_persons));
    CounterRng rng(seed, static_cast<uint64_t>(r));
    for (int i = 0; i < n_persons; ++i)
      s.values[static_cast<size_t>(i)] =
          g + (multiplier - 1.0) * g * rng.uniform(static_cast<uint64_t>(i));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nuzi::qp
