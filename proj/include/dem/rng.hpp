#pragma once

#include <cstdint>
#include <string_view>

namespace dem {

// Deterministic counter-less substream RNG. A stream is identified by
// (seed, label, index); identical triples yield identical draw sequences
// on every platform. The stepper is splitmix64; all distributions are
// implemented in-house because std::* distributions are not portable.
class RngStream {
 public:
  RngStream() = default;
  RngStream(uint64_t seed, std::string_view label, uint64_t index = 0);

  uint64_t next_u64();
  // Uniform double in [0, 1), 53-bit resolution.
  double next_unit();
  // Uniform integer in [0, bound). bound must be > 0.
  uint64_t next_below(uint64_t bound);
  // Standard normal (Marsaglia polar).
  double next_gaussian();
  // Number of Bernoulli(p) failures before the first success.
  // p in (0, 1]; capped to avoid overflow for vanishing p.
  uint64_t next_geometric_skips(double p);
  // Failures before first success conditioned on success within `window`
  // trials. Caller guarantees the conditioning event has positive mass.
  uint64_t next_truncated_geometric(double p, uint64_t window);

  // Derive an independent child stream.
  RngStream sub(std::string_view label, uint64_t index = 0) const;

 private:
  uint64_t state_ = 0x9e3779b97f4a7c15ULL;
  double gauss_spare_ = 0.0;
  bool has_gauss_spare_ = false;
};

// Exact Binomial(n, p) when cheap, normal approximation otherwise.
// Used only for message-count tallies where an O(n) exact sampler
// would defeat the closed-form ledger evaluation.
uint64_t sample_binomial_approx(RngStream& rng, uint64_t n, double p);

}  // namespace dem
