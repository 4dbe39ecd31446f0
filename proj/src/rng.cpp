#include "dem/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dem {
namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

uint64_t splitmix_step(uint64_t& state) {
  uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(uint64_t seed, std::string_view label, uint64_t index) {
  uint64_t s = seed;
  uint64_t a = splitmix_step(s);
  s ^= fnv1a(label);
  uint64_t b = splitmix_step(s);
  s ^= index * kGolden;
  uint64_t c = splitmix_step(s);
  state_ = a ^ (b + 0x632be59bd9b4e019ULL) ^ (c << 1);
  // Warm-up round decorrelates nearby (seed, index) pairs.
  splitmix_step(state_);
}

uint64_t RngStream::next_u64() { return splitmix_step(state_); }

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RngStream::next_below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RngStream::next_below: bound must be > 0");
  // Rejection sampling keeps the draw unbiased.
  uint64_t threshold = -bound % bound;
  for (;;) {
    uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double RngStream::next_gaussian() {
  if (has_gauss_spare_) {
    has_gauss_spare_ = false;
    return gauss_spare_;
  }
  for (;;) {
    double u = 2.0 * next_unit() - 1.0;
    double v = 2.0 * next_unit() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      double factor = std::sqrt(-2.0 * std::log(s) / s);
      gauss_spare_ = v * factor;
      has_gauss_spare_ = true;
      return u * factor;
    }
  }
}

uint64_t RngStream::next_geometric_skips(double p) {
  if (p >= 1.0) return 0;
  if (p <= 0.0) throw std::invalid_argument("geometric: p must be in (0,1]");
  double u = next_unit();
  // floor(log(1-u) / log(1-p)); log1p keeps small p accurate.
  double g = std::floor(std::log1p(-u) / std::log1p(-p));
  if (!(g >= 0.0)) g = 0.0;
  if (g > 4.0e18) return static_cast<uint64_t>(4.0e18);
  return static_cast<uint64_t>(g);
}

uint64_t RngStream::next_truncated_geometric(double p, uint64_t window) {
  if (window == 0) throw std::invalid_argument("truncated geometric: empty window");
  if (p >= 1.0) return 0;
  double mass = -std::expm1(static_cast<double>(window) * std::log1p(-p));
  double u = next_unit() * mass;
  double g = std::floor(std::log1p(-u) / std::log1p(-p));
  if (!(g >= 0.0)) g = 0.0;
  if (g >= static_cast<double>(window)) g = static_cast<double>(window - 1);
  return static_cast<uint64_t>(g);
}

RngStream RngStream::sub(std::string_view label, uint64_t index) const {
  RngStream child;
  uint64_t s = state_ ^ fnv1a(label);
  uint64_t a = splitmix_step(s);
  s ^= index * kGolden;
  uint64_t b = splitmix_step(s);
  child.state_ = a ^ (b << 1);
  splitmix_step(child.state_);
  return child;
}

uint64_t sample_binomial_approx(RngStream& rng, uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  double mean = static_cast<double>(n) * p;
  if (mean <= 64.0) {
    // Skip-chain: walk success positions; exact and O(successes).
    uint64_t count = 0;
    uint64_t pos = 0;
    for (;;) {
      uint64_t skip = rng.next_geometric_skips(p);
      if (skip >= n - pos) break;
      pos += skip + 1;
      ++count;
      if (pos >= n) break;
    }
    return count;
  }
  double sd = std::sqrt(mean * (1.0 - p));
  double draw = mean + sd * rng.next_gaussian();
  if (draw < 0.0) draw = 0.0;
  if (draw > static_cast<double>(n)) draw = static_cast<double>(n);
  return static_cast<uint64_t>(std::llround(draw));
}

}  // namespace dem
