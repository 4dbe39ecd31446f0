#pragma once

#include <cstdint>
#include <vector>

#include "dem/stream.hpp"

namespace dem {

// CountMin(eps, delta): width ceil(e/eps), depth ceil(ln(1/delta)),
// never underestimates, overshoot beyond eps * m_{-i} with probability
// <= delta per query. Sketches built from the same seed merge cell-wise.
class CountMinSketch {
 public:
  CountMinSketch() = default;
  CountMinSketch(double eps, double delta, uint64_t seed);

  void update(Element e, uint64_t by = 1);
  uint64_t query(Element e) const;
  uint64_t total() const { return total_; }

  // Cell-wise addition; requires identical dimensions and seeds.
  void merge(const CountMinSketch& other);

  uint32_t width() const { return w_; }
  uint32_t depth() const { return d_; }
  bool compatible(const CountMinSketch& other) const;

  // Little-endian layout: u32 w, u32 d, d x u64 row seeds,
  // then row-major d*w u64 counters.
  std::vector<uint8_t> serialize() const;
  static CountMinSketch deserialize(const std::vector<uint8_t>& bytes);

  // Ledger cost of shipping one sketch.
  uint64_t wire_bits(uint32_t counter_bits) const {
    return static_cast<uint64_t>(w_) * d_ * counter_bits;
  }

 private:
  uint64_t cell_index(uint32_t row, Element e) const;

  uint32_t w_ = 0;
  uint32_t d_ = 0;
  std::vector<uint64_t> row_seeds_;
  std::vector<uint64_t> cells_;  // row-major
  uint64_t total_ = 0;
};

}  // namespace dem
