#include "dem/countmin.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "dem/rng.hpp"

namespace dem {
namespace {

uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

template <typename T>
void put_le(std::vector<uint8_t>& out, T v) {
  for (size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

template <typename T>
T get_le(const std::vector<uint8_t>& in, size_t& off) {
  if (off + sizeof(T) > in.size()) throw std::runtime_error("CountMin: truncated buffer");
  T v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(in[off + i]) << (8 * i);
  off += sizeof(T);
  return v;
}

}  // namespace

CountMinSketch::CountMinSketch(double eps, double delta, uint64_t seed) {
  if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("CountMin: eps in (0,1] required");
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("CountMin: delta in (0,1) required");
  w_ = static_cast<uint32_t>(std::ceil(std::exp(1.0) / eps));
  d_ = std::max<uint32_t>(1, static_cast<uint32_t>(std::ceil(std::log(1.0 / delta))));
  row_seeds_.resize(d_);
  for (uint32_t r = 0; r < d_; ++r) row_seeds_[r] = RngStream(seed, "countmin", r).next_u64();
  cells_.assign(static_cast<size_t>(w_) * d_, 0);
}

uint64_t CountMinSketch::cell_index(uint32_t row, Element e) const {
  uint64_t h = mix64(row_seeds_[row] ^ (static_cast<uint64_t>(e) * 0x9e3779b97f4a7c15ULL));
  return static_cast<uint64_t>(row) * w_ + (h % w_);
}

void CountMinSketch::update(Element e, uint64_t by) {
  for (uint32_t r = 0; r < d_; ++r) cells_[cell_index(r, e)] += by;
  total_ += by;
}

uint64_t CountMinSketch::query(Element e) const {
  if (d_ == 0) return 0;
  uint64_t best = UINT64_MAX;
  for (uint32_t r = 0; r < d_; ++r) best = std::min(best, cells_[cell_index(r, e)]);
  return best;
}

bool CountMinSketch::compatible(const CountMinSketch& other) const {
  return w_ == other.w_ && d_ == other.d_ && row_seeds_ == other.row_seeds_;
}

void CountMinSketch::merge(const CountMinSketch& other) {
  if (!compatible(other)) {
    throw std::invalid_argument("CountMin: merge requires identical dimensions and seeds");
  }
  for (size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  total_ += other.total_;
}

std::vector<uint8_t> CountMinSketch::serialize() const {
  std::vector<uint8_t> out;
  out.reserve(8 + 8 * row_seeds_.size() + 8 * cells_.size());
  put_le<uint32_t>(out, w_);
  put_le<uint32_t>(out, d_);
  for (uint64_t s : row_seeds_) put_le<uint64_t>(out, s);
  for (uint64_t c : cells_) put_le<uint64_t>(out, c);
  return out;
}

CountMinSketch CountMinSketch::deserialize(const std::vector<uint8_t>& bytes) {
  CountMinSketch sk;
  size_t off = 0;
  sk.w_ = get_le<uint32_t>(bytes, off);
  sk.d_ = get_le<uint32_t>(bytes, off);
  sk.row_seeds_.resize(sk.d_);
  for (uint32_t r = 0; r < sk.d_; ++r) sk.row_seeds_[r] = get_le<uint64_t>(bytes, off);
  sk.cells_.resize(static_cast<size_t>(sk.w_) * sk.d_);
  sk.total_ = 0;
  for (auto& c : sk.cells_) {
    c = get_le<uint64_t>(bytes, off);
  }
  // total is not part of the wire format; recompute from row 0.
  for (uint32_t j = 0; j < sk.w_; ++j) sk.total_ += sk.cells_[j];
  return sk;
}

}  // namespace dem
