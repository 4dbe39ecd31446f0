#include "dem/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace dem {

uint32_t BitTable::ceil_log2(uint64_t x) {
  uint32_t b = 0;
  uint64_t v = 1;
  while (v < x) {
    v <<= 1;
    ++b;
  }
  return b;
}

uint32_t CommLedger::intern(std::string_view tag) {
  auto it = ids_.find(std::string(tag));
  if (it != ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(names_.size());
  names_.emplace_back(tag);
  ids_.emplace(std::string(tag), id);
  totals_.resize(totals_.size() + 2);
  return id;
}

void CommLedger::charge(uint32_t tag, Direction dir, uint64_t messages, uint64_t bits) {
  if (static_cast<size_t>(tag) * 2 + 1 >= totals_.size()) {
    throw std::invalid_argument("CommLedger::charge: unknown tag id");
  }
  auto& t = totals_[tag * 2 + static_cast<uint32_t>(dir)];
  t.messages += messages;
  t.bits += bits;
}

ChannelTotal CommLedger::total(uint32_t tag, Direction dir) const {
  return totals_[tag * 2 + static_cast<uint32_t>(dir)];
}

ChannelTotal CommLedger::total(std::string_view tag, Direction dir) const {
  auto it = ids_.find(std::string(tag));
  if (it == ids_.end()) return {};
  return total(it->second, dir);
}

ChannelTotal CommLedger::grand_total() const {
  ChannelTotal g;
  for (const auto& t : totals_) {
    g.messages += t.messages;
    g.bits += t.bits;
  }
  return g;
}

std::vector<CommLedger::Row> CommLedger::rows() const {
  std::vector<Row> out;
  for (size_t id = 0; id < names_.size(); ++id) {
    for (Direction dir : {Direction::site_to_coord, Direction::coord_to_site}) {
      const auto& t = totals_[id * 2 + static_cast<uint32_t>(dir)];
      if (t.messages == 0 && t.bits == 0) continue;
      out.push_back({names_[id], dir, t.messages, t.bits});
    }
  }
  std::sort(out.begin(), out.end(), [](const Row& a, const Row& b) {
    if (a.tag != b.tag) return a.tag < b.tag;
    return static_cast<int>(a.dir) < static_cast<int>(b.dir);
  });
  return out;
}

}  // namespace dem
