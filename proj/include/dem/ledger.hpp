#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dem {

enum class Direction { site_to_coord = 0, coord_to_site = 1 };

// Message payload widths. Costs are computed from this table, not from
// in-memory sizes, so ledgers are reproducible across implementations.
struct BitTable {
  uint32_t n = 1;
  uint64_t m_max = 1;

  static uint32_t ceil_log2(uint64_t x);
  uint32_t element_bits() const { return ceil_log2(n) < 1 ? 1 : ceil_log2(n); }
  uint32_t counter_bits() const { return ceil_log2(m_max) < 1 ? 1 : ceil_log2(m_max); }
  static constexpr uint32_t rank_bits = 64;
};

struct ChannelTotal {
  uint64_t messages = 0;
  uint64_t bits = 0;
};

// Per (protocol tag, direction) tally of messages and bits. Tags are
// interned once; the hot path charges by id.
class CommLedger {
 public:
  uint32_t intern(std::string_view tag);
  const std::string& tag_name(uint32_t id) const { return names_[id]; }

  void charge(uint32_t tag, Direction dir, uint64_t messages, uint64_t bits);

  ChannelTotal total(uint32_t tag, Direction dir) const;
  ChannelTotal total(std::string_view tag, Direction dir) const;
  ChannelTotal grand_total() const;
  uint64_t total_bits() const { return grand_total().bits; }

  struct Row {
    std::string tag;
    Direction dir;
    uint64_t messages;
    uint64_t bits;
  };
  std::vector<Row> rows() const;  // sorted by (tag, direction)

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> ids_;
  std::vector<ChannelTotal> totals_;  // 2 entries per tag
};

}  // namespace dem
