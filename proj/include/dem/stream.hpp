#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace dem {

// Universe elements are 1-based ids in [1, n]. 0 is reserved for "none".
using Element = uint32_t;
constexpr Element kNoElement = 0;

// Site ids are 1-based in [1, k]. 0 denotes the coordinator.
using SiteId = uint32_t;
constexpr SiteId kCoordinator = 0;

struct StreamEvent {
  uint64_t global_index = 0;  // 1-based, contiguous
  Element element = kNoElement;
  SiteId site = 0;
};

// Exact per-element counts of a (sub)stream; the ground truth the
// protocol estimates are judged against.
class FrequencyVector {
 public:
  FrequencyVector() = default;
  explicit FrequencyVector(const std::vector<StreamEvent>& events);
  FrequencyVector(std::initializer_list<std::pair<Element, uint64_t>> counts);

  void add(Element e, uint64_t by = 1);

  uint64_t count(Element e) const;
  uint64_t total() const { return total_; }
  size_t distinct() const { return counts_.size(); }

  // Sum of counts of all elements other than e (m_{-e}).
  uint64_t total_without(Element e) const { return total_ - count(e); }

  // Frequency vector of the substream with every occurrence of e removed.
  FrequencyVector without(Element e) const;
  // Restriction to events with global_index in (from, to].
  static FrequencyVector window(const std::vector<StreamEvent>& events,
                                uint64_t from_exclusive, uint64_t to_inclusive);

  const std::unordered_map<Element, uint64_t>& counts() const { return counts_; }

 private:
  std::unordered_map<Element, uint64_t> counts_;
  uint64_t total_ = 0;
};

// Line format: "<global_index> <element_id> <site_id>".
void write_stream(std::ostream& out, const std::vector<StreamEvent>& events);
std::vector<StreamEvent> read_stream(std::istream& in);
void write_stream_file(const std::string& path, const std::vector<StreamEvent>& events);
std::vector<StreamEvent> read_stream_file(const std::string& path);

// Validates the StreamEvent invariants: contiguous 1-based indices,
// elements in [1, n], sites in [1, k].
void validate_stream(const std::vector<StreamEvent>& events, uint32_t n, uint32_t k);

}  // namespace dem
