#pragma once

#include <cstdint>
#include <vector>

#include "dem/stream.hpp"

namespace dem {

// Sorted arrival positions per element, per (site, element) and per site.
// Built once per run; lets counter components resolve "local count of e
// at site s up to index t" in O(log m), which is what makes closed-form
// message accounting possible.
class ArrivalIndex {
 public:
  ArrivalIndex(const std::vector<StreamEvent>& events, uint32_t n, uint32_t k);

  uint64_t count_global(Element e, uint64_t t) const;
  uint64_t count_site(SiteId s, Element e, uint64_t t) const;
  uint64_t site_total(SiteId s, uint64_t t) const;
  // Events at site s with index in (a, b].
  uint64_t site_total_between(SiteId s, uint64_t a, uint64_t b) const;

  const std::vector<uint64_t>& global_positions(Element e) const;
  const std::vector<uint64_t>& site_positions(SiteId s, Element e) const;
  const std::vector<uint64_t>& site_all_positions(SiteId s) const;

  Element element_at(uint64_t index) const { return elements_[index - 1]; }
  SiteId site_at(uint64_t index) const { return sites_[index - 1]; }
  uint64_t size() const { return elements_.size(); }

 private:
  uint32_t n_ = 0;
  uint32_t k_ = 0;
  std::vector<Element> elements_;                     // by global index
  std::vector<SiteId> sites_;                         // by global index
  std::vector<std::vector<uint64_t>> global_;         // [element]
  std::vector<std::vector<uint64_t>> per_site_;       // [site * (n+1) + element]
  std::vector<std::vector<uint64_t>> site_all_;       // [site]
};

// Number of values in sorted `positions` that are <= t.
uint64_t rank_at(const std::vector<uint64_t>& positions, uint64_t t);

}  // namespace dem
