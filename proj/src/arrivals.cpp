#include "dem/arrivals.hpp"

#include <algorithm>
#include <stdexcept>

namespace dem {

uint64_t rank_at(const std::vector<uint64_t>& positions, uint64_t t) {
  return static_cast<uint64_t>(
      std::upper_bound(positions.begin(), positions.end(), t) - positions.begin());
}

ArrivalIndex::ArrivalIndex(const std::vector<StreamEvent>& events, uint32_t n, uint32_t k)
    : n_(n), k_(k) {
  if (static_cast<uint64_t>(n + 1) * (k + 1) > (1ull << 26)) {
    throw std::invalid_argument("ArrivalIndex: universe x sites too large for dense index");
  }
  elements_.reserve(events.size());
  sites_.reserve(events.size());
  global_.resize(n + 1);
  per_site_.resize(static_cast<size_t>(k + 1) * (n + 1));
  site_all_.resize(k + 1);
  for (const auto& ev : events) {
    if (ev.element < 1 || ev.element > n) throw std::invalid_argument("element out of universe");
    if (ev.site < 1 || ev.site > k) throw std::invalid_argument("site out of range");
    elements_.push_back(ev.element);
    sites_.push_back(ev.site);
    global_[ev.element].push_back(ev.global_index);
    per_site_[static_cast<size_t>(ev.site) * (n + 1) + ev.element].push_back(ev.global_index);
    site_all_[ev.site].push_back(ev.global_index);
  }
}

uint64_t ArrivalIndex::count_global(Element e, uint64_t t) const {
  return rank_at(global_[e], t);
}

uint64_t ArrivalIndex::count_site(SiteId s, Element e, uint64_t t) const {
  return rank_at(per_site_[static_cast<size_t>(s) * (n_ + 1) + e], t);
}

uint64_t ArrivalIndex::site_total(SiteId s, uint64_t t) const {
  return rank_at(site_all_[s], t);
}

uint64_t ArrivalIndex::site_total_between(SiteId s, uint64_t a, uint64_t b) const {
  return site_total(s, b) - site_total(s, a);
}

const std::vector<uint64_t>& ArrivalIndex::global_positions(Element e) const {
  return global_[e];
}

const std::vector<uint64_t>& ArrivalIndex::site_positions(SiteId s, Element e) const {
  return per_site_[static_cast<size_t>(s) * (n_ + 1) + e];
}

const std::vector<uint64_t>& ArrivalIndex::site_all_positions(SiteId s) const {
  return site_all_[s];
}

}  // namespace dem
