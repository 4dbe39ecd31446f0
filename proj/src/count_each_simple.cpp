#include "dem/count_each_simple.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dem {

ThresholdTable::ThresholdTable(double eps, uint64_t max_count) : eps_(eps) {
  if (eps <= 0.0) throw std::invalid_argument("ThresholdTable: eps must be > 0");
  uint64_t v = 1;
  while (v <= max_count) {
    values_.push_back(v);
    double next = (1.0 + eps) * static_cast<double>(v);
    uint64_t nv = static_cast<uint64_t>(std::ceil(next - 1e-9));
    v = std::max(v + 1, nv);
  }
}

uint32_t ThresholdTable::index_of(uint64_t c) const {
  return static_cast<uint32_t>(
      std::upper_bound(values_.begin(), values_.end(), c) - values_.begin());
}

uint64_t ThresholdTable::reported(uint64_t c) const {
  uint32_t i = index_of(c);
  return i == 0 ? 0 : values_[i - 1];
}

std::shared_ptr<const ThresholdTable> threshold_table(double eps, uint64_t max_count) {
  static std::mutex mu;
  static std::map<std::pair<double, uint64_t>, std::shared_ptr<const ThresholdTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(eps, max_count);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const ThresholdTable>(eps, max_count);
  cache.emplace(key, table);
  return table;
}

CountEachSimple::CountEachSimple(Simulation& sim, const std::string& tag, TargetSet target,
                                 double eps)
    : tag_(sim.ledger().intern(tag)),
      target_(std::move(target)),
      table_(threshold_table(eps, sim.config().m_max)),
      site_count_(sim.config().k + 1, 0),
      site_reported_(sim.config().k + 1, 0),
      site_idx_(sim.config().k + 1, 0) {}

void CountEachSimple::ingest(Simulation& sim, const StreamEvent& ev) {
  if (!target_.matches(ev.element)) return;
  SiteId s = ev.site;
  uint64_t c = ++site_count_[s];
  ++true_count_;
  const auto& vals = table_->values();
  if (site_idx_[s] < vals.size() && c == vals[site_idx_[s]]) {
    ++site_idx_[s];
    uint64_t prev = site_reported_[s];
    site_reported_[s] = c;
    sim.send_to_coordinator(tag_, sim.bits().counter_bits(), [this, c, prev](Simulation& s2) {
      estimate_ += c - prev;
      if (hook_) hook_(s2);
    });
  }
}

void CountEachSimple::restart(Simulation& sim) { restart(sim, target_); }

void CountEachSimple::restart(Simulation&, TargetSet new_target) {
  target_ = std::move(new_target);
  std::fill(site_count_.begin(), site_count_.end(), 0);
  std::fill(site_reported_.begin(), site_reported_.end(), 0);
  std::fill(site_idx_.begin(), site_idx_.end(), 0);
  estimate_ = 0;
  true_count_ = 0;
}

uint64_t CountEachSimple::reports_for_count(const ThresholdTable& table, uint64_t c) {
  return table.index_of(c);
}

}  // namespace dem
