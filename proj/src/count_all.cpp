#include "dem/count_all.hpp"

#include <cmath>
#include <stdexcept>

namespace dem {

CountAll::CountAll(Simulation& sim, const std::string& tag, double eps)
    : tag_(sim.ledger().intern(tag)),
      eps_(eps),
      global_(sim, tag, TargetSet::all(), eps / 4.0),
      site_view_mhat_(sim.config().k + 1, 0),
      site_counts_(sim.config().k + 1),
      site_reported_(sim.config().k + 1) {
  if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("CountAll: eps in (0,1] required");
  global_.set_update_hook([this](Simulation& s) { maybe_broadcast_mhat(s); });
}

void CountAll::maybe_broadcast_mhat(Simulation& sim) {
  uint64_t m = global_.estimate();
  if (m > 0 &&
      static_cast<double>(m) >= (1.0 + eps_ / 4.0) * static_cast<double>(mhat_broadcast_)) {
    mhat_broadcast_ = m;
    sim.broadcast(tag_, sim.bits().counter_bits(),
                  [this, m](Simulation&, SiteId s) { site_view_mhat_[s] = m; });
  }
}

void CountAll::on_event(Simulation& sim, const StreamEvent& ev) {
  ++events_seen_;
  global_.ingest(sim, ev);
  SiteId s = ev.site;
  uint64_t c = ++site_counts_[s][ev.element];
  uint64_t& reported = site_reported_[s][ev.element];
  double threshold = (eps_ / 2.0) * static_cast<double>(site_view_mhat_[s]) /
                     static_cast<double>(sim.config().k);
  if (static_cast<double>(c - reported) >= threshold) {
    uint64_t prev = reported;
    reported = c;
    Element e = ev.element;
    uint64_t bits = sim.bits().element_bits() + sim.bits().counter_bits();
    sim.send_to_coordinator(tag_, bits, [this, e, c, prev](Simulation& s2) {
      coord_counts_[e] += c - prev;
      if (hook_) hook_(s2, e);
    });
  }
}

double CountAll::p_hat(Element e) const {
  if (events_seen_ == 0) throw std::domain_error("CountAll: query before any event");
  uint64_t m = global_.estimate();
  if (m == 0) return 0.0;
  auto it = coord_counts_.find(e);
  uint64_t c = it == coord_counts_.end() ? 0 : it->second;
  return static_cast<double>(c) / static_cast<double>(m);
}

}  // namespace dem
