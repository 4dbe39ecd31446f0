#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dem/count_each_simple.hpp"
#include "dem/netsim.hpp"

namespace dem {

// CountAll(eps): deterministic tracking of every element's empirical
// probability to additive error < eps. Sites keep exact local counts and
// report an element once its unreported delta reaches (eps/2) * (mhat/k),
// where mhat is a global CountEachSimple([n], eps/4) total that the
// coordinator pushes back to the sites on (1+eps/4) growth.
class CountAll : public Protocol {
 public:
  CountAll(Simulation& sim, const std::string& tag, double eps);

  void on_event(Simulation& sim, const StreamEvent& ev) override;

  // Estimate of element e's empirical probability.
  double p_hat(Element e) const;
  // All elements with a nonzero reported count.
  const std::unordered_map<Element, uint64_t>& reported_counts() const { return coord_counts_; }
  uint64_t mhat() const { return global_.estimate(); }
  uint64_t events_seen() const { return events_seen_; }

  // Invoked in coordinator context after a report updates p_hat(e).
  void set_report_hook(std::function<void(Simulation&, Element)> hook) { hook_ = std::move(hook); }

  double eps() const { return eps_; }

 private:
  void maybe_broadcast_mhat(Simulation& sim);

  uint32_t tag_;
  double eps_;
  CountEachSimple global_;  // mhat tracker over [n]
  uint64_t mhat_broadcast_ = 0;               // last value pushed to sites
  std::vector<uint64_t> site_view_mhat_;      // per-site copy
  std::vector<std::unordered_map<Element, uint64_t>> site_counts_;
  std::vector<std::unordered_map<Element, uint64_t>> site_reported_;
  std::unordered_map<Element, uint64_t> coord_counts_;  // sums of last reports
  uint64_t events_seen_ = 0;
  std::function<void(Simulation&, Element)> hook_;
};

}  // namespace dem
