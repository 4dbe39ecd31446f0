#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dem/count_each_simple.hpp"
#include "dem/netsim.hpp"
#include "dem/rng.hpp"

namespace dem {

// CountEach(target, eps, delta): randomized (1+eps, delta) counting in
// O~(k + sqrt(k)/eps) bits. Two channels per site:
//   - a deterministic doubling channel (drives the sampling phase and
//     gives the coordinator a 2-approximate lower bound m_lower),
//   - a sampled channel: each matching increment sends the exact local
//     counter with probability p = 2^-j, where the phase j is chosen so
//     the standard deviation of the coordinator's sum stays <= eps*m/3.
// The first matching increment at a site always reports. A phase change
// is broadcast to all sites.
// Estimate: sum of last sampled reports plus (1-p)/p per active site.
class CountEach {
 public:
  CountEach(Simulation& sim, const std::string& tag, TargetSet target, double eps,
            double delta);

  void ingest(Simulation& sim, const StreamEvent& ev);
  void restart(Simulation& sim);
  void restart(Simulation& sim, TargetSet new_target);

  uint64_t estimate() const;
  uint64_t true_count() const { return true_count_; }
  double eps() const { return eps_; }
  uint32_t phase() const { return phase_; }
  uint32_t tag_id() const { return tag_; }

  // Sampling-pressure constant C with B = C sqrt(k) / eps.
  static double sampling_constant(double delta);
  static uint32_t phase_for(uint64_t m_lower, double B);

 private:
  void coordinator_det_update(Simulation& sim, uint64_t delta_value);

  uint32_t tag_;
  TargetSet target_;
  double eps_;
  double B_;
  std::shared_ptr<const ThresholdTable> det_table_;
  std::vector<uint64_t> site_count_;
  std::vector<uint32_t> site_det_idx_;
  std::vector<uint64_t> site_det_reported_;
  std::vector<uint64_t> site_sample_reported_;
  std::vector<double> site_p_view_;
  std::vector<RngStream> site_rng_;
  uint64_t det_sum_ = 0;       // m_lower at the coordinator
  uint64_t sample_sum_ = 0;    // sum of last sampled reports
  uint32_t active_sites_ = 0;  // sites with a sampled report
  uint32_t phase_ = 0;
  uint64_t true_count_ = 0;
  uint64_t restarts_ = 0;
};

class CountEachProtocol : public Protocol {
 public:
  CountEachProtocol(Simulation& sim, const std::string& tag, TargetSet target, double eps,
                    double delta)
      : counter_(sim, tag, std::move(target), eps, delta) {}
  void on_event(Simulation& sim, const StreamEvent& ev) override { counter_.ingest(sim, ev); }
  CountEach& counter() { return counter_; }

 private:
  CountEach counter_;
};

}  // namespace dem
