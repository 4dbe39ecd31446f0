#include "dem/count_each.hpp"

#include <cmath>
#include <stdexcept>

namespace dem {

double CountEach::sampling_constant(double delta) {
  // Gaussian-style tail at 3 sigma covers delta >= ~0.003; the extra
  // factor 2 absorbs the doubling-channel slack in m_lower.
  double c = std::max(3.0, std::sqrt(2.0 * std::log(2.0 / delta)));
  return 2.0 * c;
}

uint32_t CountEach::phase_for(uint64_t m_lower, double B) {
  if (static_cast<double>(m_lower) < B) return 0;
  return static_cast<uint32_t>(std::floor(std::log2(static_cast<double>(m_lower) / B)));
}

CountEach::CountEach(Simulation& sim, const std::string& tag, TargetSet target, double eps,
                     double delta)
    : tag_(sim.ledger().intern(tag)),
      target_(std::move(target)),
      eps_(eps),
      det_table_(threshold_table(1.0, sim.config().m_max)) {
  if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("CountEach: eps in (0,1] required");
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("CountEach: delta in (0,1)");
  uint32_t k = sim.config().k;
  B_ = sampling_constant(delta) * std::sqrt(static_cast<double>(k)) / eps;
  site_count_.assign(k + 1, 0);
  site_det_idx_.assign(k + 1, 0);
  site_det_reported_.assign(k + 1, 0);
  site_sample_reported_.assign(k + 1, 0);
  site_p_view_.assign(k + 1, 1.0);
  site_rng_.resize(k + 1);
  for (SiteId s = 1; s <= k; ++s) site_rng_[s] = sim.rng(tag + ".ce", s);
}

void CountEach::coordinator_det_update(Simulation& sim, uint64_t delta_value) {
  det_sum_ += delta_value;
  uint32_t j = phase_for(det_sum_, B_);
  if (j > phase_) {
    phase_ = j;
    double p = std::ldexp(1.0, -static_cast<int>(phase_));
    sim.broadcast(tag_, sim.bits().counter_bits(),
                  [this, p](Simulation&, SiteId s) { site_p_view_[s] = p; });
  }
}

void CountEach::ingest(Simulation& sim, const StreamEvent& ev) {
  if (!target_.matches(ev.element)) return;
  SiteId s = ev.site;
  uint64_t c = ++site_count_[s];
  ++true_count_;

  const auto& det_vals = det_table_->values();
  if (site_det_idx_[s] < det_vals.size() && c == det_vals[site_det_idx_[s]]) {
    ++site_det_idx_[s];
    uint64_t prev = site_det_reported_[s];
    site_det_reported_[s] = c;
    sim.send_to_coordinator(tag_, sim.bits().counter_bits(), [this, c, prev](Simulation& s2) {
      coordinator_det_update(s2, c - prev);
    });
  }

  bool send_sample = (c == 1) || (site_rng_[s].next_unit() < site_p_view_[s]);
  if (send_sample) {
    sim.send_to_coordinator(tag_, sim.bits().counter_bits(), [this, s, c](Simulation&) {
      if (site_sample_reported_[s] == 0) ++active_sites_;
      sample_sum_ += c - site_sample_reported_[s];
      site_sample_reported_[s] = c;
    });
  }
}

uint64_t CountEach::estimate() const {
  double p = std::ldexp(1.0, -static_cast<int>(phase_));
  double correction = static_cast<double>(active_sites_) * (1.0 - p) / p;
  return sample_sum_ + static_cast<uint64_t>(std::llround(correction));
}

void CountEach::restart(Simulation& sim) { restart(sim, target_); }

void CountEach::restart(Simulation&, TargetSet new_target) {
  target_ = std::move(new_target);
  std::fill(site_count_.begin(), site_count_.end(), 0);
  std::fill(site_det_idx_.begin(), site_det_idx_.end(), 0);
  std::fill(site_det_reported_.begin(), site_det_reported_.end(), 0);
  std::fill(site_sample_reported_.begin(), site_sample_reported_.end(), 0);
  std::fill(site_p_view_.begin(), site_p_view_.end(), 1.0);
  det_sum_ = 0;
  sample_sum_ = 0;
  active_sites_ = 0;
  phase_ = 0;
  true_count_ = 0;
  ++restarts_;
}

}  // namespace dem
