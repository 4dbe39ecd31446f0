#include "dem/ams.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dem/count_each.hpp"

namespace dem {

KappaParams compute_kappa(double eps, double delta, const FunctionSpec& spec) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("compute_kappa: eps in (0,1)");
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("compute_kappa: delta in (0,1)");
  if (spec.E_lower <= 0.0 && spec.a <= 0.0) {
    throw std::domain_error("compute_kappa: infeasible, E[X] has no positive lower bound");
  }
  KappaParams p;
  p.a = spec.a;
  p.b = spec.b;
  p.E_lower = spec.E_lower;
  p.pi_sup = pi_envelope(spec.a, spec.b, spec.E_lower);
  double raw = p.pi_sup * std::log(2.0 / delta) / (eps * eps);
  p.kappa = static_cast<uint64_t>(std::ceil(raw));
  return p;
}

ChainBank::ChainBank(Simulation& sim, const ArrivalIndex& arrivals, const FunctionSpec& spec,
                     BankConfig cfg)
    : arr_(&arrivals),
      spec_(spec),
      cfg_(std::move(cfg)),
      tag_(sim.ledger().intern(cfg_.tag)),
      k_(sim.config().k),
      sat_target_(std::min<uint32_t>(cfg_.depth, sim.config().n)) {
  if (cfg_.kappa < 1) throw std::invalid_argument("ChainBank: kappa must be >= 1");
  if (cfg_.depth < 1) throw std::invalid_argument("ChainBank: depth must be >= 1");
  ces_table_ = threshold_table(cfg_.counter_eps, sim.config().m_max);
  if (cfg_.counter == CounterKind::counteach) {
    det_table_ = threshold_table(1.0, sim.config().m_max);
    ce_B_ = CountEach::sampling_constant(cfg_.counter_delta) *
            std::sqrt(static_cast<double>(k_)) / cfg_.counter_eps;
  }
  slots_.resize(cfg_.kappa);
  burnin_.reserve(cfg_.kappa);
  for (uint32_t i = 0; i < cfg_.kappa; ++i) {
    slots_[i].rng = sim.rng(cfg_.tag + ".slot", i);
    burnin_.push_back(i);
  }
}

void ChainBank::charge_update(Simulation& sim, uint32_t directives) {
  uint64_t bits = static_cast<uint64_t>(directives) *
                  (sim.bits().element_bits() + BitTable::rank_bits);
  sim.charge(tag_, Direction::site_to_coord, 1, bits);
  sim.charge(tag_, Direction::coord_to_site, k_, bits * k_);
}

void ChainBank::counter_init(TailCounter& c, uint64_t t) {
  c.birth = t;
  c.synced_to = t - 1;
  c.phase = 0;
  c.active = 0;
  c.value = 0;
  c.base.assign(k_ + 1, 0);
  c.rep_idx.assign(k_ + 1, 0);
  if (cfg_.counter == CounterKind::counteach) c.v_samp.assign(k_ + 1, 0);
}

uint64_t ChainBank::mlower_at(Element e, const TailCounter& c, uint64_t t) const {
  uint64_t total = 0;
  for (SiteId s = 1; s <= k_; ++s) {
    uint64_t cs = arr_->count_site(s, e, t) - c.base[s];
    total += det_table_->reported(cs);
  }
  return total;
}

void ChainBank::counter_sync_simple(Simulation& sim, Element e, TailCounter& c, uint64_t t) {
  uint64_t msgs = 0;
  uint64_t value = 0;
  const auto& vals = ces_table_->values();
  for (SiteId s = 1; s <= k_; ++s) {
    uint64_t cs = arr_->count_site(s, e, t) - c.base[s];
    uint32_t idx = ces_table_->index_of(cs);
    msgs += idx - c.rep_idx[s];
    c.rep_idx[s] = idx;
    if (idx > 0) value += vals[idx - 1];
  }
  if (msgs > 0) {
    sim.charge(tag_, Direction::site_to_coord, msgs,
               msgs * sim.bits().counter_bits());
  }
  c.value = value;
  c.synced_to = t;
}

void ChainBank::counter_sync_counteach(Simulation& sim, Slot& slot, Element e, TailCounter& c,
                                       uint64_t t) {
  uint64_t t0 = c.synced_to;
  if (t <= t0) return;
  uint64_t msgs = 0;

  // Doubling channel: deterministic schedule, closed form.
  for (SiteId s = 1; s <= k_; ++s) {
    uint64_t cs = arr_->count_site(s, e, t) - c.base[s];
    uint32_t idx = det_table_->index_of(cs);
    msgs += idx - c.rep_idx[s];
    c.rep_idx[s] = idx;
  }

  // Phase steps in (t0, t]: p halves when m_lower crosses B 2^j.
  uint32_t phase_end = CountEach::phase_for(mlower_at(e, c, t), ce_B_);
  struct Segment {
    uint64_t lo, hi;  // covers (lo, hi]
    double p;
  };
  std::vector<Segment> segs;
  uint64_t seg_lo = t0;
  uint32_t cur = c.phase;
  for (uint32_t j = c.phase + 1; j <= phase_end; ++j) {
    double need = ce_B_ * std::ldexp(1.0, static_cast<int>(j));
    uint64_t lo = seg_lo + 1, hi = t;
    while (lo < hi) {
      uint64_t mid = lo + (hi - lo) / 2;
      if (static_cast<double>(mlower_at(e, c, mid)) >= need) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    // The increment at the boundary index itself still samples at the
    // previous p; the broadcast lands within the same event.
    if (lo > seg_lo) segs.push_back({seg_lo, lo, std::ldexp(1.0, -static_cast<int>(cur))});
    seg_lo = lo;
    cur = j;
    sim.charge(tag_, Direction::coord_to_site, k_,
               static_cast<uint64_t>(k_) * sim.bits().counter_bits());
  }
  if (t > seg_lo) segs.push_back({seg_lo, t, std::ldexp(1.0, -static_cast<int>(cur))});
  c.phase = phase_end;

  // Sampled channel, newest segment first: find the latest report, then
  // tally older segments for the ledger only.
  for (SiteId s = 1; s <= k_; ++s) {
    bool found = false;
    for (size_t i = segs.size(); i-- > 0;) {
      uint64_t ca = arr_->count_site(s, e, segs[i].lo) - c.base[s];
      uint64_t cb = arr_->count_site(s, e, segs[i].hi) - c.base[s];
      uint64_t delta = cb - ca;
      if (delta == 0) continue;
      double p = segs[i].p;
      bool includes_first = (ca == 0);
      if (!found) {
        if (includes_first) {
          uint64_t tail = delta - 1;
          double q = tail > 0 ? -std::expm1(static_cast<double>(tail) * std::log1p(-p)) : 0.0;
          uint64_t v_new = 1, sends = 1;
          if (tail > 0 && slot.rng.next_unit() < q) {
            uint64_t g = slot.rng.next_truncated_geometric(p, tail);
            v_new = cb - g;
            uint64_t middles = v_new >= 3 ? sample_binomial_approx(slot.rng, v_new - 2, p) : 0;
            sends = 2 + middles;
          }
          if (c.v_samp[s] == 0) ++c.active;
          c.v_samp[s] = v_new;
          msgs += sends;
          found = true;
        } else {
          double q = -std::expm1(static_cast<double>(delta) * std::log1p(-p));
          if (slot.rng.next_unit() < q) {
            uint64_t g = slot.rng.next_truncated_geometric(p, delta);
            uint64_t v_new = cb - g;
            uint64_t before = delta - g - 1;
            uint64_t sends = 1 + sample_binomial_approx(slot.rng, before, p);
            if (c.v_samp[s] == 0) ++c.active;
            c.v_samp[s] = v_new;
            msgs += sends;
            found = true;
          }
        }
      } else {
        uint64_t sends = includes_first
                             ? 1 + sample_binomial_approx(slot.rng, delta - 1, p)
                             : sample_binomial_approx(slot.rng, delta, p);
        msgs += sends;
      }
    }
  }
  if (msgs > 0) {
    sim.charge(tag_, Direction::site_to_coord, msgs, msgs * sim.bits().counter_bits());
  }

  double p_now = std::ldexp(1.0, -static_cast<int>(c.phase));
  uint64_t value = 0;
  for (SiteId s = 1; s <= k_; ++s) value += c.v_samp[s];
  value += static_cast<uint64_t>(
      std::llround(static_cast<double>(c.active) * (1.0 - p_now) / p_now));
  c.value = value;
  c.synced_to = t;
}

void ChainBank::schedule(Slot& slot, uint32_t slot_id, uint64_t after_index) {
  uint64_t thr = slot.chain.empty() ? UINT64_MAX : slot.chain.back().rank.bits;
  if (slot.chain.size() < sat_target_) thr = UINT64_MAX;  // unreachable in skip mode
  if (thr == 0) {
    slot.next_hit = UINT64_MAX;
    return;
  }
  double p = static_cast<double>(thr) * 0x1.0p-64;
  uint64_t skips = p >= 1.0 ? 0 : slot.rng.next_geometric_skips(p);
  uint64_t next = after_index + 1 + skips;
  slot.next_hit = next;
  heap_.push({next, slot_id});
}

void ChainBank::process_rank(Simulation& sim, Slot& slot, Element e, const Rank& r) {
  auto& chain = slot.chain;
  uint64_t t = r.index;
  int found = -1;
  for (size_t j = 0; j < chain.size(); ++j) {
    if (chain[j].elem == e) {
      found = static_cast<int>(j);
      break;
    }
  }

  if (found >= 0) {
    if (!(r < chain[found].rank)) return;  // stale rank, discard
    size_t jp = 0;
    while (jp < chain.size() && chain[jp].rank < r) ++jp;
    uint32_t directives = static_cast<uint32_t>(found - static_cast<int>(jp)) + 1;
    // Close out the old incarnation before restarting.
    if (cfg_.counter == CounterKind::simple) {
      counter_sync_simple(sim, e, chain[found].ctr, t);
    } else {
      counter_sync_counteach(sim, slot, e, chain[found].ctr, t);
    }
    ChainEntry entry = std::move(chain[found]);
    chain.erase(chain.begin() + found);
    entry.rank = r;
    counter_init(entry.ctr, t);
    for (SiteId s = 1; s <= k_; ++s) entry.ctr.base[s] = arr_->count_site(s, e, t - 1);
    chain.insert(chain.begin() + jp, std::move(entry));
    if (jp == 0) {
      ++slot.restarts_head;
      if (found == 0) {
        ++slot.kind_counts[kS0SameElement];
      } else {
        ++slot.kind_counts[kS0NewElement];
        if (cfg_.depth >= 2) ++slot.kind_counts[kS1FromS0];
      }
    } else {
      ++slot.kind_counts[kS1NewElement];
      if (jp == 1) ++slot.restarts_second;
    }
    charge_update(sim, directives);
  } else {
    bool full = chain.size() >= cfg_.depth;
    if (full && !(r < chain.back().rank)) return;
    if (full) {
      // Evicted counter still owes its trailing messages.
      Element dead = chain.back().elem;
      if (cfg_.counter == CounterKind::simple) {
        counter_sync_simple(sim, dead, chain.back().ctr, t);
      } else {
        counter_sync_counteach(sim, slot, dead, chain.back().ctr, t);
      }
      chain.pop_back();
    }
    size_t jp = 0;
    while (jp < chain.size() && chain[jp].rank < r) ++jp;
    uint32_t directives = static_cast<uint32_t>(chain.size() - jp) + 1;
    ChainEntry entry;
    entry.elem = e;
    entry.rank = r;
    counter_init(entry.ctr, t);
    for (SiteId s = 1; s <= k_; ++s) entry.ctr.base[s] = arr_->count_site(s, e, t - 1);
    bool had_head = !chain.empty();
    chain.insert(chain.begin() + jp, std::move(entry));
    if (jp == 0) {
      ++slot.restarts_head;
      ++slot.kind_counts[kS0NewElement];
      if (had_head && cfg_.depth >= 2) ++slot.kind_counts[kS1FromS0];
    } else {
      ++slot.kind_counts[kS1NewElement];
      if (jp == 1) ++slot.restarts_second;
    }
    charge_update(sim, directives);
  }
  if (!slot.saturated && slot.chain.size() >= sat_target_) slot.saturated = true;
}

void ChainBank::on_event(Simulation& sim, const StreamEvent& ev) {
  ++events_seen_;
  uint64_t t = ev.global_index;

  if (!burnin_.empty()) {
    size_t keep = 0;
    for (size_t i = 0; i < burnin_.size(); ++i) {
      uint32_t id = burnin_[i];
      Slot& slot = slots_[id];
      uint64_t bits = slot.rng.next_u64();
      process_rank(sim, slot, ev.element, Rank{bits, ev.site, t});
      if (slot.saturated) {
        schedule(slot, id, t);
      } else {
        burnin_[keep++] = id;
      }
    }
    burnin_.resize(keep);
  }

  while (!heap_.empty() && heap_.top().first <= t) {
    auto [idx, id] = heap_.top();
    heap_.pop();
    Slot& slot = slots_[id];
    if (slot.next_hit != idx) continue;  // superseded schedule
    uint64_t thr = slot.chain.back().rank.bits;
    uint64_t bits = slot.rng.next_below(thr);
    process_rank(sim, slot, ev.element, Rank{bits, ev.site, t});
    schedule(slot, id, t);
  }
}

void ChainBank::sync(Simulation& sim) {
  uint64_t t = sim.now();
  if (t == 0) return;
  for (auto& slot : slots_) {
    for (auto& entry : slot.chain) {
      if (cfg_.counter == CounterKind::simple) {
        counter_sync_simple(sim, entry.elem, entry.ctr, t);
      } else {
        counter_sync_counteach(sim, slot, entry.elem, entry.ctr, t);
      }
    }
  }
}

double ChainBank::est(double m_eval, const std::vector<Element>& exclude) const {
  if (events_seen_ == 0) throw std::domain_error("ChainBank::est: empty stream");
  double sum = 0.0;
  for (const auto& slot : slots_) {
    const ChainEntry* pick = nullptr;
    for (const auto& entry : slot.chain) {
      bool excluded = false;
      for (Element x : exclude) {
        if (entry.elem == x) {
          excluded = true;
          break;
        }
      }
      if (!excluded) {
        pick = &entry;
        break;
      }
    }
    if (!pick) continue;
    uint64_t rhat = std::max<uint64_t>(pick->ctr.value, 1);
    sum += spec_.increment(static_cast<double>(rhat), m_eval);
  }
  return sum / static_cast<double>(cfg_.kappa);
}

}  // namespace dem
