#pragma once

#include <cstdint>
#include <memory>
#include <queue>
#include <string>
#include <vector>

#include "dem/arrivals.hpp"
#include "dem/count_each_simple.hpp"
#include "dem/functions.hpp"
#include "dem/netsim.hpp"
#include "dem/rng.hpp"

namespace dem {

// Item rank: a 64-bit dyadic rational in (0,1), ties broken by
// (bits, site, index) lexicographic order, so no two items ever
// compare equal.
struct Rank {
  uint64_t bits = UINT64_MAX;
  SiteId site = 0;
  uint64_t index = 0;

  bool operator<(const Rank& o) const {
    if (bits != o.bits) return bits < o.bits;
    if (site != o.site) return site < o.site;
    return index < o.index;
  }
};

struct KappaParams {
  double a = 0.0;
  double b = 0.0;
  double E_lower = 0.0;
  double pi_sup = 0.0;
  uint64_t kappa = 0;
};

// kappa(eps, delta, A) = ceil(eps^-2 ln(2/delta) pi_sup) with pi_sup
// evaluated from the spec's certified (a, b, E_lower) envelope.
KappaParams compute_kappa(double eps, double delta, const FunctionSpec& spec);

enum class CounterKind { simple, counteach };

struct BankConfig {
  std::string tag = "bank";
  uint64_t kappa = 64;
  uint32_t depth = 1;  // 1 generic, 2 shannon dual, 5 tsallis
  CounterKind counter = CounterKind::simple;
  double counter_eps = 0.1;     // eps_{f,A} of the tail counters
  double counter_delta = 0.05;  // per-counter delta (counteach)
};

// Tail-frequency counter of one sampled element, evaluated in closed
// form against the arrival index. Message schedules are deterministic
// (CountEachSimple) or sampled consistently at sync boundaries
// (CountEach), so ledgers and estimates at quiescent points are
// identical to an event-by-event execution.
struct TailCounter {
  uint64_t birth = 0;
  uint64_t synced_to = 0;
  uint32_t phase = 0;
  uint32_t active = 0;
  uint64_t value = 0;             // R-hat after the last sync
  std::vector<uint64_t> base;     // per-site prefix count at birth-1
  std::vector<uint32_t> rep_idx;  // simple: thresholds crossed; counteach: doubling idx
  std::vector<uint64_t> v_samp;   // counteach: last sampled report
};

struct ChainEntry {
  Element elem = kNoElement;
  Rank rank;
  TailCounter ctr;
};

enum UpdateKind : uint32_t {
  kS0SameElement = 0,
  kS0NewElement = 1,
  kS1FromS0 = 2,
  kS1NewElement = 3,
};

struct Slot {
  std::vector<ChainEntry> chain;  // ascending by rank; front is the sample
  RngStream rng;
  uint64_t next_hit = 0;
  bool saturated = false;
  uint32_t restarts_head = 0;    // position-0 sample replacements
  uint32_t restarts_second = 0;  // fresh counters at position 1
  uint32_t kind_counts[4] = {0, 0, 0, 0};
};

// kappa independent AMS samplers, each maintaining the min-rank chain of
// the top `depth` distinct elements with tail counters per Algorithms
// "receive item at a site" / "update sample at the coordinator". Rank
// draws are skip-sampled: per slot the next index whose rank beats the
// chain tail is geometric, which is distributionally identical to
// drawing a rank per item.
class ChainBank : public Protocol {
 public:
  ChainBank(Simulation& sim, const ArrivalIndex& arrivals, const FunctionSpec& spec,
            BankConfig cfg);

  void on_event(Simulation& sim, const StreamEvent& ev) override;
  void sync(Simulation& sim) override;

  // (1/kappa) sum f(R-hat) - f(R-hat - 1), with f evaluated at m_eval and
  // the slot sample taken as the first chain entry whose element is not
  // in `exclude`. Requires at least one event ingested.
  double est(double m_eval, const std::vector<Element>& exclude = {}) const;

  uint64_t kappa() const { return cfg_.kappa; }
  size_t slot_count() const { return slots_.size(); }
  const Slot& slot(size_t i) const { return slots_[i]; }
  const BankConfig& config() const { return cfg_; }

 private:
  void process_rank(Simulation& sim, Slot& slot, Element e, const Rank& r);
  void schedule(Slot& slot, uint32_t slot_id, uint64_t after_index);
  void charge_update(Simulation& sim, uint32_t directives);

  void counter_init(TailCounter& c, uint64_t t);
  void counter_sync_simple(Simulation& sim, Element e, TailCounter& c, uint64_t t);
  void counter_sync_counteach(Simulation& sim, Slot& slot, Element e, TailCounter& c, uint64_t t);
  uint64_t mlower_at(Element e, const TailCounter& c, uint64_t t) const;

  const ArrivalIndex* arr_;
  FunctionSpec spec_;
  BankConfig cfg_;
  uint32_t tag_;
  uint32_t k_;
  uint32_t sat_target_;
  double ce_B_ = 0.0;  // counteach phase constant
  std::shared_ptr<const ThresholdTable> ces_table_;
  std::shared_ptr<const ThresholdTable> det_table_;
  std::vector<Slot> slots_;
  std::vector<uint32_t> burnin_;
  std::priority_queue<std::pair<uint64_t, uint32_t>,
                      std::vector<std::pair<uint64_t, uint32_t>>,
                      std::greater<std::pair<uint64_t, uint32_t>>>
      heap_;
  uint64_t events_seen_ = 0;
};

}  // namespace dem
