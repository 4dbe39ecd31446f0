#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dem/netsim.hpp"
#include "dem/stream.hpp"

namespace dem {

// Report thresholds 1 = t_0 < t_1 < ... with t_{j+1} the smallest integer
// >= (1+eps) t_j. A site reports its exact counter value when it first
// reaches a threshold; the schedule is shared by every counter with the
// same eps.
class ThresholdTable {
 public:
  ThresholdTable(double eps, uint64_t max_count);

  // Number of thresholds <= c == number of reports sent at count c.
  uint32_t index_of(uint64_t c) const;
  // Value of the last threshold <= c (the currently reported value).
  uint64_t reported(uint64_t c) const;
  const std::vector<uint64_t>& values() const { return values_; }
  double eps() const { return eps_; }

 private:
  double eps_;
  std::vector<uint64_t> values_;
};

// What a counter instance matches: one element, everything, or the
// complement of a small set (state stays O(1) for complement targets).
struct TargetSet {
  enum class Kind { single, all, complement };
  Kind kind = Kind::all;
  Element element = kNoElement;
  std::vector<Element> excluded;

  bool matches(Element e) const {
    switch (kind) {
      case Kind::single: return e == element;
      case Kind::all: return true;
      case Kind::complement:
        for (Element x : excluded) {
          if (e == x) return false;
        }
        return true;
    }
    return false;
  }

  static TargetSet single(Element e) { return {Kind::single, e, {}}; }
  static TargetSet all() { return {Kind::all, kNoElement, {}}; }
  static TargetSet complement(std::vector<Element> excl) {
    return {Kind::complement, kNoElement, std::move(excl)};
  }
};

// Eager CountEachSimple(target, eps): per-site exact counters, reports on
// (1+eps) growth, coordinator sums last reports. Deterministic sandwich
// true/(1+eps) < estimate <= true at every quiescent point.
class CountEachSimple {
 public:
  CountEachSimple(Simulation& sim, const std::string& tag, TargetSet target, double eps);

  void ingest(Simulation& sim, const StreamEvent& ev);
  // Reset all counters (new incarnation); optionally retarget.
  void restart(Simulation& sim);
  void restart(Simulation& sim, TargetSet new_target);

  uint64_t estimate() const { return estimate_; }
  uint64_t true_count() const { return true_count_; }
  double eps() const { return table_->eps(); }
  const TargetSet& target() const { return target_; }
  uint32_t tag_id() const { return tag_; }

  // Runs in coordinator context after a report lands.
  void set_update_hook(std::function<void(Simulation&)> hook) { hook_ = std::move(hook); }

  // Schedule oracle: reports sent by a single site at exact count c.
  static uint64_t reports_for_count(const ThresholdTable& table, uint64_t c);

 private:
  uint32_t tag_;
  TargetSet target_;
  std::shared_ptr<const ThresholdTable> table_;
  std::vector<uint64_t> site_count_;     // exact local counters
  std::vector<uint64_t> site_reported_;  // last reported values
  std::vector<uint32_t> site_idx_;       // next threshold index
  uint64_t estimate_ = 0;                // coordinator view
  uint64_t true_count_ = 0;
  std::function<void(Simulation&)> hook_;
};

// Shared cache of threshold tables keyed by eps (they are pure).
std::shared_ptr<const ThresholdTable> threshold_table(double eps, uint64_t max_count);

// Protocol adapter for standalone use.
class CountEachSimpleProtocol : public Protocol {
 public:
  CountEachSimpleProtocol(Simulation& sim, const std::string& tag, TargetSet target, double eps)
      : counter_(sim, tag, std::move(target), eps) {}
  void on_event(Simulation& sim, const StreamEvent& ev) override { counter_.ingest(sim, ev); }
  CountEachSimple& counter() { return counter_; }

 private:
  CountEachSimple counter_;
};

}  // namespace dem
