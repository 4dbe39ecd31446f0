#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dem/ledger.hpp"
#include "dem/rng.hpp"
#include "dem/stream.hpp"

namespace dem {

class Simulation;

// A protocol instance participating in the simulation. on_event runs in
// site context (the receiving site is ev.site); message handlers run in
// coordinator context. sync() brings lazily evaluated state (estimates,
// ledger tallies) current; it is called before probes and at run end.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual void on_event(Simulation& sim, const StreamEvent& ev) = 0;
  virtual void sync(Simulation& sim) { (void)sim; }
};

struct ProbeRow {
  uint64_t index = 0;
  double estimate = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

struct RunReport {
  uint64_t seed = 0;
  uint32_t k = 0;
  uint32_t n = 0;
  uint64_t events = 0;
  std::vector<ProbeRow> probes;
  std::vector<CommLedger::Row> ledger;
  uint64_t total_bits = 0;
  uint64_t total_messages = 0;
};

struct SimConfig {
  uint32_t k = 1;
  uint32_t n = 1;
  uint64_t m_max = 1;
  uint64_t seed = 0;
};

// Deterministic single-threaded simulation of the star-topology
// coordinator model. Eager messages are queued and drained to quiescence
// after every event; components whose message schedule is a closed-form
// function of the workload may instead charge the ledger in bulk at sync
// points, which yields byte-identical ledgers at every probe.
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  const BitTable& bits() const { return bits_; }
  CommLedger& ledger() { return ledger_; }
  const CommLedger& ledger() const { return ledger_; }
  uint64_t now() const { return now_; }

  // Substream factory: all protocol randomness must come from here.
  RngStream rng(std::string_view label, uint64_t index = 0) const {
    return RngStream(cfg_.seed, label, index);
  }

  void register_protocol(Protocol* p) { protocols_.push_back(p); }

  // Site -> coordinator message; deliver runs in coordinator context.
  void send_to_coordinator(uint32_t tag, uint64_t payload_bits,
                           std::function<void(Simulation&)> deliver);
  // Coordinator -> all k sites; ledger charged k * payload_bits.
  void broadcast(uint32_t tag, uint64_t payload_bits,
                 std::function<void(Simulation&, SiteId)> deliver = nullptr);
  // Bulk accounting for closed-form evaluated components.
  void charge(uint32_t tag, Direction dir, uint64_t messages, uint64_t bits);

  // Messages enqueued/delivered on the eager path (conservation check).
  uint64_t eager_sent() const { return eager_sent_; }
  uint64_t eager_delivered() const { return eager_delivered_; }
  bool in_event() const { return in_event_; }

  // Processes events in order, drains messages to quiescence after each,
  // and evaluates `probe` at every index in probe_indices (sorted).
  // probe returns {estimate, exact}.
  RunReport run(const std::vector<StreamEvent>& events,
                const std::vector<uint64_t>& probe_indices,
                std::function<std::pair<double, double>(Simulation&, uint64_t)> probe);

  void sync_all();

 private:
  void drain();

  SimConfig cfg_;
  BitTable bits_;
  CommLedger ledger_;
  std::vector<Protocol*> protocols_;
  std::deque<std::function<void(Simulation&)>> queue_;
  uint64_t now_ = 0;
  uint64_t eager_sent_ = 0;
  uint64_t eager_delivered_ = 0;
  bool in_event_ = false;
};

// Geometric probe schedule 1, 2, 4, ..., plus the final index.
std::vector<uint64_t> geometric_probes(uint64_t m);
// Every index in [1, m].
std::vector<uint64_t> dense_probes(uint64_t m);

}  // namespace dem
