#include "dem/netsim.hpp"

#include <cmath>
#include <stdexcept>

namespace dem {

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
  if (cfg.k < 1) throw std::invalid_argument("Simulation: k must be >= 1");
  bits_.n = cfg.n;
  bits_.m_max = cfg.m_max;
}

void Simulation::send_to_coordinator(uint32_t tag, uint64_t payload_bits,
                                     std::function<void(Simulation&)> deliver) {
  if (payload_bits < 1) throw std::invalid_argument("payload_bits must be >= 1");
  ledger_.charge(tag, Direction::site_to_coord, 1, payload_bits);
  ++eager_sent_;
  queue_.push_back(std::move(deliver));
}

void Simulation::broadcast(uint32_t tag, uint64_t payload_bits,
                           std::function<void(Simulation&, SiteId)> deliver) {
  if (payload_bits < 1) throw std::invalid_argument("payload_bits must be >= 1");
  ledger_.charge(tag, Direction::coord_to_site, cfg_.k, payload_bits * cfg_.k);
  if (deliver) {
    eager_sent_ += cfg_.k;
    for (SiteId s = 1; s <= cfg_.k; ++s) {
      queue_.push_back([deliver, s](Simulation& sim) { deliver(sim, s); });
    }
  }
}

void Simulation::charge(uint32_t tag, Direction dir, uint64_t messages, uint64_t bits) {
  ledger_.charge(tag, dir, messages, bits);
}

void Simulation::drain() {
  while (!queue_.empty()) {
    auto msg = std::move(queue_.front());
    queue_.pop_front();
    ++eager_delivered_;
    msg(*this);
  }
}

void Simulation::sync_all() {
  for (auto* p : protocols_) p->sync(*this);
}

RunReport Simulation::run(
    const std::vector<StreamEvent>& events, const std::vector<uint64_t>& probe_indices,
    std::function<std::pair<double, double>(Simulation&, uint64_t)> probe) {
  RunReport report;
  report.seed = cfg_.seed;
  report.k = cfg_.k;
  report.n = cfg_.n;
  report.events = events.size();

  size_t next_probe = 0;
  while (next_probe < probe_indices.size() && probe_indices[next_probe] == 0) ++next_probe;

  for (const auto& ev : events) {
    now_ = ev.global_index;
    in_event_ = true;
    for (auto* p : protocols_) p->on_event(*this, ev);
    drain();
    in_event_ = false;
    while (next_probe < probe_indices.size() && probe_indices[next_probe] == now_) {
      sync_all();
      if (probe) {
        auto [est, exact] = probe(*this, now_);
        ProbeRow row;
        row.index = now_;
        row.estimate = est;
        row.exact = exact;
        row.abs_error = std::abs(est - exact);
        row.rel_error = exact != 0.0 ? row.abs_error / std::abs(exact) : row.abs_error;
        report.probes.push_back(row);
      }
      ++next_probe;
    }
  }
  sync_all();

  report.ledger = ledger_.rows();
  auto g = ledger_.grand_total();
  report.total_bits = g.bits;
  report.total_messages = g.messages;
  return report;
}

std::vector<uint64_t> geometric_probes(uint64_t m) {
  std::vector<uint64_t> out;
  for (uint64_t i = 1; i < m; i *= 2) out.push_back(i);
  if (m >= 1) out.push_back(m);
  return out;
}

std::vector<uint64_t> dense_probes(uint64_t m) {
  std::vector<uint64_t> out(m);
  for (uint64_t i = 0; i < m; ++i) out[i] = i + 1;
  return out;
}

}  // namespace dem
