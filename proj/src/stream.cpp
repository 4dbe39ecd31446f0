#include "dem/stream.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dem {

FrequencyVector::FrequencyVector(const std::vector<StreamEvent>& events) {
  for (const auto& ev : events) add(ev.element);
}

FrequencyVector::FrequencyVector(std::initializer_list<std::pair<Element, uint64_t>> counts) {
  for (const auto& [e, c] : counts) add(e, c);
}

void FrequencyVector::add(Element e, uint64_t by) {
  if (by == 0) return;
  counts_[e] += by;
  total_ += by;
}

uint64_t FrequencyVector::count(Element e) const {
  auto it = counts_.find(e);
  return it == counts_.end() ? 0 : it->second;
}

FrequencyVector FrequencyVector::without(Element e) const {
  FrequencyVector out;
  for (const auto& [el, c] : counts_) {
    if (el != e) out.add(el, c);
  }
  return out;
}

FrequencyVector FrequencyVector::window(const std::vector<StreamEvent>& events,
                                        uint64_t from_exclusive, uint64_t to_inclusive) {
  FrequencyVector out;
  for (const auto& ev : events) {
    if (ev.global_index > from_exclusive && ev.global_index <= to_inclusive) {
      out.add(ev.element);
    }
  }
  return out;
}

void write_stream(std::ostream& out, const std::vector<StreamEvent>& events) {
  for (const auto& ev : events) {
    out << ev.global_index << ' ' << ev.element << ' ' << ev.site << '\n';
  }
}

std::vector<StreamEvent> read_stream(std::istream& in) {
  std::vector<StreamEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    StreamEvent ev;
    if (!(ls >> ev.global_index >> ev.element >> ev.site)) {
      throw std::runtime_error("malformed stream line: " + line);
    }
    events.push_back(ev);
  }
  return events;
}

void write_stream_file(const std::string& path, const std::vector<StreamEvent>& events) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_stream(out, events);
}

std::vector<StreamEvent> read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_stream(in);
}

void validate_stream(const std::vector<StreamEvent>& events, uint32_t n, uint32_t k) {
  uint64_t expect = 1;
  for (const auto& ev : events) {
    if (ev.global_index != expect) {
      throw std::invalid_argument("stream indices must be contiguous from 1");
    }
    if (ev.element < 1 || ev.element > n) {
      throw std::invalid_argument("element id out of universe");
    }
    if (ev.site < 1 || ev.site > k) {
      throw std::invalid_argument("site id out of range");
    }
    ++expect;
  }
}

}  // namespace dem
