#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dem/functions.hpp"
#include "dem/rng.hpp"
#include "dem/stream.hpp"

using namespace dem;

namespace {

std::vector<StreamEvent> make_stream(const std::vector<Element>& elems) {
  std::vector<StreamEvent> events;
  events.reserve(elems.size());
  for (size_t i = 0; i < elems.size(); ++i) {
    events.push_back({i + 1, elems[i], 1});
  }
  return events;
}

std::vector<StreamEvent> random_stream(RngStream& rng, uint32_t n, uint64_t m) {
  std::vector<StreamEvent> events;
  events.reserve(m);
  for (uint64_t i = 1; i <= m; ++i) {
    events.push_back({i, static_cast<Element>(1 + rng.next_below(n)), 1});
  }
  return events;
}

}  // namespace

TEST_CASE("exact_shannon on the pinned examples") {
  CHECK(exact_shannon(FrequencyVector({{1, 4}})) == doctest::Approx(0.0));
  CHECK(exact_shannon(FrequencyVector({{1, 2}, {2, 2}})) == doctest::Approx(1.0));
  CHECK(exact_shannon(FrequencyVector({{1, 3}, {2, 1}})) ==
        doctest::Approx(0.25 * std::log2(4.0) + 0.75 * std::log2(4.0 / 3.0)).epsilon(1e-12));
  CHECK(exact_shannon(FrequencyVector({{1, 3}, {2, 1}})) == doctest::Approx(0.8112781).epsilon(1e-6));
  CHECK_THROWS_AS(exact_shannon(FrequencyVector{}), std::domain_error);
}

TEST_CASE("exact_tsallis on the pinned examples") {
  CHECK(exact_tsallis(FrequencyVector({{1, 4}}), 2.0) == doctest::Approx(0.0));
  CHECK(exact_tsallis(FrequencyVector({{1, 2}, {2, 2}}), 2.0) == doctest::Approx(0.5));
  CHECK(exact_tsallis(FrequencyVector({{1, 3}, {2, 1}}), 3.0) == doctest::Approx(0.28125));
  CHECK_THROWS_AS(exact_tsallis(FrequencyVector({{1, 1}}), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_tsallis(FrequencyVector({{1, 1}}), 0.5), std::invalid_argument);
}

TEST_CASE("exact_fbar matches the hand examples and exact_shannon") {
  auto sh = FunctionSpec::shannon(1024);
  CHECK(exact_fbar(FrequencyVector({{1, 2}, {2, 2}}), sh) == doctest::Approx(1.0));
  CHECK(exact_fbar(FrequencyVector({{1, 4}}), sh) == doctest::Approx(0.0));

  auto ts = FunctionSpec::tsallis(2.0, 1024);
  CHECK(exact_fbar(FrequencyVector({{1, 3}, {2, 1}}), ts) == doctest::Approx(0.375));
  // fbar = (q-1) S_q identically.
  CHECK(exact_fbar(FrequencyVector({{1, 3}, {2, 1}}), ts) ==
        doctest::Approx((2.0 - 1.0) * exact_tsallis(FrequencyVector({{1, 3}, {2, 1}}), 2.0)));

  RngStream rng(7, "fbar-vs-shannon");
  for (int trial = 0; trial < 50; ++trial) {
    auto events = random_stream(rng, 16, 200);
    FrequencyVector fv(events);
    CHECK(exact_fbar(fv, sh) == doctest::Approx(exact_shannon(fv)).epsilon(1e-9));
  }
}

TEST_CASE("exact_tail_frequency examples and two-pass oracle") {
  auto events = make_stream({1, 2, 1, 1});
  CHECK(exact_tail_frequency(events, 1) == 3);
  CHECK(exact_tail_frequency(events, 2) == 1);
  CHECK_THROWS_AS(exact_tail_frequency(events, 0), std::out_of_range);
  CHECK_THROWS_AS(exact_tail_frequency(events, 5), std::out_of_range);

  RngStream rng(13, "tail");
  auto big = random_stream(rng, 8, 1000);
  // Independent backward scan.
  std::vector<uint64_t> expect(big.size() + 1, 0);
  {
    std::vector<uint64_t> counts(9, 0);
    for (size_t j = big.size(); j >= 1; --j) {
      counts[big[j - 1].element]++;
      expect[j] = counts[big[j - 1].element];
    }
  }
  for (uint64_t J = 1; J <= big.size(); ++J) {
    REQUIRE(exact_tail_frequency(big, J) == expect[J]);
  }
}

TEST_CASE("expected_X_oracle telescopes to exact_fbar") {
  auto sh = FunctionSpec::shannon(1024);
  auto ts = FunctionSpec::tsallis(2.0, 1024);

  auto two_ones = make_stream({1, 1});
  CHECK(expected_X_oracle(two_ones, sh) ==
        doctest::Approx(exact_fbar(FrequencyVector(two_ones), sh)).epsilon(1e-12));

  auto mixed = make_stream({1, 2, 1, 1});
  CHECK(expected_X_oracle(mixed, sh) ==
        doctest::Approx(exact_shannon(FrequencyVector(mixed))).epsilon(1e-12));

  RngStream rng(99, "telescope");
  for (int trial = 0; trial < 200; ++trial) {
    uint32_t n = 2 + static_cast<uint32_t>(rng.next_below(31));
    uint64_t m = 1 + rng.next_below(512);
    auto events = random_stream(rng, n, m);
    FrequencyVector fv(events);
    double fbar_sh = exact_fbar(fv, sh);
    double fbar_ts = exact_fbar(fv, ts);
    CHECK(expected_X_oracle(events, sh) == doctest::Approx(fbar_sh).epsilon(1e-9));
    CHECK(expected_X_oracle(events, ts) == doctest::Approx(fbar_ts).epsilon(1e-9));
  }
}

TEST_CASE("entropy range bounds") {
  RngStream rng(3, "bounds");
  for (int trial = 0; trial < 100; ++trial) {
    uint32_t n = 2 + static_cast<uint32_t>(rng.next_below(30));
    auto events = random_stream(rng, n, 1 + rng.next_below(400));
    FrequencyVector fv(events);
    double h = exact_shannon(fv);
    CHECK(h >= 0.0);
    CHECK(h <= std::log2(static_cast<double>(n)) + 1e-12);
    double q = 1.5 + rng.next_unit() * 2.0;
    double s = exact_tsallis(fv, q);
    CHECK(s >= 0.0);
    CHECK(s < 1.0 / (q - 1.0));
  }
}

TEST_CASE("lambda certificate for shannon on A'") {
  // Unit-scale grid; the acceptance suite runs the exhaustive one.
  // The per-sample ratio bound is vacuous on part of the class because
  // X(r) < 0 for r > m/e; the absolute-form certificate |X - Xhat| <= 5 eps
  // is what the estimator argument rests on, and holds with room.
  for (uint64_t m : {256ull, 1024ull}) {
    auto sh = FunctionSpec::shannon(m);
    auto cert = lambda_certificate(sh, m, {0.05, 0.1, 0.25}, 10.0);
    CHECK(cert.min_x < 0.0);            // the zero crossing is real
    CHECK(cert.ratio_violations > 0);   // the literal per-sample claim fails
    CHECK(cert.max_abs_over_eps <= 5.0);
  }
}

TEST_CASE("lambda certificate for tsallis is a finite constant") {
  for (double q : {1.5, 2.0, 3.0}) {
    auto ts = FunctionSpec::tsallis(q, 4096);
    CHECK(ts.lambda_bound >= 1.0);
    CHECK(ts.lambda_bound < 50.0);
    auto cert = lambda_certificate(ts, 4096, {0.05, 0.1, 0.25}, ts.lambda_bound);
    CHECK(cert.min_x > 0.0);  // g's increments stay positive on the class
    CHECK(cert.ratio_violations == 0);
  }
}

TEST_CASE("inf fbar over A' members is at least 0.5") {
  RngStream rng(31, "fbar-inf");
  for (int trial = 0; trial < 200; ++trial) {
    uint64_t m = 64 + rng.next_below(512);
    auto sh = FunctionSpec::shannon(m);
    // Random member of A': repeatedly assign counts <= 0.7 m.
    FrequencyVector fv;
    uint64_t cap = static_cast<uint64_t>(0.7 * static_cast<double>(m));
    uint64_t left = m;
    Element e = 1;
    while (left > 0) {
      uint64_t c = 1 + rng.next_below(std::min(cap, left));
      if (left - c == 0 || left - c >= 1) {
        fv.add(e++, c);
        left -= c;
      }
    }
    bool in_class = true;
    for (const auto& [el, c] : fv.counts()) {
      if (static_cast<double>(c) > 0.7 * static_cast<double>(m)) in_class = false;
    }
    if (!in_class) continue;
    CHECK(exact_fbar(fv, sh) >= 0.5);
  }
}

TEST_CASE("FrequencyVector restriction and removal") {
  auto events = make_stream({1, 2, 1, 3, 1});
  FrequencyVector fv(events);
  CHECK(fv.total() == 5);
  CHECK(fv.count(1) == 3);
  CHECK(fv.total_without(1) == 2);
  auto no1 = fv.without(1);
  CHECK(no1.total() == 2);
  CHECK(no1.count(1) == 0);
  auto win = FrequencyVector::window(events, 2, 5);
  CHECK(win.total() == 3);
  CHECK(win.count(1) == 2);
}

TEST_CASE("stream file round trip and validation") {
  auto events = make_stream({3, 1, 2});
  events[0].site = 2;
  std::stringstream ss;
  write_stream(ss, events);
  auto back = read_stream(ss);
  REQUIRE(back.size() == events.size());
  for (size_t i = 0; i < events.size(); ++i) {
    CHECK(back[i].global_index == events[i].global_index);
    CHECK(back[i].element == events[i].element);
    CHECK(back[i].site == events[i].site);
  }
  CHECK_NOTHROW(validate_stream(back, 3, 2));
  CHECK_THROWS_AS(validate_stream(back, 2, 2), std::invalid_argument);
  auto bad = events;
  bad[1].global_index = 7;
  CHECK_THROWS_AS(validate_stream(bad, 3, 2), std::invalid_argument);
}
