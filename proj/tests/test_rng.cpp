#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "dem/rng.hpp"

using namespace dem;

TEST_CASE("identical (seed, label, index) give identical draws") {
  RngStream a(42, "ams.slot", 7);
  RngStream b(42, "ams.slot", 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different labels and indices decorrelate") {
  RngStream a(42, "ams.slot", 7);
  RngStream b(42, "ams.slot", 8);
  RngStream c(42, "countmin", 7);
  CHECK(a.next_u64() != b.next_u64());
  CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("next_unit in [0,1) and roughly uniform") {
  RngStream r(1, "unit");
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = r.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("next_below is bounded and covers small ranges") {
  RngStream r(3, "below");
  std::vector<int> seen(5, 0);
  for (int i = 0; i < 5000; ++i) {
    uint64_t v = r.next_below(5);
    REQUIRE(v < 5);
    seen[v]++;
  }
  for (int c : seen) CHECK(c > 800);
}

TEST_CASE("geometric skips have mean (1-p)/p") {
  RngStream r(9, "geom");
  double p = 0.2;
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(r.next_geometric_skips(p));
  double mean = sum / n;
  CHECK(std::abs(mean - (1.0 - p) / p) < 0.05);
}

TEST_CASE("truncated geometric stays inside the window") {
  RngStream r(11, "tgeom");
  for (int i = 0; i < 10000; ++i) {
    uint64_t g = r.next_truncated_geometric(0.01, 7);
    REQUIRE(g < 7);
  }
}

TEST_CASE("gaussian has zero mean unit variance") {
  RngStream r(5, "gauss");
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double g = r.next_gaussian();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.03);
}

TEST_CASE("binomial sampler matches mean in both regimes") {
  RngStream r(17, "binom");
  // Exact skip-chain regime.
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) sum += static_cast<double>(sample_binomial_approx(r, 100, 0.05));
  CHECK(std::abs(sum / 20000 - 5.0) < 0.15);
  // Normal-approx regime.
  sum = 0.0;
  for (int i = 0; i < 20000; ++i) sum += static_cast<double>(sample_binomial_approx(r, 10000, 0.5));
  CHECK(std::abs(sum / 20000 - 5000.0) < 5.0);
}
