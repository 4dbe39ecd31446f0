#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dem/stream.hpp"

namespace dem {

enum class TrackedFunction { shannon_f, tsallis_g };

// A tracked function family f_m together with the certified constants
// (lambda bound, envelope -a <= X <= b, lower bound on E[X]) that the
// estimator sizing needs for its declared input class.
struct FunctionSpec {
  TrackedFunction name = TrackedFunction::shannon_f;
  double q = 2.0;          // tsallis order; ignored for shannon
  uint64_t m_max = 0;      // stream length upper bound (fixes b for shannon)
  double lambda_bound = 1.0;
  double a = 0.0;
  double b = 1.0;
  double E_lower = 0.0;
  double pi_sup = 0.0;
  // Max per-element mass fraction of the declared input class
  // (0.7 for shannon's A', 0.3 for tsallis).
  double class_cap = 1.0;

  // f_m(x): x log2(m/x) for shannon, x - m (x/m)^q for tsallis; f(0) = 0.
  double eval(double x, double m) const;
  // X(r) = f_m(r) - f_m(r-1).
  double increment(double r, double m) const { return eval(r, m) - eval(r - 1.0, m); }

  std::string label() const;

  static FunctionSpec shannon(uint64_t m_max);
  static FunctionSpec tsallis(double q, uint64_t m_max);
};

// The objective of the estimator-count program for fixed (a, b, E):
// 3 (1 + a/E)^2 (a + b) / (a + E).
double pi_envelope(double a, double b, double E);

// Exact quantities (the brute-force oracles).
double exact_shannon(const FrequencyVector& fv);
double exact_tsallis(const FrequencyVector& fv, double q);
double exact_fbar(const FrequencyVector& fv, const FunctionSpec& spec);

// Occurrences of a_J at positions >= J (1-based).
uint64_t exact_tail_frequency(const std::vector<StreamEvent>& events, uint64_t J);

// (1/m) sum_J [f(R_J) - f(R_J - 1)]; telescopes to exact_fbar.
double expected_X_oracle(const std::vector<StreamEvent>& events, const FunctionSpec& spec);

// Largest observed |X(r) - X(rhat)| / (eps X(r)) over integer r in
// [1, class_cap*m], eps in eps_grid, and the extreme integer rhat with
// |rhat - r| <= eps r. This is the numeric lambda certificate.
double certify_lambda(const FunctionSpec& spec, uint64_t m,
                      const std::vector<double>& eps_grid);

// Exhaustive per-sample certificate over r in [2, class_cap*m]:
//   ratio_violations counts cases with |X - Xhat| > lambda_claim*eps*X(r)
//   max_abs_over_eps = sup |X - Xhat| / eps  (the aggregate-form bound).
struct LambdaCertificate {
  uint64_t ratio_violations = 0;
  double max_ratio = 0.0;        // over cases with X(r) > 0
  double max_abs_over_eps = 0.0;
  double min_x = 0.0;            // inf X(r) over the grid
};
LambdaCertificate lambda_certificate(const FunctionSpec& spec, uint64_t m,
                                     const std::vector<double>& eps_grid,
                                     double lambda_claim);

}  // namespace dem
