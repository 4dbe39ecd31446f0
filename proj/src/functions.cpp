#include "dem/functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace dem {

double pi_envelope(double a, double b, double E) {
  if (E <= 0.0 && a <= 0.0) {
    throw std::domain_error("pi_envelope: E[X] lower bound must be positive when a = 0");
  }
  double ratio = 1.0 + a / E;
  return 3.0 * ratio * ratio * (a + b) / (a + E);
}

double FunctionSpec::eval(double x, double m) const {
  if (x <= 0.0) return 0.0;
  if (name == TrackedFunction::shannon_f) {
    return x * std::log2(m / x);
  }
  return x - m * std::pow(x / m, q);
}

std::string FunctionSpec::label() const {
  return name == TrackedFunction::shannon_f ? "shannon" : "tsallis";
}

FunctionSpec FunctionSpec::shannon(uint64_t m_max) {
  if (m_max < 2) throw std::invalid_argument("shannon spec: m_max must be >= 2");
  FunctionSpec s;
  s.name = TrackedFunction::shannon_f;
  s.m_max = m_max;
  s.lambda_bound = 10.0;
  s.a = 0.0;
  s.b = std::log2(static_cast<double>(m_max));
  s.E_lower = 0.5;
  s.class_cap = 0.7;
  s.pi_sup = pi_envelope(s.a, s.b, s.E_lower);
  return s;
}

FunctionSpec FunctionSpec::tsallis(double q, uint64_t m_max) {
  if (q <= 1.0) throw std::invalid_argument("tsallis spec: q must be > 1");
  if (m_max < 2) throw std::invalid_argument("tsallis spec: m_max must be >= 2");
  FunctionSpec s;
  s.name = TrackedFunction::tsallis_g;
  s.q = q;
  s.m_max = m_max;
  s.a = q;
  s.b = 1.0;
  s.E_lower = 1.0 - std::pow(1.0 / 3.0, q - 1.0);
  s.class_cap = 0.3;
  s.pi_sup = pi_envelope(s.a, s.b, s.E_lower);
  // The lambda constant for g_m exists for every constant q but has no
  // closed form; certify it on a fixed grid and freeze.
  uint64_t grid_m = std::min<uint64_t>(m_max, 1u << 14);
  s.lambda_bound = 1.0;
  s.lambda_bound = std::max(1.0, certify_lambda(s, grid_m, {0.05, 0.1, 0.25}));
  return s;
}

double exact_shannon(const FrequencyVector& fv) {
  if (fv.total() == 0) throw std::domain_error("exact_shannon: empty stream");
  double m = static_cast<double>(fv.total());
  double h = 0.0;
  for (const auto& [e, c] : fv.counts()) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / m;
    h += p * std::log2(1.0 / p);
  }
  return h;
}

double exact_tsallis(const FrequencyVector& fv, double q) {
  if (q <= 1.0) throw std::invalid_argument("exact_tsallis: q must be > 1");
  if (fv.total() == 0) throw std::domain_error("exact_tsallis: empty stream");
  double m = static_cast<double>(fv.total());
  double sum = 0.0;
  for (const auto& [e, c] : fv.counts()) {
    if (c == 0) continue;
    sum += std::pow(static_cast<double>(c) / m, q);
  }
  return (1.0 - sum) / (q - 1.0);
}

double exact_fbar(const FrequencyVector& fv, const FunctionSpec& spec) {
  if (fv.total() == 0) throw std::domain_error("exact_fbar: empty stream");
  double m = static_cast<double>(fv.total());
  double sum = 0.0;
  for (const auto& [e, c] : fv.counts()) {
    sum += spec.eval(static_cast<double>(c), m);
  }
  return sum / m;
}

uint64_t exact_tail_frequency(const std::vector<StreamEvent>& events, uint64_t J) {
  if (J < 1 || J > events.size()) {
    throw std::out_of_range("exact_tail_frequency: J out of range");
  }
  Element target = events[J - 1].element;
  uint64_t count = 0;
  for (uint64_t j = J; j <= events.size(); ++j) {
    if (events[j - 1].element == target) ++count;
  }
  return count;
}

double expected_X_oracle(const std::vector<StreamEvent>& events, const FunctionSpec& spec) {
  if (events.empty()) throw std::domain_error("expected_X_oracle: empty stream");
  double m = static_cast<double>(events.size());
  // Backward scan yields every tail frequency R_J in one pass.
  std::unordered_map<Element, uint64_t> tail;
  double sum = 0.0;
  for (size_t j = events.size(); j >= 1; --j) {
    uint64_t r = ++tail[events[j - 1].element];
    sum += spec.increment(static_cast<double>(r), m);
  }
  return sum / m;
}

double certify_lambda(const FunctionSpec& spec, uint64_t m,
                      const std::vector<double>& eps_grid) {
  double worst = 0.0;
  double md = static_cast<double>(m);
  uint64_t r_hi = static_cast<uint64_t>(spec.class_cap * md);
  for (uint64_t r = 1; r <= r_hi; ++r) {
    double rd = static_cast<double>(r);
    double x = spec.increment(rd, md);
    if (x <= 0.0) continue;
    for (double eps : eps_grid) {
      uint64_t lo = static_cast<uint64_t>(std::ceil(rd * (1.0 - eps)));
      uint64_t hi = static_cast<uint64_t>(std::floor(rd * (1.0 + eps)));
      lo = std::max<uint64_t>(lo, 1);
      for (uint64_t rhat : {lo, hi}) {
        double xhat = spec.increment(static_cast<double>(rhat), md);
        double ratio = std::abs(x - xhat) / (eps * x);
        worst = std::max(worst, ratio);
      }
    }
  }
  return worst;
}

LambdaCertificate lambda_certificate(const FunctionSpec& spec, uint64_t m,
                                     const std::vector<double>& eps_grid,
                                     double lambda_claim) {
  LambdaCertificate cert;
  double md = static_cast<double>(m);
  uint64_t r_hi = static_cast<uint64_t>(spec.class_cap * md);
  cert.min_x = spec.increment(2.0, md);
  for (uint64_t r = 2; r <= r_hi; ++r) {
    double rd = static_cast<double>(r);
    double x = spec.increment(rd, md);
    cert.min_x = std::min(cert.min_x, x);
    for (double eps : eps_grid) {
      uint64_t lo = static_cast<uint64_t>(std::ceil(rd * (1.0 - eps)));
      uint64_t hi = static_cast<uint64_t>(std::floor(rd * (1.0 + eps)));
      lo = std::max<uint64_t>(lo, 1);
      for (uint64_t rhat : {lo, hi}) {
        double xhat = spec.increment(static_cast<double>(rhat), md);
        double diff = std::abs(x - xhat);
        cert.max_abs_over_eps = std::max(cert.max_abs_over_eps, diff / eps);
        if (diff > lambda_claim * eps * x * (1.0 + 1e-9)) ++cert.ratio_violations;
        if (x > 0.0) cert.max_ratio = std::max(cert.max_ratio, diff / (eps * x));
      }
    }
  }
  return cert;
}

}  // namespace dem
