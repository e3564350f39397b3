#pragma once

// Testable-region state machine. At threshold delta the supports x with
// Psi(x) <= delta form [sigma_l, sigma_u] U [N - sigma_u, N - sigma_l];
// when sigma_u = floor(N/2) this is the single interval [sigma_l, N - sigma_l].
// Psi falls on [0, n] and rises on [n, N/2], so the next smaller threshold is
// found by dropping whichever end currently carries the larger Psi.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "wylight/errors.hpp"
#include "wylight/exact_test.hpp"
#include "wylight/numeric.hpp"

namespace wylight {

struct TestabilityState {
  std::size_t k = 1;
  LogProb log_delta = kLogOne;       // delta_k
  LogProb log_prev_delta = kLogOne;  // delta_{k-1}; delta_0 = 1
  std::size_t sigma_l = 1;
  std::size_t sigma_u = 1;
  bool flag = true;  // true: the lower end carries delta_k
  std::size_t N = 0;

  double delta() const noexcept { return to_prob(log_delta); }
  double prev_delta() const noexcept { return to_prob(log_prev_delta); }
};

namespace detail {

// One UpdateThreshold step exactly as the pseudocode states it.
inline void threshold_step(TestabilityState& s, const PsiTable& psi) {
  if (s.sigma_l >= s.sigma_u) throw Exhausted();
  if (s.flag) {
    ++s.sigma_l;
    if (psi.log_at(s.sigma_l) >= psi.log_at(s.sigma_u)) {
      s.log_delta = psi.log_at(s.sigma_l);
    } else {
      s.log_delta = psi.log_at(s.sigma_u);
      s.flag = false;
    }
  } else {
    --s.sigma_u;
    if (psi.log_at(s.sigma_l) >= psi.log_at(s.sigma_u)) {
      s.log_delta = psi.log_at(s.sigma_l);
      s.flag = true;
    } else {
      s.log_delta = psi.log_at(s.sigma_u);
    }
  }
}

}  // namespace detail

// delta_1 is the largest Psi value below 1 over x in [1, N-1]. For
// one-tailed tests with Psi(1) >= Psi(floor(N/2)) this is n/N. Throws
// Exhausted when every such Psi equals 1 (two-tailed, tiny N).
inline TestabilityState init_state(const PsiTable& psi) {
  TestabilityState s;
  s.N = psi.N();
  s.sigma_l = 1;
  s.sigma_u = psi.N() / 2;
  s.flag = psi.log_at(s.sigma_l) >= psi.log_at(s.sigma_u);
  s.log_delta = std::max(psi.log_at(s.sigma_l), psi.log_at(s.sigma_u));
  while (log_leq(kLogOne, s.log_delta)) detail::threshold_step(s, psi);
  return s;
}

// Steps to the next strictly smaller threshold. Throws Exhausted when the
// region is already the single support pair {n, N - n}.
inline TestabilityState update_threshold(const TestabilityState& state,
                                         const PsiTable& psi) {
  TestabilityState s = state;
  // Ties between the two ends are stepped through until delta moves.
  do {
    detail::threshold_step(s, psi);
  } while (log_leq(state.log_delta, s.log_delta));
  s.k = state.k + 1;
  s.log_prev_delta = state.log_delta;
  return s;
}

inline bool is_testable(std::size_t x, const TestabilityState& s) noexcept {
  return (x >= s.sigma_l && x <= s.sigma_u) ||
         (x + s.sigma_u >= s.N && x + s.sigma_l <= s.N);
}

// Distinct Psi values below 1 over x in [1, N-1], strictly decreasing.
inline std::vector<LogProb> distinct_log_thresholds(const PsiTable& psi) {
  std::vector<LogProb> values;
  for (std::size_t x = 1; x <= psi.N() / 2; ++x) {
    if (log_lt(psi.log_at(x), kLogOne)) values.push_back(psi.log_at(x));
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<LogProb> out;
  for (LogProb v : values) {
    if (out.empty() || log_lt(v, out.back())) out.push_back(v);
  }
  return out;
}

inline std::vector<double> distinct_thresholds(const PsiTable& psi) {
  std::vector<double> out;
  for (LogProb v : distinct_log_thresholds(psi)) out.push_back(to_prob(v));
  return out;
}

}  // namespace wylight
