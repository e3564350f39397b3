#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace wylight {

// All probabilities travel as natural logarithms. p-values below the double
// range (1/C(2000,1000) ~ 1e-600) stay representable this way.
using LogProb = double;

inline constexpr LogProb kLogOne = 0.0;
inline constexpr LogProb kLogZero = -std::numeric_limits<double>::infinity();

// Relative tolerance for comparing p-values reached by different summation
// orders. In log space a relative tolerance is an absolute one.
inline constexpr double kRelTol = 1e-12;

// p <= q up to kRelTol.
inline bool log_leq(LogProb p, LogProb q) noexcept {
  return p <= q + kRelTol;
}

// p < q by more than kRelTol.
inline bool log_lt(LogProb p, LogProb q) noexcept { return !log_leq(q, p); }

inline bool log_approx_eq(LogProb p, LogProb q) noexcept {
  return log_leq(p, q) && log_leq(q, p);
}

// log(exp(a) + exp(b)) without overflow.
inline LogProb log_add(LogProb a, LogProb b) noexcept {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

inline double to_prob(LogProb p) noexcept { return std::exp(p); }

inline LogProb to_log(double p) noexcept {
  return p <= 0.0 ? kLogZero : std::log(p);
}

// Intermediate log-space sums run in extended precision so that different
// routes to the same probability (closed form, ratio recurrence, tail sums)
// round to doubles a few ulps apart at most.
using LogWide = long double;

inline LogWide log_add_wide(LogWide a, LogWide b) noexcept {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<LogWide>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(k!) for k in [0, max_n].
class LogFactorialTable {
 public:
  LogFactorialTable() = default;
  explicit LogFactorialTable(std::size_t max_n) : values_(max_n + 1) {
    for (std::size_t k = 0; k <= max_n; ++k) {
      values_[k] = std::lgamma(static_cast<LogWide>(k) + 1.0L);
    }
  }

  std::size_t max_n() const noexcept {
    return values_.empty() ? 0 : values_.size() - 1;
  }

  LogWide operator()(std::size_t k) const { return values_.at(k); }

  LogWide log_choose(std::size_t n, std::size_t k) const {
    return (*this)(n) - (*this)(k) - (*this)(n - k);
  }

 private:
  std::vector<LogWide> values_;
};

}  // namespace wylight
