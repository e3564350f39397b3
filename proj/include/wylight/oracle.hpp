#pragma once

// Brute-force references for tests. Nothing here calls the miner, the
// p-value tables, the region state machine or the threshold selection of the
// engine: patterns come from subset enumeration over a horizontal bitmask
// view, p-values from exact integer binomials, and every minimum and count is
// recomputed from scratch.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wylight/errors.hpp"
#include "wylight/exact_test.hpp"
#include "wylight/miner.hpp"
#include "wylight/numeric.hpp"
#include "wylight/permutation.hpp"

namespace wylight::oracle {

struct OracleLimits {
  std::size_t max_items = 12;
  std::size_t max_N = 32;
};

struct OraclePattern {
  std::vector<Item> itemset;  // ascending
  std::size_t support = 0;
  std::vector<std::uint32_t> occurrences;
};

inline void check_limits(const TransactionDatabase& db, const OracleLimits& limits) {
  if (db.item_count() > limits.max_items || db.N > limits.max_N || limits.max_N > 32 ||
      limits.max_items > 12) {
    throw LimitsExceeded("oracle limited to " + std::to_string(limits.max_items) +
                         " items and " + std::to_string(limits.max_N) + " transactions");
  }
}

// Every non-empty itemset over the alphabet, support-0 ones included.
inline std::vector<OraclePattern> brute_force_all_patterns(const TransactionDatabase& db,
                                                           const OracleLimits& limits = {}) {
  check_limits(db, limits);
  const std::size_t M = db.item_count();
  // Horizontal view: bit i of rows[t] set when item i occurs in transaction t.
  std::vector<std::uint32_t> rows(db.N, 0);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::uint32_t t : db.occurrences[i]) rows[t] |= (1u << i);
  }
  std::vector<OraclePattern> out;
  for (std::uint32_t mask = 1; mask < (1u << M); ++mask) {
    OraclePattern p;
    for (std::size_t i = 0; i < M; ++i) {
      if (mask & (1u << i)) p.itemset.push_back(db.items[i]);
    }
    for (std::size_t t = 0; t < db.N; ++t) {
      if ((rows[t] & mask) == mask) p.occurrences.push_back(static_cast<std::uint32_t>(t));
    }
    p.support = p.occurrences.size();
    out.push_back(std::move(p));
  }
  return out;
}

// Exact binomial coefficients for N <= 62.
inline std::uint64_t choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::uint64_t>(r);
}

// p = num / den exactly.
struct Fraction {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  friend bool operator<(const Fraction& a, const Fraction& b) {
    return static_cast<unsigned __int128>(a.num) * b.den <
           static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  LogProb log_value() const {
    return std::log(static_cast<double>(num)) - std::log(static_cast<double>(den));
  }
};

// Exact one-tailed p-value for observing a minor-class count `a`.
inline Fraction exact_pvalue(std::size_t x, std::size_t n, std::size_t N, std::size_t a) {
  const std::size_t lo = x + n > N ? x + n - N : 0;
  const std::size_t hi = std::min(x, n);
  std::uint64_t left = 0, right = 0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const std::uint64_t w = choose(n, k) * choose(N - n, x - k);
    if (k <= a) left += w;
    if (k >= a) right += w;
  }
  return {std::min(left, right), choose(N, x)};
}

inline LogProb exact_log_pvalue(std::size_t x, std::size_t n, std::size_t N, std::size_t a,
                                PValueMode mode) {
  const Fraction f = exact_pvalue(x, n, N, a);
  if (mode == PValueMode::one_tailed) return f.log_value();
  if (2 * f.num >= f.den) return 0.0;
  return std::log(2.0) + f.log_value();
}

// Minimum over every attainable count, by enumeration.
inline Fraction exact_psi(std::size_t x, std::size_t n, std::size_t N) {
  const std::size_t lo = x + n > N ? x + n - N : 0;
  const std::size_t hi = std::min(x, n);
  Fraction best{1, 1};
  for (std::size_t a = lo; a <= hi; ++a) best = std::min(best, exact_pvalue(x, n, N, a));
  return best;
}

inline LogProb exact_log_psi(std::size_t x, std::size_t n, std::size_t N, PValueMode mode) {
  const Fraction f = exact_psi(x, n, N);
  if (mode == PValueMode::one_tailed) return f.log_value();
  if (2 * f.num >= f.den) return 0.0;
  return std::log(2.0) + f.log_value();
}

// p-value source: (x, a) -> log p. Defaults to exact integer arithmetic.
using PValueFn = std::function<LogProb(std::size_t x, std::size_t a)>;

inline PValueFn exact_pvalues(std::size_t n, std::size_t N, PValueMode mode) {
  return [=](std::size_t x, std::size_t a) { return exact_log_pvalue(x, n, N, a, mode); };
}

inline std::size_t count_le(const std::vector<LogProb>& values, LogProb bound) {
  std::size_t c = 0;
  for (LogProb v : values) c += (v <= bound + kRelTol) ? 1 : 0;
  return c;
}

inline double brute_force_fwer(const std::vector<LogProb>& log_mins, LogProb log_delta) {
  if (log_mins.empty()) return 0.0;
  return static_cast<double>(count_le(log_mins, log_delta)) /
         static_cast<double>(log_mins.size());
}

// Column-wise minimum over every pattern with support in [1, N-1].
inline std::vector<LogProb> brute_force_min_pvalues(const TransactionDatabase& db,
                                                    const PermutationMatrix& matrix,
                                                    const PValueFn& pvalue,
                                                    const OracleLimits& limits = {}) {
  std::vector<LogProb> mins(matrix.J(), 0.0);
  for (const auto& pat : brute_force_all_patterns(db, limits)) {
    if (pat.support == 0 || pat.support >= db.N) continue;
    for (std::size_t j = 0; j < matrix.J(); ++j) {
      std::size_t a = 0;
      for (std::uint32_t t : pat.occurrences) a += matrix.at(t, j);
      mins[j] = std::min(mins[j], pvalue(pat.support, a));
    }
  }
  return mins;
}

struct OracleDelta {
  LogProb log_delta_star = kLogZero;
  std::vector<LogProb> min_pvalues;
};

// Naive Westfall-Young: exact minima, then the largest sample value below 1
// whose empirical FWER is at most alpha (0 if none).
inline OracleDelta brute_force_delta(const TransactionDatabase& db, const LabelVector& y,
                                     const PermutationMatrix& matrix, double alpha,
                                     PValueMode mode, const PValueFn& pvalue = nullptr,
                                     const OracleLimits& limits = {}) {
  const PValueFn fn = pvalue ? pvalue : exact_pvalues(y.n, db.N, mode);
  OracleDelta out;
  out.min_pvalues = brute_force_min_pvalues(db, matrix, fn, limits);
  for (LogProb c : out.min_pvalues) {
    if (!(c < -kRelTol)) continue;  // candidates lie strictly below 1
    if (brute_force_fwer(out.min_pvalues, c) <= alpha) {
      out.log_delta_star = std::max(out.log_delta_star, c);
    }
  }
  return out;
}

struct OracleSignificant {
  std::vector<Item> itemset;
  std::size_t support = 0;
  std::size_t a = 0;
  LogProb log_pvalue = 0.0;
};

inline std::vector<OracleSignificant> brute_force_significant(
    const TransactionDatabase& db, const LabelVector& y, LogProb log_delta_star,
    PValueMode mode, const PValueFn& pvalue = nullptr, const OracleLimits& limits = {}) {
  const PValueFn fn = pvalue ? pvalue : exact_pvalues(y.n, db.N, mode);
  std::vector<OracleSignificant> out;
  for (const auto& pat : brute_force_all_patterns(db, limits)) {
    if (pat.support == 0 || pat.support >= db.N) continue;
    std::size_t a = 0;
    for (std::uint32_t t : pat.occurrences) a += y.labels[t];
    const LogProb p = fn(pat.support, a);
    if (p <= log_delta_star + kRelTol) out.push_back({pat.itemset, pat.support, a, p});
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    if (l.log_pvalue != r.log_pvalue) return l.log_pvalue < r.log_pvalue;
    return l.itemset < r.itemset;
  });
  return out;
}

struct OracleTarone {
  Fraction delta{0, 1};
  std::size_t m = 0;
};

// Scans every distinct exact Psi threshold from the top and returns the first
// (largest) delta_k with delta_k * m(delta_k) <= alpha.
inline OracleTarone brute_force_tarone(const TransactionDatabase& db, std::size_t n,
                                       double alpha, const OracleLimits& limits = {}) {
  const std::size_t N = db.N;
  std::vector<Fraction> thresholds;
  for (std::size_t x = 1; x < N; ++x) {
    const Fraction f = exact_psi(x, n, N);
    if (f < Fraction{1, 1}) thresholds.push_back(f);
  }
  std::sort(thresholds.begin(), thresholds.end(),
            [](const Fraction& a, const Fraction& b) { return b < a; });
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const auto patterns = brute_force_all_patterns(db, limits);
  for (const Fraction& d : thresholds) {
    std::size_t m = 0;
    for (const auto& p : patterns) {
      if (p.support == 0 || p.support >= N) continue;
      if (!(d < exact_psi(p.support, n, N))) ++m;
    }
    if (d.value() * static_cast<double>(m) <= alpha) return {d, m};
  }
  return {};
}

}  // namespace wylight::oracle
