#pragma once

// Westfall-Young light: a single incremental mining pass that processes each
// testable pattern once for all J permutations and shrinks the testable
// region whenever the empirical FWER at the current threshold exceeds alpha.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wylight/errors.hpp"
#include "wylight/exact_test.hpp"
#include "wylight/miner.hpp"
#include "wylight/numeric.hpp"
#include "wylight/permutation.hpp"
#include "wylight/testability.hpp"

namespace wylight {

struct CalibrationResult {
  LogProb log_delta_star = kLogZero;
  LogProb log_delta_k_final = kLogZero;
  LogProb log_delta_k_minus_1 = kLogOne;
  std::size_t k_star = 1;
  std::size_t sigma_l_final = 1;
  std::size_t sigma_u_final = 1;
  MinPValues min_pvalues;
  double fwer_at_delta_star = 0.0;
  std::size_t patterns_visited = 0;
  std::size_t testable_visited = 0;
  double alpha = 0.05;
  std::size_t J = 0;
  std::size_t n = 0;
  std::size_t N = 0;
  PValueMode mode = PValueMode::one_tailed;
  bool flipped = false;
  // The region could not shrink below the smallest attainable p-value.
  bool exhausted = false;

  double delta_star() const noexcept { return to_prob(log_delta_star); }
  double delta_k_final() const noexcept { return to_prob(log_delta_k_final); }
  double delta_k_minus_1() const noexcept { return to_prob(log_delta_k_minus_1); }
};

struct SignificantPattern {
  std::vector<Item> itemset;  // ascending
  std::size_t support = 0;
  std::size_t a = 0;  // minor-class transactions containing the itemset
  LogProb log_pvalue = kLogOne;

  double pvalue() const noexcept { return to_prob(log_pvalue); }
  bool operator==(const SignificantPattern&) const = default;
};

// Largest delta in {0} U {p in mins : p < delta_{k-1}} with empirical FWER at
// most alpha. The empirical FWER only jumps at sample values, so this is the
// exact maximiser among thresholds that produce distinct rejection sets.
// Entries at or above delta_{k-1} may be inexact and are never candidates.
inline LogProb final_delta(std::span<const LogProb> log_mins, LogProb /*log_delta_k*/,
                           LogProb log_delta_k_minus_1, double alpha) {
  std::vector<LogProb> sorted(log_mins.begin(), log_mins.end());
  std::sort(sorted.begin(), sorted.end());
  const double J = static_cast<double>(sorted.size());
  // Scan candidates from the top; count(c) = #{p <= c}.
  for (std::size_t i = sorted.size(); i-- > 0;) {
    const LogProb c = sorted[i];
    if (!log_lt(c, log_delta_k_minus_1)) continue;
    const auto hits = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), c + kRelTol) - sorted.begin());
    if (static_cast<double>(hits) / J <= alpha) return c;
  }
  return kLogZero;
}

// Linear-space wrapper.
inline double final_delta_prob(const std::vector<double>& mins, double delta_k,
                          double delta_k_minus_1, double alpha) {
  std::vector<LogProb> logs;
  for (double p : mins) logs.push_back(to_log(p));
  return to_prob(final_delta(std::span<const LogProb>(logs), to_log(delta_k), to_log(delta_k_minus_1), alpha));
}

namespace detail {

inline void check_inputs(const TransactionDatabase& db, const LabelVector& y,
                         const PermutationMatrix& matrix, double alpha) {
  if (y.N() != db.N) throw std::invalid_argument("label count differs from database size");
  if (matrix.N() != db.N) {
    throw std::invalid_argument("permutation matrix differs from database size");
  }
  if (matrix.n() != y.n) throw std::invalid_argument("permutation matrix minor-class size differs");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (y.n == 0) throw DegenerateLabels("labels contain a single class");
}

}  // namespace detail

inline CalibrationResult compute_threshold(const TransactionDatabase& db,
                                           const LabelVector& y,
                                           const PermutationMatrix& matrix, double alpha,
                                           PValueMode mode = PValueMode::one_tailed) {
  detail::check_inputs(db, y, matrix, alpha);
  const std::size_t N = db.N;
  const std::size_t n = y.n;
  const std::size_t J = matrix.J();
  const PsiTable psi = psi_table(n, N, mode);
  const LogFactorialTable lf(N);

  CalibrationResult r;
  r.alpha = alpha;
  r.J = J;
  r.n = n;
  r.N = N;
  r.mode = mode;
  r.flipped = y.flipped;
  r.min_pvalues = MinPValues(J);

  TestabilityState state;
  try {
    state = init_state(psi);
  } catch (const Exhausted&) {
    // No threshold below 1 exists; nothing can ever be significant.
    r.exhausted = true;
    r.log_delta_k_minus_1 = kLogOne;
    r.log_delta_k_final = kLogZero;
    r.sigma_l_final = n;
    r.sigma_u_final = n;
    return r;
  }

  auto& mins = r.min_pvalues.values;
  std::size_t hits = 0;  // #{j : p_min(j) <= delta_k}
  std::vector<std::uint32_t> counts;
  const auto fwer_exceeds = [&] {
    return static_cast<double>(hits) / static_cast<double>(J) > alpha;
  };

  auto floor = [&] { return state.sigma_l; };
  auto visit = [&](const PatternEvent& ev) {
    if (!is_testable(ev.support, state)) return;
    ++r.testable_visited;
    const PValueTable table = pvalue_table({ev.support, n, N}, mode, lf);
    cell_counts(ev.occurrences, matrix, counts);
    const LogProb delta = state.log_delta;
    for (std::size_t j = 0; j < J; ++j) {
      const LogProb p = table.log_at(counts[j]);
      if (p < mins[j]) {
        if (!log_leq(mins[j], delta) && log_leq(p, delta)) ++hits;
        mins[j] = p;
      }
    }
    while (!r.exhausted && fwer_exceeds()) {
      try {
        state = update_threshold(state, psi);
      } catch (const Exhausted&) {
        // Keep mining the final region so entries <= Psi(n) stay exact.
        r.exhausted = true;
        break;
      }
      hits = static_cast<std::size_t>(std::count_if(
          mins.begin(), mins.end(), [&](LogProb p) { return log_leq(p, state.log_delta); }));
    }
  };
  const EnumerationSummary summary = enumerate_frequent(db, floor, visit);

  r.patterns_visited = summary.visited;
  r.sigma_l_final = state.sigma_l;
  r.sigma_u_final = state.sigma_u;
  if (r.exhausted) {
    r.k_star = state.k + 1;
    r.log_delta_k_minus_1 = state.log_delta;
    r.log_delta_k_final = kLogZero;
    r.log_delta_star = kLogZero;
  } else {
    r.k_star = state.k;
    r.log_delta_k_final = state.log_delta;
    r.log_delta_k_minus_1 = state.log_prev_delta;
    r.log_delta_star = final_delta(std::span<const LogProb>(mins), state.log_delta, state.log_prev_delta, alpha);
  }
  r.fwer_at_delta_star = empirical_fwer(r.min_pvalues, r.log_delta_star);
  return r;
}

// Minor-class count of a pattern under the unpermuted labels.
inline std::size_t observed_cell_count(std::span<const std::uint32_t> occurrences,
                                       const LabelVector& y) {
  std::size_t a = 0;
  for (std::uint32_t t : occurrences) a += y.labels[t];
  return a;
}

// Second pass at the constant floor min{x : Psi(x) <= delta*}. Output is
// sorted by p-value, then by itemset.
inline std::vector<SignificantPattern> extract_significant(const TransactionDatabase& db,
                                                           const LabelVector& y,
                                                           const CalibrationResult& result) {
  std::vector<SignificantPattern> out;
  if (result.log_delta_star == kLogZero) return out;
  if (y.N() != db.N || y.n != result.n || db.N != result.N) {
    throw std::invalid_argument("calibration result belongs to different data");
  }
  const std::size_t N = db.N;
  const std::size_t n = y.n;
  const PsiTable psi = psi_table(n, N, result.mode);
  const LogFactorialTable lf(N);
  const LogProb delta = result.log_delta_star;
  // Psi and the table entries come from different summation routes; the
  // prefilter is loose and the final filter is the p-value itself.
  const LogProb loose = delta + 2 * kRelTol;

  std::size_t floor = 0;
  for (std::size_t x = 1; x <= n; ++x) {
    if (psi.log_at(x) <= loose) {
      floor = x;
      break;
    }
  }
  if (floor == 0) return out;

  enumerate_frequent(db, floor, [&](const PatternEvent& ev) {
    if (ev.support >= N || psi.log_at(ev.support) > loose) return;
    const PValueTable table = pvalue_table({ev.support, n, N}, result.mode, lf);
    const std::size_t a = observed_cell_count(ev.occurrences, y);
    const LogProb p = table.log_at(a);
    if (log_leq(p, delta)) out.push_back({ev.sorted_items(), ev.support, a, p});
  });
  std::sort(out.begin(), out.end(), [](const SignificantPattern& l, const SignificantPattern& r) {
    if (l.log_pvalue != r.log_pvalue) return l.log_pvalue < r.log_pvalue;
    return l.itemset < r.itemset;
  });
  return out;
}

}  // namespace wylight
