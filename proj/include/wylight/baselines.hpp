#pragma once

// Reference procedures: Bonferroni, Tarone's correction via incremental
// (LAMP-style) search, and FastWY's per-permutation decremental search.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "wylight/engine.hpp"
#include "wylight/errors.hpp"
#include "wylight/exact_test.hpp"
#include "wylight/miner.hpp"
#include "wylight/numeric.hpp"
#include "wylight/permutation.hpp"
#include "wylight/testability.hpp"

namespace wylight {

// Monotone lower bound on Psi: Psi(x) up to x = n, Psi(n) beyond.
class SurrogatePsi {
 public:
  explicit SurrogatePsi(const PsiTable& psi) : n_(psi.n()), N_(psi.N()) {
    values_.resize(N_ + 1);
    for (std::size_t x = 0; x <= N_; ++x) values_[x] = psi.log_at(std::min(x, n_));
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t N() const noexcept { return N_; }
  LogProb log_at(std::size_t x) const { return values_.at(x); }
  double at(std::size_t x) const { return to_prob(log_at(x)); }

 private:
  std::size_t n_;
  std::size_t N_;
  std::vector<LogProb> values_;
};

inline double bonferroni_threshold(double D, double alpha) {
  if (!(D >= 1.0)) throw std::invalid_argument("Bonferroni needs at least one hypothesis");
  return alpha / D;
}

enum class TaroneRegions { exact, surrogate };

struct TaroneResult {
  // Largest delta with delta * m(delta) <= alpha.
  LogProb log_delta = kLogZero;
  // Largest grid threshold delta_k with delta_k * m(delta_k) <= alpha.
  LogProb log_delta_grid = kLogZero;
  std::size_t m = 0;  // testable patterns at delta_grid
  std::size_t sigma_l_final = 0;
  std::size_t k = 0;
  std::size_t patterns_visited = 0;
  bool exhausted = false;

  double delta() const noexcept { return to_prob(log_delta); }
  double delta_grid() const noexcept { return to_prob(log_delta_grid); }
};

namespace detail {

// m is constant on [delta_k, delta_{k-1}), so the feasible set there is
// delta <= alpha / m. When alpha / m reaches delta_{k-1} the supremum is not
// attained and the threshold is placed just below delta_{k-1}.
inline LogProb tarone_continuous(LogProb grid, LogProb prev, std::size_t m, double alpha) {
  if (m == 0) return grid;
  const LogProb bound = std::log(alpha) - std::log(static_cast<double>(m));
  if (log_lt(bound, prev)) return std::max(bound, grid);
  return prev - 2 * kRelTol;
}

}  // namespace detail

// One mining pass with a rising floor. m(delta_k) is maintained from a
// histogram of the supports of testable patterns seen so far.
inline TaroneResult tarone_lamp_threshold(const TransactionDatabase& db, std::size_t n,
                                          double alpha,
                                          PValueMode mode = PValueMode::one_tailed,
                                          TaroneRegions regions = TaroneRegions::exact) {
  const std::size_t N = db.N;
  const PsiTable psi = psi_table(n, N, mode);
  TaroneResult r;
  std::vector<std::size_t> hist(N + 1, 0);
  std::size_t m = 0;

  if (regions == TaroneRegions::exact) {
    TestabilityState state;
    try {
      state = init_state(psi);
    } catch (const Exhausted&) {
      r.exhausted = true;
      r.log_delta = kLogOne - 2 * kRelTol;
      return r;
    }
    const auto exceeds = [&] { return state.delta() * static_cast<double>(m) > alpha; };
    auto visit = [&](const PatternEvent& ev) {
      if (r.exhausted || !is_testable(ev.support, state)) return;
      ++hist[ev.support];
      ++m;
      while (exceeds()) {
        try {
          state = update_threshold(state, psi);
        } catch (const Exhausted&) {
          r.exhausted = true;
          return;
        }
        m = 0;
        for (std::size_t x = 0; x <= N; ++x) {
          if (is_testable(x, state)) m += hist[x];
        }
      }
    };
    const auto summary = enumerate_frequent(
        db, [&] { return r.exhausted ? N + 1 : state.sigma_l; }, visit);
    r.patterns_visited = summary.visited;
    if (r.exhausted) {
      // Below the smallest Psi no pattern is testable, so m = 0 there.
      return {state.log_delta - 2 * kRelTol, kLogZero, 0, state.sigma_l, state.k + 1,
              summary.visited, true};
    }
    r.log_delta_grid = state.log_delta;
    r.m = m;
    r.sigma_l_final = state.sigma_l;
    r.k = state.k;
    r.log_delta = detail::tarone_continuous(state.log_delta, state.log_prev_delta, m, alpha);
    return r;
  }

  // Surrogate regions: testable set is {x >= sigma}, threshold Psi_hat(sigma).
  const SurrogatePsi surrogate(psi);
  std::size_t sigma = 1;
  auto visit = [&](const PatternEvent& ev) {
    if (r.exhausted || ev.support < sigma) return;
    ++hist[ev.support];
    ++m;
    while (surrogate.at(sigma) * static_cast<double>(m) > alpha) {
      m -= hist[sigma];
      ++sigma;
      if (sigma > N) {
        r.exhausted = true;
        return;
      }
    }
  };
  const auto summary =
      enumerate_frequent(db, [&] { return r.exhausted ? N + 1 : sigma; }, visit);
  r.patterns_visited = summary.visited;
  if (r.exhausted) {
    return {surrogate.log_at(N) - 2 * kRelTol, kLogZero, 0, N, N, summary.visited, true};
  }
  r.log_delta_grid = surrogate.log_at(sigma);
  r.m = m;
  r.sigma_l_final = sigma;
  r.k = sigma;
  r.log_delta = detail::tarone_continuous(r.log_delta_grid, surrogate.log_at(sigma - 1), m,
                                          alpha);
  return r;
}

struct FastWyResult {
  LogProb log_delta_star = kLogZero;
  MinPValues min_pvalues;                  // exact for every permutation
  std::vector<std::size_t> stop_support;   // per permutation
  std::size_t sigma_worst = 0;             // min over stop_support
  std::size_t mining_passes = 0;
  std::size_t patterns_visited = 0;
  // Support histogram of the final (lowest-floor) pass, covering x >= sigma_worst.
  std::vector<std::size_t> support_counts;

  double delta_star() const noexcept { return to_prob(log_delta_star); }
};

// Per permutation j, the decremental search lowers sigma from n until
// min{p_j(i) : x_i >= sigma} <= Psi_hat(sigma); that minimum is the exact
// p_min(j). Permutations are resolved in batches: each pass mines every
// pattern with support >= sigma_try once and settles all j whose stopping
// support lies in [sigma_try, n]; sigma_try halves between passes. The
// stopping supports equal those of the one-step decremental search.
inline FastWyResult fastwy_threshold(const TransactionDatabase& db, const LabelVector& y,
                                     const PermutationMatrix& matrix, double alpha,
                                     PValueMode mode = PValueMode::one_tailed) {
  detail::check_inputs(db, y, matrix, alpha);
  const std::size_t N = db.N;
  const std::size_t n = y.n;
  const std::size_t J = matrix.J();
  const PsiTable psi = psi_table(n, N, mode);
  const SurrogatePsi surrogate(psi);
  const LogFactorialTable lf(N);

  FastWyResult r;
  r.min_pvalues = MinPValues(J);
  r.stop_support.assign(J, 0);
  std::vector<std::size_t> pending(J);
  std::iota(pending.begin(), pending.end(), std::size_t{0});

  std::size_t sigma_try = n;
  std::vector<std::uint32_t> counts;
  while (!pending.empty()) {
    // bucket[(x - sigma_try) * P + i]: min p-value of support-x patterns
    // under permutation pending[i].
    const std::size_t P = pending.size();
    const std::size_t span_x = N + 1 - sigma_try;
    std::vector<LogProb> bucket(span_x * P, kLogOne);
    r.support_counts.assign(N + 1, 0);

    const auto summary = enumerate_frequent(db, sigma_try, [&](const PatternEvent& ev) {
      ++r.support_counts[ev.support];
      const PValueTable table = pvalue_table({ev.support, n, N}, mode, lf);
      cell_counts(ev.occurrences, matrix, counts);
      LogProb* row = bucket.data() + (ev.support - sigma_try) * P;
      for (std::size_t i = 0; i < P; ++i) {
        const LogProb p = table.log_at(counts[pending[i]]);
        if (p < row[i]) row[i] = p;
      }
    });
    ++r.mining_passes;
    r.patterns_visited += summary.visited;

    std::vector<std::size_t> still;
    for (std::size_t i = 0; i < P; ++i) {
      const std::size_t j = pending[i];
      LogProb suffix = kLogOne;
      for (std::size_t x = N; x > n; --x) suffix = std::min(suffix, bucket[(x - sigma_try) * P + i]);
      bool done = false;
      for (std::size_t sigma = n; sigma >= sigma_try; --sigma) {
        suffix = std::min(suffix, bucket[(sigma - sigma_try) * P + i]);
        if (log_leq(suffix, surrogate.log_at(sigma))) {
          r.stop_support[j] = sigma;
          r.min_pvalues.values[j] = suffix;
          done = true;
          break;
        }
      }
      if (!done && sigma_try <= 1) {
        // sigma = 0: Psi_hat(0) = 1 always stops; all supports >= 1 are mined.
        r.stop_support[j] = 0;
        r.min_pvalues.values[j] = suffix;
        done = true;
      }
      if (!done) still.push_back(j);
    }
    pending.swap(still);
    sigma_try = std::max<std::size_t>(1, sigma_try / 2);
  }

  r.sigma_worst = *std::min_element(r.stop_support.begin(), r.stop_support.end());
  r.log_delta_star =
      final_delta(std::span<const LogProb>(r.min_pvalues.values), kLogZero, kLogOne, alpha);
  return r;
}

}  // namespace wylight
