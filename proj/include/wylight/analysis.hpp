#pragma once

// Cost model and experiment helpers: support histograms c(x), the dataset
// cost C_k = sum over testable x of x * c(x), analytic memory estimates, and
// the FWER-versus-J sweep.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wylight/engine.hpp"
#include "wylight/errors.hpp"
#include "wylight/miner.hpp"
#include "wylight/oracle.hpp"
#include "wylight/permutation.hpp"
#include "wylight/testability.hpp"

namespace wylight {

struct SupportHistogram {
  std::map<std::size_t, std::uint64_t> counts;  // support -> number of patterns
  bool exhaustive = false;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [x, c] : counts) t += c;
    return t;
  }
};

// Every itemset with support >= 1, via the brute-force enumerator.
inline SupportHistogram exhaustive_histogram(const TransactionDatabase& db,
                                             const oracle::OracleLimits& limits = {}) {
  SupportHistogram h;
  h.exhaustive = true;
  for (const auto& p : oracle::brute_force_all_patterns(db, limits)) {
    if (p.support > 0) ++h.counts[p.support];
  }
  return h;
}

// Itemsets the miner reaches at a constant floor.
inline SupportHistogram mined_histogram(const TransactionDatabase& db, std::size_t floor) {
  SupportHistogram h;
  enumerate_frequent(db, std::max<std::size_t>(floor, 1),
                     [&](const PatternEvent& ev) { ++h.counts[ev.support]; });
  return h;
}

struct DatasetCost {
  std::uint64_t weighted = 0;    // C_k
  std::uint64_t unweighted = 0;  // C~_k
};

inline DatasetCost dataset_cost(const SupportHistogram& hist, const TestabilityState& region) {
  DatasetCost c;
  for (const auto& [x, count] : hist.counts) {
    if (!is_testable(x, region)) continue;
    c.weighted += x * count;
    c.unweighted += count;
  }
  return c;
}

// Analytic models, not measurements: the permutation matrix at one byte per
// entry, and FastWY's occurrence lists at four bytes per occurrence.
struct MemoryEstimate {
  std::uint64_t wylight_bytes = 0;
  std::uint64_t fastwy_bytes = 0;
};

inline MemoryEstimate memory_estimates(std::uint64_t N, std::uint64_t J, std::uint64_t cost) {
  return {N * J, 4 * cost};
}

struct SweepRow {
  std::size_t J = 0;
  double median_fwer = 0.0;
  double p05 = 0.0;
  double p95 = 0.0;
};

// Linear interpolation between order statistics.
inline double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// Seed of repetition `rep` at permutation count J.
inline std::uint64_t sweep_seed(std::uint64_t seed, std::size_t J, std::size_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(J), static_cast<std::uint32_t>(rep)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

inline std::vector<SweepRow> fwer_sweep(const TransactionDatabase& db, const LabelVector& y,
                                        double alpha, const std::vector<std::size_t>& J_values,
                                        std::size_t repetitions, std::uint64_t seed,
                                        PValueMode mode = PValueMode::one_tailed) {
  std::vector<SweepRow> rows;
  for (std::size_t J : J_values) {
    std::vector<double> fwers;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto matrix = generate_permutations(y, J, sweep_seed(seed, J, rep));
      fwers.push_back(compute_threshold(db, y, matrix, alpha, mode).fwer_at_delta_star);
    }
    rows.push_back({J, percentile(fwers, 0.5), percentile(fwers, 0.05), percentile(fwers, 0.95)});
  }
  return rows;
}

inline std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "J,median_fwer,p05,p95\n" << std::setprecision(17);
  for (const auto& r : rows) out << r.J << ',' << r.median_fwer << ',' << r.p05 << ',' << r.p95 << '\n';
  return out.str();
}

inline std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "J,median_fwer,p05,p95") {
    throw MalformedInput("missing sweep CSV header", 1);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    SweepRow r;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> r.J >> c1 >> r.median_fwer >> c2 >> r.p05 >> c3 >> r.p95) || c1 != ',' ||
        c2 != ',' || c3 != ',') {
      throw MalformedInput("bad sweep CSV row", line_no);
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace wylight
