#pragma once

// Permuted class labels stored as an N x J byte matrix (one byte per entry),
// row t holding object t's label under every permutation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wylight/errors.hpp"
#include "wylight/exact_test.hpp"
#include "wylight/numeric.hpp"

namespace wylight {

// Binary labels encoded so that the ones are the minor class.
struct LabelVector {
  std::vector<std::uint8_t> labels;
  std::size_t n = 0;
  bool flipped = false;

  std::size_t N() const noexcept { return labels.size(); }
};

// Inverts the encoding when ones are the majority. Throws DegenerateLabels
// when no minor class exists.
inline LabelVector make_label_vector(std::vector<std::uint8_t> raw) {
  LabelVector y;
  const auto ones = static_cast<std::size_t>(std::count(raw.begin(), raw.end(), 1));
  y.flipped = 2 * ones > raw.size();
  if (y.flipped) {
    for (auto& v : raw) v = static_cast<std::uint8_t>(1 - v);
  }
  y.n = y.flipped ? raw.size() - ones : ones;
  y.labels = std::move(raw);
  if (y.n == 0) throw DegenerateLabels("labels contain a single class");
  return y;
}

class PermutationMatrix {
 public:
  PermutationMatrix() = default;
  PermutationMatrix(std::size_t N, std::size_t J, std::size_t n,
                    std::optional<std::uint64_t> seed)
      : N_(N), J_(J), n_(n), seed_(seed), data_(N * J, 0) {}

  std::size_t N() const noexcept { return N_; }
  std::size_t J() const noexcept { return J_; }
  std::size_t n() const noexcept { return n_; }
  // Empty when the matrix was loaded from a file.
  const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }

  std::uint8_t at(std::size_t t, std::size_t j) const noexcept { return data_[t * J_ + j]; }
  void set(std::size_t t, std::size_t j, std::uint8_t v) noexcept { data_[t * J_ + j] = v; }

  std::span<const std::uint8_t> row(std::size_t t) const noexcept {
    return {data_.data() + t * J_, J_};
  }

  std::vector<std::uint8_t> column(std::size_t j) const {
    std::vector<std::uint8_t> out(N_);
    for (std::size_t t = 0; t < N_; ++t) out[t] = at(t, j);
    return out;
  }

  std::size_t storage_bytes() const noexcept { return data_.capacity(); }

 private:
  std::size_t N_ = 0;
  std::size_t J_ = 0;
  std::size_t n_ = 0;
  std::optional<std::uint64_t> seed_;
  std::vector<std::uint8_t> data_;
};

// J independent uniform shuffles of y. With include_identity, column 0 is y
// itself. Deterministic for fixed inputs on one standard library.
inline PermutationMatrix generate_permutations(const LabelVector& y, std::size_t J,
                                               std::uint64_t seed,
                                               bool include_identity = false) {
  if (J == 0) throw std::invalid_argument("J must be at least 1");
  PermutationMatrix m(y.N(), J, y.n, seed);
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> col = y.labels;
  for (std::size_t j = 0; j < J; ++j) {
    col = y.labels;
    if (!(include_identity && j == 0)) std::shuffle(col.begin(), col.end(), rng);
    for (std::size_t t = 0; t < y.N(); ++t) m.set(t, j, col[t]);
  }
  return m;
}

// Parses J lines of N space-separated 0/1 values, one permutation per line.
// With invert, each entry is complemented after parsing (the file uses the
// original label encoding and the labels were flipped).
inline PermutationMatrix load_permutations(std::string_view text, std::size_t n,
                                           std::size_t N, bool invert = false) {
  std::vector<std::vector<std::uint8_t>> columns;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<std::uint8_t> col;
    col.reserve(N);
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == ' ' || line[i] == '\t') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      const std::string_view tok = line.substr(i, j - i);
      if (tok != "0" && tok != "1") {
        throw MalformedMatrix("non-binary entry '" + std::string(tok) + "'", line_no);
      }
      col.push_back(static_cast<std::uint8_t>((tok == "1") != invert));
      i = j;
    }
    if (col.size() != N) {
      throw MalformedMatrix("expected " + std::to_string(N) + " entries, found " +
                                std::to_string(col.size()),
                            line_no);
    }
    const auto ones = static_cast<std::size_t>(std::count(col.begin(), col.end(), 1));
    if (ones != n) {
      throw MalformedMatrix("permutation has " + std::to_string(ones) +
                                " minor-class entries, expected " + std::to_string(n),
                            line_no);
    }
    columns.push_back(std::move(col));
  }
  if (columns.empty()) throw MalformedMatrix("permutation matrix is empty");

  PermutationMatrix m(N, columns.size(), n, std::nullopt);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t t = 0; t < N; ++t) m.set(t, j, columns[j][t]);
  }
  return m;
}

// Inverse of load_permutations.
inline std::string format_permutations(const PermutationMatrix& m, bool invert = false) {
  std::string out;
  out.reserve(m.J() * (2 * m.N() + 1));
  for (std::size_t j = 0; j < m.J(); ++j) {
    for (std::size_t t = 0; t < m.N(); ++t) {
      if (t > 0) out.push_back(' ');
      out.push_back(static_cast<char>('0' + ((m.at(t, j) != 0) != invert)));
    }
    out.push_back('\n');
  }
  return out;
}

// result[j] = number of occurrences labelled 1 under permutation j. O(x J).
inline void cell_counts(std::span<const std::uint32_t> occurrences,
                        const PermutationMatrix& matrix, std::vector<std::uint32_t>& out) {
  out.assign(matrix.J(), 0);
  std::uint32_t* acc = out.data();
  const std::size_t J = matrix.J();
  for (std::uint32_t t : occurrences) {
    const std::uint8_t* row = matrix.row(t).data();
    for (std::size_t j = 0; j < J; ++j) acc[j] += row[j];
  }
}

inline std::vector<std::uint32_t> cell_counts(std::span<const std::uint32_t> occurrences,
                                              const PermutationMatrix& matrix) {
  std::vector<std::uint32_t> out;
  cell_counts(occurrences, matrix, out);
  return out;
}

// Per-permutation minimum p-values seen so far (log space, start at log 1).
struct MinPValues {
  std::vector<LogProb> values;

  MinPValues() = default;
  explicit MinPValues(std::size_t J) : values(J, kLogOne) {}

  std::size_t size() const noexcept { return values.size(); }
};

// Elementwise minimum against the table lookups; entries never increase.
// Precondition: every count lies in [table.a_min(), table.a_max()].
inline void update_minimums(MinPValues& mins, const PValueTable& table,
                            std::span<const std::uint32_t> counts) {
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const LogProb p = table.log_at(counts[j]);
    if (p < mins.values[j]) mins.values[j] = p;
  }
}

// (1/J) * #{j : p_min(j) <= delta}.
inline double empirical_fwer(std::span<const LogProb> log_mins, LogProb log_delta) {
  if (log_mins.empty()) return 0.0;
  const auto hits = std::count_if(log_mins.begin(), log_mins.end(),
                                  [&](LogProb p) { return log_leq(p, log_delta); });
  return static_cast<double>(hits) / static_cast<double>(log_mins.size());
}

inline double empirical_fwer(const MinPValues& mins, LogProb log_delta) {
  return empirical_fwer(std::span<const LogProb>(mins.values), log_delta);
}

}  // namespace wylight
