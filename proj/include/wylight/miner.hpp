#pragma once

// Transaction database in vertical form and depth-first itemset enumeration
// with a support floor that may rise while the traversal runs.

#include <algorithm>
#include <charconv>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wylight/errors.hpp"
#include "wylight/permutation.hpp"

namespace wylight {

using Item = std::uint32_t;
using OccurrenceList = std::vector<std::uint32_t>;

struct TransactionDatabase {
  std::size_t N = 0;
  std::vector<Item> items;                  // ascending item ids
  std::vector<OccurrenceList> occurrences;  // occurrences[i] belongs to items[i]

  std::size_t item_count() const noexcept { return items.size(); }

  // Builds the vertical representation from horizontal transactions.
  static TransactionDatabase from_transactions(
      const std::vector<std::vector<Item>>& transactions) {
    TransactionDatabase db;
    db.N = transactions.size();
    for (const auto& t : transactions) db.items.insert(db.items.end(), t.begin(), t.end());
    std::sort(db.items.begin(), db.items.end());
    db.items.erase(std::unique(db.items.begin(), db.items.end()), db.items.end());
    db.occurrences.resize(db.items.size());
    for (std::size_t t = 0; t < transactions.size(); ++t) {
      for (Item it : transactions[t]) {
        const auto idx = static_cast<std::size_t>(
            std::lower_bound(db.items.begin(), db.items.end(), it) - db.items.begin());
        auto& occ = db.occurrences[idx];
        if (occ.empty() || occ.back() != t) occ.push_back(static_cast<std::uint32_t>(t));
      }
    }
    return db;
  }
};

namespace detail {

// Calls fn(line, line_number) for each line; a final newline does not open
// an extra line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_no);
    pos = end + 1;
  }
}

inline bool is_blank(char c) noexcept { return c == ' ' || c == '\t'; }

}  // namespace detail

// FIMI format: one transaction per line, space-separated non-negative item
// ids. Blank lines are empty transactions; repeated items collapse.
inline TransactionDatabase parse_fimi(std::string_view text) {
  std::vector<std::vector<Item>> transactions;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    std::vector<Item> t;
    std::size_t i = 0;
    while (i < line.size()) {
      if (detail::is_blank(line[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !detail::is_blank(line[j])) ++j;
      const std::string_view tok = line.substr(i, j - i);
      if (tok.front() == '-') {
        throw MalformedInput("negative item id '" + std::string(tok) + "'", line_no);
      }
      Item value = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw MalformedInput("invalid item id '" + std::string(tok) + "'", line_no);
      }
      t.push_back(value);
      i = j;
    }
    transactions.push_back(std::move(t));
  });
  return TransactionDatabase::from_transactions(transactions);
}

// One 0/1 label per line, exactly N lines.
inline LabelVector parse_labels(std::string_view text, std::size_t N) {
  std::vector<std::uint8_t> raw;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    while (!line.empty() && detail::is_blank(line.back())) line.remove_suffix(1);
    while (!line.empty() && detail::is_blank(line.front())) line.remove_prefix(1);
    if (line != "0" && line != "1") {
      throw MalformedInput("label must be 0 or 1, found '" + std::string(line) + "'",
                           line_no);
    }
    raw.push_back(static_cast<std::uint8_t>(line == "1"));
  });
  if (raw.size() != N) {
    throw MalformedInput("expected " + std::to_string(N) + " labels, found " +
                         std::to_string(raw.size()));
  }
  return make_label_vector(std::move(raw));
}

// One enumerated itemset. The spans are valid only during the visitor call.
struct PatternEvent {
  std::span<const Item> itemset;  // enumeration order, not sorted
  std::size_t support = 0;
  std::span<const std::uint32_t> occurrences;
  std::size_t depth = 0;

  std::vector<Item> sorted_items() const {
    std::vector<Item> out(itemset.begin(), itemset.end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct EnumerationSummary {
  std::size_t visited = 0;
  std::size_t max_depth = 0;
};

inline void intersect(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                      OccurrenceList& out) {
  out.clear();
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      out.push_back(*i);
      ++i;
      ++j;
    }
  }
}

namespace detail {

struct Extension {
  Item item;
  OccurrenceList occurrences;
};

template <typename Floor, typename Visitor>
void enumerate_frame(std::vector<Extension>& frame, std::vector<Item>& prefix,
                     Floor& floor, Visitor& visitor, EnumerationSummary& summary) {
  for (std::size_t i = 0; i < frame.size(); ++i) {
    Extension& ext = frame[i];
    if (ext.occurrences.size() < static_cast<std::size_t>(floor())) continue;

    prefix.push_back(ext.item);
    ++summary.visited;
    summary.max_depth = std::max(summary.max_depth, prefix.size());
    visitor(PatternEvent{prefix, ext.occurrences.size(), ext.occurrences, prefix.size()});

    std::vector<Extension> children;
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      const auto f = static_cast<std::size_t>(floor());
      if (frame[j].occurrences.size() < f) continue;
      Extension child{frame[j].item, {}};
      intersect(ext.occurrences, frame[j].occurrences, child.occurrences);
      if (child.occurrences.size() >= f && !child.occurrences.empty()) {
        children.push_back(std::move(child));
      }
    }
    if (!children.empty()) enumerate_frame(children, prefix, floor, visitor, summary);
    prefix.pop_back();
  }
}

}  // namespace detail

// Depth-first enumeration of every itemset whose support is at least the
// floor in force when it is reached. Items are ordered by ascending support
// (ties by id) and each node is extended only with items after it. `floor`
// is re-read before every visit and every expansion; it must be >= 1 and
// non-decreasing. `visitor` receives each PatternEvent exactly once.
template <std::invocable Floor, typename Visitor>
EnumerationSummary enumerate_frequent(const TransactionDatabase& db, Floor&& floor,
                                      Visitor&& visitor) {
  std::vector<std::size_t> order(db.item_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return db.occurrences[a].size() < db.occurrences[b].size();
  });

  std::vector<detail::Extension> root;
  const auto f = static_cast<std::size_t>(floor());
  for (std::size_t idx : order) {
    if (db.occurrences[idx].empty() || db.occurrences[idx].size() < f) continue;
    root.push_back({db.items[idx], db.occurrences[idx]});
  }

  EnumerationSummary summary;
  std::vector<Item> prefix;
  detail::enumerate_frame(root, prefix, floor, visitor, summary);
  return summary;
}

// Constant-floor convenience.
template <typename Visitor>
EnumerationSummary enumerate_frequent(const TransactionDatabase& db, std::size_t floor,
                                      Visitor&& visitor) {
  return enumerate_frequent(db, [floor] { return floor; }, visitor);
}

}  // namespace wylight
