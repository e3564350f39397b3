#include <gtest/gtest.h>

#include <map>
#include <set>

#include "helpers.hpp"

using namespace wylight;

namespace {

using Itemset = std::vector<Item>;

std::map<Itemset, std::size_t> mine_all(const TransactionDatabase& db, std::size_t floor) {
  std::map<Itemset, std::size_t> seen;
  enumerate_frequent(db, floor, [&](const PatternEvent& ev) {
    EXPECT_TRUE(seen.emplace(ev.sorted_items(), ev.support).second);
  });
  return seen;
}

}  // namespace

TEST(ParseFimi, Example) {
  const auto db = parse_fimi("1 2\n2\n1 2 3\n");
  EXPECT_EQ(db.N, 3u);
  ASSERT_EQ(db.items, (std::vector<Item>{1, 2, 3}));
  EXPECT_EQ(db.occurrences[0], (OccurrenceList{0, 2}));
  EXPECT_EQ(db.occurrences[1], (OccurrenceList{0, 1, 2}));
  EXPECT_EQ(db.occurrences[2], (OccurrenceList{2}));
}

TEST(ParseFimi, EmptyAndDuplicates) {
  EXPECT_EQ(parse_fimi("").N, 0u);
  const auto db = parse_fimi("1 1 2\n");
  EXPECT_EQ(db.N, 1u);
  EXPECT_EQ(db.occurrences[0], (OccurrenceList{0}));
  EXPECT_EQ(db.occurrences[1], (OccurrenceList{0}));
}

TEST(ParseFimi, BlankLinesAreEmptyTransactions) {
  const auto db = parse_fimi("1\n\n1 2\r\n");
  EXPECT_EQ(db.N, 3u);
  EXPECT_EQ(db.occurrences[0], (OccurrenceList{0, 2}));
}

TEST(ParseFimi, ErrorsCarryLineNumbers) {
  try {
    parse_fimi("1 2\n3 x\n");
    FAIL();
  } catch (const MalformedInput& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_fimi("-1\n"), MalformedInput);
}

TEST(ParseLabels, Examples) {
  auto y = parse_labels("1\n0\n1\n0\n", 4);
  EXPECT_EQ(y.n, 2u);
  EXPECT_FALSE(y.flipped);
  y = parse_labels("1\n1\n1\n0\n", 4);
  EXPECT_EQ(y.n, 1u);
  EXPECT_TRUE(y.flipped);
  EXPECT_THROW(parse_labels("1\n1\n", 3), MalformedInput);
  EXPECT_THROW(parse_labels("1\n2\n0\n", 3), MalformedInput);
  EXPECT_THROW(parse_labels("1\n1\n1\n", 3), DegenerateLabels);
}

TEST(Enumerate, FloorPrunesSubsets) {
  const auto db = TransactionDatabase::from_transactions({{1, 2}, {1}, {2}});
  const auto seen = mine_all(db, 2);
  EXPECT_EQ(seen, (std::map<Itemset, std::size_t>{{{1}, 2}, {{2}, 2}}));
}

TEST(Enumerate, EmptyDatabase) {
  const auto db = parse_fimi("");
  EXPECT_TRUE(mine_all(db, 1).empty());
}

TEST(Enumerate, CompleteLattice) {
  const std::size_t M = 6;
  std::vector<Item> all;
  for (Item i = 1; i <= M; ++i) all.push_back(i);
  const auto db = TransactionDatabase::from_transactions({all, all, all});
  const auto seen = mine_all(db, 1);
  EXPECT_EQ(seen.size(), (1u << M) - 1);
  for (const auto& [set, x] : seen) EXPECT_EQ(x, 3u);
}

TEST(Enumerate, MatchesOracleAtEveryFloor) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 60; ++rep) {
    const auto inst = support::random_instance(rng);
    for (std::size_t floor = 1; floor <= inst.db.N; floor += 3) {
      std::map<Itemset, std::size_t> expected;
      for (const auto& p : oracle::brute_force_all_patterns(inst.db)) {
        if (p.support >= floor) expected[p.itemset] = p.support;
      }
      EXPECT_EQ(mine_all(inst.db, floor), expected);
    }
  }
}

TEST(Enumerate, OccurrencesAreExact) {
  std::mt19937_64 rng(6);
  const auto inst = support::random_instance(rng);
  std::map<Itemset, std::vector<std::uint32_t>> expected;
  for (const auto& p : oracle::brute_force_all_patterns(inst.db)) expected[p.itemset] = p.occurrences;
  enumerate_frequent(inst.db, std::size_t{1}, [&](const PatternEvent& ev) {
    EXPECT_EQ(std::vector<std::uint32_t>(ev.occurrences.begin(), ev.occurrences.end()),
              expected[ev.sorted_items()]);
    EXPECT_EQ(ev.depth, ev.itemset.size());
  });
}

TEST(Enumerate, RisingFloorNeverVisitsBelowIt) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 40; ++rep) {
    const auto inst = support::random_instance(rng);
    std::size_t floor = 1;
    std::size_t visits = 0;
    enumerate_frequent(
        inst.db, [&] { return floor; },
        [&](const PatternEvent& ev) {
          EXPECT_GE(ev.support, floor);
          if (++visits % 3 == 0) ++floor;
        });
  }
}
