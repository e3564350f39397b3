// Calibrates a threshold on a small synthetic database with one planted
// association and prints the significant itemsets.

#include <cstdio>
#include <random>
#include <vector>

#include "wylight/wylight.hpp"

int main() {
  using namespace wylight;
  std::mt19937_64 rng(2024);
  std::bernoulli_distribution coin(0.3);

  const std::size_t N = 200;
  std::vector<std::uint8_t> labels(N, 0);
  std::vector<std::vector<Item>> tx(N);
  for (std::size_t t = 0; t < N; ++t) {
    labels[t] = t % 4 == 0;
    for (Item i = 1; i <= 10; ++i) {
      if (coin(rng)) tx[t].push_back(i);
    }
    // items 11 and 12 appear together, mostly in class-1 transactions
    if (labels[t] ? rng() % 10 < 8 : rng() % 10 < 1) {
      tx[t].push_back(11);
      tx[t].push_back(12);
    }
  }

  const auto db = TransactionDatabase::from_transactions(tx);
  const auto y = make_label_vector(labels);
  const auto matrix = generate_permutations(y, 2000, 1);
  const auto result = compute_threshold(db, y, matrix, 0.05);

  std::printf("N=%zu n=%zu J=%zu\n", result.N, result.n, result.J);
  std::printf("delta*=%.6g  k*=%zu  support floor=%zu  FWER=%.4f\n", result.delta_star(),
              result.k_star, result.sigma_l_final, result.fwer_at_delta_star);
  std::printf("patterns visited: %zu (testable %zu)\n", result.patterns_visited,
              result.testable_visited);

  const auto tarone = tarone_lamp_threshold(db, y.n, 0.05);
  std::printf("Tarone threshold: %.6g\n", tarone.delta());

  const auto found = extract_significant(db, y, result);
  std::printf("%zu significant itemsets\n", found.size());
  for (const auto& p : found) {
    std::printf("  {");
    for (std::size_t i = 0; i < p.itemset.size(); ++i) {
      std::printf(i ? " %u" : "%u", static_cast<unsigned>(p.itemset[i]));
    }
    std::printf("}  support=%zu a=%zu p=%.3g\n", p.support, p.a, p.pvalue());
  }
  return found.empty() ? 1 : 0;
}
