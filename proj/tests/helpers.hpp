#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wylight/wylight.hpp"

namespace wylight::support {

inline std::string data_path(const std::string& name) {
  return std::string(WYLIGHT_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Instance {
  TransactionDatabase db;
  LabelVector y;
  PermutationMatrix matrix;
};

struct InstanceShape {
  std::size_t N_min = 8, N_max = 24;
  std::size_t items_min = 3, items_max = 8;
  std::size_t J_min = 10, J_max = 50;
  // 1: ones are the majority (labels get flipped), 0: minority, -1: either.
  int ones_majority = -1;
};

// Random database with some items tied to the labels, so that both empty
// and non-empty significant sets occur. Ones may be the majority class.
inline Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape = {}) {
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t N = uniform(shape.N_min, shape.N_max);
  const std::size_t M = uniform(shape.items_min, shape.items_max);
  const std::size_t J = uniform(shape.J_min, shape.J_max);
  std::size_t ones = uniform(1, N - 1);
  if (shape.ones_majority == 1) ones = uniform(N / 2 + 1, N - 1);
  if (shape.ones_majority == 0) ones = uniform(1, N / 2);

  std::vector<std::uint8_t> raw(N, 0);
  for (std::size_t t = 0; t < ones; ++t) raw[t] = 1;
  std::shuffle(raw.begin(), raw.end(), rng);

  std::vector<double> p1(M), p0(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double base = 0.15 + 0.6 * unit(rng);
    const bool tied = unit(rng) < 0.3;
    p1[i] = tied ? std::min(0.95, base + 0.4) : base;
    p0[i] = tied ? std::max(0.05, base - 0.4) : base;
  }
  std::vector<std::vector<Item>> tx(N);
  for (std::size_t t = 0; t < N; ++t) {
    for (std::size_t i = 0; i < M; ++i) {
      if (unit(rng) < (raw[t] ? p1[i] : p0[i])) tx[t].push_back(static_cast<Item>(i + 1));
    }
  }
  Instance inst;
  inst.db = TransactionDatabase::from_transactions(tx);
  inst.y = make_label_vector(raw);
  inst.matrix = generate_permutations(inst.y, J, rng());
  return inst;
}

// Shared engine arithmetic as the oracle's p-value source.
inline oracle::PValueFn engine_pvalues(std::size_t n, std::size_t N, PValueMode mode) {
  const LogFactorialTable lf(N);
  return [=](std::size_t x, std::size_t a) {
    return pvalue_table({x, n, N}, mode, lf).log_at(a);
  };
}

}  // namespace wylight::support
