#pragma once

// Command-line driver: calibrate | mine | compare | fwer-curve.
//
// Exit codes: 0 success, 1 internal error, 2 input error, 3 degenerate labels.
// Reports are assembled in memory and written once, so a failing run never
// leaves a partial output file behind.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wylight/wylight.hpp"

namespace wylight::cli {

struct RunConfig {
  std::string command;
  std::string transactions;
  std::string labels;
  double alpha = 0.05;
  std::size_t permutations = 10000;
  std::uint64_t seed = 0;
  std::string matrix;
  std::string mode = "one-tailed";
  std::string format = "json";
  std::string output;
  std::string baselines = "all";
  std::vector<std::size_t> j_values{1000};
  std::size_t repetitions = 10;
};

// Input problems that map to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Re-throws parse errors with the file name attached.
template <typename Fn>
auto with_file(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const MalformedInput& e) {
    throw InputError(path + ": " + e.what());
  } catch (const MalformedMatrix& e) {
    throw InputError(path + ": " + e.what());
  }
}

struct Inputs {
  TransactionDatabase db;
  LabelVector labels;
  PermutationMatrix matrix;
  PValueMode mode = PValueMode::one_tailed;
};

inline Inputs load_inputs(const RunConfig& cfg, bool need_matrix = true) {
  Inputs in;
  in.mode = parse_mode(cfg.mode);
  const std::string tx_text = read_file(cfg.transactions);
  in.db = with_file(cfg.transactions, [&] { return parse_fimi(tx_text); });
  const std::string label_text = read_file(cfg.labels);
  in.labels = with_file(cfg.labels, [&] { return parse_labels(label_text, in.db.N); });
  if (!need_matrix) return in;
  if (!cfg.matrix.empty()) {
    // Matrix files use the label file's encoding.
    const std::string m_text = read_file(cfg.matrix);
    in.matrix = with_file(cfg.matrix, [&] {
      return load_permutations(m_text, in.labels.n, in.db.N, in.labels.flipped);
    });
  } else {
    in.matrix = generate_permutations(in.labels, cfg.permutations, cfg.seed);
  }
  return in;
}

inline nlohmann::ordered_json seed_json(const RunConfig& cfg) {
  if (!cfg.matrix.empty()) return "external";
  return cfg.seed;
}

inline nlohmann::ordered_json calibration_json(const RunConfig& cfg, const CalibrationResult& r) {
  nlohmann::ordered_json j;
  j["delta_star"] = r.delta_star();
  j["log_delta_star"] = r.log_delta_star == kLogZero
                            ? nlohmann::ordered_json(nullptr)
                            : nlohmann::ordered_json(r.log_delta_star);
  j["k_star"] = r.k_star;
  j["sigma_l"] = r.sigma_l_final;
  j["sigma_u"] = r.sigma_u_final;
  j["delta_k"] = r.delta_k_final();
  j["delta_k_minus_1"] = r.delta_k_minus_1();
  j["n"] = r.n;
  j["N"] = r.N;
  j["J"] = r.J;
  j["alpha"] = r.alpha;
  j["mode"] = std::string(to_string(r.mode));
  j["flipped_labels"] = r.flipped;
  j["fwer_at_delta_star"] = r.fwer_at_delta_star;
  j["patterns_visited"] = r.patterns_visited;
  j["testable_visited"] = r.testable_visited;
  j["exhausted"] = r.exhausted;
  j["seed"] = seed_json(cfg);
  return j;
}

inline std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

inline std::string csv_escape_items(const std::vector<Item>& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(items[i]);
  }
  return s;
}

inline std::string render_calibration_csv(const nlohmann::ordered_json& j) {
  std::string header, row;
  for (const auto& [key, value] : j.items()) {
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    if (value.is_number_float()) {
      row += format_double(value.get<double>());
    } else if (value.is_string()) {
      row += value.get<std::string>();
    } else {
      row += value.dump();
    }
  }
  return header + '\n' + row + '\n';
}

inline std::string cmd_calibrate(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  const auto r = compute_threshold(in.db, in.labels, in.matrix, cfg.alpha, in.mode);
  const auto j = calibration_json(cfg, r);
  return cfg.format == "csv" ? render_calibration_csv(j) : j.dump(2) + '\n';
}

inline std::string cmd_mine(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  const auto r = compute_threshold(in.db, in.labels, in.matrix, cfg.alpha, in.mode);
  const auto patterns = extract_significant(in.db, in.labels, r);
  if (cfg.format == "csv") {
    std::string out = "items,support,a,pvalue,log_pvalue\n";
    for (const auto& p : patterns) {
      out += csv_escape_items(p.itemset) + ',' + std::to_string(p.support) + ',' +
             std::to_string(p.a) + ',' + format_double(p.pvalue()) + ',' +
             format_double(p.log_pvalue) + '\n';
    }
    return out;
  }
  auto j = calibration_json(cfg, r);
  j["patterns"] = nlohmann::ordered_json::array();
  for (const auto& p : patterns) {
    nlohmann::ordered_json e;
    e["items"] = p.itemset;
    e["support"] = p.support;
    e["a"] = p.a;
    e["pvalue"] = p.pvalue();
    e["log_pvalue"] = p.log_pvalue;
    j["patterns"].push_back(std::move(e));
  }
  return j.dump(2) + '\n';
}

struct MethodRow {
  std::string method;
  double delta = 0.0;
  double fwer = 0.0;
  std::optional<std::size_t> stopping_support;
  std::optional<std::uint64_t> memory_bytes_model;
  double seconds = 0.0;
};

inline bool selected(const std::string& list, const std::string& name) {
  if (list == "all") return true;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == name) return true;
  }
  return false;
}

inline std::string cmd_compare(const RunConfig& cfg) {
  {
    std::stringstream ss(cfg.baselines);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item != "all" && item != "bonferroni" && item != "tarone" && item != "fastwy") {
        throw InputError("unknown baseline '" + item + "'");
      }
    }
  }
  const Inputs in = load_inputs(cfg);
  using clock = std::chrono::steady_clock;
  const auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  std::vector<MethodRow> rows;
  auto t0 = clock::now();
  const auto wy = compute_threshold(in.db, in.labels, in.matrix, cfg.alpha, in.mode);
  const double wy_seconds = seconds_since(t0);

  std::optional<FastWyResult> fw;
  double fw_seconds = 0.0;
  if (selected(cfg.baselines, "fastwy")) {
    t0 = clock::now();
    fw = fastwy_threshold(in.db, in.labels, in.matrix, cfg.alpha, in.mode);
    fw_seconds = seconds_since(t0);
  }
  // FWER is read off the complete FastWY sample when available; the wylight
  // sample is exact only below delta_{k-1}.
  const MinPValues& ref = fw ? fw->min_pvalues : wy.min_pvalues;
  const std::string ref_name = fw ? "fastwy" : "wylight";

  rows.push_back({"wylight", wy.delta_star(), empirical_fwer(ref, wy.log_delta_star),
                  wy.sigma_l_final, memory_estimates(in.db.N, wy.J, 0).wylight_bytes,
                  wy_seconds});
  if (fw) {
    std::uint64_t cost = 0;
    for (std::size_t x = std::max<std::size_t>(fw->sigma_worst, 1); x < fw->support_counts.size();
         ++x) {
      cost += x * fw->support_counts[x];
    }
    rows.push_back({"fastwy", fw->delta_star(), empirical_fwer(ref, fw->log_delta_star),
                    fw->sigma_worst, memory_estimates(in.db.N, wy.J, cost).fastwy_bytes,
                    fw_seconds});
  }
  if (selected(cfg.baselines, "tarone")) {
    t0 = clock::now();
    const auto t = tarone_lamp_threshold(in.db, in.labels.n, cfg.alpha, in.mode);
    rows.push_back({"tarone", t.delta(), empirical_fwer(ref, t.log_delta), t.sigma_l_final,
                    std::nullopt, seconds_since(t0)});
  }
  if (selected(cfg.baselines, "bonferroni")) {
    t0 = clock::now();
    const double D = static_cast<double>(mined_histogram(in.db, 1).total());
    const double delta = D >= 1.0 ? bonferroni_threshold(D, cfg.alpha) : cfg.alpha;
    rows.push_back({"bonferroni", delta, empirical_fwer(ref, to_log(delta)), std::nullopt,
                    std::nullopt, seconds_since(t0)});
  }

  if (cfg.format == "csv") {
    std::string out = "method,delta,fwer,stopping_support,memory_bytes_model,seconds\n";
    for (const auto& r : rows) {
      out += r.method + ',' + format_double(r.delta) + ',' + format_double(r.fwer) + ',' +
             (r.stopping_support ? std::to_string(*r.stopping_support) : "") + ',' +
             (r.memory_bytes_model ? std::to_string(*r.memory_bytes_model) : "") + ',' +
             format_double(r.seconds) + '\n';
    }
    return out;
  }
  nlohmann::ordered_json j;
  j["n"] = in.labels.n;
  j["N"] = in.db.N;
  j["J"] = wy.J;
  j["alpha"] = cfg.alpha;
  j["mode"] = cfg.mode;
  j["seed"] = seed_json(cfg);
  j["fwer_reference"] = ref_name;
  j["methods"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json e;
    e["method"] = r.method;
    e["delta"] = r.delta;
    e["fwer"] = r.fwer;
    e["stopping_support"] =
        r.stopping_support ? nlohmann::ordered_json(*r.stopping_support) : nullptr;
    e["memory_bytes_model"] =
        r.memory_bytes_model ? nlohmann::ordered_json(*r.memory_bytes_model) : nullptr;
    e["seconds"] = r.seconds;
    j["methods"].push_back(std::move(e));
  }
  return j.dump(2) + '\n';
}

inline std::string cmd_fwer_curve(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg, false);
  const auto rows = fwer_sweep(in.db, in.labels, cfg.alpha, cfg.j_values, cfg.repetitions,
                               cfg.seed, in.mode);
  if (cfg.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      j.push_back({{"J", r.J}, {"median_fwer", r.median_fwer}, {"p05", r.p05}, {"p95", r.p95}});
    }
    return j.dump(2) + '\n';
  }
  return format_sweep_csv(rows);
}

inline void add_common_options(CLI::App* sub, RunConfig& cfg, bool with_matrix) {
  sub->add_option("--transactions", cfg.transactions, "FIMI transaction file")->required();
  sub->add_option("--labels", cfg.labels, "class label file, one 0/1 per line")->required();
  sub->add_option("--alpha", cfg.alpha, "target family-wise error rate")
      ->check(CLI::Validator(
          [](std::string& v) -> std::string {
            const double a = std::stod(v);
            return a > 0.0 && a < 1.0 ? "" : "alpha must lie in (0, 1)";
          },
          "(0,1)"));
  sub->add_option("--mode", cfg.mode, "p-value mode")
      ->check(CLI::IsMember({"one-tailed", "two-tailed"}));
  sub->add_option("--output", cfg.output, "output path (default: standard output)");
  auto* seed = sub->add_option("--seed", cfg.seed, "permutation seed");
  if (with_matrix) {
    sub->add_option("--permutations", cfg.permutations, "number of permutations J")
        ->check(CLI::PositiveNumber);
    auto* matrix = sub->add_option("--matrix", cfg.matrix, "permutation matrix file");
    matrix->excludes(seed);
  }
}

}  // namespace detail

// Runs one command; the report goes to `out` (or --output), diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Significant itemset mining with Westfall-Young permutation testing"};
  app.require_subcommand(1);

  auto* calibrate = app.add_subcommand("calibrate", "compute the corrected threshold");
  auto* mine = app.add_subcommand("mine", "calibrate and list significant itemsets");
  auto* compare = app.add_subcommand("compare", "run baselines on the same permutations");
  auto* curve = app.add_subcommand("fwer-curve", "empirical FWER versus J");
  for (auto* sub : {calibrate, mine, compare}) {
    detail::add_common_options(sub, cfg, true);
    sub->add_option("--format", cfg.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
  }
  detail::add_common_options(curve, cfg, false);
  curve->add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  compare->add_option("--baselines", cfg.baselines,
                      "comma-separated subset of bonferroni,tarone,fastwy or 'all'");
  curve->add_option("--j-values", cfg.j_values, "permutation counts to sweep")
      ->delimiter(',');
  curve->add_option("--repetitions", cfg.repetitions, "repetitions per J")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (curve->parsed() && cfg.format == "json" && !curve->count("--format")) cfg.format = "csv";

  try {
    std::string report;
    if (calibrate->parsed()) report = detail::cmd_calibrate(cfg);
    if (mine->parsed()) report = detail::cmd_mine(cfg);
    if (compare->parsed()) report = detail::cmd_compare(cfg);
    if (curve->parsed()) report = detail::cmd_fwer_curve(cfg);
    if (cfg.output.empty()) {
      out << report;
    } else {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) throw InputError(cfg.output + ": cannot open for writing");
      f << report;
    }
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateLabels& e) {
    err << "error: " << cfg.labels << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wylight::cli
