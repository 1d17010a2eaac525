#include "ted/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ted/oracle.hpp"
#include "ted/ted_cubic.hpp"
#include "ted/ted_subcubic.hpp"

#ifndef TED_FIXTURE_DIR
#define TED_FIXTURE_DIR "data/fixtures"
#endif

namespace ted::cli {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "zhang-shasha" || name == "zs") return Algorithm::ZhangShasha;
  if (name == "cubic") return Algorithm::Cubic;
  if (name == "subcubic") return Algorithm::Subcubic;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected zhang-shasha, cubic or subcubic)");
}

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::ZhangShasha:
      return "zhang-shasha";
    case Algorithm::Cubic:
      return "cubic";
    case Algorithm::Subcubic:
      return "subcubic";
  }
  return "unknown";
}

Format parse_format(const std::string& name) {
  if (name == "plain") return Format::Plain;
  if (name == "csv") return Format::Csv;
  throw std::invalid_argument("unknown format '" + name + "' (expected plain or csv)");
}

void RunConfig::validate() const {
  if (delta && *delta < 1) throw std::invalid_argument("--delta must be >= 1");
  if (trials < 0) throw std::invalid_argument("--trials must be >= 0");
  if (size < 0) throw std::invalid_argument("--size must be >= 0");
  if (alphabet < 1) throw std::invalid_argument("--alphabet must be >= 1");
}

int run_algorithm(Algorithm algo, const Forest& f1, const Forest& f2, const RunConfig& config) {
  switch (algo) {
    case Algorithm::ZhangShasha:
      return zhang_shasha_ed(f1, f2);
    case Algorithm::Cubic:
      return ted_cubic(f1, f2);
    case Algorithm::Subcubic: {
      SubcubicOptions options;
      options.delta = config.delta;
      options.kernel = config.kernel;
      return ted_subcubic(f1, f2, options);
    }
  }
  throw std::invalid_argument("unknown algorithm");
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Forest load_forest(const std::string& path, LabelTable& labels) {
  const std::string text = read_file(path);
  try {
    return parse_forest(text, labels);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.position());
  }
}

/// Two random trees whose sizes are drawn uniformly from [0, max_size].
std::pair<Forest, Forest> random_pair(std::uint64_t seed, int max_size, int alphabet) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, max_size);
  const int n1 = pick(rng);
  const int n2 = pick(rng);
  return {random_forest(n1, alphabet, rng()), random_forest(n2, alphabet, rng())};
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(trial) * 0xBF58476D1CE4E5B9ULL;
}

}  // namespace

int cmd_distance(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    Forest f1;
    Forest f2;
    if (config.random) {
      f1 = random_forest(config.size, config.alphabet, trial_seed(config.seed, 0));
      f2 = random_forest(config.size, config.alphabet, trial_seed(config.seed, 1));
    } else {
      if (config.inputs.size() != 2) {
        err << "error: distance needs exactly two input files (or --random)\n";
        return kExitUsage;
      }
      LabelTable labels;
      f1 = load_forest(config.inputs[0], labels);
      f2 = load_forest(config.inputs[1], labels);
    }
    const int ed = run_algorithm(config.algo, f1, f2, config);
    const int sim = sim_ed_convert(ed, f1.size(), f2.size());
    if (config.format == Format::Csv) {
      out << "algorithm,n1,n2,ed,sim\n"
          << to_string(config.algo) << ',' << f1.size() << ',' << f2.size() << ',' << ed << ','
          << sim << '\n';
    } else {
      out << "ed=" << ed << " sim=" << sim << '\n';
    }
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

std::vector<NamedAlgorithm> default_registry(const RunConfig& config) {
  std::vector<NamedAlgorithm> reg;
  reg.push_back({"cubic", [](const Forest& a, const Forest& b) { return ted_cubic(a, b); }});
  std::vector<std::optional<int>> deltas{1, 2, config.delta};
  for (const auto& d : deltas) {
    const KernelKind kernel = config.kernel;
    const std::string name =
        "subcubic(delta=" + (d ? std::to_string(*d) : std::string("default")) + ")";
    reg.push_back({name, [d, kernel](const Forest& a, const Forest& b) {
                     SubcubicOptions options;
                     options.delta = d;
                     options.kernel = kernel;
                     return ted_subcubic(a, b, options);
                   }});
  }
  return reg;
}

int cmd_verify(const RunConfig& config, const std::vector<NamedAlgorithm>& registry,
               std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const int trials = config.trials;
  const int cap = brute_force_cap();
  std::vector<std::string> mismatch(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic)
  for (int trial = 0; trial < trials; ++trial) {
    const auto [f1, f2] = random_pair(trial_seed(config.seed, trial), config.size, config.alphabet);
    std::ostringstream msg;
    try {
      const int expected = zhang_shasha_ed(f1, f2);
      if (f1.size() + f2.size() <= cap) {
        const int brute = sim_ed_convert(brute_force_sim(f1, f2, cap), f1.size(), f2.size());
        if (brute != expected) {
          msg << "zhang-shasha=" << expected << " brute-force=" << brute;
        }
      }
      for (const auto& algo : registry) {
        if (!msg.str().empty()) break;
        const int got = algo.distance(f1, f2);
        if (got != expected) msg << algo.name << '=' << got << " zhang-shasha=" << expected;
      }
    } catch (const std::exception& e) {
      msg << "exception: " << e.what();
    }
    if (!msg.str().empty()) {
      LabelTable labels = LabelTable::alphabetic(config.alphabet);
      mismatch[static_cast<std::size_t>(trial)] =
          "MISMATCH trial=" + std::to_string(trial) + " " + msg.str() + " F1=" +
          serialize_forest(f1, labels) + " F2=" + serialize_forest(f2, labels);
    }
  }
  for (const auto& m : mismatch) {
    if (!m.empty()) {
      out << m << '\n';
      return kExitMismatch;
    }
  }
  out << "OK trials=" << trials << '\n';
  return kExitOk;
}

const std::vector<std::string>& bench_columns() {
  static const std::vector<std::string> cols{
      "algorithm",  "trial",           "n",          "m",           "delta",
      "kernel",     "wall_ms",         "ed",         "type1",       "type2_base",
      "type2_first", "type2_second",   "transitions", "transition_bound", "mul1_calls",
      "mul1_pairs", "mul1_pair_bound", "mul1_iterations", "kernel_calls"};
  return cols;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const auto& cols = bench_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  using Clock = std::chrono::steady_clock;
  for (int trial = 0; trial < config.trials; ++trial) {
    const Forest f1 = random_forest(config.size, config.alphabet, trial_seed(config.seed, 2 * trial));
    const Forest f2 =
        random_forest(config.size, config.alphabet, trial_seed(config.seed, 2 * trial + 1));
    const int n = f1.size();
    const int m = f2.size();
    auto emit = [&](const std::string& algo, int delta, double ms, int ed, const DecompositionPlan* plan,
                    const CubicStats& cubic, std::int64_t kernel_calls) {
      std::ostringstream row;
      row << algo << ',' << trial << ',' << n << ',' << m << ',';
      if (delta > 0) row << delta;
      row << ',' << to_string(config.kernel) << ',' << std::fixed << std::setprecision(3) << ms
          << ',' << ed << ',';
      if (plan != nullptr) {
        const double bound = 4.0 * n / plan->delta + 4.0;
        row << plan->count(TransitionKind::TypeI) << ',' << plan->count(TransitionKind::TypeIIBase)
            << ',' << plan->count(TransitionKind::TypeIIFirst) << ','
            << plan->count(TransitionKind::TypeIISecond) << ',' << plan->size() << ','
            << std::setprecision(2) << bound;
      } else {
        row << ",,,,,";
      }
      row << ',' << cubic.mul1_calls << ',' << cubic.pair_count << ',';
      if (algo == "cubic") row << static_cast<std::int64_t>(std::max(n, m)) * std::max(n, m);
      row << ',' << cubic.mul1.iterations << ',' << kernel_calls;
      out << row.str() << '\n';
    };
    {
      const auto t0 = Clock::now();
      const int ed = zhang_shasha_ed(f1, f2);
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      emit("zhang-shasha", 0, ms, ed, nullptr, CubicStats{}, 0);
    }
    {
      CubicStats stats;
      const auto t0 = Clock::now();
      const int ed = ted_cubic(f1, f2, &stats);
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      emit("cubic", 0, ms, ed, nullptr, stats, 0);
    }
    {
      SubcubicOptions options;
      options.delta = config.delta;
      options.kernel = config.kernel;
      SubcubicStats stats;
      DecompositionPlan plan;
      const auto t0 = Clock::now();
      const int ed = ted_subcubic(f1, f2, options, &stats, &plan);
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      emit("subcubic", plan.delta, ms, ed, &plan, stats.cubic, stats.mul3.kernel_calls);
    }
  }
  return kExitOk;
}

std::string default_fixture_dir() { return TED_FIXTURE_DIR; }

int cmd_papercheck(const std::string& fixture_dir, const ReferenceVectors& expected, std::ostream& out,
                   std::ostream& err) {
  int failures = 0;
  auto check = [&](const std::string& what, long long got, long long want) {
    const bool ok = got == want;
    out << (ok ? "PASS " : "FAIL ") << what << ": got " << got << ", expected " << want << '\n';
    if (!ok) ++failures;
  };
  try {
    namespace fs = std::filesystem;
    const fs::path dir(fixture_dir);
    LabelTable labels;
    const Forest m1 = load_forest((dir / "mapping_t1.tree").string(), labels);
    const Forest m2 = load_forest((dir / "mapping_t2.tree").string(), labels);
    RunConfig config;
    for (Algorithm algo : {Algorithm::ZhangShasha, Algorithm::Cubic, Algorithm::Subcubic}) {
      const int ed = run_algorithm(algo, m1, m2, config);
      check("mapping pair ed [" + to_string(algo) + "]", ed, expected.mapping_ed);
      check("mapping pair sim [" + to_string(algo) + "]",
            sim_ed_convert(ed, m1.size(), m2.size()), expected.mapping_sim);
    }
    check("mapping pair sim [brute-force]", brute_force_sim(m1, m2, 64), expected.mapping_sim);

    const Forest a1 = load_forest((dir / "antimonge_t1.tree").string(), labels);
    const Forest a2 = load_forest((dir / "antimonge_t2.tree").string(), labels);
    const Target t(a2);
    const DenseBlock naive = similarity_matrix_naive(a1, a2);
    const SimMatrix cubic = dp_similarity(a1, t);
    const SimMatrix sub = decompose_compute(a1, t, 1, make_kernel(KernelKind::Naive));
    struct Cell {
      int i, j;
      Value want;
    };
    const Cell cells[] = {{2, 8, expected.s_2_8},
                          {4, 12, expected.s_4_12},
                          {2, 12, expected.s_2_12},
                          {4, 8, expected.s_4_8}};
    for (const Cell& c : cells) {
      const std::string at = "s(" + std::to_string(c.i) + "," + std::to_string(c.j) + ")";
      check(at + " [naive]", naive.at(c.i - 1, c.j - 1), c.want);
      check(at + " [cubic]", cubic.mat.get(c.i, c.j), c.want);
      check(at + " [subcubic]", sub.mat.get(c.i, c.j), c.want);
    }
    const long long lhs = static_cast<long long>(cubic.mat.get(2, 8)) + cubic.mat.get(4, 12);
    const long long rhs = static_cast<long long>(cubic.mat.get(2, 12)) + cubic.mat.get(4, 8);
    check("anti-Monge left sum s(2,8)+s(4,12)", lhs,
          static_cast<long long>(expected.s_2_8) + expected.s_4_12);
    check("anti-Monge right sum s(2,12)+s(4,8)", rhs,
          static_cast<long long>(expected.s_2_12) + expected.s_4_8);
    const bool violated = lhs < rhs;
    out << (violated ? "PASS " : "FAIL ") << "anti-Monge violation " << lhs << " < " << rhs << '\n';
    if (!violated) ++failures;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  out << (failures == 0 ? "papercheck: OK" : "papercheck: FAILED (" + std::to_string(failures) + ")")
      << '\n';
  return failures == 0 ? kExitOk : kExitMismatch;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tree edit distance via similarity matrices"};
  app.require_subcommand(1);

  RunConfig config;
  std::string algo = "subcubic";
  std::string kernel = "naive";
  std::string format = "plain";
  std::string fixtures = default_fixture_dir();
  int delta = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--delta", delta, "Decomposition block size (>= 1; default |T2|^0.4773)");
    sub->add_option("--kernel", kernel, "Bounded-difference kernel: naive or plugged");
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--size", config.size, "Tree size (max size for verify)");
    sub->add_option("--alphabet", config.alphabet, "Label alphabet size");
  };

  CLI::App* distance = app.add_subcommand("distance", "Edit distance between two trees");
  add_common(distance);
  distance->add_option("--algo", algo, "zhang-shasha, cubic or subcubic");
  distance->add_option("--format", format, "plain or csv");
  distance->add_flag("--random", config.random, "Use two random trees instead of files");
  distance->add_option("inputs", config.inputs, "Two bracket-notation files");

  CLI::App* verify = app.add_subcommand("verify", "Cross-check all algorithms on random pairs");
  add_common(verify);
  verify->add_option("--trials", config.trials, "Number of random pairs");

  CLI::App* bench = app.add_subcommand("bench", "Timed runs with operation counters (CSV)");
  add_common(bench);
  bench->add_option("--trials", config.trials, "Number of random pairs");

  CLI::App* check = app.add_subcommand("papercheck", "Replay the bundled reference vectors");
  check->add_option("--fixtures", fixtures, "Fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    config.algo = parse_algorithm(algo);
    config.kernel = parse_kernel(kernel);
    config.format = parse_format(format);
    if (delta != 0) config.delta = delta;
    config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (distance->parsed()) return cmd_distance(config, out, err);
  if (verify->parsed()) return cmd_verify(config, default_registry(config), out, err);
  if (bench->parsed()) return cmd_bench(config, out, err);
  return cmd_papercheck(fixtures, ReferenceVectors{}, out, err);
}

}  // namespace ted::cli
