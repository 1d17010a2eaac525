#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ted/forest.hpp"
#include "ted/maxplus.hpp"
#include "ted/value.hpp"

namespace ted::cli {

/// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

enum class Algorithm { ZhangShasha, Cubic, Subcubic };
Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm algo);

enum class Format { Plain, Csv };
Format parse_format(const std::string& name);

struct RunConfig {
  Algorithm algo = Algorithm::Subcubic;
  std::optional<int> delta;
  KernelKind kernel = KernelKind::Naive;
  std::uint64_t seed = 1;
  int trials = 100;
  int size = 20;
  int alphabet = 2;
  Format format = Format::Plain;
  std::vector<std::string> inputs;  // two file paths unless `random`
  bool random = false;

  /// Throws std::invalid_argument when the configuration is inconsistent.
  void validate() const;
};

/// Computes edit distance with the configured algorithm.
int run_algorithm(Algorithm algo, const Forest& f1, const Forest& f2, const RunConfig& config);

/// Prints "ed=<d> sim=<s>" (or CSV) for the two configured inputs.
int cmd_distance(const RunConfig& config, std::ostream& out, std::ostream& err);

/// A named distance function taking part in cross-verification.
struct NamedAlgorithm {
  std::string name;
  std::function<int(const Forest&, const Forest&)> distance;
};
/// Zhang–Shasha, cubic, and subcubic for delta in {1, 2, configured/default}.
std::vector<NamedAlgorithm> default_registry(const RunConfig& config);

/// Random-pair cross-check of all registry entries against Zhang–Shasha
/// (and brute force when within its cap). Prints "OK trials=N" or the
/// first mismatch by trial index.
int cmd_verify(const RunConfig& config, const std::vector<NamedAlgorithm>& registry,
               std::ostream& out, std::ostream& err);

/// Column names of the bench CSV, in order.
const std::vector<std::string>& bench_columns();
/// Timed runs with counters, one CSV row per (trial, algorithm).
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Values the bundled fixtures must reproduce.
struct ReferenceVectors {
  int mapping_ed = 3;
  int mapping_sim = 9;
  Value s_2_8 = 4;
  Value s_4_12 = 5;
  Value s_2_12 = 6;
  Value s_4_8 = 4;
};

/// Directory of the bundled fixtures (set at build time).
std::string default_fixture_dir();

/// Rebuilds the fixture trees and checks the expected vectors under every
/// algorithm. Exit 0 iff all pass.
int cmd_papercheck(const std::string& fixture_dir, const ReferenceVectors& expected,
                   std::ostream& out, std::ostream& err);

/// Full command-line entry point (subcommands distance, verify, bench,
/// papercheck).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ted::cli
