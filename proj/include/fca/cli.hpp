#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fca/context.hpp"
#include "fca/fptree.hpp"

namespace fca {

enum class Algorithm { naive, cbo, lcm2, lcm3 };

std::optional<Algorithm> parse_algorithm(std::string_view name);
const char* algorithm_name(Algorithm a);

struct MineOptions {
  Algorithm algorithm = Algorithm::lcm2;
  bool pruning = true;
  PreprocessOptions preprocess;
  std::size_t dense_width = kDefaultDenseWidth;
  bool with_extents = false;
};

struct MineResult {
  std::vector<Concept> concepts;  // source attribute/object ids, sorted
  EnumerationStats stats;
  double wall_ms = 0;
};

/// Preprocesses, runs the selected engine and lifts the result back to the
/// ids of `ctx`. wall_ms covers preprocessing and enumeration.
MineResult mine(const FormalContext& ctx, Weight min_support, const MineOptions& options = {});

/// ceiling(ratio * total); throws std::invalid_argument outside [0, 1].
Weight support_from_ratio(double ratio, Weight total);

/// Every incidence drawn independently with probability `density` from
/// std::mt19937_64 seeded with `seed`, row by row.
FormalContext generate_context(std::uint64_t seed, std::size_t num_objects,
                               std::size_t num_attributes, double density);

/// Order-independent hash of a concept set (intents and supports).
std::uint64_t concept_digest(const std::vector<Concept>& concepts);

/// One line of mine output: labels of the intent, "(S)", extent after "/".
std::string format_concept(const FormalContext& ctx, const Concept& c);

struct BenchEntry {
  std::string name;
  std::function<MineResult(const FormalContext&, Weight)> run;
};

struct BenchRow {
  std::string name;
  double median_ms = 0;
  std::size_t concepts = 0;
  std::uint64_t digest = 0;
  EnumerationStats stats;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  bool digests_agree = true;
};

/// Runs every entry `repeat` times on ctx, sequentially.
BenchReport run_bench(const FormalContext& ctx, Weight min_support,
                      const std::vector<BenchEntry>& entries, std::size_t repeat = 3);

void write_bench_csv(std::ostream& out, const BenchReport& report);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int io = 1;
inline constexpr int parse = 2;
inline constexpr int usage = 3;
inline constexpr int capacity = 4;
inline constexpr int digest_mismatch = 5;
}  // namespace exit_code

/// Entry point for the `mine`, `gen` and `bench` verbs. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fca
