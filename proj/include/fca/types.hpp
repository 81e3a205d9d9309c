#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fca {

/// Attribute id, 1-based and dense within a context.
using AttrId = std::uint32_t;
/// Object (row) index, 0-based.
using ObjId = std::uint32_t;
/// Weighted object count.
using Weight = std::uint64_t;

/// Strictly ascending list of attribute ids.
using AttributeSet = std::vector<AttrId>;

struct ObjectSet {
  std::vector<ObjId> objects;  // strictly ascending
  Weight weighted_size = 0;

  bool operator==(const ObjectSet&) const = default;
};

/// An emitted closed itemset. Engines report intents and extents in the ids
/// of the context they were run on; the mining pipeline translates them back.
struct Concept {
  AttributeSet intent;
  Weight support = 0;
  std::optional<std::vector<ObjId>> extent;
};

/// Traversal counters shared by every engine.
struct EnumerationStats {
  std::uint64_t concepts_emitted = 0;
  std::uint64_t recursive_calls = 0;
  std::uint64_t closure_computations = 0;
  std::uint64_t canonicity_failures = 0;
  std::uint64_t pruning_rule_hits = 0;
  std::uint64_t conditional_dbs_built = 0;

  bool operator==(const EnumerationStats&) const = default;
};

using ConceptSink = std::function<void(Concept&&)>;

struct EnumerationResult {
  std::vector<Concept> concepts;
  EnumerationStats stats;
};

/// Orders concepts by intent (lexicographic), the order used for all
/// set comparisons and sorted output.
inline void sort_concepts(std::vector<Concept>& concepts) {
  std::sort(concepts.begin(), concepts.end(),
            [](const Concept& a, const Concept& b) { return a.intent < b.intent; });
}

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a request exceeds a fixed capacity (oracle attribute cap,
/// bit-array width).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fca
