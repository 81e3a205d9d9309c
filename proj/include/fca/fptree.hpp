#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "fca/bitset.hpp"
#include "fca/lcm.hpp"

namespace fca {

inline constexpr std::size_t kMaxDenseWidth = 4096;
inline constexpr std::size_t kDefaultDenseWidth = 128;
/// Engage the FP-tree at every node regardless of width.
inline constexpr std::size_t kUnboundedDenseWidth = std::numeric_limits<std::size_t>::max();

/// Complete FP-tree with inner intersections, stored as lists only.
///
/// Positions 1..width() index a dense attribute universe ordered by
/// descending cardinality, so higher positions are less frequent. Each node
/// holds the set of positions on its root path, a weight, and the
/// intersection of every row it stands for. A node lives in the list of the
/// highest position of its path; path sets are unique within the tree.
class CompleteFpTree {
 public:
  using NodeId = std::uint32_t;

  explicit CompleteFpTree(std::size_t width = 0, bool track_origins = false) {
    reset(width, track_origins);
  }

  /// Empties the tree, keeping allocated storage.
  void reset(std::size_t width, bool track_origins = false);

  std::size_t width() const noexcept { return width_; }
  std::size_t words() const noexcept { return words_; }
  bool tracks_origins() const noexcept { return track_origins_; }

  std::span<const NodeId> list(std::size_t a) const { return lists_.at(a); }
  Weight list_weight(std::size_t a) const { return list_weight_.at(a); }

  std::span<const bits::Word> path(NodeId n) const { return {path_bits_.data() + n * words_, words_}; }
  std::span<const bits::Word> inner(NodeId n) const { return {inner_bits_.data() + n * words_, words_}; }
  Weight weight(NodeId n) const { return weights_[n]; }
  /// Caller-defined row ids merged into the node (only when tracking).
  std::span<const std::uint32_t> origins(NodeId n) const;

  /// Adds a row or node: merges into the node with an equal path (summing
  /// weights, intersecting inner sets) or creates one in the list of the
  /// path's highest position. Returns the node. A path must be nonempty and
  /// a subset of inner.
  NodeId insert(std::span<const bits::Word> path, std::span<const bits::Word> inner, Weight weight,
                std::span<const std::uint32_t> origins = {});

  /// Initial step: each row goes to the list of its highest position.
  /// Rows are position lists; throws std::out_of_range outside 1..width.
  void initial_step(std::span<const AttributeSet> rows, std::span<const Weight> weights = {});

  /// Extension step over lists below `from` (exclusive), highest first: each
  /// node passes its path minus the list position on to the next lower list.
  /// Lists whose total weight ends below min_support are dropped once
  /// extended.
  void extension_step(std::size_t from, Weight min_support = 0);
  void extension_step() { extension_step(width_ + 1); }

  /// Drops every node of list a (nodes stay allocated but are unreachable).
  void drop_list(std::size_t a);

 private:
  void extend_into(NodeId n, std::size_t a, CompleteFpTree& target) const;
  friend void conditional_fptree(const CompleteFpTree&, std::size_t, Weight, CompleteFpTree&);

  std::size_t width_ = 0;
  std::size_t words_ = 0;
  bool track_origins_ = false;
  std::vector<bits::Word> path_bits_;
  std::vector<bits::Word> inner_bits_;
  std::vector<Weight> weights_;
  std::vector<std::vector<std::uint32_t>> origins_;
  std::vector<std::vector<NodeId>> lists_;  // index 0 unused
  std::vector<Weight> list_weight_;
  // path hash -> head of a chain through next_
  std::unordered_map<std::uint64_t, NodeId> index_;
  std::vector<NodeId> next_;
  std::vector<bits::Word> scratch_;
};

/// Builds the complete tree of position rows (inner sets start equal to the
/// rows). Every row must be nonempty.
CompleteFpTree build_complete_fptree(std::size_t width, std::span<const AttributeSet> rows,
                                     std::span<const Weight> weights = {});

/// Conditional tree of position a: a's list is extended into fresh lists
/// below a, and the extension continues down to position 1. Lists at a and
/// above are empty in the result. Lists lighter than min_support are
/// dropped after their extension.
void conditional_fptree(const CompleteFpTree& tree, std::size_t a, Weight min_support,
                        CompleteFpTree& out);
CompleteFpTree conditional_fptree(const CompleteFpTree& tree, std::size_t a, Weight min_support = 0);

struct ListIntent {
  AttributeSet intent;  // positions
  Weight support = 0;
};

/// Intersection of the inner sets of list a with its total weight; nullopt
/// when the list is empty.
std::optional<ListIntent> intent_of_list(const CompleteFpTree& tree, std::size_t a);

struct Lcm3Options {
  LcmOptions lcm;
  /// Hand a node's subtree to the FP-tree engine once its conditional
  /// database spans at most this many attributes. 0 disables the FP-tree.
  std::size_t dense_width = kDefaultDenseWidth;
  /// Reuse per-depth tree storage across sibling subtrees.
  bool reuse_arena = true;
};

/// Arraylist LCM in sparse regions, complete FP-trees in dense ones.
/// Throws CapacityError when dense_width exceeds kMaxDenseWidth (other than
/// kUnboundedDenseWidth) or when an unbounded run meets a wider database.
EnumerationStats lcm3_enumerate(const FormalContext& ctx, Weight min_support,
                                const ConceptSink& sink, const Lcm3Options& options = {});
EnumerationResult lcm3_enumerate(const FormalContext& ctx, Weight min_support,
                                 const Lcm3Options& options = {});

}  // namespace fca
