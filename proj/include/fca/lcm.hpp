#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fca/context.hpp"

namespace fca {

// Below these sizes a conditional database is kept unmerged.
inline constexpr std::size_t kMergeMinRows = 6;
inline constexpr std::size_t kMergeMinAttributes = 2;

struct MergeThreshold {
  std::size_t min_rows = kMergeMinRows;
  std::size_t min_attributes = kMergeMinAttributes;

  static constexpr MergeThreshold always() { return {0, 0}; }
};

/// Context restricted to an extent, with constant attributes dropped and
/// rows merged on their suffix. Every row is one ascending id list: ids
/// below anchor() are its interior intersection (prefix), ids above it are
/// its suffix. Row origins (source object ids) are kept only on request.
class ConditionalDatabase {
 public:
  ConditionalDatabase() = default;

  /// Root database: every row of ctx, anchor 0, no prefix.
  static ConditionalDatabase from_context(const FormalContext& ctx, bool track_origins = false);

  void reset(AttrId anchor, bool track_origins);
  void add_row(std::span<const AttrId> items, Weight weight, std::span<const ObjId> origins = {});
  void set_attributes(std::span<const AttrId> prefix, std::span<const AttrId> suffix);

  std::size_t num_rows() const noexcept { return weights_.size(); }
  std::span<const AttrId> row(std::size_t r) const {
    return {items_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }
  std::span<const AttrId> prefix(std::size_t r) const { return row(r).first(split_[r]); }
  std::span<const AttrId> suffix(std::size_t r) const { return row(r).subspan(split_[r]); }
  Weight weight(std::size_t r) const { return weights_[r]; }
  std::span<const ObjId> origins(std::size_t r) const;

  AttrId anchor() const noexcept { return anchor_; }
  Weight extent_weight() const noexcept { return extent_weight_; }
  bool tracks_origins() const noexcept { return track_origins_; }
  const AttributeSet& prefix_attrs() const noexcept { return prefix_attrs_; }
  const AttributeSet& suffix_attrs() const noexcept { return suffix_attrs_; }

 private:
  AttrId anchor_ = 0;
  bool track_origins_ = false;
  std::vector<AttrId> items_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> split_;
  std::vector<Weight> weights_;
  std::vector<ObjId> origin_items_;
  std::vector<std::uint32_t> origin_offsets_{0};
  Weight extent_weight_ = 0;
  AttributeSet prefix_attrs_;
  AttributeSet suffix_attrs_;
};

/// Tidlist of one attribute: row indices local to a conditional database.
struct Bucket {
  std::vector<std::uint32_t> rows;
  Weight weight = 0;
};

/// Bucket storage indexed by attribute id, reused across a whole run.
class BucketArena {
 public:
  explicit BucketArena(std::size_t num_attributes = 0) : buckets_(num_attributes + 1), marks_(num_attributes + 1, 0) {}
  Bucket& operator[](AttrId a) { return buckets_.at(a); }
  const Bucket& operator[](AttrId a) const { return buckets_.at(a); }
  std::size_t num_attributes() const noexcept { return buckets_.size() - 1; }

 private:
  friend void occurrence_deliver(const ConditionalDatabase&, std::span<const AttrId>, BucketArena&);
  std::vector<Bucket> buckets_;
  std::vector<char> marks_;
};

/// One pass over db's rows fills the bucket of every target. Buckets of
/// other attributes are left untouched. targets must be suffix attributes.
void occurrence_deliver(const ConditionalDatabase& db, std::span<const AttrId> targets,
                        BucketArena& arena);

/// Weighted attribute counts over a set of rows of a conditional database,
/// prefix and suffix alike.
class FrequencyTable {
 public:
  explicit FrequencyTable(std::size_t num_attributes = 0) : count_(num_attributes + 1, 0) {}

  void count(const ConditionalDatabase& db, std::span<const std::uint32_t> rows);
  void count_all(const ConditionalDatabase& db);

  Weight operator[](AttrId a) const { return count_.at(a); }
  /// Attributes with a nonzero count, ascending.
  const AttributeSet& live() const;
  /// The same attributes in discovery order.
  const AttributeSet& touched() const noexcept { return live_; }
  Weight extent_weight() const noexcept { return extent_weight_; }

 private:
  void clear();
  std::vector<Weight> count_;
  mutable AttributeSet live_;
  mutable bool sorted_ = true;
  Weight extent_weight_ = 0;
};

/// Builds the conditional database of `db` restricted to `extent_rows`
/// for anchor y: drops full, empty and infrequent attributes (and y),
/// splits the rest into prefix (< y) and suffix (> y), and merges rows equal
/// on the suffix, intersecting their prefixes and summing weights. Small
/// databases (per `threshold`) are left unmerged.
class ConditionalDbBuilder {
 public:
  void build(const ConditionalDatabase& db, std::span<const std::uint32_t> extent_rows,
             const FrequencyTable& freq, AttrId anchor, Weight min_support,
             const MergeThreshold& threshold, ConditionalDatabase& out);

 private:
  ConditionalDatabase scratch_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint64_t> hashes_;
  std::vector<AttrId> prefix_buf_, next_buf_, row_buf_;
  std::vector<ObjId> origin_buf_;
  std::vector<char> keep_;
  AttributeSet prefix_sel_, suffix_sel_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> groups_;
};

ConditionalDatabase create_conditional_db(const ConditionalDatabase& db, const Bucket& extent,
                                          AttrId anchor, Weight min_support,
                                          const MergeThreshold& threshold = {});

/// Canonicity-failure rules "i adds j" scoped to recursion frames.
class PruneRuleStore {
 public:
  void enter_frame();
  /// Drops every rule recorded since the matching enter_frame().
  void exit_frame();
  void record_failure(AttrId i, AttrId j);
  void remove_rules_by_right_side(AttrId j);
  bool should_skip(AttrId i) const;
  std::size_t live_rules() const noexcept { return live_; }
  bool empty() const noexcept { return live_ == 0; }
  std::size_t depth() const noexcept { return frames_.size(); }

 private:
  struct Rule {
    AttrId left;
    AttrId right;
    bool alive;
  };
  std::vector<Rule> rules_;
  std::vector<std::size_t> frames_;
  std::vector<std::uint32_t> left_count_;
  std::size_t live_ = 0;
};

struct LcmCallView {
  const AttributeSet& generator;  // parent intent plus the anchor, ascending
  AttrId anchor;
  std::span<const ObjId> extent;  // empty unless origins are tracked
  Weight extent_weight;
  const ConditionalDatabase& db;
  const FrequencyTable& frequencies;
};

struct LcmNodeView {
  const AttributeSet& intent;
  std::span<const ObjId> extent;
  Weight support;
  const ConditionalDatabase& db;  // conditional database built for the node
  const BucketArena& buckets;     // delivered for db.suffix_attrs()
};

struct LcmHooks {
  std::function<void(const LcmCallView&)> on_call;
  std::function<void(const LcmNodeView&)> on_node;
  std::function<void(const AttributeSet& intent, AttrId skipped)> on_skip;

  bool any() const { return on_call || on_node || on_skip; }
};

struct LcmOptions {
  bool pruning = true;
  bool with_extents = false;
  /// Recompute the closure behind every pruned call on the source context
  /// and throw std::logic_error if it would have passed canonicity.
  bool verify_pruning = false;
  MergeThreshold merge;
  LcmHooks hooks;
};

/// Takes over the enumeration below a node once its conditional database
/// is built. Used to plug in the dense-data engine.
class SubtreeDelegate {
 public:
  virtual ~SubtreeDelegate() = default;

  struct Request {
    const ConditionalDatabase& db;
    const AttributeSet& intent;  // closed intent of the node, ascending
    Weight min_support;
    bool with_extents;
    const ConceptSink& sink;
    EnumerationStats& stats;
  };
  /// Returns false to let the arraylist engine continue.
  virtual bool enumerate_subtree(const Request& request) = 0;
};

EnumerationStats lcm2_enumerate(const FormalContext& ctx, Weight min_support,
                                const ConceptSink& sink, const LcmOptions& options = {});
EnumerationResult lcm2_enumerate(const FormalContext& ctx, Weight min_support,
                                 const LcmOptions& options = {});

/// lcm2 with `delegate` consulted at every emitted node.
EnumerationStats lcm_enumerate_with(const FormalContext& ctx, Weight min_support,
                                    const ConceptSink& sink, const LcmOptions& options,
                                    SubtreeDelegate* delegate);

}  // namespace fca
