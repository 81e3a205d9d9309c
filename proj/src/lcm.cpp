#include "fca/lcm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "fca/cbo.hpp"
#include "fca/derive.hpp"

namespace fca {

// ---------------------------------------------------------------------------
// ConditionalDatabase

ConditionalDatabase ConditionalDatabase::from_context(const FormalContext& ctx, bool track_origins) {
  ConditionalDatabase db;
  db.reset(0, track_origins);
  for (ObjId x = 0; x < ctx.num_objects(); ++x) {
    ObjId self[] = {x};
    db.add_row(ctx.row(x), ctx.weight(x), track_origins ? std::span<const ObjId>(self) : std::span<const ObjId>{});
  }
  AttributeSet suffix;
  for (AttrId a = 1; a <= ctx.num_attributes(); ++a)
    if (ctx.cardinality(a) > 0) suffix.push_back(a);
  db.set_attributes({}, suffix);
  return db;
}

void ConditionalDatabase::reset(AttrId anchor, bool track_origins) {
  anchor_ = anchor;
  track_origins_ = track_origins;
  items_.clear();
  offsets_.assign(1, 0);
  split_.clear();
  weights_.clear();
  origin_items_.clear();
  origin_offsets_.assign(1, 0);
  extent_weight_ = 0;
  prefix_attrs_.clear();
  suffix_attrs_.clear();
}

void ConditionalDatabase::add_row(std::span<const AttrId> items, Weight weight,
                                  std::span<const ObjId> origins) {
  items_.insert(items_.end(), items.begin(), items.end());
  offsets_.push_back(static_cast<std::uint32_t>(items_.size()));
  split_.push_back(
      static_cast<std::uint32_t>(std::lower_bound(items.begin(), items.end(), anchor_) - items.begin()));
  weights_.push_back(weight);
  extent_weight_ += weight;
  if (track_origins_) {
    origin_items_.insert(origin_items_.end(), origins.begin(), origins.end());
    origin_offsets_.push_back(static_cast<std::uint32_t>(origin_items_.size()));
  }
}

void ConditionalDatabase::set_attributes(std::span<const AttrId> prefix, std::span<const AttrId> suffix) {
  prefix_attrs_.assign(prefix.begin(), prefix.end());
  suffix_attrs_.assign(suffix.begin(), suffix.end());
}

std::span<const ObjId> ConditionalDatabase::origins(std::size_t r) const {
  if (!track_origins_) return {};
  return {origin_items_.data() + origin_offsets_[r], origin_offsets_[r + 1] - origin_offsets_[r]};
}

// ---------------------------------------------------------------------------
// Occurrence deliver and frequencies

void occurrence_deliver(const ConditionalDatabase& db, std::span<const AttrId> targets,
                        BucketArena& arena) {
  for (AttrId a : targets) {
    if (a == 0 || a > arena.num_attributes())
      throw std::out_of_range("bucket arena has no slot for attribute " + std::to_string(a));
    arena.buckets_[a].rows.clear();
    arena.buckets_[a].weight = 0;
    arena.marks_[a] = 1;
  }
  for (std::size_t r = 0; r < db.num_rows(); ++r) {
    const Weight w = db.weight(r);
    for (AttrId a : db.suffix(r)) {
      if (a < arena.marks_.size() && arena.marks_[a]) {
        auto& b = arena.buckets_[a];
        b.rows.push_back(static_cast<std::uint32_t>(r));
        b.weight += w;
      }
    }
  }
  for (AttrId a : targets) arena.marks_[a] = 0;
}

void FrequencyTable::clear() {
  for (AttrId a : live_) count_[a] = 0;
  live_.clear();
  sorted_ = true;
  extent_weight_ = 0;
}

void FrequencyTable::count(const ConditionalDatabase& db, std::span<const std::uint32_t> rows) {
  clear();
  for (std::uint32_t r : rows) {
    const Weight w = db.weight(r);
    extent_weight_ += w;
    for (AttrId a : db.row(r)) {
      if (a >= count_.size()) count_.resize(a + 1, 0);
      if (count_[a] == 0) live_.push_back(a);
      count_[a] += w;
    }
  }
  sorted_ = false;
}

const AttributeSet& FrequencyTable::live() const {
  if (!sorted_) {
    std::sort(live_.begin(), live_.end());
    sorted_ = true;
  }
  return live_;
}

void FrequencyTable::count_all(const ConditionalDatabase& db) {
  std::vector<std::uint32_t> rows(db.num_rows());
  for (std::uint32_t r = 0; r < rows.size(); ++r) rows[r] = r;
  count(db, rows);
}

// ---------------------------------------------------------------------------
// Conditional database construction

void ConditionalDbBuilder::build(const ConditionalDatabase& db,
                                 std::span<const std::uint32_t> extent_rows,
                                 const FrequencyTable& freq, AttrId anchor, Weight min_support,
                                 const MergeThreshold& threshold, ConditionalDatabase& out) {
  const Weight min_count = std::max<Weight>(min_support, 1);
  const Weight total = freq.extent_weight();
  auto& prefix = prefix_sel_;
  auto& suffix = suffix_sel_;
  prefix.clear();
  suffix.clear();
  AttrId max_attr = 0;
  for (AttrId a : freq.touched()) {
    const Weight n = freq[a];
    if (a == anchor || n < min_count || n >= total) continue;
    (a < anchor ? prefix : suffix).push_back(a);
    max_attr = std::max(max_attr, a);
  }
  std::sort(prefix.begin(), prefix.end());
  std::sort(suffix.begin(), suffix.end());
  if (keep_.size() <= max_attr) keep_.resize(max_attr + 1, 0);
  for (AttrId a : prefix) keep_[a] = 1;
  for (AttrId a : suffix) keep_[a] = 1;
  struct ClearKeep {
    std::vector<char>& keep;
    const AttributeSet& p;
    const AttributeSet& s;
    ~ClearKeep() {
      for (AttrId a : p) keep[a] = 0;
      for (AttrId a : s) keep[a] = 0;
    }
  } clear_keep{keep_, prefix, suffix};
  const bool merge =
      extent_rows.size() >= threshold.min_rows && suffix.size() >= threshold.min_attributes;
  const bool track = db.tracks_origins();

  ConditionalDatabase& filtered = merge ? scratch_ : out;
  filtered.reset(anchor, track);
  for (std::uint32_t r : extent_rows) {
    row_buf_.clear();
    for (AttrId a : db.row(r))
      if (a <= max_attr && keep_[a]) row_buf_.push_back(a);
    filtered.add_row(row_buf_, db.weight(r), db.origins(r));
  }
  if (!merge) {
    out.set_attributes(prefix, suffix);
    return;
  }

  const std::size_t m = scratch_.num_rows();
  order_.resize(m);
  hashes_.resize(m);
  for (std::uint32_t k = 0; k < m; ++k) {
    order_[k] = k;
    std::uint64_t h = 1469598103934665603ull;
    for (AttrId a : scratch_.suffix(k)) h = (h ^ a) * 1099511628211ull;
    hashes_[k] = h;
  }
  auto same_suffix = [&](std::uint32_t a, std::uint32_t b) {
    auto sa = scratch_.suffix(a), sb = scratch_.suffix(b);
    return std::equal(sa.begin(), sa.end(), sb.begin(), sb.end());
  };
  std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (hashes_[a] != hashes_[b]) return hashes_[a] < hashes_[b];
    auto sa = scratch_.suffix(a), sb = scratch_.suffix(b);
    if (!std::equal(sa.begin(), sa.end(), sb.begin(), sb.end()))
      return std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end());
    return a < b;
  });

  // Groups of equal suffix as [begin, end) ranges of order_, emitted in
  // order of their first source row.
  auto& groups = groups_;
  groups.clear();
  for (std::uint32_t k = 0; k < m;) {
    std::uint32_t e = k + 1;
    while (e < m && hashes_[order_[e]] == hashes_[order_[k]] && same_suffix(order_[e], order_[k])) ++e;
    groups.emplace_back(k, e);
    k = e;
  }
  std::sort(groups.begin(), groups.end(),
            [&](const auto& a, const auto& b) { return order_[a.first] < order_[b.first]; });

  out.reset(anchor, track);
  for (auto [b, e] : groups) {
    auto first = scratch_.prefix(order_[b]);
    prefix_buf_.assign(first.begin(), first.end());
    Weight w = 0;
    origin_buf_.clear();
    for (std::uint32_t k = b; k < e; ++k) {
      const std::uint32_t r = order_[k];
      w += scratch_.weight(r);
      if (k > b) {
        auto p = scratch_.prefix(r);
        next_buf_.clear();
        std::set_intersection(prefix_buf_.begin(), prefix_buf_.end(), p.begin(), p.end(),
                              std::back_inserter(next_buf_));
        prefix_buf_.swap(next_buf_);
      }
      if (track) {
        auto o = scratch_.origins(r);
        origin_buf_.insert(origin_buf_.end(), o.begin(), o.end());
      }
    }
    auto sfx = scratch_.suffix(order_[b]);
    row_buf_.assign(prefix_buf_.begin(), prefix_buf_.end());
    row_buf_.insert(row_buf_.end(), sfx.begin(), sfx.end());
    std::sort(origin_buf_.begin(), origin_buf_.end());
    out.add_row(row_buf_, w, origin_buf_);
  }
  out.set_attributes(prefix, suffix);
}

ConditionalDatabase create_conditional_db(const ConditionalDatabase& db, const Bucket& extent,
                                          AttrId anchor, Weight min_support,
                                          const MergeThreshold& threshold) {
  FrequencyTable freq;
  freq.count(db, extent.rows);
  ConditionalDbBuilder builder;
  ConditionalDatabase out;
  builder.build(db, extent.rows, freq, anchor, min_support, threshold, out);
  return out;
}

// ---------------------------------------------------------------------------
// Pruning rules

void PruneRuleStore::enter_frame() { frames_.push_back(rules_.size()); }

void PruneRuleStore::exit_frame() {
  const std::size_t mark = frames_.empty() ? 0 : frames_.back();
  if (!frames_.empty()) frames_.pop_back();
  while (rules_.size() > mark) {
    const Rule& r = rules_.back();
    if (r.alive) {
      --left_count_[r.left];
      --live_;
    }
    rules_.pop_back();
  }
}

void PruneRuleStore::record_failure(AttrId i, AttrId j) {
  rules_.push_back({i, j, true});
  if (i >= left_count_.size()) left_count_.resize(i + 1, 0);
  ++left_count_[i];
  ++live_;
}

void PruneRuleStore::remove_rules_by_right_side(AttrId j) {
  if (live_ == 0) return;
  for (auto& r : rules_) {
    if (r.alive && r.right == j) {
      r.alive = false;
      --left_count_[r.left];
      --live_;
    }
  }
}

bool PruneRuleStore::should_skip(AttrId i) const {
  return i < left_count_.size() && left_count_[i] > 0;
}

// ---------------------------------------------------------------------------
// Engine

namespace {

class LcmEngine {
 public:
  LcmEngine(const FormalContext& ctx, Weight min_support, const ConceptSink& sink,
            const LcmOptions& options, SubtreeDelegate* delegate)
      : ctx_(ctx),
        min_support_(min_support),
        sink_(sink),
        options_(options),
        delegate_(delegate),
        track_(options.with_extents || options.hooks.any()),
        arena_(ctx.num_attributes()),
        freq_(ctx.num_attributes()),
        dbs_(ctx.num_attributes() + 2),
        intents_(ctx.num_attributes() + 2) {}

  EnumerationStats run() {
    root_ = ConditionalDatabase::from_context(ctx_, track_);
    std::vector<std::uint32_t> all(root_.num_rows());
    for (std::uint32_t r = 0; r < all.size(); ++r) all[r] = r;

    if (ctx_.num_objects() == 0) {
      // X↑ of an empty object set is the full attribute set.
      if (min_support_ == 0) {
        AttributeSet full(ctx_.num_attributes());
        for (AttrId a = 1; a <= full.size(); ++a) full[a - 1] = a;
        emit_bottom(std::move(full));
      }
      return stats_;
    }
    if (ctx_.total_weight() < min_support_) return stats_;

    AttributeSet generator;
    generate_from(root_, all, generator, 0, 0);

    // Buckets are never empty, so the full attribute set with an empty
    // extent is not reached by the recursion.
    if (min_support_ == 0 && ctx_.num_attributes() > 0) {
      const std::size_t n = ctx_.num_attributes();
      bool covered = std::any_of(ctx_.rows().begin(), ctx_.rows().end(),
                                 [n](const AttributeSet& r) { return r.size() == n; });
      if (!covered) {
        AttributeSet full(n);
        for (AttrId a = 1; a <= n; ++a) full[a - 1] = a;
        emit_bottom(std::move(full));
      }
    }
    return stats_;
  }

  const PruneRuleStore& rules() const { return rules_; }

 private:
  void emit_bottom(AttributeSet full) {
    ++stats_.recursive_calls;
    ++stats_.concepts_emitted;
    Concept c{std::move(full), 0, std::nullopt};
    if (options_.with_extents) c.extent = std::vector<ObjId>{};
    sink_(std::move(c));
  }

  void collect_extent(const ConditionalDatabase& db, std::span<const std::uint32_t> rows,
                      std::vector<ObjId>& out) const {
    out.clear();
    if (!track_) return;
    for (std::uint32_t r : rows) {
      auto o = db.origins(r);
      out.insert(out.end(), o.begin(), o.end());
    }
    std::sort(out.begin(), out.end());
  }

  /// Returns 0 when the call emitted a concept, otherwise the smallest
  /// attribute below y whose frequency equals the extent weight.
  AttrId generate_from(const ConditionalDatabase& db, std::span<const std::uint32_t> rows,
                       const AttributeSet& generator, AttrId y, std::size_t depth) {
    ++stats_.recursive_calls;
    ++stats_.closure_computations;
    freq_.count(db, rows);
    const Weight extent_weight = freq_.extent_weight();

    std::vector<ObjId> extent;
    collect_extent(db, rows, extent);
    if (options_.hooks.on_call)
      options_.hooks.on_call({generator, y, extent, extent_weight, db, freq_});

    if (options_.pruning) rules_.remove_rules_by_right_side(y);

    AttrId violator = 0;
    for (AttrId i : freq_.touched())
      if (i < y && freq_[i] == extent_weight && (violator == 0 || i < violator)) violator = i;
    if (violator != 0) {
      ++stats_.canonicity_failures;
      return violator;
    }
    AttributeSet& intent = intents_[depth];
    intent = generator;
    for (AttrId i : freq_.touched())
      if (i > y && freq_[i] == extent_weight) intent.push_back(i);
    std::sort(intent.begin(), intent.end());

    ++stats_.concepts_emitted;
    {
      Concept c{intent, extent_weight, std::nullopt};
      if (options_.with_extents) c.extent = extent;
      sink_(std::move(c));
    }

    ConditionalDatabase& cond = dbs_[depth];
    builder_.build(db, rows, freq_, y, min_support_, options_.merge, cond);
    ++stats_.conditional_dbs_built;

    if (delegate_) {
      SubtreeDelegate::Request req{cond, intent, min_support_, options_.with_extents, sink_, stats_};
      if (delegate_->enumerate_subtree(req)) return 0;
    }

    const AttributeSet& children = cond.suffix_attrs();
    occurrence_deliver(cond, children, arena_);
    if (options_.hooks.on_node)
      options_.hooks.on_node({intent, extent, extent_weight, cond, arena_});

    if (options_.pruning) rules_.enter_frame();
    AttributeSet child_generator;
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      const AttrId i = *it;
      if (options_.pruning && rules_.should_skip(i)) {
        ++stats_.pruning_rule_hits;
        if (options_.hooks.on_skip) options_.hooks.on_skip(intent, i);
        if (options_.verify_pruning) verify_skip(intent, i);
        continue;
      }
      child_generator = intent;
      child_generator.insert(std::upper_bound(child_generator.begin(), child_generator.end(), i), i);
      const AttrId j = generate_from(cond, arena_[i].rows, child_generator, i, depth + 1);
      if (options_.pruning && j > 0) rules_.record_failure(i, j);
    }
    if (options_.pruning) rules_.exit_frame();
    return 0;
  }

  void verify_skip(const AttributeSet& intent, AttrId i) const {
    AttributeSet gen = intent;
    gen.insert(std::upper_bound(gen.begin(), gen.end(), i), i);
    const AttributeSet closed = closure(ctx_, gen);
    if (canonicity_test(gen, closed, i).passed)
      throw std::logic_error("pruning skipped attribute " + std::to_string(i) +
                             " although its closure passes the canonicity test");
  }

  const FormalContext& ctx_;
  Weight min_support_;
  const ConceptSink& sink_;
  const LcmOptions& options_;
  SubtreeDelegate* delegate_;
  bool track_;
  ConditionalDatabase root_;
  BucketArena arena_;
  FrequencyTable freq_;
  ConditionalDbBuilder builder_;
  std::vector<ConditionalDatabase> dbs_;
  std::vector<AttributeSet> intents_;
  PruneRuleStore rules_;
  EnumerationStats stats_;
};

}  // namespace

EnumerationStats lcm_enumerate_with(const FormalContext& ctx, Weight min_support,
                                    const ConceptSink& sink, const LcmOptions& options,
                                    SubtreeDelegate* delegate) {
  LcmEngine engine(ctx, min_support, sink, options, delegate);
  EnumerationStats stats = engine.run();
  if (!engine.rules().empty()) throw std::logic_error("pruning rules left after the root call");
  return stats;
}

EnumerationStats lcm2_enumerate(const FormalContext& ctx, Weight min_support,
                                const ConceptSink& sink, const LcmOptions& options) {
  return lcm_enumerate_with(ctx, min_support, sink, options, nullptr);
}

EnumerationResult lcm2_enumerate(const FormalContext& ctx, Weight min_support,
                                 const LcmOptions& options) {
  EnumerationResult r;
  r.stats = lcm2_enumerate(
      ctx, min_support, [&](Concept&& c) { r.concepts.push_back(std::move(c)); }, options);
  return r;
}

}  // namespace fca
