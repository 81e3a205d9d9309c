#include "fca/fptree.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace fca {

namespace {
constexpr CompleteFpTree::NodeId kNoNode = ~CompleteFpTree::NodeId{0};
}

void CompleteFpTree::reset(std::size_t width, bool track_origins) {
  width_ = width;
  words_ = bits::words_for(width);
  track_origins_ = track_origins;
  path_bits_.clear();
  inner_bits_.clear();
  weights_.clear();
  origins_.clear();
  if (lists_.size() < width + 1) lists_.resize(width + 1);
  for (auto& l : lists_) l.clear();
  list_weight_.assign(width + 1, 0);
  index_.clear();
  next_.clear();
  scratch_.assign(2 * words_, 0);
}

std::span<const std::uint32_t> CompleteFpTree::origins(NodeId n) const {
  if (!track_origins_) return {};
  return origins_[n];
}

CompleteFpTree::NodeId CompleteFpTree::insert(std::span<const bits::Word> path,
                                              std::span<const bits::Word> inner, Weight weight,
                                              std::span<const std::uint32_t> origins) {
  // Inputs may alias this tree's storage; work from a copy.
  if (path.data() != scratch_.data()) std::copy(path.begin(), path.end(), scratch_.begin());
  if (inner.data() != scratch_.data() + words_)
    std::copy(inner.begin(), inner.end(), scratch_.begin() + words_);
  std::span<const bits::Word> p(scratch_.data(), words_);
  std::span<const bits::Word> in(scratch_.data() + words_, words_);

  const std::size_t list = bits::highest(p);
  if (list == 0) throw std::invalid_argument("FP-tree node with an empty path");
  const std::uint64_t h = bits::hash(p);
  auto it = index_.find(h);
  for (NodeId n = it == index_.end() ? kNoNode : it->second; n != kNoNode; n = next_[n]) {
    if (bits::equal(this->path(n), p)) {
      weights_[n] += weight;
      bits::intersect({inner_bits_.data() + n * words_, words_}, in);
      if (track_origins_) {
        auto& o = origins_[n];
        o.insert(o.end(), origins.begin(), origins.end());
      }
      list_weight_[list] += weight;
      return n;
    }
  }
  const NodeId n = static_cast<NodeId>(weights_.size());
  path_bits_.insert(path_bits_.end(), p.begin(), p.end());
  inner_bits_.insert(inner_bits_.end(), in.begin(), in.end());
  weights_.push_back(weight);
  if (track_origins_) {
    std::vector<std::uint32_t> o(origins.begin(), origins.end());
    origins_.push_back(std::move(o));
  }
  next_.push_back(it == index_.end() ? kNoNode : it->second);
  index_[h] = n;
  lists_[list].push_back(n);
  list_weight_[list] += weight;
  return n;
}

void CompleteFpTree::initial_step(std::span<const AttributeSet> rows,
                                  std::span<const Weight> weights) {
  std::vector<bits::Word> row_bits(words_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].empty()) throw std::invalid_argument("FP-tree input row " + std::to_string(r) + " is empty");
    std::fill(row_bits.begin(), row_bits.end(), 0);
    for (AttrId pos : rows[r]) {
      if (pos < 1 || pos > width_)
        throw std::out_of_range("position " + std::to_string(pos) + " outside the FP-tree universe");
      bits::set(row_bits, pos);
    }
    const std::uint32_t origin = static_cast<std::uint32_t>(r);
    insert(row_bits, row_bits, weights.empty() ? 1 : weights[r],
           track_origins_ ? std::span<const std::uint32_t>(&origin, 1) : std::span<const std::uint32_t>{});
  }
}

void CompleteFpTree::extend_into(NodeId n, std::size_t a, CompleteFpTree& target) const {
  auto& buf = target.scratch_;
  std::copy(path(n).begin(), path(n).end(), buf.begin());
  std::copy(inner(n).begin(), inner(n).end(), buf.begin() + words_);
  std::span<bits::Word> p(buf.data(), words_);
  bits::reset(p, a);
  if (bits::none(p)) return;
  target.insert(p, {buf.data() + words_, words_}, weights_[n], origins(n));
}

void CompleteFpTree::extension_step(std::size_t from, Weight min_support) {
  for (std::size_t a = std::min(from, width_ + 1); a-- > 1;) {
    // Inserts land strictly below a, so list a is stable while we walk it.
    for (std::size_t k = 0; k < lists_[a].size(); ++k) extend_into(lists_[a][k], a, *this);
    if (list_weight_[a] < min_support) drop_list(a);
  }
}

void CompleteFpTree::drop_list(std::size_t a) {
  lists_.at(a).clear();
  list_weight_.at(a) = 0;
}

CompleteFpTree build_complete_fptree(std::size_t width, std::span<const AttributeSet> rows,
                                     std::span<const Weight> weights) {
  CompleteFpTree tree(width);
  tree.initial_step(rows, weights);
  tree.extension_step();
  return tree;
}

void conditional_fptree(const CompleteFpTree& tree, std::size_t a, Weight min_support,
                        CompleteFpTree& out) {
  out.reset(tree.width(), tree.tracks_origins());
  if (a < 1 || a > tree.width()) throw std::out_of_range("no list " + std::to_string(a));
  for (auto n : tree.list(a)) tree.extend_into(n, a, out);
  out.extension_step(a, min_support);
}

CompleteFpTree conditional_fptree(const CompleteFpTree& tree, std::size_t a, Weight min_support) {
  CompleteFpTree out;
  conditional_fptree(tree, a, min_support, out);
  return out;
}

std::optional<ListIntent> intent_of_list(const CompleteFpTree& tree, std::size_t a) {
  auto nodes = tree.list(a);
  if (nodes.empty()) return std::nullopt;
  std::vector<bits::Word> acc(tree.inner(nodes[0]).begin(), tree.inner(nodes[0]).end());
  ListIntent out;
  for (auto n : nodes) {
    bits::intersect(acc, tree.inner(n));
    out.support += tree.weight(n);
  }
  bits::for_each(acc, [&](std::size_t p) { out.intent.push_back(static_cast<AttrId>(p)); });
  return out;
}

// ---------------------------------------------------------------------------
// FP-tree subtree engine

namespace {

/// Enumerates the subtree of an arraylist node from a complete FP-tree over
/// its conditional database. Positions 1..p hold the prefix attributes
/// (interior intersections, inner sets only), p+1..w the suffix ones. The
/// walk extends toward lower positions: a child at position b is canonical
/// when its closure adds nothing above b and no prefix attribute.
class FpSubtreeEngine : public SubtreeDelegate {
 public:
  FpSubtreeEngine(std::size_t dense_width, bool reuse) : dense_width_(dense_width), reuse_(reuse) {}

  bool enumerate_subtree(const Request& req) override {
    const auto& db = req.db;
    if (db.suffix_attrs().empty()) return false;
    const std::size_t width = db.prefix_attrs().size() + db.suffix_attrs().size();
    if (width > dense_width_) return false;
    if (width > kMaxDenseWidth)
      throw CapacityError("conditional database spans " + std::to_string(width) +
                          " attributes, above the bit-array capacity " + std::to_string(kMaxDenseWidth));

    req_ = &req;
    prefix_width_ = db.prefix_attrs().size();
    attr_of_.assign(db.prefix_attrs().begin(), db.prefix_attrs().end());
    attr_of_.insert(attr_of_.end(), db.suffix_attrs().begin(), db.suffix_attrs().end());
    AttrId max_attr = attr_of_.back();
    if (pos_of_.size() <= max_attr) pos_of_.resize(max_attr + 1, 0);
    for (std::size_t k = 0; k < attr_of_.size(); ++k) pos_of_[attr_of_[k]] = static_cast<AttrId>(k + 1);

    const bool track = req.with_extents && db.tracks_origins();
    CompleteFpTree& root = tree_at(0);
    root.reset(width, track);
    const std::size_t words = bits::words_for(width);
    std::vector<bits::Word> path(words), inner(words);
    for (std::size_t r = 0; r < db.num_rows(); ++r) {
      if (db.suffix(r).empty()) continue;
      std::fill(path.begin(), path.end(), 0);
      std::fill(inner.begin(), inner.end(), 0);
      for (AttrId a : db.prefix(r)) bits::set(inner, pos_of_[a]);
      for (AttrId a : db.suffix(r)) {
        bits::set(inner, pos_of_[a]);
        bits::set(path, pos_of_[a]);
      }
      const std::uint32_t origin = static_cast<std::uint32_t>(r);
      root.insert(path, inner, db.weight(r),
                  track ? std::span<const std::uint32_t>(&origin, 1) : std::span<const std::uint32_t>{});
    }
    root.extension_step();
    ++req.stats.conditional_dbs_built;

    std::vector<bits::Word> closed(words, 0);
    walk(root, closed, width + 1, 0);
    req_ = nullptr;
    return true;
  }

 private:
  CompleteFpTree& tree_at(std::size_t depth) {
    if (!reuse_) {
      scratch_trees_.emplace_back();
      return scratch_trees_.back();
    }
    while (trees_.size() <= depth) trees_.emplace_back();
    return trees_[depth];
  }

  void walk(const CompleteFpTree& tree, std::span<const bits::Word> closed, std::size_t bound,
            std::size_t depth) {
    const Request& req = *req_;
    const Weight min_count = std::max<Weight>(req.min_support, 1);
    std::vector<bits::Word> acc(tree.words());
    for (std::size_t b = bound; b-- > prefix_width_ + 1;) {
      if (bits::test(closed, b)) continue;
      auto nodes = tree.list(b);
      if (nodes.empty() || tree.list_weight(b) < min_count) continue;

      ++req.stats.recursive_calls;
      ++req.stats.closure_computations;
      std::copy(tree.inner(nodes[0]).begin(), tree.inner(nodes[0]).end(), acc.begin());
      for (auto n : nodes) bits::intersect(acc, tree.inner(n));
      if (bits::differs_above(acc, closed, b) ||
          bits::first_difference_below(acc, closed, prefix_width_ + 1) != 0) {
        ++req.stats.canonicity_failures;
        continue;
      }

      Concept c;
      c.intent = req.intent;
      bits::for_each(acc, [&](std::size_t p) { c.intent.push_back(attr_of_[p - 1]); });
      std::sort(c.intent.begin(), c.intent.end());
      c.support = tree.list_weight(b);
      if (req.with_extents) {
        std::vector<ObjId> ext;
        for (auto n : nodes)
          for (auto r : tree.origins(n)) {
            auto o = req.db.origins(r);
            ext.insert(ext.end(), o.begin(), o.end());
          }
        std::sort(ext.begin(), ext.end());
        c.extent = std::move(ext);
      }
      ++req.stats.concepts_emitted;
      req.sink(std::move(c));

      if (b > prefix_width_ + 1) {
        CompleteFpTree& child = tree_at(depth + 1);
        conditional_fptree(tree, b, req.min_support, child);
        ++req.stats.conditional_dbs_built;
        walk(child, acc, b, depth + 1);
        if (!reuse_) scratch_trees_.pop_back();
      }
    }
  }

  std::size_t dense_width_;
  bool reuse_;
  const Request* req_ = nullptr;
  std::size_t prefix_width_ = 0;
  std::vector<AttrId> attr_of_;  // position - 1 -> attribute
  std::vector<AttrId> pos_of_;   // attribute -> position
  std::deque<CompleteFpTree> trees_;
  std::deque<CompleteFpTree> scratch_trees_;
};

}  // namespace

EnumerationStats lcm3_enumerate(const FormalContext& ctx, Weight min_support,
                                const ConceptSink& sink, const Lcm3Options& options) {
  if (options.dense_width > kMaxDenseWidth && options.dense_width != kUnboundedDenseWidth)
    throw CapacityError("dense width " + std::to_string(options.dense_width) +
                        " exceeds the bit-array capacity " + std::to_string(kMaxDenseWidth));
  if (options.dense_width == 0) return lcm2_enumerate(ctx, min_support, sink, options.lcm);
  FpSubtreeEngine engine(options.dense_width, options.reuse_arena);
  return lcm_enumerate_with(ctx, min_support, sink, options.lcm, &engine);
}

EnumerationResult lcm3_enumerate(const FormalContext& ctx, Weight min_support,
                                 const Lcm3Options& options) {
  EnumerationResult r;
  r.stats = lcm3_enumerate(
      ctx, min_support, [&](Concept&& c) { r.concepts.push_back(std::move(c)); }, options);
  return r;
}

}  // namespace fca
