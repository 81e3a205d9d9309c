#include "fca/cbo.hpp"

#include <algorithm>

#include "fca/bitset.hpp"

namespace fca {

CanonicityOutcome canonicity_test(const AttributeSet& b, const AttributeSet& d, AttrId i) {
  auto bi = b.begin();
  for (AttrId a : d) {
    if (a >= i) break;
    while (bi != b.end() && *bi < a) ++bi;
    if (bi == b.end() || *bi != a) return {false, a};
  }
  return {true, 0};
}

namespace {

class CboWalk {
 public:
  CboWalk(const FormalContext& ctx, Weight min_support, const ConceptSink& sink,
          const CboOptions& options)
      : ctx_(ctx),
        min_support_(min_support),
        sink_(sink),
        options_(options),
        n_(ctx.num_attributes()),
        words_(bits::words_for(n_)),
        rows_(ctx.num_objects() * words_, 0) {
    for (ObjId x = 0; x < ctx.num_objects(); ++x)
      for (AttrId a : ctx.row(x)) bits::set(row_bits(x), a);
    intents_.resize(n_ + 2);  // recursion depth never exceeds n + 1
  }

  EnumerationStats run() {
    std::vector<ObjId> all(ctx_.num_objects());
    for (ObjId x = 0; x < all.size(); ++x) all[x] = x;
    if (ctx_.total_weight() < min_support_) return stats_;
    std::vector<bits::Word> empty(words_, 0);
    generate_from(all, empty, 0, 0);
    return stats_;
  }

 private:
  std::span<bits::Word> row_bits(ObjId x) { return {rows_.data() + x * words_, words_}; }

  std::vector<bits::Word>& intent_buffer(std::size_t depth) {
    intents_[depth].assign(words_, 0);
    return intents_[depth];
  }

  void generate_from(const std::vector<ObjId>& extent, const std::vector<bits::Word>& b, AttrId y,
                     std::size_t depth) {
    ++stats_.recursive_calls;
    ++stats_.closure_computations;
    auto& d = intent_buffer(depth);
    bits::fill(d, n_);
    Weight support = 0;
    for (ObjId x : extent) {
      bits::intersect(d, row_bits(x));
      support += ctx_.weight(x);
    }
    if (bits::first_difference_below(d, b, y) != 0) {
      ++stats_.canonicity_failures;
      return;
    }
    Concept c;
    bits::for_each(d, [&](std::size_t p) { c.intent.push_back(static_cast<AttrId>(p)); });
    c.support = support;
    if (options_.with_extents) c.extent = extent;
    ++stats_.concepts_emitted;
    sink_(std::move(c));

    std::vector<ObjId> child;
    std::vector<bits::Word> child_b;
    for (AttrId i = y + 1; i <= n_; ++i) {
      if (bits::test(d, i)) continue;
      child.clear();
      Weight w = 0;
      for (ObjId x : extent) {
        if (bits::test(row_bits(x), i)) {
          child.push_back(x);
          w += ctx_.weight(x);
        }
      }
      if (w < min_support_) continue;
      child_b = d;
      bits::set(child_b, i);
      generate_from(child, child_b, i, depth + 1);
    }
  }

  const FormalContext& ctx_;
  Weight min_support_;
  const ConceptSink& sink_;
  const CboOptions& options_;
  std::size_t n_;
  std::size_t words_;
  std::vector<bits::Word> rows_;
  std::vector<std::vector<bits::Word>> intents_;
  EnumerationStats stats_;
};

}  // namespace

EnumerationStats cbo_enumerate(const FormalContext& ctx, Weight min_support,
                               const ConceptSink& sink, const CboOptions& options) {
  return CboWalk(ctx, min_support, sink, options).run();
}

EnumerationResult cbo_enumerate(const FormalContext& ctx, Weight min_support,
                                const CboOptions& options) {
  EnumerationResult r;
  r.stats = cbo_enumerate(
      ctx, min_support, [&](Concept&& c) { r.concepts.push_back(std::move(c)); }, options);
  return r;
}

}  // namespace fca
