#include "fca/derive.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fca {

AttributeSet up(const FormalContext& ctx, const std::vector<ObjId>& objects) {
  AttributeSet result(ctx.num_attributes());
  std::iota(result.begin(), result.end(), AttrId{1});
  for (ObjId x : objects) {
    if (x >= ctx.num_objects()) throw std::out_of_range("object " + std::to_string(x));
    auto row = ctx.row(x);
    AttributeSet next;
    std::set_intersection(result.begin(), result.end(), row.begin(), row.end(),
                          std::back_inserter(next));
    result = std::move(next);
  }
  return result;
}

ObjectSet down(const FormalContext& ctx, const AttributeSet& attrs) {
  for (AttrId a : attrs)
    if (a < 1 || a > ctx.num_attributes()) throw std::out_of_range("attribute " + std::to_string(a));
  ObjectSet result;
  for (ObjId x = 0; x < ctx.num_objects(); ++x) {
    auto row = ctx.row(x);
    if (std::includes(row.begin(), row.end(), attrs.begin(), attrs.end())) {
      result.objects.push_back(x);
      result.weighted_size += ctx.weight(x);
    }
  }
  return result;
}

AttributeSet closure(const FormalContext& ctx, const AttributeSet& attrs) {
  return up(ctx, down(ctx, attrs).objects);
}

namespace {

struct NaiveWalk {
  const FormalContext& ctx;
  Weight min_support;
  bool with_extents;
  NaiveResult& out;

  void generate_from(AttributeSet& b, AttrId y) {
    ++out.stats.recursive_calls;
    ++out.stats.closure_computations;
    ObjectSet ext = down(ctx, b);
    if (up(ctx, ext.objects) == b && ext.weighted_size >= min_support) {
      Concept c{b, ext.weighted_size, std::nullopt};
      if (with_extents) c.extent = std::move(ext.objects);
      out.concepts.push_back(std::move(c));
      ++out.stats.concepts_emitted;
    }
    for (AttrId i = y + 1; i <= ctx.num_attributes(); ++i) {
      b.push_back(i);
      generate_from(b, i);
      b.pop_back();
    }
  }
};

}  // namespace

NaiveResult enumerate_naive(const FormalContext& ctx, Weight min_support,
                            const NaiveOptions& options) {
  if (ctx.num_attributes() > options.attribute_cap)
    throw CapacityError("naive enumeration is capped at " + std::to_string(options.attribute_cap) +
                        " attributes, context has " + std::to_string(ctx.num_attributes()));
  NaiveResult result;
  AttributeSet b;
  NaiveWalk{ctx, min_support, options.with_extents, result}.generate_from(b, 0);
  return result;
}

}  // namespace fca
