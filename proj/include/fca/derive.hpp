#pragma once

#include <functional>
#include <vector>

#include "fca/context.hpp"

namespace fca {

/// Attributes shared by every object of `objects`; the full attribute set
/// for an empty argument. Throws std::out_of_range on a bad object id.
AttributeSet up(const FormalContext& ctx, const std::vector<ObjId>& objects);

/// Objects having every attribute of `attrs`, with their weighted size.
/// Throws std::out_of_range on a bad attribute id.
ObjectSet down(const FormalContext& ctx, const AttributeSet& attrs);

/// up(down(attrs)).
AttributeSet closure(const FormalContext& ctx, const AttributeSet& attrs);

inline constexpr std::size_t kNaiveAttributeCap = 24;

struct NaiveOptions {
  std::size_t attribute_cap = kNaiveAttributeCap;
  bool with_extents = false;
};

struct NaiveResult {
  std::vector<Concept> concepts;
  EnumerationStats stats;
};

/// Walks the tree of all attribute subsets depth first and keeps the closed
/// ones with support >= min_support. Throws CapacityError when the context
/// has more attributes than options.attribute_cap.
NaiveResult enumerate_naive(const FormalContext& ctx, Weight min_support,
                            const NaiveOptions& options = {});

}  // namespace fca
