#pragma once

#include "fca/context.hpp"

namespace fca {

struct CanonicityOutcome {
  bool passed = true;
  AttrId violator = 0;  // smallest j < i in D \ B; 0 when passed

  bool operator==(const CanonicityOutcome&) const = default;
};

/// Passes iff D and B agree on attributes below i. Requires B ⊆ D.
CanonicityOutcome canonicity_test(const AttributeSet& b, const AttributeSet& d, AttrId i);

struct CboOptions {
  bool with_extents = false;
};

/// Close-by-One, children in ascending attribute order. Concepts go to
/// `sink` in generation order.
EnumerationStats cbo_enumerate(const FormalContext& ctx, Weight min_support,
                               const ConceptSink& sink, const CboOptions& options = {});

EnumerationResult cbo_enumerate(const FormalContext& ctx, Weight min_support,
                                const CboOptions& options = {});

}  // namespace fca
