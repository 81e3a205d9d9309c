#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "fca/context.hpp"

namespace fca::ts {

using ConceptKey = std::pair<AttributeSet, Weight>;

inline std::vector<ConceptKey> keys(const std::vector<Concept>& concepts) {
  std::vector<ConceptKey> out;
  out.reserve(concepts.size());
  for (const auto& c : concepts) out.emplace_back(c.intent, c.support);
  std::sort(out.begin(), out.end());
  return out;
}

inline FormalContext k1() { return FormalContext(4, {{1, 2, 3}, {1, 3}, {2, 3}, {3, 4}}); }

/// Closed sets by scanning every attribute bitmask. Shares nothing with the
/// library beyond the context's rows.
inline std::vector<ConceptKey> oracle_concepts(const FormalContext& ctx, Weight min_support) {
  const std::size_t n = ctx.num_attributes();
  const std::uint64_t full = n == 64 ? ~0ULL : (1ULL << n) - 1;
  std::vector<std::uint64_t> masks;
  for (const auto& row : ctx.rows()) {
    std::uint64_t m = 0;
    for (AttrId a : row) m |= 1ULL << (a - 1);
    masks.push_back(m);
  }
  std::vector<ConceptKey> out;
  for (std::uint64_t b = 0; b <= full; ++b) {
    std::uint64_t closed = full;
    Weight support = 0;
    for (std::size_t r = 0; r < masks.size(); ++r)
      if ((masks[r] & b) == b) {
        closed &= masks[r];
        support += ctx.weight(static_cast<ObjId>(r));
      }
    if (closed != b || support < min_support) continue;
    AttributeSet intent;
    for (std::size_t a = 0; a < n; ++a)
      if (b >> a & 1) intent.push_back(static_cast<AttrId>(a + 1));
    out.emplace_back(std::move(intent), support);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Weighted count of objects having every attribute of `attrs`, by scan.
inline Weight scan_support(const FormalContext& ctx, const AttributeSet& attrs) {
  Weight w = 0;
  for (ObjId x = 0; x < ctx.num_objects(); ++x) {
    const auto row = ctx.row(x);
    if (std::includes(row.begin(), row.end(), attrs.begin(), attrs.end())) w += ctx.weight(x);
  }
  return w;
}

struct RandomContextSpec {
  std::size_t max_objects = 30;
  std::size_t max_attributes = 12;
  double density = 0.25;
  bool weighted = false;
};

inline FormalContext random_context(std::mt19937_64& rng, const RandomContextSpec& spec) {
  std::uniform_int_distribution<std::size_t> objects(0, spec.max_objects);
  std::uniform_int_distribution<std::size_t> attrs(1, spec.max_attributes);
  std::bernoulli_distribution bit(spec.density);
  std::uniform_int_distribution<Weight> weight(1, 4);
  const std::size_t n = attrs(rng);
  const std::size_t m = objects(rng);
  std::vector<AttributeSet> rows(m);
  std::vector<Weight> weights(m, 1);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t a = 1; a <= n; ++a)
      if (bit(rng)) rows[x].push_back(static_cast<AttrId>(a));
    if (spec.weighted) weights[x] = weight(rng);
  }
  return FormalContext(n, std::move(rows), std::move(weights));
}

inline AttributeSet random_subset(std::mt19937_64& rng, std::size_t n, double p = 0.3) {
  std::bernoulli_distribution bit(p);
  AttributeSet s;
  for (std::size_t a = 1; a <= n; ++a)
    if (bit(rng)) s.push_back(static_cast<AttrId>(a));
  return s;
}

/// Rows permuted and attribute ids relabeled through `perm` (perm[a-1] is
/// the new id of a).
inline FormalContext relabel(const FormalContext& ctx, const std::vector<AttrId>& perm,
                             const std::vector<std::size_t>& row_order) {
  std::vector<AttributeSet> rows;
  std::vector<Weight> weights;
  for (auto x : row_order) {
    AttributeSet r;
    for (AttrId a : ctx.row(static_cast<ObjId>(x))) r.push_back(perm[a - 1]);
    std::sort(r.begin(), r.end());
    rows.push_back(std::move(r));
    weights.push_back(ctx.weight(static_cast<ObjId>(x)));
  }
  return FormalContext(ctx.num_attributes(), std::move(rows), std::move(weights));
}

}  // namespace fca::ts
