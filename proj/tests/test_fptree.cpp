#include <gtest/gtest.h>

#include <map>

#include "fca/derive.hpp"
#include "fca/fptree.hpp"
#include "support.hpp"

using namespace fca;

namespace {

// Renumbered K1, position 1 most frequent.
const std::vector<AttributeSet> kRows{{1, 2, 3}, {1, 2}, {1, 3}, {1, 4}};

struct NodeText {
  std::string path;
  Weight weight;
  std::string inner;
  bool operator==(const NodeText&) const = default;
};

std::ostream& operator<<(std::ostream& os, const NodeText& n) {
  return os << '<' << n.path << ',' << n.weight << ',' << n.inner << '>';
}

std::vector<NodeText> list_text(const CompleteFpTree& t, std::size_t a) {
  std::vector<NodeText> out;
  for (auto n : t.list(a))
    out.push_back({bits::to_string(t.path(n), t.width()), t.weight(n), bits::to_string(t.inner(n), t.width())});
  return out;
}

}  // namespace

TEST(CompleteFpTree, InitialStep) {
  CompleteFpTree t(4);
  t.initial_step(kRows);
  EXPECT_TRUE(t.list(1).empty());
  EXPECT_EQ(list_text(t, 2), (std::vector<NodeText>{{"1100", 1, "1100"}}));
  EXPECT_EQ(list_text(t, 3), (std::vector<NodeText>{{"1110", 1, "1110"}, {"1010", 1, "1010"}}));
  EXPECT_EQ(list_text(t, 4), (std::vector<NodeText>{{"1001", 1, "1001"}}));
}

TEST(CompleteFpTree, ExtensionStep) {
  auto t = build_complete_fptree(4, kRows);
  EXPECT_EQ(list_text(t, 1), (std::vector<NodeText>{{"1000", 4, "1000"}}));
  EXPECT_EQ(list_text(t, 2), (std::vector<NodeText>{{"1100", 2, "1100"}}));
  EXPECT_EQ(list_text(t, 3), (std::vector<NodeText>{{"1110", 1, "1110"}, {"1010", 1, "1010"}}));
  EXPECT_EQ(list_text(t, 4), (std::vector<NodeText>{{"1001", 1, "1001"}}));
}

TEST(CompleteFpTree, IdenticalRowsShareANode) {
  CompleteFpTree t(5);
  t.initial_step(std::vector<AttributeSet>{{3, 4, 5}, {3, 4, 5}});
  ASSERT_EQ(t.list(5).size(), 1u);
  EXPECT_EQ(t.weight(t.list(5)[0]), 2u);
}

TEST(CompleteFpTree, Errors) {
  CompleteFpTree t(3);
  EXPECT_THROW(t.initial_step(std::vector<AttributeSet>{{4}}), std::out_of_range);
  EXPECT_THROW(t.initial_step(std::vector<AttributeSet>{{}}), std::invalid_argument);
}

TEST(ConditionalFpTree, OnThree) {
  auto t = build_complete_fptree(4, kRows);
  auto c = conditional_fptree(t, 3);
  EXPECT_EQ(list_text(c, 1), (std::vector<NodeText>{{"1000", 2, "1010"}}));
  EXPECT_EQ(list_text(c, 2), (std::vector<NodeText>{{"1100", 1, "1110"}}));
  EXPECT_TRUE(c.list(3).empty());
  EXPECT_TRUE(c.list(4).empty());
}

TEST(ConditionalFpTree, EmptyCases) {
  auto one = build_complete_fptree(1, std::vector<AttributeSet>{{1}, {1}});
  auto c = conditional_fptree(one, 1);
  EXPECT_TRUE(c.list(1).empty());

  auto t = build_complete_fptree(4, std::vector<AttributeSet>{{1, 2}, {1}});
  auto e = conditional_fptree(t, 4);
  for (std::size_t a = 1; a <= 4; ++a) EXPECT_TRUE(e.list(a).empty());
}

TEST(ConditionalFpTree, DropsInfrequentLists) {
  auto t = build_complete_fptree(4, kRows);
  auto c = conditional_fptree(t, 3, 2);
  EXPECT_EQ(list_text(c, 1), (std::vector<NodeText>{{"1000", 2, "1010"}}));
  EXPECT_TRUE(c.list(2).empty());
}

TEST(IntentOfList, K1) {
  auto t = build_complete_fptree(4, kRows);
  auto l1 = intent_of_list(t, 1);
  ASSERT_TRUE(l1);
  EXPECT_EQ(l1->intent, (AttributeSet{1}));
  EXPECT_EQ(l1->support, 4u);
  auto l3 = intent_of_list(t, 3);
  EXPECT_EQ(l3->intent, (AttributeSet{1, 3}));
  EXPECT_EQ(l3->support, 2u);
  auto l4 = intent_of_list(t, 4);
  EXPECT_EQ(l4->intent, (AttributeSet{1, 4}));
  EXPECT_EQ(l4->support, 1u);
  EXPECT_FALSE(intent_of_list(conditional_fptree(t, 4), 4));
}

TEST(CompleteFpTree, StructuralInvariants) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 100; ++round) {
    ts::RandomContextSpec spec;
    spec.max_attributes = 16;
    spec.density = 0.4 + 0.1 * (round % 4);
    spec.weighted = round % 2 == 0;
    auto raw = ts::random_context(rng, spec);
    const auto pre = preprocess(raw, 0);
    const auto& ctx = pre.context;
    const std::size_t w = ctx.num_attributes();
    CompleteFpTree t(w, true);
    t.initial_step(ctx.rows(), ctx.weights());
    t.extension_step();
    for (std::size_t a = 1; a <= w; ++a) {
      Weight sum = 0;
      for (auto n : t.list(a)) {
        sum += t.weight(n);
        EXPECT_TRUE(bits::subset(t.path(n), t.inner(n)));
        EXPECT_EQ(bits::highest(t.path(n)), a);
        // Node soundness: inner is the intersection of exactly its rows, and
        // those rows are the ones whose prefix up to a equals the path.
        std::vector<bits::Word> acc(t.words());
        bits::fill(acc, w);
        Weight ow = 0;
        for (auto r : t.origins(n)) {
          std::vector<bits::Word> row(t.words());
          for (AttrId x : ctx.row(r)) bits::set(row, x);
          bits::intersect(acc, row);
          ow += ctx.weight(r);
          for (std::size_t p = 1; p <= a; ++p) EXPECT_EQ(bits::test(row, p), bits::test(t.path(n), p));
        }
        EXPECT_TRUE(bits::equal(acc, t.inner(n)));
        EXPECT_EQ(ow, t.weight(n));
      }
      EXPECT_EQ(sum, ctx.cardinality(static_cast<AttrId>(a)));
      EXPECT_EQ(sum, t.list_weight(a));
      if (auto li = intent_of_list(t, a)) {
        EXPECT_EQ(li->intent, closure(ctx, {static_cast<AttrId>(a)}));
        EXPECT_EQ(li->support, ctx.cardinality(static_cast<AttrId>(a)));
      }
    }
  }
}

TEST(ConditionalFpTree, ChainsMatchClosures) {
  std::mt19937_64 rng(78);
  for (int round = 0; round < 60; ++round) {
    auto pre = preprocess(ts::random_context(rng, {25, 10, 0.5, round % 2 == 1}), 0);
    const auto& ctx = pre.context;
    const std::size_t w = ctx.num_attributes();
    if (w < 2) continue;
    auto t = build_complete_fptree(w, ctx.rows(), ctx.weights());
    // Conditional tree on a then list b < a describes the rows holding {a, b}.
    for (std::size_t a = 2; a <= w; ++a) {
      auto c = conditional_fptree(t, a);
      for (std::size_t b = 1; b < a; ++b) {
        AttributeSet gen{static_cast<AttrId>(b), static_cast<AttrId>(a)};
        auto li = intent_of_list(c, b);
        const Weight support = ts::scan_support(ctx, gen);
        if (support == 0) {
          EXPECT_FALSE(li);
          continue;
        }
        ASSERT_TRUE(li);
        EXPECT_EQ(li->intent, closure(ctx, gen));
        EXPECT_EQ(li->support, support);
      }
    }
  }
}

TEST(Lcm3, K1) {
  for (std::size_t width : {std::size_t{0}, std::size_t{2}, std::size_t{4}, kUnboundedDenseWidth}) {
    Lcm3Options o;
    o.dense_width = width;
    EXPECT_EQ(ts::keys(lcm3_enumerate(ts::k1(), 0, o).concepts),
              ts::oracle_concepts(ts::k1(), 0));
    EXPECT_EQ(ts::keys(lcm3_enumerate(ts::k1(), 2, o).concepts),
              ts::oracle_concepts(ts::k1(), 2));
  }
}

TEST(Lcm3, WidthZeroIsLcm2) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 30; ++round) {
    auto ctx = ts::random_context(rng, {30, 12, 0.3, false});
    Lcm3Options o;
    o.dense_width = 0;
    auto a = lcm3_enumerate(ctx, 1, o);
    auto b = lcm2_enumerate(ctx, 1);
    EXPECT_EQ(a.stats, b.stats);
    ASSERT_EQ(a.concepts.size(), b.concepts.size());
    for (std::size_t k = 0; k < a.concepts.size(); ++k) {
      EXPECT_EQ(a.concepts[k].intent, b.concepts[k].intent);
      EXPECT_EQ(a.concepts[k].support, b.concepts[k].support);
    }
  }
}

TEST(Lcm3, WidthInvariance) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 200; ++round) {
    ts::RandomContextSpec spec;
    spec.density = std::vector<double>{0.05, 0.1, 0.25, 0.5}[round % 4];
    spec.weighted = round % 3 == 0;
    auto ctx = ts::random_context(rng, spec);
    for (Weight ms : {0, 1, 2, 3}) {
      const auto expected = ts::oracle_concepts(ctx, ms);
      for (std::size_t width : {std::size_t{0}, std::size_t{2}, std::size_t{4}, kUnboundedDenseWidth})
        for (bool reuse : {true, false}) {
          Lcm3Options o;
          o.dense_width = width;
          o.reuse_arena = reuse;
          o.lcm.pruning = round % 2 == 0;
          auto r = lcm3_enumerate(ctx, ms, o);
          ASSERT_EQ(ts::keys(r.concepts), expected)
              << "round " << round << " ms " << ms << " width " << width;
        }
    }
  }
}

TEST(Lcm3, Extents) {
  std::mt19937_64 rng(19);
  for (int round = 0; round < 60; ++round) {
    auto ctx = ts::random_context(rng, {20, 8, 0.5, true});
    Lcm3Options o;
    o.dense_width = kUnboundedDenseWidth;
    o.lcm.with_extents = true;
    for (const auto& c : lcm3_enumerate(ctx, 0, o).concepts) {
      ASSERT_TRUE(c.extent.has_value());
      EXPECT_EQ(*c.extent, down(ctx, c.intent).objects);
    }
  }
}

TEST(Lcm3, Capacity) {
  Lcm3Options o;
  o.dense_width = kMaxDenseWidth + 1;
  EXPECT_THROW(lcm3_enumerate(ts::k1(), 0, o), CapacityError);
  std::vector<AttributeSet> rows(2);
  for (AttrId a = 1; a <= kMaxDenseWidth + 2; ++a) rows[0].push_back(a);
  rows[1] = {1};
  o.dense_width = kUnboundedDenseWidth;
  EXPECT_THROW(lcm3_enumerate(FormalContext(kMaxDenseWidth + 2, rows), 0, o), CapacityError);
}
