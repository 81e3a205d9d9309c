#include <gtest/gtest.h>

#include "fca/context.hpp"
#include "fca/derive.hpp"
#include "support.hpp"

using namespace fca;
using fca::ts::k1;

TEST(ParseFimi, K1Transcription) {
  auto ctx = parse_fimi("1 2 3\n1 3\n2 3\n3 4\n");
  ASSERT_EQ(ctx.num_objects(), 4u);
  EXPECT_EQ(ctx.num_attributes(), 4u);
  EXPECT_EQ(ctx.rows(), k1().rows());
  EXPECT_EQ(ctx.total_weight(), 4u);
}

TEST(ParseFimi, EmptyInput) {
  auto ctx = parse_fimi("");
  EXPECT_EQ(ctx.num_objects(), 0u);
  EXPECT_EQ(ctx.num_attributes(), 0u);
}

TEST(ParseFimi, DuplicatesCollapseAndIdsAreDense) {
  auto ctx = parse_fimi("2 2 2\n");
  ASSERT_EQ(ctx.num_objects(), 1u);
  EXPECT_EQ(ctx.num_attributes(), 1u);
  EXPECT_EQ(ctx.rows()[0], (AttributeSet{1}));
  EXPECT_EQ(ctx.label(1), 2u);
  EXPECT_EQ(ctx.weight(0), 1u);
}

TEST(ParseFimi, SparseIdsKeepLabels) {
  auto ctx = parse_fimi("10 7\n\n7 300\n");
  ASSERT_EQ(ctx.num_objects(), 3u);
  EXPECT_EQ(ctx.num_attributes(), 3u);
  EXPECT_EQ(ctx.rows()[0], (AttributeSet{1, 2}));
  EXPECT_TRUE(ctx.rows()[1].empty());
  EXPECT_EQ(ctx.rows()[2], (AttributeSet{1, 3}));
  EXPECT_EQ(ctx.labels(), (std::vector<std::uint64_t>{7, 10, 300}));
}

TEST(ParseFimi, CrlfAndTabs) {
  auto ctx = parse_fimi("1\t2\r\n3\r\n");
  ASSERT_EQ(ctx.num_objects(), 2u);
  EXPECT_EQ(ctx.rows()[1], (AttributeSet{3}));
}

TEST(ParseFimi, GarbageReportsLine) {
  try {
    parse_fimi("1 2\n3 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_fimi("-1\n"), ParseError);
}

TEST(ParseFimi, RoundTripThroughWriter) {
  auto ctx = parse_fimi("5 9\n\n9\n");
  auto again = parse_fimi(to_fimi(ctx));
  EXPECT_EQ(again.rows(), ctx.rows());
  EXPECT_EQ(again.labels(), ctx.labels());
}

TEST(ParseCxt, SingleCell) {
  auto ctx = parse_cxt("B\n\n1\n1\n\no1\na1\nX\n");
  ASSERT_EQ(ctx.num_objects(), 1u);
  EXPECT_EQ(ctx.rows()[0], (AttributeSet{1}));
  auto empty_row = parse_cxt("B\n\n1\n1\n\no1\na1\n.\n");
  ASSERT_EQ(empty_row.num_objects(), 1u);
  EXPECT_TRUE(empty_row.rows()[0].empty());
}

TEST(ParseCxt, Grid) {
  auto ctx = parse_cxt("B\nname\n2\n2\n\no1\no2\na\nb\nX.\n.X\n");
  ASSERT_EQ(ctx.num_objects(), 2u);
  EXPECT_EQ(ctx.rows()[0], (AttributeSet{1}));
  EXPECT_EQ(ctx.rows()[1], (AttributeSet{2}));
  EXPECT_EQ(ctx.attribute_names(), (std::vector<std::string>{"a", "b"}));
}

TEST(ParseCxt, Malformed) {
  EXPECT_THROW(parse_cxt("A\n"), ParseError);
  EXPECT_THROW(parse_cxt("B\n\n1\n2\n\no\na\nb\nX\n"), ParseError);
  EXPECT_THROW(parse_cxt("B\n\n1\n1\n\no\na\nQ\n"), ParseError);
  EXPECT_THROW(parse_cxt("B\n\n1\n1\n\no\na\n"), ParseError);
}

TEST(FormalContext, RejectsBadRows) {
  EXPECT_THROW(FormalContext(2, {{2, 1}}), std::invalid_argument);
  EXPECT_THROW(FormalContext(2, {{3}}), std::invalid_argument);
  EXPECT_THROW(FormalContext(2, {{1}}, {0}), std::invalid_argument);
}

TEST(Preprocess, K1Order) {
  auto pre = preprocess(k1(), 0);
  EXPECT_EQ(pre.remap.new_to_old, (std::vector<AttrId>{3, 1, 2, 4}));
  EXPECT_EQ(pre.context.num_objects(), 4u);
  EXPECT_EQ(pre.context.cardinalities(), (std::vector<Weight>{4, 2, 2, 1}));
  EXPECT_EQ(pre.context.rows(),
            (std::vector<AttributeSet>{{1, 2, 3}, {1, 2}, {1, 3}, {1, 4}}));
}

TEST(Preprocess, IdenticalRowsMerge) {
  auto pre = preprocess(FormalContext(1, {{1}, {1}, {1}}), 0);
  ASSERT_EQ(pre.context.num_objects(), 1u);
  EXPECT_EQ(pre.context.weight(0), 3u);
  EXPECT_EQ(pre.merge.sources[0], (std::vector<ObjId>{0, 1, 2}));
}

TEST(Preprocess, K1DropsInfrequentAttribute) {
  auto pre = preprocess(k1(), 2);
  EXPECT_EQ(pre.context.num_attributes(), 3u);
  EXPECT_FALSE(pre.remap.to_new(4).has_value());
  // Row {3,4} becomes {3}, i.e. new {1}.
  bool found = false;
  for (ObjId x = 0; x < pre.context.num_objects(); ++x)
    for (ObjId src : pre.merge.sources[x])
      if (src == 3) {
        found = true;
        EXPECT_EQ(pre.context.rows()[x], (AttributeSet{1}));
      }
  EXPECT_TRUE(found);
}

TEST(Preprocess, EmptyRowsAreDroppedAndCounted) {
  auto pre = preprocess(FormalContext(2, {{}, {1}, {}}), 0);
  EXPECT_EQ(pre.context.num_objects(), 1u);
  EXPECT_EQ(pre.dropped_weight, 2u);
  EXPECT_EQ(pre.context.num_attributes(), 1u);
}

TEST(Preprocess, NoSortKeepsOrder) {
  PreprocessOptions o;
  o.sort_attributes = false;
  auto pre = preprocess(k1(), 0, o);
  EXPECT_EQ(pre.remap.new_to_old, (std::vector<AttrId>{1, 2, 3, 4}));
}

TEST(Preprocess, Properties) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 300; ++round) {
    ts::RandomContextSpec spec;
    spec.density = 0.05 + 0.1 * (round % 5);
    spec.weighted = round % 2 == 1;
    auto ctx = ts::random_context(rng, spec);
    const Weight ms = round % 4;
    PreprocessOptions o;
    o.sort_objects = round % 3 == 0;
    o.merge_rows = round % 5 != 0;
    auto pre = preprocess(ctx, ms, o);

    for (AttrId a = 1; a <= pre.context.num_attributes(); ++a) {
      const AttrId old = pre.remap.to_old(a);
      ASSERT_EQ(pre.remap.to_new(old), a);
      // Cardinality is carried over, and clears the threshold.
      EXPECT_EQ(pre.context.cardinality(a), ctx.cardinality(old));
      EXPECT_GE(pre.context.cardinality(a), std::max<Weight>(ms, 1));
    }
    for (AttrId a = 2; a <= pre.context.num_attributes(); ++a)
      if (o.sort_attributes) EXPECT_GE(pre.context.cardinality(a - 1), pre.context.cardinality(a));

    // Weight conservation and faithful merges.
    EXPECT_EQ(pre.context.total_weight() + pre.dropped_weight, ctx.total_weight());
    std::vector<int> seen(ctx.num_objects(), 0);
    for (ObjId x = 0; x < pre.context.num_objects(); ++x) {
      Weight w = 0;
      for (ObjId src : pre.merge.sources[x]) {
        ++seen[src];
        w += ctx.weight(src);
        AttributeSet mapped;
        for (AttrId a : ctx.row(src))
          if (auto n = pre.remap.to_new(a)) mapped.push_back(*n);
        std::sort(mapped.begin(), mapped.end());
        EXPECT_EQ(mapped, pre.context.rows()[x]);
      }
      EXPECT_EQ(w, pre.context.weight(x));
    }
    for (ObjId x = 0; x < ctx.num_objects(); ++x) {
      if (std::any_of(ctx.row(x).begin(), ctx.row(x).end(),
                      [&](AttrId a) { return pre.remap.to_new(a).has_value(); }))
        EXPECT_EQ(seen[x], 1);
      else
        EXPECT_EQ(seen[x], 0);
    }

    // Support of any retained itemset is unchanged.
    auto s = ts::random_subset(rng, pre.context.num_attributes());
    AttributeSet old;
    for (AttrId a : s) old.push_back(pre.remap.to_old(a));
    std::sort(old.begin(), old.end());
    if (!s.empty()) EXPECT_EQ(down(pre.context, s).weighted_size, down(ctx, old).weighted_size);
  }
}

TEST(LiftConcepts, RestoresTopAndBottom) {
  FormalContext ctx(2, {{}, {1}, {1}});
  auto pre = preprocess(ctx, 0);
  std::vector<Concept> mined{{{1}, 2, std::nullopt}};
  auto lifted = lift_concepts(pre, mined, 0);
  ASSERT_EQ(lifted.size(), 3u);
  EXPECT_EQ(lifted[0].intent, AttributeSet{});
  EXPECT_EQ(lifted[0].support, 3u);
  EXPECT_EQ(lifted[1].intent, (AttributeSet{1}));
  EXPECT_EQ(lifted[2].intent, (AttributeSet{1, 2}));
  EXPECT_EQ(lifted[2].support, 0u);
}
