#include <random>

#include <gtest/gtest.h>

#include "moot/typeflow.hpp"
#include "support/oracles.hpp"

using namespace moot;

namespace {

// 0 top; 1, 2 below 0; 3 below both; 4 equivalent to 3.
SubsumptionOrder diamond() {
  Preorder p(5);
  auto le = [&](std::size_t a, std::size_t b) { p.insert(make_type_id(a), make_type_id(b)); };
  for (std::size_t i = 0; i < 5; ++i) {
    le(i, i);
    le(i, 0);
  }
  for (std::size_t low : {3, 4}) {
    le(low, 1);
    le(low, 2);
  }
  le(3, 4);
  le(4, 3);
  return SubsumptionOrder(p);
}

TypeId t(std::size_t i) { return make_type_id(i); }

}  // namespace

TEST(Antichain, RestrictMaximalUsesRepresentatives) {
  SubsumptionOrder o = diamond();
  EXPECT_EQ(o.representative(t(4)), t(3));
  Antichain a = restrict_maximal(o, {t(4), t(1)});
  EXPECT_EQ(a.members(), std::vector<TypeId>{t(1)});
  Antichain b = restrict_maximal(o, {t(4), t(3)});
  EXPECT_EQ(b.members(), std::vector<TypeId>{t(3)});
  EXPECT_EQ(top_antichain(o).members(), std::vector<TypeId>{t(0)});
}

TEST(Antichain, OrderAndJoin) {
  SubsumptionOrder o = diamond();
  Antichain low = restrict_maximal(o, {t(3)});
  Antichain sides = restrict_maximal(o, {t(1), t(2)});
  EXPECT_TRUE(leq(o, low, sides));
  EXPECT_FALSE(leq(o, sides, low));
  EXPECT_EQ(join(o, low, sides), sides);
  EXPECT_EQ(join(o, Antichain{}, low), low);
  EXPECT_EQ(downward_closure(o, sides).count(), 4u);
}

TEST(Typeflow, CrossClosureValidation) {
  SubsumptionOrder o = diamond();
  MatchRelation m;
  m.add(t(1), t(3));
  m.add(t(3), t(1));
  // Crossing (1, 3) and (3, 1) with 3 <= 1 demands (1, 1).
  auto missing = validate_cross_closed(m, o);
  ASSERT_EQ(missing.size(), 1u);
  EXPECT_EQ(missing[0], std::make_pair(t(1), t(1)));
  m.add(t(1), t(1));
  EXPECT_TRUE(validate_cross_closed(m, o).empty());
}

TEST(Typeflow, MatchTableInternsEqualRelations) {
  MatchTable table;
  MatchRelation a;
  a.add(t(1), t(2));
  a.add(t(0), t(0));
  MatchRelation b;
  b.add(t(0), t(0));
  b.add(t(1), t(2));
  b.add(t(1), t(2));
  EXPECT_EQ(table.intern(a), table.intern(b));
  EXPECT_EQ(table[0].pairs.size(), 2u);
}

TEST(Typeflow, SymbolicFlowEqualsDefinition) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    SubsumptionOrder order(oracle::random_preorder(rng, 7, 0.3, true));
    oracle::Pairs raw;
    std::bernoulli_distribution pick(0.15);
    for (std::size_t a = 0; a < 7; ++a)
      for (std::size_t b = 0; b < 7; ++b)
        if (pick(rng)) raw.insert({a, b});
    oracle::Pairs m = oracle::cross_close(raw, order);
    MatchTable table;
    MatchLabel label = table.add(oracle::to_relation(m, "m"));
    FlowMemo memo(order, table);
    Antichain a = oracle::random_antichain(rng, order, true);
    Antichain b = oracle::random_antichain(rng, order, true);
    auto [left, right] = oracle::flow(order, m, oracle::ids(a), oracle::ids(b));
    Flow f = flow_symbolic(memo, label, a, b);
    EXPECT_EQ(oracle::ids(f.left), left) << "case " << i;
    EXPECT_EQ(oracle::ids(f.right), right) << "case " << i;
    EXPECT_EQ(flow_naive(order, table[label], a, b), f) << "case " << i;
  }
}

TEST(Typeflow, MemoizationSavesSingletonEvaluations) {
  SubsumptionOrder o = diamond();
  MatchTable table;
  MatchRelation m;
  m.add(t(3), t(3));
  MatchLabel label = table.add(m);
  FlowMemo memo(o, table);
  Antichain sides = restrict_maximal(o, {t(1), t(2)});
  memo.flow(label, sides, sides);
  std::size_t first = memo.singleton_evaluations();
  memo.flow(label, sides, restrict_maximal(o, {t(1)}));
  EXPECT_EQ(memo.singleton_evaluations(), first);
  memo.flow(label, sides, sides);
  EXPECT_EQ(memo.cache_hits(), 1u);
}

TEST(Typeflow, TypingNarrowsAlongEdges) {
  SubsumptionOrder o = diamond();
  MatchTable table;
  MatchRelation sub;
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b)
      if (o.leq(t(a), t(b))) sub.add(t(a), t(b));
  MatchLabel le = table.add(sub);
  SyntaxGraph g;
  g.add_node("x");
  g.add_node("y");
  g.add_node("z");
  g.add_edge(0, 1, le);
  g.add_edge(1, 2, le);
  Typing init{top_antichain(o), restrict_maximal(o, {t(1)}), restrict_maximal(o, {t(2)})};
  TypingRun run = run_typing(g, table, o, init);
  // y must be below 1 and (to reach z) below 2: only 3 remains.
  EXPECT_EQ(run.typing[1].members(), std::vector<TypeId>{t(3)});
  EXPECT_EQ(run.typing[0].members(), std::vector<TypeId>{t(3)});
  EXPECT_EQ(run.typing[2].members(), std::vector<TypeId>{t(2)});

  TypingOptions shuffled;
  shuffled.schedule_seed = 99;
  EXPECT_EQ(run_typing(g, table, o, init, nullptr, shuffled).typing, run.typing);
  TypingOptions naive;
  naive.symbolic = false;
  EXPECT_EQ(run_typing(g, table, o, init, nullptr, naive).typing, run.typing);
}

TEST(Typeflow, Classification) {
  SubsumptionOrder o = diamond();
  Antichain one = restrict_maximal(o, {t(1)});
  Antichain two = restrict_maximal(o, {t(1), t(2)});
  EXPECT_EQ(classify_typing({one, one}).kind, Classification::Kind::Valid);
  EXPECT_EQ(classify_typing({one, one}).simple, (std::vector<TypeId>{t(1), t(1)}));
  auto ambiguous = classify_typing({one, two});
  EXPECT_EQ(ambiguous.kind, Classification::Kind::Ambiguous);
  EXPECT_EQ(ambiguous.nodes, std::vector<NodeId>{1});
  auto inconsistent = classify_typing({Antichain{}, two});
  EXPECT_EQ(inconsistent.kind, Classification::Kind::Inconsistent);
  EXPECT_EQ(inconsistent.nodes, std::vector<NodeId>{0});
}
