#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "maslov/games.hpp"
#include "maslov/search.hpp"

namespace maslov {
namespace {

using testing::make_structure;

OuterTypeSet beta_of(const Structure& A, int G) { return extract_type_set(augment(A, G), G); }

OuterTypeSet beta_for(const Prenex& p, const Structure& A) { return beta_of(A, p.K() + p.M()); }

// Independent minimax over the unreduced move lists.
bool naive_win(const SatGame& g, const Position& p) {
  switch (g.mover(p)) {
    case Player::None:
      return g.eloisa_won(p);
    case Player::Eloisa:
      for (auto& q : g.legal_moves(p))
        if (naive_win(g, q)) return true;
      return false;
    default:
      for (auto& q : g.legal_moves(p))
        if (!naive_win(g, q)) return false;
      return true;
  }
}

TEST(Moves, OpeningSingleOneType) {
  Formula f = parse_formula("forall x. P(x)");
  Prenex p = to_prenex(f);
  SatGame g(p, beta_for(p, make_structure(f.sig, 1, {{"P", {{1}}}})));
  EXPECT_EQ(g.index().ones.size(), 1u);
  auto moves = g.legal_moves(g.root());
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].t, 0);
  EXPECT_EQ(moves[0].f, std::vector<int>{1});
}

TEST(Moves, OpeningWithConstants) {
  Formula f = parse_formula("const c d; forall x. P(x)");
  Prenex p = to_prenex(f);
  SatGame g(p, beta_for(p, make_structure(f.sig, 1, {{"P", {{1}, {-1}, {-2}}}})));
  // Copies of c, d and 1 all share one 1-type; the other openings map x to a constant.
  EXPECT_EQ(g.index().ones.size(), 1u);
  EXPECT_EQ(g.legal_moves(g.root()).size(), 3u);
}

TEST(Moves, AbelardOptions) {
  Formula f = parse_formula("const c; forall x1 x2. (T(x1,x2) | forall y. exists z. (P(y) | R(y,z)))");
  Prenex p = to_prenex(f);
  ASSERT_EQ(p.K(), 2);
  ASSERT_EQ(p.word[0].q, Op::Forall);
  Structure A = make_structure(f.sig, 2, {{"P", {{1}}}, {"R", {{2, 1}, {-1, 1}}}, {"T", {{1, 2}}}});
  SatGame g(p, beta_for(p, A));
  for (auto& open : g.legal_moves(g.root())) {
    ASSERT_EQ(g.mover(open), Player::Abelard);
    auto moves = g.legal_moves(open);
    size_t fresh = g.index().ones.size();
    EXPECT_EQ(moves.size(), fresh + open.k() + 1);
    for (size_t i = 0; i < moves.size(); ++i) EXPECT_EQ(moves[i].k(), open.k() + (i < fresh ? 1 : 0));
  }
}

TEST(Moves, EloisaCountMatchesOuterTypes) {
  Formula f = parse_formula("forall x. exists y. R(x,y)");
  Prenex p = to_prenex(f);
  Structure A = make_structure(f.sig, 2, {{"R", {{1, 2}, {2, 2}}}});
  SatGame g(p, beta_for(p, A));
  for (auto& open : g.legal_moves(g.root())) {
    if (open.k() != 1) continue;
    size_t expect = 0;
    for (size_t a = 0; a < g.index().ones.size(); ++a)
      expect += g.index().by_ones.at({open.ones[0], static_cast<int>(a)}).size();
    EXPECT_EQ(g.legal_moves(open).size(), expect);
    EXPECT_LE(g.legal_moves(open, true).size(), expect);
    for (auto& q : g.legal_moves(open)) {
      EXPECT_EQ(q.k(), 2);
      EXPECT_EQ(q.f, (std::vector<int>{1, 2}));
      EXPECT_TRUE(q.L.is_defined_set({1, 2}));
    }
  }
}

TEST(Moves, EqualKeysGiveEqualMoves) {
  Formula f = parse_formula("forall x. exists y. R(x,y)");
  Prenex p = to_prenex(f);
  Structure A = make_structure(f.sig, 2, {{"R", {{1, 2}, {2, 1}}}});
  SatGame g(p, beta_for(p, A));
  auto a = g.legal_moves(g.root());
  auto b = g.legal_moves(g.root());
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].key(), b[i].key());
    auto ma = g.legal_moves(a[i]), mb = g.legal_moves(b[i]);
    ASSERT_EQ(ma.size(), mb.size());
    for (size_t j = 0; j < ma.size(); ++j) EXPECT_EQ(ma[j].key(), mb[j].key());
  }
}

TEST(Moves, RejectsUnclosedBeta) {
  Formula f = parse_formula("forall x. exists y. R(x,y)");
  Prenex p = to_prenex(f);
  OuterTypeSet b = beta_for(p, make_structure(f.sig, 2, {{"R", {{1, 2}}}}));
  OuterTypeSet cut;
  cut.sig = b.sig;
  for (auto& m : b.members)
    if (m.unnamed < 2) cut.insert(m);
  EXPECT_THROW((SatGame{p, cut}), BetaNotClosed);
}

TEST(Solve, ContradictionLosesForEveryBeta) {
  Formula f = parse_formula("forall x. exists y. (R(x,y) & ~R(x,y))");
  Prenex p = to_prenex(f);
  for (int seed = 0; seed < 5; ++seed) {
    std::mt19937 rng(seed);
    Structure A(f.sig, 2, true);
    for (int a : {1, 2})
      for (int b : {1, 2})
        if (rng() & 1) A.set_true(0, {a, b});
    SatGame g(p, beta_for(p, A));
    GameResult r = g.solve();
    EXPECT_EQ(r.verdict, GameVerdict::AbelardWins);
    ASSERT_EQ(static_cast<int>(r.line.size()), p.M() + 1);
    EXPECT_FALSE(g.eloisa_won(r.line.back()));
  }
}

TEST(Solve, SerialSuccessorWins) {
  Formula f = parse_formula("forall x. exists y. R(x,y)");
  Prenex p = to_prenex(f);
  SatGame g(p, beta_for(p, make_structure(f.sig, 1, {{"R", {{1, 1}}}})));
  GameResult r = g.solve();
  ASSERT_EQ(r.verdict, GameVerdict::EloisaWins);
  EXPECT_GT(r.strategy.size(), 0u);
  auto P = g.eloisa_positions(r.strategy);
  EXPECT_FALSE(P.empty());
  for (auto& q : P) EXPECT_EQ(q.t, 1);
}

TEST(Solve, AbelardOpensWithFalsifyingType) {
  Formula f = parse_formula("forall x. P(x)");
  Prenex p = to_prenex(f);
  SatGame g(p, beta_for(p, make_structure(f.sig, 2, {{"P", {{1}}}})));
  GameResult r = g.solve();
  ASSERT_EQ(r.verdict, GameVerdict::AbelardWins);
  ASSERT_EQ(r.line.size(), 1u);
  EXPECT_EQ(g.atom_truth(r.line[0], g.atoms()[0]), Truth::False);
}

TEST(Solve, BudgetReportedSeparately) {
  Formula f = parse_formula("forall x. exists y. exists z. (R(x,y) & R(y,z))");
  Prenex p = to_prenex(f);
  SatGame g(p, beta_for(p, make_structure(f.sig, 1, {{"R", {{1, 1}}}})));
  EXPECT_EQ(g.solve(3).verdict, GameVerdict::Unknown);
  EXPECT_EQ(g.solve().verdict, GameVerdict::EloisaWins);
}

const std::vector<std::string> kSatCorpus = {
    "forall x. exists y. R(x,y)",
    "forall x. exists y. (R(x,y) & ~R(y,x))",
    "forall x. exists y. (P(y) & (~P(x) | Q(x)))",
    "const c; forall x. exists y. (R(x,y) & S(y,c))",
    "forall x. exists y. ((P(x) | P(y)) & (~P(x) | ~P(y)))",
    "forall x y. (R(x,y) | exists z. (R(x,z) & ~R(z,y)))",
    "const c; P(c) & forall x. (~P(x) | exists y. (Q(y) & R(x,y)))",
};

// A model's extracted type set is winning, and the reduced move
// lists agree with the full ones.
TEST(Solve, ExtractedTypeSetsWin) {
  for (auto& text : kSatCorpus) {
    Formula f = parse_formula(text);
    Prenex p = to_prenex(f);
    SearchResult s = bounded_model_search(f, 3);
    ASSERT_EQ(s.verdict, SearchVerdict::Sat) << text;
    SatGame g(p, beta_for(p, s.model));
    GameResult r = g.solve();
    EXPECT_EQ(r.verdict, GameVerdict::EloisaWins) << text;
    if (p.K() + p.M() <= 2) EXPECT_TRUE(naive_win(g, g.root())) << text;
  }
}

TEST(Solve, ReducedAgreesWithFullOnRandomTypeSets) {
  const std::vector<std::string> texts = {
      "forall x. exists y. (R(x,y) & ~R(y,y))",
      "forall x. exists y. (P(y) & R(y,x) & ~P(x))",
      "forall x. exists y. ((R(x,y) | P(x)) & ~R(y,x))",
  };
  int wins = 0, losses = 0;
  for (auto& text : texts) {
    Formula f = parse_formula(text);
    Prenex p = to_prenex(f);
    for (int seed = 0; seed < 12; ++seed) {
      std::mt19937 rng(seed);
      Structure A(f.sig, 2, true);
      for (int r = 0; r < f.sig.num_relations(); ++r) {
        int ar = f.sig.arities[r];
        for (int a : {1, 2}) {
          if (ar == 1 && (rng() & 1)) A.set_true(r, {a});
          if (ar == 2)
            for (int b : {1, 2})
              if (rng() & 1) A.set_true(r, {a, b});
        }
      }
      SatGame g(p, beta_for(p, A));
      bool full = naive_win(g, g.root());
      GameResult r = g.solve();
      EXPECT_EQ(r.verdict == GameVerdict::EloisaWins, full) << text << " seed " << seed;
      (full ? wins : losses)++;
    }
  }
  EXPECT_GT(wins, 0);
  EXPECT_GT(losses, 0);
}

TEST(Solve, StrategyEntriesAreLegal) {
  Formula f = parse_formula("forall x. exists y. (R(x,y) & ~R(y,x))");
  Prenex p = to_prenex(f);
  SearchResult s = bounded_model_search(f, 3);
  ASSERT_EQ(s.verdict, SearchVerdict::Sat);
  SatGame g(p, beta_for(p, s.model));
  GameResult r = g.solve();
  ASSERT_EQ(r.verdict, GameVerdict::EloisaWins);
  std::vector<Position> stack{g.root()};
  int checked = 0;
  while (!stack.empty()) {
    Position q = stack.back();
    stack.pop_back();
    if (g.mover(q) == Player::Eloisa) {
      const Position* w = r.strategy.lookup(q);
      ASSERT_NE(w, nullptr);
      bool legal = false;
      for (auto& m : g.legal_moves(q)) legal = legal || m.key() == w->key();
      EXPECT_TRUE(legal);
      ++checked;
      stack.push_back(*w);
    } else if (g.mover(q) == Player::Abelard) {
      for (auto& m : g.legal_moves(q)) stack.push_back(m);
    }
  }
  EXPECT_GT(checked, 0);
}

const char* kConstFormula = "const c; forall x. exists y. (R(x,y) & P(c))";

// c's copies and 1's copies differ only on R(a,c), which no condition inspects.
Structure const_model(const Signature& sig) {
  return make_structure(sig, 1, {{"R", {{1, 1}, {-1, -1}, {-1, 1}}}, {"P", {{-1}}}});
}

TEST(TypeEquiv, Examples) {
  Formula f = parse_formula(kConstFormula);
  Prenex p = to_prenex(f);
  SatGame g(p, beta_for(p, const_model(f.sig)));
  auto& ones = g.index().ones;
  ASSERT_EQ(ones.size(), 2u);
  std::vector<int> f1{1, 2};
  EXPECT_TRUE(type_equiv(g, ones[0], ones[0], f1));
  EXPECT_TRUE(type_equiv(g, ones[0], ones[1], f1));
  std::vector<int> fc{-1, 1};
  EXPECT_TRUE(type_equiv(g, ones[0], ones[1], fc));
  EXPECT_THROW(type_equiv(g, ones[0], ones[1], {1}), std::invalid_argument);

  Formula h = parse_formula("forall x. exists y. (R(x,y) & P(y))");
  Prenex hp = to_prenex(h);
  SatGame gh(hp, beta_for(hp, make_structure(h.sig, 2, {{"R", {{1, 2}, {2, 2}}}, {"P", {{2}}}})));
  auto& hones = gh.index().ones;
  ASSERT_EQ(hones.size(), 2u);
  EXPECT_FALSE(type_equiv(gh, hones[0], hones[1], {1, 2}));
}

TEST(TypeEquiv, EquivalenceRelationOnRandomTriples) {
  Formula f = parse_formula("const c; forall x. exists y. (R(x,y) | (R(y,c) & ~R(c,y)) | P(y))");
  Prenex p = to_prenex(f);
  Structure A = make_structure(f.sig, 3, {{"R", {{1, 2}, {2, -1}, {-1, 3}, {3, 3}}}, {"P", {{2}}}});
  SatGame g(p, beta_for(p, A));
  auto& ones = g.index().ones;
  std::mt19937 rng(7);
  std::vector<std::vector<int>> fs = {{1, 2}, {-1, 1}};
  for (int trial = 0; trial < 300; ++trial) {
    auto& fv = fs[rng() % fs.size()];
    auto& a = ones[rng() % ones.size()];
    auto& b = ones[rng() % ones.size()];
    auto& c = ones[rng() % ones.size()];
    EXPECT_TRUE(type_equiv(g, a, a, fv));
    EXPECT_EQ(type_equiv(g, a, b, fv), type_equiv(g, b, a, fv));
    if (type_equiv(g, a, b, fv) && type_equiv(g, b, c, fv)) EXPECT_TRUE(type_equiv(g, a, c, fv));
  }
}

TEST(Reduce, MergesEquivalentOneTypes) {
  Formula f = parse_formula(kConstFormula);
  Prenex p = to_prenex(f);
  SatGame g(p, beta_for(p, const_model(f.sig)));
  GameResult r = g.solve();
  ASSERT_EQ(r.verdict, GameVerdict::EloisaWins);
  ReduceResult red = reduce_type_set(g, r.strategy);
  EXPECT_EQ(red.ones_before, 2u);
  EXPECT_EQ(red.ones_after, 1u);
  EXPECT_EQ(red.resolved.verdict, GameVerdict::EloisaWins);
  EXPECT_TRUE(check_closed(red.beta, p.K() + p.M()).ok());

  SatGame g2(p, red.beta);
  ReduceResult again = reduce_type_set(g2, red.resolved.strategy);
  EXPECT_EQ(again.ones_after, red.ones_after);
}

TEST(Reduce, InequivalentTypesKept) {
  Formula f = parse_formula("forall x. exists y. (R(x,y) & P(y))");
  Prenex p = to_prenex(f);
  SatGame g(p, beta_for(p, make_structure(f.sig, 2, {{"R", {{1, 2}, {2, 2}}}, {"P", {{2}}}})));
  GameResult r = g.solve();
  ASSERT_EQ(r.verdict, GameVerdict::EloisaWins);
  ReduceResult red = reduce_type_set(g, r.strategy);
  EXPECT_EQ(red.ones_after, red.ones_before);
}

TEST(Reduce, CorpusKeepsWinning) {
  for (auto& text : kSatCorpus) {
    Formula f = parse_formula(text);
    Prenex p = to_prenex(f);
    SearchResult s = bounded_model_search(f, 3);
    ASSERT_EQ(s.verdict, SearchVerdict::Sat);
    SatGame g(p, beta_for(p, s.model));
    GameResult r = g.solve();
    ASSERT_EQ(r.verdict, GameVerdict::EloisaWins);
    ReduceResult red = reduce_type_set(g, r.strategy);
    EXPECT_LE(red.ones_after, red.ones_before);
    EXPECT_EQ(red.resolved.verdict, GameVerdict::EloisaWins) << text;
  }
}

TEST(Conjunction, SingleConjunctMatchesSolve) {
  Formula f = parse_formula("forall x. exists y. R(x,y)");
  Prenex p = to_prenex(f);
  OuterTypeSet b = beta_for(p, make_structure(f.sig, 1, {{"R", {{1, 1}}}}));
  ConjunctionResult c = solve_conjunction(f, b);
  SatGame g(p, b);
  EXPECT_EQ(c.verdict, g.solve().verdict);
  EXPECT_EQ(c.parts.size(), 1u);
}

TEST(Conjunction, ContradictoryConjunctLoses) {
  Formula f = parse_formula("(forall x. exists y. R(x,y)) & (forall z. (P(z) & ~P(z)))");
  Structure A = make_structure(f.sig, 1, {{"R", {{1, 1}}}});
  ConjunctionResult c = solve_conjunction(f, beta_of(A, 2));
  EXPECT_EQ(c.verdict, GameVerdict::AbelardWins);
  EXPECT_EQ(c.losing_part, 1);
}

TEST(Conjunction, JointModelWins) {
  Formula f = parse_formula("(forall x. exists y. (R(x,y) & P(y))) & (forall z. exists w. (R(w,z) & ~P(w)))");
  SearchResult s = bounded_model_search(f, 3);
  ASSERT_EQ(s.verdict, SearchVerdict::Sat);
  ConjunctionResult c = solve_conjunction(f, beta_of(s.model, 2));
  EXPECT_EQ(c.verdict, GameVerdict::EloisaWins);
  EXPECT_EQ(c.results.size(), 2u);
}

}  // namespace
}  // namespace maslov
