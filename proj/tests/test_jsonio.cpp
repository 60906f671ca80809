#include <gtest/gtest.h>

#include "maslov/fragments.hpp"
#include "maslov/jsonio.hpp"
#include "maslov/tournaments.hpp"

namespace maslov {
namespace {

TEST(StructureJson, RoundTripWithConstants) {
  Formula f = parse_formula("const c; forall x. exists y. (R(x,y) & P(c))");
  Structure A(f.sig, 2, true);
  A.set_true(f.sig.relation_index("R"), {1, const_elem(0)});
  A.set_true(f.sig.relation_index("P"), {const_elem(0)});
  Json j = structure_to_json(A);
  EXPECT_EQ(j["relations"]["R"][0][1], "c");
  EXPECT_EQ(structure_from_json(j), A);
  EXPECT_EQ(structure_from_json(Json::parse(j.dump()), &f.sig), A);
}

TEST(StructureJson, MinimalDocumentAndErrors) {
  Json j = Json::parse(R"({"constants": [], "unnamed": 2, "relations": {"E": [[1, 2]]}})");
  Structure A = structure_from_json(j);
  EXPECT_EQ(A.sig.arities[0], 2);
  EXPECT_EQ(A.truth(0, {1, 2}), Truth::True);
  EXPECT_EQ(A.truth(0, {2, 1}), Truth::False);
  EXPECT_THROW(structure_from_json(Json::parse(R"({"unnamed": 1, "relations": {"E": [[1, 2]]}})")),
               std::invalid_argument);
  EXPECT_THROW(structure_from_json(Json::parse(R"({"unnamed": 2, "relations": {"E": [[1, "d"]]}})")),
               std::invalid_argument);
}

TEST(TournamentJson, PaleyRoundTrip) {
  auto t = build_paley(11);
  Json j = tournament_to_json(t);
  EXPECT_EQ(j["arcs"].size(), 55u);  // each unordered pair once
  auto u = tournament_from_json(j);
  ASSERT_EQ(u.size(), t.size());
  for (int a = 0; a < t.size(); ++a)
    for (int b = 0; b < t.size(); ++b)
      if (a != b) EXPECT_EQ(u.arc(a, b), t.arc(a, b));
  EXPECT_EQ(tournament_to_json(u).dump(), j.dump());
}

TEST(TypeSetJson, RoundTripKeepsMembers) {
  Formula f = parse_formula("forall x. exists y. (R(x,y) & ~R(y,x))");
  Structure A(f.sig, 3, true);
  int R = f.sig.relation_index("R");
  A.set_true(R, {1, 2});
  A.set_true(R, {2, 3});
  A.set_true(R, {3, 1});
  OuterTypeSet b = extract_type_set(augment(A, 2), 2);
  OuterTypeSet c = type_set_from_json(Json::parse(type_set_to_json(b).dump()), &f.sig);
  ASSERT_EQ(c.size(), b.size());
  for (auto& m : b.members) EXPECT_TRUE(c.contains(m));
  EXPECT_EQ(type_set_to_json(c).dump(), type_set_to_json(b).dump());
}

TEST(StrategyJson, RoundTripReplays) {
  Formula f = parse_formula("forall x. exists y. (R(x,y) & ~R(y,x))");
  Structure A(f.sig, 3, true);
  int R = f.sig.relation_index("R");
  A.set_true(R, {1, 2});
  A.set_true(R, {2, 3});
  A.set_true(R, {3, 1});
  Prenex p = to_prenex(f, true);
  SatGame g(p, extract_type_set(augment(A, 2), 2));
  auto res = g.solve();
  ASSERT_EQ(res.verdict, GameVerdict::EloisaWins);
  StrategyTable w = strategy_from_json(Json::parse(strategy_to_json(res.strategy).dump()), f.sig);
  EXPECT_EQ(w.moves.size(), res.strategy.moves.size());
  EXPECT_EQ(g.eloisa_positions(w).size(), g.eloisa_positions(res.strategy).size());
}

}  // namespace
}  // namespace maslov
