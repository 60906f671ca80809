#include <gtest/gtest.h>

#include "helpers.hpp"
#include "maslov/modelbuild.hpp"
#include "maslov/search.hpp"

namespace maslov {
namespace {

using testing::make_structure;

struct Solved {
  Prenex pre;
  std::unique_ptr<SatGame> game;
  GameResult res;
};

Solved solve_from_search(const std::string& text, int N = 3) {
  Formula f = parse_formula(text);
  Solved s{to_prenex(f, true), nullptr, {}};
  auto sr = bounded_model_search(f, N);
  EXPECT_EQ(sr.verdict, SearchVerdict::Sat) << text;
  int G = s.pre.K() + s.pre.M();
  s.game = std::make_unique<SatGame>(s.pre, extract_type_set(augment(sr.model, G), G));
  s.res = s.game->solve();
  EXPECT_EQ(s.res.verdict, GameVerdict::EloisaWins) << text;
  return s;
}

TEST(PositionEquiv, ReflexiveAndSeparatesAssignments) {
  auto s = solve_from_search("forall x. exists y. (R(x,y) & ~R(y,x))");
  auto ps = s.game->eloisa_positions(s.res.strategy);
  ASSERT_FALSE(ps.empty());
  for (auto& p : ps) EXPECT_TRUE(position_equiv(*s.game, p, p));
  for (auto& p : ps)
    for (auto& q : ps)
      if (p.f != q.f) EXPECT_FALSE(position_equiv(*s.game, p, q));
  EXPECT_THROW(position_equiv(*s.game, s.game->root(), ps[0]), std::invalid_argument);
}

TEST(PositionEquiv, ColoursPartitionReplay) {
  for (const char* text : {"forall x. exists y. R(x,y)", "forall x. exists y. (R(x,y) & ~R(y,x))",
                           "forall x. exists y. (~P(x) | (P(y) & R(x,y)))"}) {
    auto s = solve_from_search(text);
    auto pc = position_colours(*s.game, s.res.strategy);
    ASSERT_GT(pc.size(), 0) << text;
    EXPECT_LE(pc.size(), pc.bound);
    size_t total = 0;
    for (int c = 0; c < pc.size(); ++c) {
      total += pc.members[c].size();
      for (int m : pc.members[c]) {
        EXPECT_EQ(pc.colour_of[m], c);
        EXPECT_TRUE(position_equiv(*s.game, pc.rep(c), pc.positions[m]));
      }
      for (int d = 0; d < c; ++d) EXPECT_FALSE(position_equiv(*s.game, pc.rep(c), pc.rep(d)));
    }
    EXPECT_EQ(total, pc.positions.size());
  }
}

// K = 3 at order 3: f = x1->c, x2->1, x3->3, y1->2, y2->1, y3->4; b -> a1, a2, a3 via x2, y1, x3.
class SelfDom : public ::testing::Test {
 protected:
  void SetUp() override {
    Position rho;
    rho.t = 3;
    rho.f = {-1, 1, 3, 2, 1, 4};
    reps = {rho};
    T = ColourfulTournament(5, 1, 6);
    T.set_arc(0, 1, 1);
    T.set_arc(0, 2, 3);
    T.set_arc(0, 3, 2);
    T.set_arc(1, 2, 0);
    T.set_arc(2, 3, 0);
    T.set_arc(3, 1, 0);
    T.set_arc(4, 0, 4);  // y2 and x2 both name element 1
    T.set_arc(4, 1, 1);
    T.set_arc(2, 4, 0);
    T.set_arc(3, 4, 0);
  }
  std::vector<Position> reps;
  ColourfulTournament T;
};

TEST_F(SelfDom, FigureSets) {
  auto a = find_properly_self_dominating(T, {1, 3, 0}, reps, 3, 6);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->b, 0);
  EXPECT_EQ(a->g, (std::vector<int>{1, 2, 5}));
  auto b = find_properly_self_dominating(T, {0, 1, 2, 3}, reps, 3, 6);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->g, (std::vector<int>{5, 1, 3, 2}));
}

TEST_F(SelfDom, Rejections) {
  EXPECT_TRUE(find_properly_self_dominating(T, {4, 0}, reps, 3, 6));
  EXPECT_FALSE(find_properly_self_dominating(T, {4, 0, 1}, reps, 3, 6));  // label clash on element 1
  T.set_arc(4, 1, 0);
  EXPECT_FALSE(find_properly_self_dominating(T, {4, 1}, reps, 3, 6));  // x1 is a constant
  EXPECT_FALSE(find_properly_self_dominating(T, {1, 2, 3}, reps, 3, 6));  // a 3-cycle has no dominator
  EXPECT_THROW(find_properly_self_dominating(T, {0}, reps, 3, 6), std::invalid_argument);
  EXPECT_THROW(find_properly_self_dominating(T, {0, 1, 2}, reps, 3, 2), std::invalid_argument);
}

TEST(Build, SerialRelationOverSampledTournament) {
  Formula f = parse_formula("forall x. exists y. R(x,y)");
  auto s = solve_from_search("forall x. exists y. R(x,y)");
  auto pc = position_colours(*s.game, s.res.strategy);
  auto sm = sample_paradoxical(pc.size(), s.game->slots(), 7, 4);
  ASSERT_TRUE(sm.tournament);
  auto rep = build_model(*s.game, pc, *sm.tournament);
  EXPECT_EQ(rep.model.unnamed, sm.tournament->size());
  EXPECT_TRUE(rep.verified);
  EXPECT_TRUE(model_check(rep.model, f));
  EXPECT_GT(rep.stage2_sets, 0u);
  int n = rep.model.unnamed;
  EXPECT_EQ(rep.stage2_sets + rep.stage2_unmatched + rep.stage3_sets, static_cast<size_t>(n) * (n - 1) / 2 +
                                                                          rep.stage2_unmatched);
}

TEST(Build, RejectsWrongColourCounts) {
  auto s = solve_from_search("forall x. exists y. R(x,y)");
  auto pc = position_colours(*s.game, s.res.strategy);
  ColourfulTournament T(3, pc.size() + 1, s.game->slots());
  EXPECT_THROW(build_model(*s.game, pc, T), std::invalid_argument);
}

TEST(Build, RejectsNonParadoxical) {
  auto s = solve_from_search("forall x. exists y. R(x,y)");
  auto pc = position_colours(*s.game, s.res.strategy);
  ColourfulTournament T(3, pc.size(), s.game->slots());
  T.set_arc(0, 1);
  T.set_arc(1, 2);
  T.set_arc(2, 0);
  EXPECT_THROW(build_model(*s.game, pc, T), std::invalid_argument);
}

const char* kPipelineCorpus[] = {
    "forall x. exists y. R(x,y)",
    "forall x. exists y. (R(x,y) & ~R(y,x))",
    "forall x. exists y. (~P(x) | (P(y) & R(x,y)))",
    "forall x. exists y. ((P(x) | P(y)) & (~P(x) | ~P(y)))",
    "const c; P(c) & forall x. exists y. (~P(x) | (P(y) & R(x,y)))",
};

TEST(Pipeline, CorpusBuildsVerifiedModels) {
  for (const char* text : kPipelineCorpus) {
    Formula f = parse_formula(text);
    auto rep = run_pipeline(f);
    EXPECT_TRUE(rep.ok) << text << " stopped at " << rep.stage << ": " << rep.detail;
    EXPECT_TRUE(rep.verified) << text;
    EXPECT_EQ(rep.model.unnamed, rep.vertices);
    EXPECT_TRUE(model_check(rep.model, f)) << text;
  }
}

TEST(Pipeline, UnsatisfiableStopsAtSearch) {
  auto rep = run_pipeline(parse_formula("forall x. exists y. (R(x,y) & ~R(x,y))"));
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.stage, "search");
}

ColourfulTournament random_base(int num_r, int k, int M, uint64_t seed) {
  return sample_random(num_r * (k + 1) * M, k, std::max(k, 2), seed);
}

TEST(Grid, ShapeOneExistential) {
  auto base = random_base(2, 2, 1, 3);
  auto grid = make_grid(base, 2, 2, 1);
  EXPECT_EQ(grid.rows, 3);
  EXPECT_EQ(grid.cols, 1);
  EXPECT_TRUE(check_witness_chains(grid, 2));
}

TEST(Grid, ShapeAndInheritance) {
  int k = 3, M = 5, R = 2;
  auto base = random_base(R, k, M, 11);
  auto grid = make_grid(base, R, k, M);
  ASSERT_EQ(grid.rows, 4);
  ASSERT_EQ(grid.cols, 5);
  EXPECT_TRUE(check_witness_chains(grid, k));
  const auto& T = grid.tournament;
  EXPECT_TRUE(is_tournament(T));
  EXPECT_EQ(T.num_r(), R);
  EXPECT_EQ(T.num_q(), k + M);
  std::vector<int> row(T.size()), col(T.size());
  for (int i = 0; i < grid.rows; ++i)
    for (int j = 0; j < grid.cols; ++j)
      for (int v : grid.cells[i][j]) row[v] = i, col[v] = j;
  for (int u = 0; u < T.size(); ++u) {
    int c = base.mu(u);
    EXPECT_EQ(T.mu(u), c / M / (k + 1));
    EXPECT_EQ(row[u], c / M % (k + 1));
    EXPECT_EQ(col[u], c % M);
    for (int v = 0; v < T.size(); ++v) {
      if (u == v || (row[u] == row[v] && col[u] != col[v])) continue;
      EXPECT_EQ(T.arc(u, v), base.arc(u, v));
      if (T.arc(u, v)) EXPECT_EQ(T.lambda(u, v), base.lambda(u, v));
    }
  }
}

TEST(Grid, BrokenChainDetected) {
  auto base = random_base(1, 1, 2, 5);
  auto grid = make_grid(base, 1, 1, 2);
  ASSERT_TRUE(check_witness_chains(grid, 1));
  int a = grid.cells[0][1][0], b = grid.cells[0][0][0];
  grid.tournament.set_arc(b, a, 1);
  EXPECT_FALSE(check_witness_chains(grid, 1));
}

TEST(Grid, RejectsWrongBase) {
  auto base = random_base(1, 2, 2, 5);
  EXPECT_THROW(make_grid(base, 2, 2, 2), std::invalid_argument);
}

TEST(ParamShape, UniversalsThenExistentials) {
  auto s = solve_from_search("forall x. exists z1. exists z2. (E(x,z1) & E(z1,z2) & ~E(z2,x))");
  auto sh = param_shape(*s.game);
  EXPECT_EQ(sh.k, 1);
  EXPECT_EQ(sh.num_exists, 2);
  auto t = solve_from_search("forall x. exists y. forall z. (R(x,y) & (P(y) | Q(z)))");
  EXPECT_THROW(param_shape(*t.game), std::invalid_argument);
}

TEST(ParamGrid, ThreeVariableToy) {
  Formula f = parse_formula("forall x. exists z1. exists z2. (E(x,z1) & E(z1,z2) & ~E(z2,x))");
  PipelineOptions opt;
  opt.param = true;
  opt.seed = 3;
  auto rep = run_pipeline(f, opt);
  ASSERT_TRUE(rep.ok) << rep.stage << ": " << rep.detail;
  EXPECT_TRUE(rep.grid);
  EXPECT_TRUE(model_check(rep.model, f));
}

}  // namespace
}  // namespace maslov
