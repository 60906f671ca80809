#include <gtest/gtest.h>

#include "helpers.hpp"
#include "maslov/fragments.hpp"

namespace maslov {
namespace {

const char* kCoAuthors =
    "forall s1 s2 s3. [sci(s1) & sci(s2) & sci(s3) & co_authors(s1,s2,s3)] -> "
    "exists a. article(a) & written_by(a,s1,s2,s3)";
const char* kMarriage =
    "forall h w. hw(h,w) -> exists p. problem(p) & forall d. date(d) -> "
    "exists d2. date(d2) & later_than(d2,d) & occurs_to_at(p,h,w,d2)";
const char* kTrans = "forall x y z. [T(x,y) & T(y,z)] -> T(x,z)";

std::string prefix_of(const Formula& f, const PrefixProfile& p, const std::string& rel) {
  for (size_t i = 0; i < p.atoms.size(); ++i) {
    if (f.sig.rel_names[p.atoms[i]->rel] != rel) continue;
    std::string s;
    for (auto& b : p.prefixes[i]) s += std::string(b.q == Op::Forall ? "A" : "E") + f.var_names[b.var];
    return s;
  }
  return "?";
}

TEST(Prefixes, TextbookExample) {
  Formula f = to_nnf(parse_formula("const c; exists x. forall y. exists z. R(x,y) & T(c,y,z,y)"));
  PrefixProfile p = compute_prefixes(f);
  EXPECT_EQ(prefix_of(f, p, "R"), "ExAy");
  EXPECT_EQ(prefix_of(f, p, "T"), "AyEz");
  EXPECT_TRUE(p.under_exists.count(f.root->kids[0]->var));
}

TEST(Prefixes, GroundAtomEmpty) {
  Formula f = to_nnf(parse_formula("const c; forall x. P(c) | Q(x)"));
  PrefixProfile p = compute_prefixes(f);
  EXPECT_EQ(prefix_of(f, p, "P"), "");
  EXPECT_EQ(prefix_of(f, p, "Q"), "Ax");
}

TEST(Prefixes, NegatedQuantifierRejected) {
  EXPECT_THROW(to_nnf(parse_formula("~forall x. P(x)")), NotRelaxed);
  EXPECT_THROW(to_nnf(parse_formula("(exists x. P(x)) -> Q")), NotRelaxed);
  EXPECT_NO_THROW(to_nnf(parse_formula("P(c) -> exists x. P(x)")));
}

TEST(Classify, CoAuthors) {
  Classification c = classify(parse_formula(kCoAuthors));
  EXPECT_TRUE(c.has(FragClass::Kbar));
  EXPECT_TRUE(c.has(FragClass::KbarSkolem));
  EXPECT_EQ(c.grade, 3);
  EXPECT_EQ(c.special_names, (std::vector<std::string>{"s1", "s2", "s3"}));
}

TEST(Classify, Marriage) {
  Classification c = classify(parse_formula(kMarriage));
  EXPECT_TRUE(c.has(FragClass::Kbar));
  EXPECT_FALSE(c.has(FragClass::KbarSkolem));
  EXPECT_EQ(c.grade, 2);
  EXPECT_EQ(c.special_names, (std::vector<std::string>{"h", "w"}));
}

TEST(Classify, Transitivity) {
  Classification c = classify(parse_formula(kTrans));
  EXPECT_TRUE(c.has(FragClass::None));
  EXPECT_FALSE(c.has(FragClass::Kbar));
  ASSERT_FALSE(c.diagnostics.empty());
  EXPECT_NE(c.diagnostics[0].find("T("), std::string::npos);
}

TEST(Classify, UnconstrainedPicksOutermostBlock) {
  Classification c = classify(parse_formula("forall x. exists y. R(x,y)"));
  EXPECT_TRUE(c.has(FragClass::Ackermann));
  EXPECT_EQ(c.grade, 1);
  Classification g = classify(parse_formula("forall x y. exists z. R(x,z) & S(y,z)"));
  EXPECT_TRUE(g.has(FragClass::Goedel));
  EXPECT_FALSE(g.has(FragClass::Ackermann));
}

TEST(Classify, Invariants) {
  for (auto s : {kCoAuthors, kMarriage, kTrans, "forall x. exists y. R(x,y)", "exists y. P(y)",
                 "forall x y. exists z. R(x,z) & S(y,z)"}) {
    Classification c = classify(parse_formula(s));
    EXPECT_EQ(c.grade, static_cast<int>(c.specials.size()));
    if (c.has(FragClass::KbarSkolem)) EXPECT_TRUE(c.has(FragClass::Kbar));
    if (c.has(FragClass::Ackermann)) EXPECT_LE(c.forall_k, 1);
    if (c.has(FragClass::Goedel)) EXPECT_LE(c.forall_k, 2);
  }
}

TEST(Classify, DisjointConjunctsInDKbar) {
  Formula f = parse_formula("(forall x y. R(x,y) | P(x)) & (forall u v w. S(u,v,w))");
  Classification c = classify(f);
  EXPECT_TRUE(c.has(FragClass::DKbar));
  EXPECT_FALSE(c.has(FragClass::Kbar));
}

TEST(Classify, JsonShape) {
  std::string j = classification_json(classify(parse_formula(kCoAuthors)));
  EXPECT_NE(j.find("\"grade\": 3"), std::string::npos);
  EXPECT_NE(j.find("\"universal_count\": 3"), std::string::npos);
}

TEST(ForallUF, LostProof) {
  Formula f = parse_formula(
      "forall a s. [assertion(a) & scientist(s) & claims(s,a)] -> exists p. proof_of(p,a) & found(s,p) & "
      "forall m. [margin(m) & contains(m,p)] -> too_small(m)");
  EXPECT_TRUE(classify(f).has(FragClass::ForallUF));
  EXPECT_FALSE(in_forall_uf(parse_formula(kTrans)));
  EXPECT_TRUE(in_forall_uf(parse_formula("forall x y. R(x,y) | S(y,x,x) | T(x)")));
  EXPECT_FALSE(in_forall_uf(parse_formula("forall x y z. R(x,y) | S(y,z)")));
  EXPECT_FALSE(in_forall_uf(parse_formula("exists x u. forall y. R(x,u,y)")));
}

TEST(Prenex, CoAuthors) {
  Prenex p = to_prenex(parse_formula(kCoAuthors));
  EXPECT_EQ(p.K(), 3);
  ASSERT_EQ(p.M(), 1);
  EXPECT_EQ(p.word[0].q, Op::Exists);
  EXPECT_FALSE(has_quantifier(p.matrix));
  EXPECT_TRUE(classify(p.formula).has(FragClass::KbarSkolem));
}

TEST(Prenex, SingleUniversal) {
  Prenex p = to_prenex(parse_formula("forall x. P(x)"));
  EXPECT_EQ(p.K(), 1);
  EXPECT_EQ(p.M(), 0);
  EXPECT_EQ(p.matrix->op, Op::Atom);
}

TEST(Prenex, Idempotent) {
  Prenex p = to_prenex(parse_formula(kMarriage));
  Prenex q = to_prenex(p.formula);
  EXPECT_EQ(to_string(p.formula), to_string(q.formula));
}

TEST(Prenex, DummySpecial) {
  Prenex p = to_prenex(parse_formula("exists y. P(y)"), true);
  EXPECT_TRUE(p.dummy_special);
  EXPECT_EQ(p.K(), 1);
  Prenex q = to_prenex(parse_formula("forall x. P(x) | Q(x)"), true);
  EXPECT_TRUE(q.dummy_exists);
  EXPECT_EQ(q.M(), 1);
}

TEST(Prenex, ReclassifiesWithSameGrade) {
  for (auto s : {kCoAuthors, kMarriage, "forall x. exists y. R(x,y) & forall z. exists w. (S(z,w) | P(y))"}) {
    Formula f = parse_formula(s);
    Classification a = classify(f);
    Classification b = classify(to_prenex(f).formula);
    EXPECT_EQ(a.grade, b.grade) << s;
    EXPECT_EQ(a.has(FragClass::KbarSkolem), b.has(FragClass::KbarSkolem)) << s;
  }
}

// Exhaustive semantic check on structures of size <= 2.
TEST(Prenex, PreservesTruth) {
  std::vector<std::string> corpus = {
      "forall x. (P(x) -> exists y. R(x,y)) & (exists z. Q(z))",
      "forall x. P(x) | forall y. (Q(y) & exists z. R(y,z))",
      "(exists u. P(u)) | forall x. exists y. (R(x,y) & ~Q(y))",
  };
  for (auto& s : corpus) {
    Formula f = parse_formula(s);
    Prenex p = to_prenex(f);
    for (int k = 1; k <= 2; ++k)
      testing::for_each_structure(f.sig, k, [&](const Structure& A) {
        ASSERT_EQ(model_check(A, f), model_check(A, p.formula)) << s;
      });
  }
}

}  // namespace
}  // namespace maslov
