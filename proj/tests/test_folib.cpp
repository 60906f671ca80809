#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "maslov/search.hpp"
#include "maslov/types.hpp"

namespace maslov {
namespace {

using testing::for_each_structure;
using testing::make_structure;

const char* kCoAuthors =
    "forall s1 s2 s3. [sci(s1) & sci(s2) & sci(s3) & co_authors(s1,s2,s3)] -> "
    "exists a. article(a) & written_by(a,s1,s2,s3)";

TEST(Parse, SingleAtomSentence) {
  Formula f = parse_formula("forall x. P(x)");
  ASSERT_EQ(f.root->op, Op::Forall);
  EXPECT_EQ(f.root->kids[0]->op, Op::Atom);
  EXPECT_TRUE(f.is_sentence());
  EXPECT_EQ(formula_size(f), 4);
}

TEST(Parse, CoAuthorsQuantifierCounts) {
  Formula f = parse_formula(kCoAuthors);
  EXPECT_EQ(count_quantifiers(f.root, Op::Forall), 3);
  EXPECT_EQ(count_quantifiers(f.root, Op::Exists), 1);
  EXPECT_EQ(f.sig.arities[f.sig.relation_index("written_by")], 4);
}

TEST(Parse, UnbalancedParenthesis) { EXPECT_THROW(parse_formula("forall x. P(x"), ParseError); }

TEST(Parse, ErrorCarriesPosition) {
  try {
    parse_formula("forall x.\n  P(x) & & Q(x)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_EQ(e.col, 10);
  }
}

TEST(Parse, ArityMismatch) {
  EXPECT_THROW(parse_formula("rel R/2; forall x. R(x)"), ParseError);
  EXPECT_THROW(parse_formula("forall x y. R(x) & R(x,y)"), ParseError);
}

TEST(Parse, EqualityRejected) { EXPECT_THROW(parse_formula("forall x y. x = y"), ParseError); }

TEST(Parse, ShadowingIsRenamed) {
  Formula f = parse_formula("forall x. (P(x) & exists x. Q(x))");
  ASSERT_EQ(f.var_names.size(), 2u);
  EXPECT_NE(f.var_names[0], f.var_names[1]);
  EXPECT_TRUE(f.is_sentence());
}

TEST(Parse, ConstantsAndZeroArity) {
  Formula f = parse_formula("const c d; rel Z/0; Z & forall x. R(x,c) | ~R(d,x)");
  EXPECT_EQ(f.sig.num_constants(), 2);
  EXPECT_EQ(f.sig.arities[f.sig.relation_index("Z")], 0);
}

TEST(Parse, PrintReparseRoundTrip) {
  std::vector<std::string> corpus = {
      kCoAuthors,
      "forall h w. hw(h,w) -> exists p. problem(p) & forall d. date(d) -> exists e. date(e) & later(e,d) & occ(p,h,w,e)",
      "const c; forall x. (P(x) | Q(x)) & ~(R(x,c) -> P(c))",
      "exists x. forall y. (A(x) -> (B(y) -> C(x,y))) | ~exists z. D(z)",
      "forall x. P(x) & (exists y. Q(y)) | R(x)",
  };
  for (auto& s : corpus) {
    Formula f = parse_formula(s);
    std::string printed = to_string(f);
    Formula g = parse_formula(printed);
    EXPECT_EQ(to_string(g), printed) << s;
    EXPECT_EQ(formula_size(f), formula_size(g));
  }
}

TEST(ModelCheck, ExistsTrivial) {
  Formula f = parse_formula("exists y. P(y)");
  Structure A = make_structure(f.sig, 1, {{"P", {{1}}}});
  EXPECT_TRUE(model_check(A, f));
}

TEST(ModelCheck, ForallExistsFails) {
  Formula f = parse_formula("forall x. exists y. R(x,y)");
  Structure A = make_structure(f.sig, 2, {{"R", {{1, 2}}}});
  EXPECT_FALSE(model_check(A, f));
  A.set_true(0, {2, 2});
  EXPECT_TRUE(model_check(A, f));
  EXPECT_TRUE(model_check(A, f, {}, 3));
}

TEST(ModelCheck, ConstantsAreDomainElements) {
  Formula f = parse_formula("const c; forall x. P(x)");
  Structure A = make_structure(f.sig, 1, {{"P", {{1}}}});
  EXPECT_FALSE(model_check(A, f));
  A.set_true(0, {const_elem(0)});
  EXPECT_TRUE(model_check(A, f));
}

TEST(ModelCheck, UndefinedAtomIsReported) {
  Formula f = parse_formula("forall x. P(x)");
  Structure A(f.sig, 1, false);
  EXPECT_THROW(model_check(A, f), UndefinedAtom);
}

// Partial structures agree with every total extension wherever they are decisive.
TEST(ModelCheck, TriStateMonotonicity) {
  Formula f = parse_formula("forall x. exists y. (P(x) | R(x,y))");
  Signature sig = f.sig;
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Structure part(sig, 2, false);
    part.defined.insert(std::vector<int>{});
    part.defined.insert({1});
    part.defined.insert({2});
    if (rng() % 2) part.defined.insert({1, 2});
    Structure total(sig, 2, true);
    for (int x = 1; x <= 2; ++x) {
      bool p = rng() % 2;
      if (p) {
        part.set_true(0, {x});
        total.set_true(0, {x});
      }
      for (int y = 1; y <= 2; ++y) {
        bool r = rng() % 2;
        bool defined = part.is_defined_set(unnamed_set(Tuple{x, y}));
        if (r && defined) part.set_true(1, {x, y});
        if (r) total.set_true(1, {x, y});
      }
    }
    try {
      bool v = model_check(part, f);
      EXPECT_EQ(v, model_check(total, f));
    } catch (const UndefinedAtom&) {
    }
  }
}

TEST(Types, OneElementOuterTypeIsOneType) {
  Formula f = parse_formula("forall x. P(x) & R(x,x)");
  Structure A = make_structure(f.sig, 2, {{"P", {{1}}}, {"R", {{1, 1}, {1, 2}}}});
  EXPECT_EQ(outer_type_of(A, {1}), one_type_of(A, 1));
}

TEST(Types, PairOuterTypeTableRead) {
  Formula f = parse_formula("forall x y. R(x,y)");
  Structure A = make_structure(f.sig, 2, {{"R", {{1, 2}}}});
  Structure t = outer_type_of(A, {1, 2});
  EXPECT_EQ(t.truth(0, {1, 2}), Truth::True);
  EXPECT_EQ(t.truth(0, {2, 1}), Truth::False);
  EXPECT_EQ(t.truth(0, {1, 1}), Truth::False);
  EXPECT_EQ(t.truth(0, {2, 2}), Truth::False);
  EXPECT_THROW(outer_type_of(A, {1, 1}), std::invalid_argument);
}

TEST(Types, OuterTypeDefinedness) {
  Formula f = parse_formula("forall x y z. T(x,y,z)");
  Structure A = make_structure(f.sig, 3, {{"T", {{1, 2, 3}}}});
  Structure t = outer_type_of(A, {1, 2, 3});
  EXPECT_EQ(t.truth(0, {1, 2, 3}), Truth::True);
  EXPECT_EQ(t.truth(0, {1, 1, 1}), Truth::False);
  EXPECT_EQ(t.truth(0, {1, 2, 2}), Truth::Undef);
  Structure h = hull_type_of(A, {1, 2, 3});
  EXPECT_EQ(h.truth(0, {1, 1, 1}), Truth::Undef);
}

TEST(Types, OuterTypeCommutesWithPermutation) {
  Formula f = parse_formula("const c; forall x y z. T(x,y,z) & R(x,c) & S(y,x)");
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Structure A(f.sig, 4, true);
    std::vector<int> dom = A.domain();
    for (int r = 0; r < f.sig.num_relations(); ++r) {
      int ar = f.sig.arities[r];
      for (int i = 0; i < 30; ++i) {
        Tuple t(ar);
        for (int& e : t) e = dom[rng() % dom.size()];
        A.set_true(r, t);
      }
    }
    std::vector<int> a = {1, 3, 4};
    std::vector<int> perm = {2, 0, 1};
    std::vector<int> pa = {a[perm[0]], a[perm[1]], a[perm[2]]};
    EXPECT_EQ(outer_type_of(A, pa), permute_type(outer_type_of(A, a), perm));
  }
}

TEST(Extract, SingleElement) {
  Formula f = parse_formula("forall x. P(x)");
  Structure A = make_structure(f.sig, 1, {{"P", {{1}}}});
  OuterTypeSet b = extract_type_set(A, 1);
  EXPECT_EQ(b.ones().size(), 1u);
  EXPECT_TRUE(check_closed(b, 1).ok());
}

TEST(Extract, TwoElements) {
  Formula f = parse_formula("forall x y. R(x,y) & P(x)");
  Structure A = make_structure(f.sig, 2, {{"P", {{1}}}, {"R", {{1, 2}}}});
  OuterTypeSet b = extract_type_set(A, 2);
  EXPECT_EQ(b.ones().size(), 2u);
  EXPECT_EQ(b.of_grade(2).size(), 2u);
  EXPECT_TRUE(b.contains(outer_type_of(A, {2, 1})));
  ClosureReport rep = check_closed(b, 2);
  EXPECT_TRUE(rep.projections && rep.permutations && rep.consistent);
  EXPECT_FALSE(rep.extensions);  // no pair realises <P-type, P-type>
  EXPECT_TRUE(check_closed(extract_type_set(augment(A, 2), 2), 2).ok());
}

TEST(Extract, SmallModelFlagsExtension) {
  Formula f = parse_formula("forall x y. R(x,y)");
  Structure A = make_structure(f.sig, 1, {{"R", {{1, 1}}}});
  ClosureReport rep = check_closed(extract_type_set(A, 2), 2);
  EXPECT_TRUE(rep.consistent);
  EXPECT_FALSE(rep.extensions);
  EXPECT_TRUE(check_closed(extract_type_set(augment(A, 2), 2), 2).ok());
}

TEST(Closed, HandBuiltSingleTypeSet) {
  Formula f = parse_formula("forall x y. R(x,y) & P(x)");
  OuterTypeSet b;
  b.sig = f.sig;
  int P = f.sig.relation_index("P");
  Structure zero = make_type(f.sig, 0, TypeKind::Outer);
  Structure one = make_type(f.sig, 1, TypeKind::Outer);
  one.set_true(P, {1});
  Structure two = make_type(f.sig, 2, TypeKind::Outer);
  two.set_true(P, {1});
  two.set_true(P, {2});
  b.insert(zero);
  b.insert(one);
  b.insert(two);
  EXPECT_TRUE(check_closed(b, 2).ok());
}

TEST(Closed, MissingProjection) {
  Formula f = parse_formula("forall x y. R(x,y) & P(x)");
  OuterTypeSet b;
  b.sig = f.sig;
  int P = f.sig.relation_index("P");
  b.insert(make_type(f.sig, 0, TypeKind::Outer));
  Structure one = make_type(f.sig, 1, TypeKind::Outer);
  b.insert(one);
  Structure two = make_type(f.sig, 2, TypeKind::Outer);
  two.set_true(P, {2});
  b.insert(two);
  ClosureReport rep = check_closed(b, 2);
  EXPECT_FALSE(rep.projections);
  EXPECT_FALSE(rep.violations.empty());
}

TEST(Closed, ZeroTypeClash) {
  Formula f = parse_formula("const c; forall x. P(x) & Q(c)");
  OuterTypeSet b;
  b.sig = f.sig;
  Structure a1 = make_type(f.sig, 1, TypeKind::Outer);
  Structure a2 = make_type(f.sig, 1, TypeKind::Outer);
  a2.set_true(1, {const_elem(0)});
  b.insert(a1);
  b.insert(a2);
  EXPECT_FALSE(check_closed(b, 1).consistent);
}

TEST(Search, ForallExistsSizeOne) {
  Formula f = parse_formula("forall x. exists y. R(x,y)");
  SearchResult r = bounded_model_search(f, 3);
  ASSERT_EQ(r.verdict, SearchVerdict::Sat);
  EXPECT_EQ(r.model.unnamed, 1);
  EXPECT_EQ(r.model.truth(0, {1, 1}), Truth::True);
}

TEST(Search, Contradiction) {
  Formula f = parse_formula("forall x. (P(x) & ~P(x))");
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(bounded_model_search(f, n).verdict, SearchVerdict::NoneUpTo);
}

TEST(Search, BudgetIsDistinct) {
  Formula f = parse_formula("forall x y. exists z. (R(x,z) & R(z,y) & ~R(y,x))");
  EXPECT_EQ(bounded_model_search(f, 4, 50).verdict, SearchVerdict::BudgetExhausted);
}

TEST(Search, Deterministic) {
  Formula f = parse_formula("forall x. exists y. (R(x,y) & ~R(y,x))");
  SearchResult a = bounded_model_search(f, 4), b = bounded_model_search(f, 4);
  ASSERT_EQ(a.verdict, SearchVerdict::Sat);
  EXPECT_EQ(a.model.unnamed, 3);
  EXPECT_EQ(a.model.key(), b.model.key());
}

// Independent oracle: enumerate every structure of size <= 2 and model-check.
TEST(Search, AgreesWithExhaustiveEnumeration) {
  std::vector<std::string> corpus = {
      "forall x. exists y. (R(x,y) & ~R(y,x))",
      "forall x. exists y. (P(x) | P(y)) & (~P(x) | ~P(y))",
      "exists x. forall y. (R(x,y) & ~R(y,y))",
      "forall x y. (R(x,y) -> ~R(y,x)) & exists z. R(x,z)",
      "exists x. P(x) & forall y. (P(y) -> Q(y)) & exists z. ~Q(z)",
      "forall x. (P(x) -> Q(x)) & (Q(x) -> P(x))",
      "const c; forall x. R(x,c) & ~R(c,x)",
      "forall x. exists y. (Q(y) & R(y,x) & ~Q(x))",
  };
  for (auto& s : corpus) {
    Formula f = parse_formula(s);
    for (int n = 1; n <= 2; ++n) {
      bool oracle = false;
      for (int k = 1; k <= n && !oracle; ++k)
        for_each_structure(f.sig, k, [&](const Structure& A) {
          if (!oracle && model_check(A, f)) oracle = true;
        });
      SearchResult r = bounded_model_search(f, n);
      EXPECT_EQ(r.verdict == SearchVerdict::Sat, oracle) << s << " n=" << n;
      if (r.verdict == SearchVerdict::Sat) EXPECT_TRUE(model_check(r.model, f));
    }
  }
}

}  // namespace
}  // namespace maslov
