// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "dilp/logic.hpp"
#include "dilp/tasks.hpp"
#include "test_util.hpp"

namespace dilp {
namespace {

Language even_language(int n) {
  std::vector<std::string> cs;
  for (int i = 0; i < n; ++i) cs.push_back(std::to_string(i));
  return Language({{"succ", 2, PredKind::extensional},
                   {"zero", 1, PredKind::extensional},
                   {"even", 1, PredKind::target}},
                  cs);
}

std::string show(const GroundAtom& a, const Language& l) { return l.format(a); }

TEST(AtomIndex, CountsArityPowers) {
  EXPECT_EQ(build_atom_index(even_language(2)).size(), 8u);
  EXPECT_EQ(build_atom_index(even_language(11)).size(), 143u);
}

TEST(AtomIndex, Singleton) {
  Language l({{"p", 2, PredKind::target}}, {"a"});
  const auto atoms = build_atom_index(l);
  ASSERT_EQ(atoms.size(), 1u);
  EXPECT_EQ(atoms[0].index, 0u);
  EXPECT_EQ(show(atoms[0], l), "p(a,a)");
}

TEST(AtomIndex, EmptyDomain) {
  Language l({{"p", 2, PredKind::target}}, {});
  EXPECT_THROW(
      {
        try {
          build_atom_index(l);
        } catch (const Error& e) {
          EXPECT_STREQ(e.what(), "empty domain");
          throw;
        }
      },
      Error);
}

TEST(AtomIndex, Bijective) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto w = testing::random_world(rng, 5, 3);
    const auto atoms = build_atom_index(w.language);
    ASSERT_EQ(atoms.size(), w.language.atom_count());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      EXPECT_EQ(atoms[i].index, i);
      EXPECT_EQ(w.language.decode(i), atoms[i]);
      EXPECT_EQ(w.language.atom_index(atoms[i].pred, atoms[i].args[0], atoms[i].args[1]), i);
    }
  }
}

TEST(AtomIndex, OrderIsDeclarationThenLexicographic) {
  const Language l = even_language(3);
  const auto atoms = build_atom_index(l);
  EXPECT_EQ(show(atoms[0], l), "succ(0,0)");
  EXPECT_EQ(show(atoms[1], l), "succ(0,1)");
  EXPECT_EQ(show(atoms[3], l), "succ(1,0)");
  EXPECT_EQ(show(atoms[9], l), "zero(0)");
  EXPECT_EQ(show(atoms[12], l), "even(0)");
}

TEST(LanguageTest, RejectsMalformed) {
  EXPECT_THROW(Language({{"p", 3, PredKind::target}}, {"a"}), Error);
  EXPECT_THROW(Language({{"p", 2, PredKind::extensional}}, {"a"}), Error);
  EXPECT_THROW(Language({{"p", 2, PredKind::target}, {"q", 2, PredKind::target}}, {"a"}), Error);
  EXPECT_THROW(Language({{"p", 2, PredKind::target}, {"p", 1, PredKind::extensional}}, {"a"}),
               Error);
  EXPECT_THROW(Language({{"p", 2, PredKind::target}}, {"a", "a"}), Error);
  EXPECT_THROW(Language({{"p", 2, PredKind::target}, {"i", 1, PredKind::invented}}, {"a"}), Error);
}

TEST(GroundClause, ExistentialBindings) {
  Language l({{"succ", 2, PredKind::extensional}, {"p", 2, PredKind::target}}, {"0", "1", "2"});
  const Clause c{{1, 2, {Var::x, Var::y}},
                 {Literal{0, 2, {Var::x, Var::z}}, Literal{0, 2, {Var::z, Var::y}}}};
  const auto g = ground_clause(c, l);
  ASSERT_EQ(g.size(), 9u);
  const auto& h = g[2];  // p(0,2)
  EXPECT_EQ(show(h.head, l), "p(0,2)");
  ASSERT_EQ(h.bindings.size(), 3u);
  const char* expect[3][2] = {{"succ(0,0)", "succ(0,2)"},
                              {"succ(0,1)", "succ(1,2)"},
                              {"succ(0,2)", "succ(2,2)"}};
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(show(h.bindings[static_cast<std::size_t>(i)].first, l), expect[i][0]);
    EXPECT_EQ(show(h.bindings[static_cast<std::size_t>(i)].second, l), expect[i][1]);
  }
}

TEST(GroundClause, NoExistential) {
  Language l({{"succ", 2, PredKind::extensional}, {"p", 2, PredKind::target}}, {"0", "1"});
  const Clause c{{1, 2, {Var::x, Var::y}},
                 {Literal{0, 2, {Var::x, Var::y}}, Literal{0, 2, {Var::x, Var::y}}}};
  const auto g = ground_clause(c, l);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(show(g[1].head, l), "p(0,1)");
  ASSERT_EQ(g[1].bindings.size(), 1u);
  EXPECT_EQ(show(g[1].bindings[0].first, l), "succ(0,1)");
  EXPECT_EQ(show(g[1].bindings[0].second, l), "succ(0,1)");
}

TEST(GroundClause, UnaryHeadDyadicBody) {
  Language l({{"z", 2, PredKind::extensional}, {"e", 1, PredKind::target}}, {"0", "1", "2", "3"});
  const Clause c{{1, 1, {Var::x, Var::x}},
                 {Literal{0, 2, {Var::x, Var::y}}, Literal{0, 2, {Var::x, Var::y}}}};
  const auto g = ground_clause(c, l);
  ASSERT_EQ(g.size(), 4u);
  for (const auto& h : g) EXPECT_EQ(h.bindings.size(), 4u);
}

TEST(GroundClause, Completeness) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 30; ++k) {
    const auto w = testing::random_world(rng, 4, 2);
    const auto lits = enumerate_literal_candidates(w.language, 2);
    std::uniform_int_distribution<std::size_t> pick(0, lits.size() - 1);
    for (const auto& t : make_templates(w.language)) {
      const Clause c{{t.head, t.head_arity, {Var::x, Var::y}},
                     {lits[pick(rng)].literal, lits[pick(rng)].literal}};
      const auto g = ground_clause(c, w.language);
      const std::size_t n = w.language.num_constants();
      EXPECT_EQ(g.size(), t.head_arity == 2 ? n * n : n);
      std::size_t expected = 1;
      if (t.head_arity == 2) {
        if (c.body[0].uses(Var::z) || c.body[1].uses(Var::z)) expected = n;
      } else {
        if (c.body[0].uses(Var::y) || c.body[1].uses(Var::y)) expected *= n;
        if (c.body[0].uses(Var::z) || c.body[1].uses(Var::z)) expected *= n;
      }
      for (const auto& h : g) EXPECT_EQ(h.bindings.size(), expected);
      EXPECT_EQ(g, ground_clause(c, w.language));
    }
  }
}

TEST(InitialValuation, Examples) {
  const Language l2({{"succ", 2, PredKind::extensional}, {"p", 2, PredKind::target}}, {"0", "1"});
  const Valuation v = initial_valuation({{"succ", {"0", "1"}}}, l2);
  EXPECT_EQ(std::count(v.begin(), v.end(), 1.0), 1);
  EXPECT_EQ(v[l2.atom_index(0, 0, 1)], 1.0);
  const Valuation empty = initial_valuation({}, l2);
  EXPECT_EQ(std::count(empty.begin(), empty.end(), 0.0), static_cast<long>(empty.size()));

  const Task even = generate_task("even");
  const Language le(even.predicates, even.train.constants);
  const Valuation ve = initial_valuation(even.train.facts, le);
  EXPECT_EQ(ve.size(), 143u);
  EXPECT_EQ(std::count(ve.begin(), ve.end(), 1.0), 11);  // zero(0) plus succ(0,1)..succ(9,10)
}

TEST(InitialValuation, FactOutsideLanguage) {
  const Language l({{"succ", 2, PredKind::extensional}, {"p", 2, PredKind::target}}, {"0", "1"});
  EXPECT_THROW(initial_valuation({{"pred", {"0", "1"}}}, l), Error);
  EXPECT_THROW(initial_valuation({{"succ", {"0", "7"}}}, l), Error);
  EXPECT_THROW(initial_valuation({{"p", {"0", "1"}}}, l), Error);
}

TEST(Format, Clause) {
  Language l({{"succ", 2, PredKind::extensional}, {"p", 2, PredKind::target}}, {"0"});
  const Clause c{{1, 2, {Var::x, Var::y}},
                 {Literal{0, 2, {Var::y, Var::x}}, Literal{0, 2, {Var::z, Var::z}}}};
  EXPECT_EQ(format_clause(c, l), "p(A,B):-succ(B,A),succ(C,C)");
}

}  // namespace
}  // namespace dilp
