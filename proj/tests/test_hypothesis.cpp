// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "dilp/hypothesis.hpp"
#include "dilp/tasks.hpp"
#include "test_util.hpp"

namespace dilp {
namespace {

std::vector<PredicateSymbol> succ_zero_p() {
  return {{"succ", 2, PredKind::extensional},
          {"zero", 1, PredKind::extensional},
          {"p", 2, PredKind::target}};
}

TEST(LiteralCandidates, ClosedFormCount) {
  const Language l = make_language(succ_zero_p(), {"0", "1"}, 3);
  EXPECT_EQ(l.num_predicates(), 5u);
  EXPECT_EQ(enumerate_literal_candidates(l, 2).size(), 39u);
  EXPECT_EQ(enumerate_literal_candidates(l, 1).size(), 39u);
}

TEST(LiteralCandidates, SingleUnary) {
  const Language l({{"q", 1, PredKind::target}}, {"a"});
  const auto c = enumerate_literal_candidates(l, 1);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(format_literal(c[0].literal, l), "q(A)");
  EXPECT_EQ(format_literal(c[1].literal, l), "q(B)");
  EXPECT_EQ(format_literal(c[2].literal, l), "q(C)");
}

TEST(LiteralCandidates, EvenAt150Templates) {
  // zero/1, succ/2, even/1 plus 149 invented dyadic predicates.
  const Task even = generate_task("even");
  const Language l = make_language(even.predicates, even.train.constants, 150);
  const auto c = enumerate_literal_candidates(l, 1);
  EXPECT_EQ(c.size(), 9u * 150 + 3u * 2);
  EXPECT_EQ(c.size(), 1356u);
}

TEST(LiteralCandidates, OrderAndPatterns) {
  const Language l = make_language(succ_zero_p(), {"0"}, 1);
  const auto c = enumerate_literal_candidates(l, 2);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i].candidate_id, static_cast<int>(i));
  EXPECT_EQ(format_literal(c[0].literal, l), "succ(A,A)");
  EXPECT_EQ(format_literal(c[1].literal, l), "succ(A,B)");
  EXPECT_EQ(format_literal(c[8].literal, l), "succ(C,C)");
  EXPECT_EQ(format_literal(c[9].literal, l), "zero(A)");
  EXPECT_EQ(c[5].pattern, 5);   // yz
  EXPECT_EQ(c[10].pattern, 1);  // zero(y)
}

TEST(LiteralCandidates, DropZOnly) {
  const Language l = make_language(succ_zero_p(), {"0"}, 2);
  PruneConfig p;
  p.drop_z_only = true;
  const auto c = enumerate_literal_candidates(l, 2, p);
  EXPECT_EQ(c.size(), 8u * 3 + 2u);
  for (const auto& lc : c) EXPECT_TRUE(lc.literal.uses(Var::x) || lc.literal.uses(Var::y));
}

TEST(ClauseCandidates, MatchesClosedFormAcrossPruning) {
  for (int dy = 1; dy <= 4; ++dy) {
    for (int un = 0; un <= 2; ++un) {
      std::vector<PredicateSymbol> preds;
      for (int i = 0; i < dy; ++i) preds.push_back({"d" + std::to_string(i), 2, PredKind::extensional});
      for (int i = 0; i < un; ++i) preds.push_back({"u" + std::to_string(i), 1, PredKind::extensional});
      preds.back().kind = PredKind::target;
      const Language l(preds, {"a"});
      for (int mask = 0; mask < 16; ++mask) {
        PruneConfig p{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0, (mask & 8) != 0};
        const auto lits = enumerate_literal_candidates(l, 2, p);
        for (int ha = 1; ha <= 2; ++ha) {
          const auto clauses = enumerate_clause_candidates(lits, ha, p);
          EXPECT_EQ(clauses.size(),
                    closed_form_clause_count(static_cast<std::size_t>(dy),
                                             static_cast<std::size_t>(un), ha, p))
              << "dyadic " << dy << " unary " << un << " mask " << mask << " head " << ha;
          EXPECT_LE(clauses.size(), lits.size() * lits.size());
        }
      }
    }
  }
}

TEST(ClauseCandidates, HeadSafetyAndSymmetry) {
  const Language l = make_language(succ_zero_p(), {"0"}, 2);
  PruneConfig p;
  p.symmetric_bodies = true;
  const auto lits = enumerate_literal_candidates(l, 2, p);
  for (int ha = 1; ha <= 2; ++ha) {
    std::set<std::pair<int, int>> seen;
    for (const auto& c : enumerate_clause_candidates(lits, ha, p)) {
      const auto& a = lits[static_cast<std::size_t>(c.literals[0])].literal;
      const auto& b = lits[static_cast<std::size_t>(c.literals[1])].literal;
      EXPECT_TRUE(a.uses(Var::x) || b.uses(Var::x));
      if (ha == 2) EXPECT_TRUE(a.uses(Var::y) || b.uses(Var::y));
      const auto key = std::minmax(c.literals[0], c.literals[1]);
      EXPECT_TRUE(seen.insert(key).second);
    }
  }
}

TEST(InferenceIndex, SoundAgainstGroundClause) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 15; ++k) {
    const auto w = testing::random_world(rng, 4, 3);
    const auto templates = make_templates(w.language);
    const auto lits = enumerate_literal_candidates(w.language, 2);
    const InferenceIndex index = build_inference_index(templates, w.language, lits);
    const std::size_t n = w.language.num_constants();
    for (std::size_t t = 0; t < templates.size(); ++t) {
      const auto& tpl = templates[t];
      const GatherTable& table = index.table(tpl.head_arity);
      EXPECT_EQ(table.heads(), tpl.head_arity == 2 ? n * n : n);
      EXPECT_EQ(table.bindings(), tpl.head_arity == 2 ? n : n * n);
      ASSERT_EQ(index.head_atoms[t].size(), table.heads());
      // Both body literals of p(x,y) :- l_i, l_j over the full binding range.
      for (std::size_t i = 0; i < lits.size(); ++i) {
        const Clause c{{tpl.head, tpl.head_arity, {Var::x, Var::y}},
                       {lits[i].literal, lits[(i * 7 + 3) % lits.size()].literal}};
        const auto g = ground_clause(c, w.language);
        for (std::size_t h = 0; h < g.size(); ++h) {
          EXPECT_EQ(index.head_atoms[t][h], g[h].head.index);
          std::set<std::pair<std::uint32_t, std::uint32_t>> from_index, from_ground;
          for (std::size_t b = 0; b < table.bindings(); ++b) {
            from_index.insert({table.at(h, b, i), table.at(h, b, (i * 7 + 3) % lits.size())});
          }
          for (const auto& [a, bb] : g[h].bindings) {
            from_ground.insert({static_cast<std::uint32_t>(a.index),
                                static_cast<std::uint32_t>(bb.index)});
          }
          EXPECT_EQ(from_index, from_ground);
        }
      }
      for (std::size_t h = 0; h < table.heads(); ++h)
        for (std::size_t b = 0; b < table.bindings(); ++b)
          for (std::size_t c = 0; c < table.candidates(); ++c)
            EXPECT_LT(table.at(h, b, c), w.language.atom_count());
    }
  }
}

TEST(InferenceIndex, MemoryBudget) {
  const Task even = generate_task("even");
  const Language l = make_language(even.predicates, even.train.constants, 50);
  const auto templates = make_templates(l);
  const auto lits = enumerate_literal_candidates(l, 2);
  EXPECT_GT(estimate_index_bytes(templates, l, lits.size()), std::size_t{1} << 20);
  try {
    build_inference_index(templates, l, lits, std::size_t{1} << 20);
    FAIL() << "expected refusal";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("index exceeds memory budget"), std::string::npos);
  }
}

TEST(Templates, TargetFirstThenInvented) {
  const Language l = make_language(succ_zero_p(), {"0"}, 4);
  const auto t = make_templates(l);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(l.predicate(t[0].head).name, "p");
  EXPECT_EQ(l.predicate(t[1].head).name, "i1");
  EXPECT_EQ(l.predicate(t[3].head).name, "i3");
  for (const auto& tpl : t) EXPECT_TRUE(l.predicate(tpl.head).learnable());
  EXPECT_THROW(make_language(succ_zero_p(), {"0"}, 0), Error);
}

}  // namespace
}  // namespace dilp
