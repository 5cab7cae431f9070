// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "dilp/evaluator.hpp"
#include "dilp/oracle.hpp"
#include "dilp/tasks.hpp"
#include "test_util.hpp"

namespace dilp {
namespace {

using testing::parse_program;

std::size_t candidate(const Model& m, const std::string& text) {
  for (const auto& c : m.literals) {
    if (format_literal(c.literal, m.language) == text) return static_cast<std::size_t>(c.candidate_id);
  }
  throw Error("no candidate " + text);
}

std::vector<std::string> true_atoms(const Interpretation& truth, const Language& l, int pred) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] && l.decode(i).pred == pred) out.push_back(l.format(i));
  }
  return out;
}

TEST(ClassicalEval, Predecessor) {
  const Task task = generate_task(TaskSpec{"predecessor", 3, 5});
  const Language l = make_language(task.predicates, task.train.constants, 1);
  const Program p = parse_program({"predecessor(A,B):-succ(B,A),succ(B,A)"}, l);
  const auto truth = classical_eval(p, task.train.facts, l);
  EXPECT_EQ(true_atoms(truth, l, l.target()),
            (std::vector<std::string>{"predecessor(1,0)", "predecessor(2,1)", "predecessor(3,2)"}));
}

TEST(ClassicalEval, EmptyProgramIsBk) {
  const Task task = generate_task("even");
  const Language l = make_language(task.predicates, task.train.constants, 1);
  const auto truth = classical_eval({}, task.train.facts, l);
  Valuation ev0 = initial_valuation(task.train.facts, l);
  for (std::size_t i = 0; i < truth.size(); ++i) EXPECT_EQ(truth[i] != 0, ev0[i] == 1.0);
}

// The dyadic even solution with two invented predicates, renamed to i1, i2.
const std::vector<std::string> kEvenProgram = {
    "even(A,B):-i1(B,B),i1(B,B)", "even(A,B):-i1(B,A),i1(A,B)", "i1(A,B):-zero(C,B),zero(C,B)",
    "i1(A,B):-i2(A,C),succ(C,B)", "i2(A,B):-succ(C,B),i1(C,C)", "i2(A,B):-zero(A,B),zero(C,A)"};

TEST(ClassicalEval, TwoInventedEven) {
  const Task task = generate_task("even-dyadic");
  const Language l = make_language(task.predicates, task.train.constants, 3);
  const Program p = parse_program(kEvenProgram, l);
  const auto truth = classical_eval(p, task.train.facts, l);
  for (int i = 0; i <= 10; ++i) {
    EXPECT_EQ(truth[l.atom_index(l.target(), i, i)] != 0, i % 2 == 0) << i;
  }
  CompiledDomain d = compile_domain(task, task.test, 3, {});
  EXPECT_TRUE(classical_correct(p, d));
}

TEST(ClassicalEval, AgreesWithNaiveFixpoint) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    const auto w = testing::random_world(rng, 5, 3);
    const Model model = compile_model(w.language);
    const WeightStore weights = testing::one_hot_weights(model.weight_shape(WeightMode::per_literal), rng);
    const Program prog = extract_program(weights, model, k % 2 == 0);
    EXPECT_EQ(classical_eval(prog, w.bk, w.language),
              oracle::naive_classical_eval(prog, w.bk, w.language));
  }
}

TEST(Extract, OneHotGivesEncodedProgram) {
  const Task task = generate_task(TaskSpec{"predecessor", 3, 5});
  const Model model = compile_model(make_language(task.predicates, task.train.constants, 1));
  WeightStore w(model.weight_shape(WeightMode::per_literal));
  const std::size_t yx = candidate(model, "succ(B,A)");
  for (int r = 0; r < 4; ++r) w.row(0, r)[yx] = 5.0;
  const Program p = extract_program(w, model);
  EXPECT_EQ(format_program(p, model.language),
            "predecessor(A,B):-succ(B,A),succ(B,A)\npredecessor(A,B):-succ(B,A),succ(B,A)\n");
}

TEST(Extract, TiesPickLowestId) {
  const Task task = generate_task(TaskSpec{"predecessor", 3, 5});
  const Model model = compile_model(make_language(task.predicates, task.train.constants, 1));
  WeightStore w(model.weight_shape(WeightMode::per_literal));
  for (int r = 0; r < 4; ++r) {
    auto row = w.row(0, r);
    std::fill(row.begin(), row.end(), 0.0);
    row[0] = 2.0;
    row[1] = 2.0;
    row[2] = 1.0;
  }
  const Program p = extract_program(w, model, false);
  EXPECT_EQ(p.clauses[0].clause.body[0], model.literals[0].literal);
}

TEST(Trim, DropsUnreachableAndKeepsSemantics) {
  const Task task = generate_task("even-dyadic");
  const Language l = make_language(task.predicates, task.train.constants, 5);
  std::vector<std::string> text = kEvenProgram;
  text.push_back("i4(A,B):-succ(A,B),succ(A,B)");
  text.push_back("i4(A,B):-i3(A,B),zero(A,A)");
  text.push_back("i3(A,B):-i4(B,A),succ(A,A)");
  text.push_back("i3(A,B):-i3(A,B),i3(A,B)");
  const Program full = parse_program(text, l);
  const Program trimmed = trim_program(full, l);
  EXPECT_EQ(trimmed.clauses.size(), 6u);
  const auto a = classical_eval(full, task.train.facts, l);
  const auto b = classical_eval(trimmed, task.train.facts, l);
  EXPECT_EQ(true_atoms(a, l, l.target()), true_atoms(b, l, l.target()));
}

TEST(Trim, SoundOnRandomPrograms) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 100; ++k) {
    const auto w = testing::random_world(rng, 4, 3);
    const Model model = compile_model(w.language);
    const WeightStore weights = testing::one_hot_weights(model.weight_shape(WeightMode::per_literal), rng);
    const auto a = classical_eval(extract_program(weights, model, false), w.bk, w.language);
    const auto b = classical_eval(extract_program(weights, model, true), w.bk, w.language);
    EXPECT_EQ(true_atoms(a, w.language, w.language.target()),
              true_atoms(b, w.language, w.language.target()));
  }
}

TEST(Categorize, Precedence) {
  EXPECT_EQ(categorize(true, true, true, true), Category::C);
  EXPECT_EQ(categorize(false, true, true, true), Category::F);
  EXPECT_EQ(categorize(false, false, true, false), Category::CT);
  EXPECT_EQ(categorize(false, false, false, true), Category::FT);
  EXPECT_EQ(categorize(false, false, false, false), Category::FAIL);
  EXPECT_EQ(categorize(true, false, false, false), Category::C);
  for (Category c : {Category::C, Category::F, Category::CT, Category::FT, Category::FAIL}) {
    EXPECT_EQ(parse_category(to_string(c)), c);
  }
}

TEST(FuzzyEval, ThresholdIsInclusive) {
  const Task task = generate_task(TaskSpec{"predecessor", 2, 3});
  CompiledDomain d = compile_domain(task, task.train, 1, {});
  WeightStore w(d.model.weight_shape(WeightMode::per_literal));
  // All-zero logits: uniform mixing. Check the rule directly on one value.
  EvalConfig cfg;
  cfg.threshold = 0.5;
  const auto preds = fuzzy_eval(w, d, cfg);
  const Valuation v = infer(d.ev0, w, d.model, cfg.tnorms, cfg.infer_steps);
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    EXPECT_EQ(preds[i], v[d.examples[i].atom] >= 0.5);
  }
  cfg.threshold = v[d.examples[0].atom];
  EXPECT_TRUE(fuzzy_eval(w, d, cfg)[0]);
}

TEST(Outcome, OneHotSolutionIsCategoryC) {
  const Task task = generate_task("predecessor");
  const CompiledTask ct = compile_task(task, 1, {});
  WeightStore w(ct.train.model.weight_shape(WeightMode::per_literal));
  const std::size_t yx = candidate(ct.train.model, "succ(B,A)");
  for (int r = 0; r < 4; ++r) w.row(0, r)[yx] = 100.0;
  const Program p = extract_program(w, ct.train.model);
  const Outcome o = classify_outcome(w, p, ct.train, ct.test, {});
  EXPECT_TRUE(o.c && o.f && o.ct && o.ft);
  EXPECT_EQ(o.category, Category::C);
}

TEST(Outcome, EmbeddingConsistency) {
  std::mt19937_64 rng(43);
  const Task task = generate_task(TaskSpec{"plus2", 4, 6});
  const CompiledTask ct = compile_task(task, 2, {});
  for (int k = 0; k < 30; ++k) {
    const WeightStore w =
        testing::one_hot_weights(ct.train.model.weight_shape(WeightMode::per_literal), rng);
    const Program p = extract_program(w, ct.train.model);
    EvalConfig cfg;
    cfg.infer_steps = 25;
    const Outcome o = classify_outcome(w, p, ct.train, ct.test, cfg);
    EXPECT_EQ(o.f, o.c);
    EXPECT_EQ(o.ft, o.ct);
  }
}

TEST(Dot, WellFormed) {
  const Task task = generate_task("even-dyadic");
  const Language l = make_language(task.predicates, task.train.constants, 3);
  const std::string dot = program_dot(parse_program(kEvenProgram, l), l, "even-t3-s0");
  EXPECT_EQ(dot.rfind("digraph \"even-t3-s0\" {", 0), 0u);
  EXPECT_NE(dot.find("\"i1\" -> \"i2\""), std::string::npos) << dot;
  EXPECT_NE(dot.find("doubleoctagon"), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '{'), std::count(dot.begin(), dot.end(), '}'));
}

}  // namespace
}  // namespace dilp
