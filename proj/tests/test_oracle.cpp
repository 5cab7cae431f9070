// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "dilp/evaluator.hpp"
#include "dilp/oracle.hpp"
#include "dilp/tasks.hpp"
#include "test_util.hpp"

namespace dilp {
namespace {

bool entails(const Program& p, const Task& task, const Language& l) {
  const auto truth = classical_eval(p, task.train.facts, l);
  for (const auto& a : task.train.positives)
    if (!truth[l.resolve(a).index]) return false;
  for (const auto& a : task.train.negatives)
    if (truth[l.resolve(a).index]) return false;
  return true;
}

TEST(Exhaustive, PredecessorOneTemplate) {
  const Task task = generate_task(TaskSpec{"predecessor", 4, 6});
  const auto sols = oracle::exhaustive_solve(task, 1);
  ASSERT_FALSE(sols.empty());
  const Language l = make_language(task.predicates, task.train.constants, 1);
  const std::string known = "predecessor(A,B):-succ(B,A),succ(B,A)\n";
  bool found = false;
  for (const auto& p : sols) {
    EXPECT_TRUE(entails(p, task, l));  // checked by the semi-naive evaluator
    if (format_program(p, l) == known + known) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Exhaustive, EvenNeedsInvention) {
  // One template: the target alone, no invented predicate.
  const Task task = generate_task(TaskSpec{"even", 4, 6});
  EXPECT_TRUE(oracle::exhaustive_solve(task, 1).empty());
}

TEST(Exhaustive, RefusesAboveCap) {
  const Task task = generate_task(TaskSpec{"mod6", 6, 8});
  const Language l = make_language(task.predicates, task.train.constants, 3);
  const auto c = enumerate_literal_candidates(l, 1).size();
  const double count = oracle::exhaustive_program_count(c, 3);
  EXPECT_GT(count, 1e6);
  try {
    oracle::exhaustive_solve(task, 3);
    FAIL() << "expected refusal";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("refuses"), std::string::npos);
  }
}

TEST(Exhaustive, CountFormula) {
  // K = C(C+1)/2 unordered bodies, K(K+1)/2 unordered clause pairs per template.
  EXPECT_DOUBLE_EQ(oracle::exhaustive_program_count(3, 1), 21.0);
  EXPECT_DOUBLE_EQ(oracle::exhaustive_program_count(3, 2), 441.0);
}

TEST(Naive, OneHotIsBooleanChaining) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 20; ++k) {
    const auto w = testing::random_world(rng, 3, 2);
    const Model model = compile_model(w.language);
    const WeightStore weights = testing::one_hot_weights(model.weight_shape(WeightMode::per_literal), rng);
    const Valuation ev0 = initial_valuation(w.bk, w.language);
    const Program p = extract_program(weights, model, false);
    EXPECT_EQ(oracle::naive_infer(ev0, weights, w.language, {}, {}, 4),
              testing::boolean_chain(p, ev0, w.language, 4));
  }
}

TEST(Naive, RefusesLargeLanguages) {
  const Task task = generate_task("even");
  const Language l = make_language(task.predicates, task.test.constants, 30);
  EXPECT_THROW(oracle::NaiveInterpreter(l, {}, {}), Error);
}

}  // namespace
}  // namespace dilp
