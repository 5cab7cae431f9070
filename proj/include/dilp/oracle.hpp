// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

// Slow, index-free reference implementations used as ground truth by the
// tests. Nothing here calls into the inference engine or the evaluator; the
// only shared code is the logic-core vocabulary and candidate enumeration.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "dilp/evaluator.hpp"
#include "dilp/hypothesis.hpp"
#include "dilp/logic.hpp"
#include "dilp/task.hpp"
#include "dilp/tnorm.hpp"
#include "dilp/weights.hpp"

namespace dilp::oracle {

inline constexpr std::size_t kDefaultWorkCap = 200'000'000;

// Direct nested-loop interpretation of fuzzy forward chaining.
class NaiveInterpreter {
 public:
  // Refuses (throws) when one step would cost more than `work_cap` atom reads.
  NaiveInterpreter(const Language& language, const PruneConfig& prune, TNormConfig tnorms,
                   std::size_t work_cap = kDefaultWorkCap);

  Valuation infer(const Valuation& ev0, const WeightStore& weights, int steps) const;

 private:
  Valuation step(const Valuation& v, const WeightStore& weights) const;
  double literal_value(const Valuation& v, const std::vector<double>& probs, int x, int y, int z) const;
  double clause_value(const Valuation& v, const Literal& a, const Literal& b, int head_arity, int x, int y) const;
  double exists(const Valuation& v, int head_arity, int x, int y,
                const std::function<double(int, int, int)>& conj) const;

  Language lang_;
  PruneConfig prune_;
  TNormConfig tn_;
  std::vector<Template> templates_;
  std::vector<LiteralCandidate> literals_;
  std::array<std::vector<ClauseCandidate>, 2> clauses_;
};

Valuation naive_infer(const Valuation& ev0, const WeightStore& weights, const Language& language,
                      const PruneConfig& prune, const TNormConfig& tnorms, int steps);

// Classical least fixpoint by repeated full passes over every substitution.
Interpretation naive_classical_eval(const Program& program, const std::vector<Atom>& bk,
                                    const Language& language);

inline constexpr std::size_t kDefaultSearchCap = 1'000'000;

// Number of programs the exhaustive search visits: per template, unordered
// pairs of clauses whose bodies are unordered pairs of literal candidates.
double exhaustive_program_count(std::size_t literal_candidates, int templates_count);

// Every program (with clause bodies and clause slots taken as unordered) over
// `templates_count` generic templates that classically entails all positive
// and no negative training examples. Throws, quoting the count, if the search
// space exceeds `cap`.
std::vector<Program> exhaustive_solve(const Task& task, int templates_count,
                                      std::size_t cap = kDefaultSearchCap);

}  // namespace dilp::oracle
