// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dilp/engine.hpp"
#include "dilp/task.hpp"

namespace dilp {

struct ProgramClause {
  Clause clause;
  int template_index = 0;
  int slot = 0;
};

struct Program {
  std::vector<ProgramClause> clauses;

  bool operator==(const Program& o) const;
};

// Argmax choice per softmax row (lowest candidate id on ties), turned into
// two clauses per template. Trimmed to the templates reachable from the
// target unless `trim` is false.
Program extract_program(const WeightStore& weights, const Model& model, bool trim = true);

Program trim_program(const Program& program, const Language& language);

// Truth of every ground atom, indexed like the language's valuations.
using Interpretation = std::vector<std::uint8_t>;

// Least fixpoint of BK plus program, computed semi-naively to saturation.
Interpretation classical_eval(const Program& program, const std::vector<Atom>& bk,
                              const Language& language);

struct EvalConfig {
  int infer_steps = 25;
  double threshold = 0.5;  // value >= threshold predicts true
  TNormConfig tnorms;
};

// Predicted label of every example of the domain under fuzzy inference.
std::vector<bool> fuzzy_eval(const WeightStore& weights, const CompiledDomain& domain,
                             const EvalConfig& config);

bool examples_correct(const std::vector<bool>& predictions, const std::vector<Example>& examples);
bool classical_correct(const Program& program, const CompiledDomain& domain);

enum class Category : std::uint8_t { C, F, CT, FT, FAIL };

std::string_view to_string(Category c);
Category parse_category(std::string_view text);

struct Outcome {
  bool c = false;   // classical program correct on the test domain
  bool f = false;   // fuzzy inference correct on the test domain
  bool ct = false;  // classical program correct on the training domain
  bool ft = false;  // fuzzy inference correct on the training domain
  Category category = Category::FAIL;
};

Category categorize(bool c, bool f, bool ct, bool ft);

Outcome classify_outcome(const WeightStore& weights, const Program& program,
                         const CompiledDomain& train, const CompiledDomain& test,
                         const EvalConfig& config);

// "e(A,B):-i7(B,B),i7(B,B)", one clause per line.
std::string format_program(const Program& program, const Language& language);

// Template dependency graph: an edge from every clause head to each body
// predicate.
std::string program_dot(const Program& program, const Language& language,
                        const std::string& title = "program");

}  // namespace dilp
