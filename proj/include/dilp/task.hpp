// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dilp/engine.hpp"
#include "dilp/logic.hpp"

namespace dilp {

struct DomainData {
  std::vector<std::string> constants;
  std::vector<Atom> facts;
  std::vector<Atom> positives;
  std::vector<Atom> negatives;

  bool operator==(const DomainData&) const = default;
};

// A learning task: the predicates of its background knowledge plus the
// target, and a training and a (larger) test domain.
struct Task {
  std::string name;
  std::vector<PredicateSymbol> predicates;
  DomainData train;
  DomainData test;

  const PredicateSymbol& target() const;
  bool operator==(const Task&) const = default;
};

// One domain compiled against a template budget.
struct CompiledDomain {
  Model model;
  Valuation ev0;
  std::vector<Example> examples;
  std::vector<Atom> facts;  // kept for classical evaluation
};

CompiledDomain compile_domain(const Task& task, const DomainData& domain, int templates_count,
                              const ModelOptions& options);

struct CompiledTask {
  CompiledDomain train;
  CompiledDomain test;
};

CompiledTask compile_task(const Task& task, int templates_count, const ModelOptions& options);

// Line-based task file:
//   % comment
//   task <name>
//   pred <name>/<arity> <extensional|target>
//   [train]            (or [test])
//   const <name>
//   fact <atom>.
//   pos <atom>.
//   neg <atom>.
// Predicates are shared by both sections; atoms are written p(a,b).
// Whitespace between tokens is insignificant.
void write_task_file(const Task& task, std::ostream& out);
std::string task_file_text(const Task& task);
Task parse_task_file(std::istream& in);
Task parse_task_text(const std::string& text);
Task load_task_file(const std::string& path);

std::string format_atom(const Atom& atom);
Atom parse_atom(const std::string& text);

}  // namespace dilp
