// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/task.hpp"

#include "dilp/hypothesis.hpp"

namespace dilp {

const PredicateSymbol& Task::target() const {
  for (const auto& p : predicates) {
    if (p.kind == PredKind::target) return p;
  }
  throw Error("task " + name + " has no target predicate");
}

CompiledDomain compile_domain(const Task& task, const DomainData& domain, int templates_count,
                              const ModelOptions& options) {
  Language language = make_language(task.predicates, domain.constants, templates_count);
  CompiledDomain out{compile_model(std::move(language), options), {}, {}, domain.facts};
  const Language& lang = out.model.language;
  out.ev0 = initial_valuation(domain.facts, lang);
  out.examples.reserve(domain.positives.size() + domain.negatives.size());
  for (const auto& a : domain.positives) {
    out.examples.push_back({static_cast<std::uint32_t>(lang.resolve(a).index), true});
  }
  for (const auto& a : domain.negatives) {
    out.examples.push_back({static_cast<std::uint32_t>(lang.resolve(a).index), false});
  }
  for (const auto& e : out.examples) {
    if (lang.decode(e.atom).pred != lang.target()) throw Error("example is not a target atom");
  }
  return out;
}

CompiledTask compile_task(const Task& task, int templates_count, const ModelOptions& options) {
  return {compile_domain(task, task.train, templates_count, options),
          compile_domain(task, task.test, templates_count, options)};
}

}  // namespace dilp
