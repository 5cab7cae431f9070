// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

// Serial per-literal forward chaining straight off the gather index. Slow,
// but every value is a literal transcription of the step definition, which
// makes it the baseline the parallel kernel is tested and benchmarked against.

#include <algorithm>

#include "dilp/engine.hpp"

namespace dilp::reference {

std::vector<double> mixed_literal_valuation(const Valuation& v, std::span<const double> logits,
                                            const GatherTable& table) {
  if (logits.size() != table.candidates()) throw Error("weight row does not match gather table");
  std::vector<double> p(logits.size());
  softmax(logits, p);
  std::vector<double> out(table.heads() * table.bindings(), 0.0);
  for (std::size_t h = 0; h < table.heads(); ++h) {
    for (std::size_t b = 0; b < table.bindings(); ++b) {
      const std::uint32_t* atoms = table.slice(h, b);
      double acc = 0.0;
      for (std::size_t c = 0; c < p.size(); ++c) acc += p[c] * v[atoms[c]];
      out[h * table.bindings() + b] = acc;
    }
  }
  return out;
}

Valuation forward_chain_step(const Valuation& v, const WeightStore& weights, const Model& model,
                             const TNormConfig& tnorms) {
  if (weights.mode() != WeightMode::per_literal) {
    throw Error("reference kernel covers per-literal weights only");
  }
  if (!model.index) throw Error("reference kernel needs the gather index");
  Valuation out = v;
  for (std::size_t t = 0; t < model.templates.size(); ++t) {
    const Template& tpl = model.templates[t];
    const GatherTable& table = model.index->table(tpl.head_arity);
    std::vector<double> clause[kClauseSlots];
    for (int s = 0; s < kClauseSlots; ++s) {
      const auto m0 = mixed_literal_valuation(v, weights.row(t, s * kLiteralSlots), table);
      const auto m1 = mixed_literal_valuation(v, weights.row(t, s * kLiteralSlots + 1), table);
      clause[s].assign(table.heads(), 0.0);
      for (std::size_t h = 0; h < table.heads(); ++h) {
        double acc = 0.0;
        for (std::size_t b = 0; b < table.bindings(); ++b) {
          const std::size_t k = h * table.bindings() + b;
          const double conj = tnorm_and(m0[k], m1[k], tnorms.and_literal);
          acc = b == 0 ? conj : tnorm_or(acc, conj, tnorms.or_exists);
        }
        clause[s][h] = acc;
      }
    }
    const auto& heads = model.index->head_atoms[t];
    for (std::size_t h = 0; h < heads.size(); ++h) {
      const double head = tnorm_or(clause[0][h], clause[1][h], tnorms.or_clausal);
      out[heads[h]] = clamp_unit(tnorm_or(v[heads[h]], head, tnorms.or_step));
    }
  }
  return out;
}

Valuation infer(const Valuation& ev0, const WeightStore& weights, const Model& model,
                const TNormConfig& tnorms, int steps) {
  Valuation v = ev0;
  for (int i = 0; i < steps; ++i) v = reference::forward_chain_step(v, weights, model, tnorms);
  return v;
}

}  // namespace dilp::reference
