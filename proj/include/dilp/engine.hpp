// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

// Fuzzy forward chaining that is differentiable in the template weights.
//
// One step, for every template t and clause slot s:
//   mixed_l[h,b] = sum_c softmax(w[t,s,l])_c * V[atom(h, b, c)]     (l = 0, 1)
//   conj[h,b]    = and_literal(mixed_0[h,b], mixed_1[h,b])
//   clause_s[h]  = or_exists over b of conj[h,b]
//   head[h]      = or_clausal(clause_0[h], clause_1[h])
//   V'[head h]   = or_step(V[head h], head[h])
// Extensional atoms are copied unchanged. The per-clause and per-template
// weight modes replace the literal mixing with a softmax-weighted average over
// whole clauses or clause pairs respectively.
//
// The per-literal kernel never touches the gather index: each mixed literal is
// a sum over the nine argument patterns of {x,y,z}^2 (three for unary
// predicates) of pattern-weighted predicate matrices, so the candidate sum is
// one GEMM per step and the rest is O(N^3) per literal slot.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dilp/hypothesis.hpp"
#include "dilp/logic.hpp"
#include "dilp/tnorm.hpp"
#include "dilp/weights.hpp"

namespace dilp {

struct ModelOptions {
  PruneConfig prune;
  // Gather index and clause candidates are needed by the per-clause and
  // per-template modes and by the reference kernel.
  bool build_index = false;
  bool build_clauses = false;
  std::size_t max_index_bytes = kDefaultMaxIndexBytes;
};

// A language together with its compiled hypothesis space.
struct Model {
  Language language;
  std::vector<Template> templates;
  PruneConfig prune;
  std::vector<LiteralCandidate> literals;
  std::array<std::vector<ClauseCandidate>, 2> clauses;  // by head arity - 1
  std::optional<InferenceIndex> index;

  WeightShape weight_shape(WeightMode mode) const;
};

Model compile_model(Language language, const ModelOptions& options = {});

// Options appropriate for training in `mode`.
ModelOptions options_for(WeightMode mode, PruneConfig prune = {});

struct Example {
  std::uint32_t atom = 0;
  bool positive = true;
};

class ForwardChainer {
 public:
  ForwardChainer(const Model& model, TNormConfig tnorms);
  ~ForwardChainer();
  ForwardChainer(const ForwardChainer&) = delete;
  ForwardChainer& operator=(const ForwardChainer&) = delete;

  // Softmaxes the logits once; they stay fixed for subsequent steps.
  void set_weights(const WeightStore& weights);

  Valuation step(const Valuation& v) const;

  // Applies `steps` forward-chaining steps. When `trace` is given it receives
  // every intermediate valuation, trace[0] == ev0.
  Valuation infer(const Valuation& ev0, int steps, std::vector<Valuation>* trace = nullptr) const;

  // Reverse pass through the steps recorded in `trace` (as produced by
  // infer), given dL/dV at the final valuation. Returns dL/dlogits laid out
  // like the weight store.
  std::vector<double> backward(const std::vector<Valuation>& trace,
                               const Valuation& grad_final) const;

  const Model& model() const { return model_; }
  const TNormConfig& tnorms() const { return tnorms_; }

 private:
  struct Impl;
  const Model& model_;
  TNormConfig tnorms_;
  std::unique_ptr<Impl> impl_;
};

Valuation forward_chain_step(const Valuation& v, const WeightStore& weights, const Model& model,
                             const TNormConfig& tnorms);

Valuation infer(const Valuation& ev0, const WeightStore& weights, const Model& model,
                const TNormConfig& tnorms, int steps);

inline constexpr double kLossEpsilon = 1e-7;

struct LossTerms {
  double loss = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// Balanced loss: half the mean positive log loss plus half the mean negative
// one over the examples whose mask entry is set (an empty mask selects all).
// A half with no selected examples contributes zero. If `grad` is non-null it
// receives dL/dV.
LossTerms balanced_loss(const Valuation& v, const std::vector<Example>& examples,
                        const std::vector<std::uint8_t>& mask, Valuation* grad = nullptr);

struct LossAndGradient {
  double loss = 0.0;       // over the masked batch
  double full_loss = 0.0;  // over every example, same forward pass
  std::vector<double> gradient;
  Valuation final_valuation;
};

LossAndGradient loss_and_gradient(const ForwardChainer& chainer, const Valuation& ev0,
                                  const std::vector<Example>& examples,
                                  const std::vector<std::uint8_t>& mask, int steps);

// Reference path over the gather index, kept for tests and benchmarks.
namespace reference {

// output[h * Z + b] = sum_c softmax(logits)_c * v[table.at(h, b, c)]
std::vector<double> mixed_literal_valuation(const Valuation& v, std::span<const double> logits,
                                            const GatherTable& table);

// Serial per-literal step driven entirely by the gather index.
Valuation forward_chain_step(const Valuation& v, const WeightStore& weights, const Model& model,
                             const TNormConfig& tnorms);

Valuation infer(const Valuation& ev0, const WeightStore& weights, const Model& model,
                const TNormConfig& tnorms, int steps);

}  // namespace reference

}  // namespace dilp
