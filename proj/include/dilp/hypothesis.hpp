// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

// Generic ({x,y,z}, p)-templates and the choice spaces they induce: literal
// candidates (what a single body literal may be), clause candidates (pairs of
// literal candidates), and the gather index that maps every
// (head grounding, existential binding, candidate) triple to a ground atom.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dilp/logic.hpp"

namespace dilp {

// Every learnable predicate owns exactly one template with two clause slots,
// each holding two literal slots.
struct Template {
  int head = 0;  // predicate index in the Language
  int head_arity = 2;
};

inline constexpr int kClauseSlots = 2;
inline constexpr int kLiteralSlots = 2;

// Builds one template per learnable predicate, target first.
std::vector<Template> make_templates(const Language& language);

// Appends `templates_count - 1` invented dyadic predicates i1, i2, ... to the
// task predicates, so that together with the target there are
// `templates_count` templates.
Language make_language(std::vector<PredicateSymbol> task_predicates,
                       std::vector<std::string> constants, int templates_count);

struct PruneConfig {
  // Literal level.
  bool drop_z_only = false;  // drop q(z,z) and q(z): literals not touching a head variable
  // Clause level.
  bool head_safety = true;  // every head variable occurs in the body
  bool symmetric_bodies = false;  // treat (l1, l2) and (l2, l1) as one clause
  bool allow_duplicate_literal = true;  // allow l1 == l2
};

struct LiteralCandidate {
  Literal literal;
  int candidate_id = 0;
  int pattern = 0;  // 3*arg0 + arg1 for dyadic literals, arg0 for unary ones
};

// Predicates in declaration order; argument tuples in lexicographic (x, y, z)
// order. Without pruning the count is 9 per dyadic and 3 per unary predicate.
// The set is the same for both head arities.
std::vector<LiteralCandidate> enumerate_literal_candidates(const Language& language,
                                                           int head_arity,
                                                           const PruneConfig& prune = {});

struct ClauseCandidate {
  std::array<int, 2> literals{0, 0};  // literal candidate ids
  int candidate_id = 0;

  Clause to_clause(const Template& t, const std::vector<LiteralCandidate>& lits) const;
};

std::vector<ClauseCandidate> enumerate_clause_candidates(
    const std::vector<LiteralCandidate>& literal_candidates, int head_arity,
    const PruneConfig& prune = {});

// Closed-form clause candidate count for the unpruned literal set of a
// language with `dyadic` and `unary` predicates.
std::size_t closed_form_clause_count(std::size_t dyadic, std::size_t unary, int head_arity,
                                     const PruneConfig& prune);

// Gather table for one head arity. Heads and bindings share a single
// coordinate system: the (x, y, z) assignment flattened as (x*N + y)*N + z.
// A dyadic head (x, y) owns the N bindings of z; a unary head x owns the N^2
// bindings of (y, z).
class GatherTable {
 public:
  GatherTable() = default;
  GatherTable(int head_arity, std::size_t constants, std::size_t candidates);

  int head_arity() const { return head_arity_; }
  std::size_t heads() const { return heads_; }
  std::size_t bindings() const { return bindings_; }
  std::size_t candidates() const { return candidates_; }

  std::uint32_t at(std::size_t head, std::size_t binding, std::size_t candidate) const {
    return atoms_[(head * bindings_ + binding) * candidates_ + candidate];
  }
  const std::uint32_t* slice(std::size_t head, std::size_t binding) const {
    return atoms_.data() + (head * bindings_ + binding) * candidates_;
  }
  std::uint32_t* mutable_slice(std::size_t head, std::size_t binding) {
    return atoms_.data() + (head * bindings_ + binding) * candidates_;
  }
  std::size_t size() const { return atoms_.size(); }

 private:
  int head_arity_ = 2;
  std::size_t heads_ = 0;
  std::size_t bindings_ = 0;
  std::size_t candidates_ = 0;
  std::vector<std::uint32_t> atoms_;
};

struct InferenceIndex {
  // tables[0] serves unary heads, tables[1] dyadic heads; built only for the
  // arities some template uses.
  std::array<std::optional<GatherTable>, 2> tables;
  // Per template: ground-atom index of every head grounding, in head order.
  std::vector<std::vector<std::uint32_t>> head_atoms;

  const GatherTable& table(int head_arity) const;
};

std::size_t estimate_index_bytes(const std::vector<Template>& templates,
                                 const Language& language, std::size_t literal_candidates);

inline constexpr std::size_t kDefaultMaxIndexBytes = std::size_t{2} << 30;

// Throws "index exceeds memory budget" if the estimate is above max_bytes.
InferenceIndex build_inference_index(const std::vector<Template>& templates,
                                     const Language& language,
                                     const std::vector<LiteralCandidate>& literal_candidates,
                                     std::size_t max_bytes = kDefaultMaxIndexBytes);

}  // namespace dilp
