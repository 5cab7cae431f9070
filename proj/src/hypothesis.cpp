// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/hypothesis.hpp"

#include <algorithm>
#include <limits>

namespace dilp {

std::vector<Template> make_templates(const Language& language) {
  std::vector<Template> out;
  out.push_back({language.target(), language.predicate(language.target()).arity});
  for (int p = 0; p < static_cast<int>(language.num_predicates()); ++p) {
    if (language.predicate(p).kind == PredKind::invented) out.push_back({p, 2});
  }
  return out;
}

Language make_language(std::vector<PredicateSymbol> task_predicates,
                       std::vector<std::string> constants, int templates_count) {
  if (templates_count < 1) throw Error("templates count must be at least 1");
  for (int i = 1; i < templates_count; ++i) {
    task_predicates.push_back({"i" + std::to_string(i), 2, PredKind::invented});
  }
  return Language(std::move(task_predicates), std::move(constants));
}

std::vector<LiteralCandidate> enumerate_literal_candidates(const Language& language,
                                                           int /*head_arity*/,
                                                           const PruneConfig& prune) {
  std::vector<LiteralCandidate> out;
  for (int p = 0; p < static_cast<int>(language.num_predicates()); ++p) {
    const int arity = language.predicate(p).arity;
    if (arity == 2) {
      for (int a = 0; a < kNumVars; ++a) {
        for (int b = 0; b < kNumVars; ++b) {
          if (prune.drop_z_only && a == 2 && b == 2) continue;
          Literal lit{p, 2, {static_cast<Var>(a), static_cast<Var>(b)}};
          out.push_back({lit, static_cast<int>(out.size()), 3 * a + b});
        }
      }
    } else {
      for (int a = 0; a < kNumVars; ++a) {
        if (prune.drop_z_only && a == 2) continue;
        Literal lit{p, 1, {static_cast<Var>(a), Var::x}};
        out.push_back({lit, static_cast<int>(out.size()), a});
      }
    }
  }
  return out;
}

Clause ClauseCandidate::to_clause(const Template& t,
                                  const std::vector<LiteralCandidate>& lits) const {
  Clause c;
  c.head = Literal{t.head, t.head_arity, {Var::x, Var::y}};
  c.body = {lits.at(static_cast<std::size_t>(literals[0])).literal,
            lits.at(static_cast<std::size_t>(literals[1])).literal};
  return c;
}

namespace {

bool covers_head(const Literal& a, const Literal& b, int head_arity) {
  const bool has_x = a.uses(Var::x) || b.uses(Var::x);
  const bool has_y = a.uses(Var::y) || b.uses(Var::y);
  return head_arity == 2 ? (has_x && has_y) : has_x;
}

}  // namespace

std::vector<ClauseCandidate> enumerate_clause_candidates(
    const std::vector<LiteralCandidate>& literal_candidates, int head_arity,
    const PruneConfig& prune) {
  std::vector<ClauseCandidate> out;
  const int n = static_cast<int>(literal_candidates.size());
  for (int i = 0; i < n; ++i) {
    for (int j = prune.symmetric_bodies ? i : 0; j < n; ++j) {
      if (i == j && !prune.allow_duplicate_literal) continue;
      const auto& a = literal_candidates[static_cast<std::size_t>(i)].literal;
      const auto& b = literal_candidates[static_cast<std::size_t>(j)].literal;
      if (prune.head_safety && !covers_head(a, b, head_arity)) continue;
      out.push_back({{i, j}, static_cast<int>(out.size())});
    }
  }
  return out;
}

std::size_t closed_form_clause_count(std::size_t dyadic, std::size_t unary, int head_arity,
                                     const PruneConfig& prune) {
  // Literal classes by which head variables they mention.
  const std::size_t zonly = prune.drop_z_only ? 0 : dyadic + unary;
  const std::size_t c = 9 * dyadic + 3 * unary - (prune.drop_z_only ? dyadic + unary : 0);
  std::size_t ordered = 0;
  std::size_t diagonal = 0;
  if (!prune.head_safety) {
    ordered = c * c;
    diagonal = c;
  } else if (head_arity == 2) {
    const std::size_t both = 2 * dyadic;             // q(x,y), q(y,x)
    const std::size_t x_only = 3 * dyadic + unary;   // q(x,x), q(x,z), q(z,x), q(x)
    const std::size_t y_only = 3 * dyadic + unary;
    ordered = both * c + x_only * (both + y_only) + y_only * (both + x_only) + zonly * both;
    diagonal = both;
  } else {
    const std::size_t with_x = 5 * dyadic + unary;
    ordered = c * c - (c - with_x) * (c - with_x);
    diagonal = with_x;
  }
  if (!prune.allow_duplicate_literal) {
    ordered -= diagonal;
    diagonal = 0;
  }
  if (prune.symmetric_bodies) return (ordered - diagonal) / 2 + diagonal;
  return ordered;
}

GatherTable::GatherTable(int head_arity, std::size_t constants, std::size_t candidates)
    : head_arity_(head_arity), candidates_(candidates) {
  heads_ = head_arity == 2 ? constants * constants : constants;
  bindings_ = head_arity == 2 ? constants : constants * constants;
  atoms_.assign(heads_ * bindings_ * candidates_, 0);
}

const GatherTable& InferenceIndex::table(int head_arity) const {
  const auto& t = tables.at(static_cast<std::size_t>(head_arity - 1));
  if (!t) throw Error("no gather table for head arity " + std::to_string(head_arity));
  return *t;
}

std::size_t estimate_index_bytes(const std::vector<Template>& templates,
                                 const Language& language, std::size_t literal_candidates) {
  const std::size_t n = language.num_constants();
  bool arity_used[2] = {false, false};
  std::size_t heads = 0;
  for (const auto& t : templates) {
    arity_used[t.head_arity - 1] = true;
    heads += t.head_arity == 2 ? n * n : n;
  }
  std::size_t bytes = heads * sizeof(std::uint32_t);
  for (bool used : arity_used) {
    if (used) bytes += n * n * n * literal_candidates * sizeof(std::uint32_t);
  }
  return bytes;
}

InferenceIndex build_inference_index(const std::vector<Template>& templates,
                                     const Language& language,
                                     const std::vector<LiteralCandidate>& literal_candidates,
                                     std::size_t max_bytes) {
  if (language.atom_count() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error("index exceeds memory budget");
  }
  const std::size_t estimate = estimate_index_bytes(templates, language, literal_candidates.size());
  if (estimate > max_bytes) {
    throw Error("index exceeds memory budget (" + std::to_string(estimate) + " bytes > " +
                std::to_string(max_bytes) + ")");
  }
  const std::size_t n = language.num_constants();
  const std::size_t nc = literal_candidates.size();
  InferenceIndex index;
  for (const auto& t : templates) {
    auto& slot = index.tables[static_cast<std::size_t>(t.head_arity - 1)];
    if (slot) continue;
    GatherTable table(t.head_arity, n, nc);
    for (std::size_t h = 0; h < table.heads(); ++h) {
      for (std::size_t b = 0; b < table.bindings(); ++b) {
        const std::size_t flat = h * table.bindings() + b;
        const std::array<int, kNumVars> theta{static_cast<int>(flat / (n * n)),
                                              static_cast<int>((flat / n) % n),
                                              static_cast<int>(flat % n)};
        std::uint32_t* out = table.mutable_slice(h, b);
        for (std::size_t c = 0; c < nc; ++c) {
          const Literal& lit = literal_candidates[c].literal;
          const int a0 = theta[static_cast<std::size_t>(lit.args[0])];
          const int a1 = lit.arity == 2 ? theta[static_cast<std::size_t>(lit.args[1])] : 0;
          out[c] = static_cast<std::uint32_t>(language.atom_index(lit.pred, a0, a1));
        }
      }
    }
    slot = std::move(table);
  }
  index.head_atoms.reserve(templates.size());
  for (const auto& t : templates) {
    const std::size_t heads = t.head_arity == 2 ? n * n : n;
    std::vector<std::uint32_t> atoms(heads);
    for (std::size_t h = 0; h < heads; ++h) {
      atoms[h] = static_cast<std::uint32_t>(language.offset(t.head) + h);
    }
    index.head_atoms.push_back(std::move(atoms));
  }
  return index;
}

}  // namespace dilp
