// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/logic.hpp"

#include <algorithm>

namespace dilp {

std::string_view to_string(PredKind kind) {
  switch (kind) {
    case PredKind::extensional: return "extensional";
    case PredKind::target: return "target";
    case PredKind::invented: return "invented";
  }
  return "?";
}

PredKind parse_pred_kind(std::string_view text) {
  if (text == "extensional") return PredKind::extensional;
  if (text == "target") return PredKind::target;
  if (text == "invented") return PredKind::invented;
  throw Error("unknown predicate kind '" + std::string(text) + "'");
}

char var_name(Var v) {
  // Printed the way logic programs are usually written: A, B, C.
  switch (v) {
    case Var::x: return 'A';
    case Var::y: return 'B';
    case Var::z: return 'C';
  }
  return '?';
}

Language::Language(std::vector<PredicateSymbol> predicates, std::vector<std::string> constants)
    : predicates_(std::move(predicates)), constants_(std::move(constants)) {
  const std::size_t n = constants_.size();
  offsets_.reserve(predicates_.size());
  for (std::size_t i = 0; i < predicates_.size(); ++i) {
    const auto& p = predicates_[i];
    if (p.arity != 1 && p.arity != 2) {
      throw Error("predicate " + p.name + ": arity must be 1 or 2");
    }
    if (p.kind == PredKind::invented && p.arity != 2) {
      throw Error("invented predicate " + p.name + " must be dyadic");
    }
    if (!pred_lookup_.emplace(p.name, static_cast<int>(i)).second) {
      throw Error("duplicate predicate " + p.name);
    }
    if (p.kind == PredKind::target) {
      if (target_ >= 0) throw Error("more than one target predicate");
      target_ = static_cast<int>(i);
    }
    offsets_.push_back(atom_count_);
    atom_count_ += p.arity == 2 ? n * n : n;
  }
  if (target_ < 0) throw Error("language has no target predicate");
  for (std::size_t i = 0; i < n; ++i) {
    if (!const_lookup_.emplace(constants_[i], static_cast<int>(i)).second) {
      throw Error("duplicate constant " + constants_[i]);
    }
  }
}

std::size_t Language::block_size(int pred) const {
  const std::size_t n = constants_.size();
  return predicate(pred).arity == 2 ? n * n : n;
}

std::optional<int> Language::find_predicate(std::string_view name) const {
  auto it = pred_lookup_.find(std::string(name));
  if (it == pred_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Language::find_constant(std::string_view name) const {
  auto it = const_lookup_.find(std::string(name));
  if (it == const_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Language::atom_index(int pred, int a0, int a1) const {
  const std::size_t n = constants_.size();
  if (predicate(pred).arity == 2) {
    return offsets_[static_cast<std::size_t>(pred)] + static_cast<std::size_t>(a0) * n +
           static_cast<std::size_t>(a1);
  }
  return offsets_[static_cast<std::size_t>(pred)] + static_cast<std::size_t>(a0);
}

GroundAtom Language::decode(std::size_t index) const {
  if (index >= atom_count_) throw Error("atom index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const int pred = static_cast<int>(std::distance(offsets_.begin(), it)) - 1;
  const std::size_t local = index - offsets_[static_cast<std::size_t>(pred)];
  const std::size_t n = constants_.size();
  GroundAtom atom;
  atom.pred = pred;
  atom.index = index;
  if (predicate(pred).arity == 2) {
    atom.args = {static_cast<int>(local / n), static_cast<int>(local % n)};
  } else {
    atom.args = {static_cast<int>(local), 0};
  }
  return atom;
}

GroundAtom Language::resolve(const Atom& atom) const {
  auto pred = find_predicate(atom.pred);
  if (!pred || static_cast<int>(atom.args.size()) != predicate(*pred).arity) {
    throw Error("fact outside language: " + atom.pred);
  }
  std::array<int, 2> args{0, 0};
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    auto c = find_constant(atom.args[i]);
    if (!c) throw Error("fact outside language: unknown constant " + atom.args[i]);
    args[i] = *c;
  }
  return GroundAtom{*pred, args, atom_index(*pred, args[0], args[1])};
}

std::string Language::format(const GroundAtom& atom) const {
  const auto& p = predicate(atom.pred);
  std::string out = p.name + "(" + constants_.at(static_cast<std::size_t>(atom.args[0]));
  if (p.arity == 2) out += "," + constants_.at(static_cast<std::size_t>(atom.args[1]));
  return out + ")";
}

std::vector<GroundAtom> build_atom_index(const Language& language) {
  if (language.num_constants() == 0) throw Error("empty domain");
  std::vector<GroundAtom> atoms;
  atoms.reserve(language.atom_count());
  const int n = static_cast<int>(language.num_constants());
  for (int p = 0; p < static_cast<int>(language.num_predicates()); ++p) {
    if (language.predicate(p).arity == 2) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) atoms.push_back({p, {a, b}, atoms.size()});
    } else {
      for (int a = 0; a < n; ++a) atoms.push_back({p, {a, 0}, atoms.size()});
    }
  }
  return atoms;
}

namespace {

GroundAtom ground_literal(const Literal& lit, const std::array<int, kNumVars>& theta,
                          const Language& language) {
  const int a0 = theta[static_cast<std::size_t>(lit.args[0])];
  const int a1 = lit.arity == 2 ? theta[static_cast<std::size_t>(lit.args[1])] : 0;
  return GroundAtom{lit.pred, {a0, a1}, language.atom_index(lit.pred, a0, a1)};
}

}  // namespace

std::vector<GroundedClause> ground_clause(const Clause& clause, const Language& language) {
  const int n = static_cast<int>(language.num_constants());
  const bool dyadic_head = clause.head.arity == 2;

  // Non-head variables that occur in the body, in x, y, z order.
  std::vector<Var> free_vars;
  for (Var v : {Var::y, Var::z}) {
    if (dyadic_head && v == Var::y) continue;
    if (clause.body[0].uses(v) || clause.body[1].uses(v)) free_vars.push_back(v);
  }

  std::vector<GroundedClause> out;
  const int heads = dyadic_head ? n * n : n;
  out.reserve(static_cast<std::size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    std::array<int, kNumVars> theta{0, 0, 0};
    theta[0] = dyadic_head ? h / n : h;
    if (dyadic_head) theta[1] = h % n;
    GroundedClause g;
    g.head = ground_literal(clause.head, theta, language);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < free_vars.size(); ++i) combos *= static_cast<std::size_t>(n);
    g.bindings.reserve(combos);
    for (std::size_t b = 0; b < combos; ++b) {
      std::size_t rest = b;
      for (std::size_t i = free_vars.size(); i-- > 0;) {
        theta[static_cast<std::size_t>(free_vars[i])] = static_cast<int>(rest % static_cast<std::size_t>(n));
        rest /= static_cast<std::size_t>(n);
      }
      g.bindings.emplace_back(ground_literal(clause.body[0], theta, language),
                              ground_literal(clause.body[1], theta, language));
    }
    out.push_back(std::move(g));
  }
  return out;
}

Valuation initial_valuation(const std::vector<Atom>& bk_facts, const Language& language) {
  Valuation v(language.atom_count(), 0.0);
  for (const auto& fact : bk_facts) {
    const GroundAtom g = language.resolve(fact);
    if (language.predicate(g.pred).kind != PredKind::extensional) {
      throw Error("fact outside language: " + fact.pred + " is not extensional");
    }
    v[g.index] = 1.0;
  }
  return v;
}

std::string format_literal(const Literal& literal, const Language& language) {
  std::string out = language.predicate(literal.pred).name + "(";
  out += var_name(literal.args[0]);
  if (literal.arity == 2) {
    out += ',';
    out += var_name(literal.args[1]);
  }
  return out + ")";
}

std::string format_clause(const Clause& clause, const Language& language) {
  return format_literal(clause.head, language) + ":-" + format_literal(clause.body[0], language) +
         "," + format_literal(clause.body[1], language);
}

}  // namespace dilp
