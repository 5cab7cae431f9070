// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

// First-order vocabulary shared by every other module: predicates, constants,
// literals over the template variables {x, y, z}, clauses, and the ground-atom
// coordinate system that valuations are indexed by.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dilp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PredKind : std::uint8_t { extensional, target, invented };

std::string_view to_string(PredKind kind);
PredKind parse_pred_kind(std::string_view text);

struct PredicateSymbol {
  std::string name;
  int arity = 2;
  PredKind kind = PredKind::extensional;

  bool learnable() const { return kind != PredKind::extensional; }
  bool operator==(const PredicateSymbol&) const = default;
};

// z is the only variable that never occurs in a dyadic head. For unary heads
// p(x) both y and z are existential.
enum class Var : std::uint8_t { x = 0, y = 1, z = 2 };

inline constexpr int kNumVars = 3;

char var_name(Var v);

// A literal refers to its predicate by position in the owning Language.
struct Literal {
  int pred = 0;
  int arity = 2;
  std::array<Var, 2> args{Var::x, Var::y};

  bool uses(Var v) const {
    return args[0] == v || (arity == 2 && args[1] == v);
  }
  bool operator==(const Literal&) const = default;
};

struct Clause {
  Literal head;
  std::array<Literal, 2> body;

  bool operator==(const Clause&) const = default;
};

// A symbolic atom as it appears in task files: names only.
struct Atom {
  std::string pred;
  std::vector<std::string> args;

  bool operator==(const Atom&) const = default;
};

struct GroundAtom {
  int pred = 0;
  std::array<int, 2> args{0, 0};
  std::size_t index = 0;

  bool operator==(const GroundAtom&) const = default;
};

using Valuation = std::vector<double>;

// Predicates and constants in a fixed order. Ground atoms are numbered
// predicate by predicate in declaration order; within a predicate the
// argument tuples follow lexicographic constant order, so the atom
// p(c_i, c_j) of a dyadic p sits at offset(p) + i * N + j.
class Language {
 public:
  Language(std::vector<PredicateSymbol> predicates, std::vector<std::string> constants);

  const std::vector<PredicateSymbol>& predicates() const { return predicates_; }
  const std::vector<std::string>& constants() const { return constants_; }
  const PredicateSymbol& predicate(int p) const { return predicates_.at(static_cast<std::size_t>(p)); }

  std::size_t num_predicates() const { return predicates_.size(); }
  std::size_t num_constants() const { return constants_.size(); }
  std::size_t atom_count() const { return atom_count_; }
  std::size_t offset(int pred) const { return offsets_[static_cast<std::size_t>(pred)]; }
  std::size_t block_size(int pred) const;

  int target() const { return target_; }
  std::optional<int> find_predicate(std::string_view name) const;
  std::optional<int> find_constant(std::string_view name) const;

  std::size_t atom_index(int pred, int a0, int a1 = 0) const;
  GroundAtom decode(std::size_t index) const;
  GroundAtom resolve(const Atom& atom) const;
  std::string format(const GroundAtom& atom) const;
  std::string format(std::size_t index) const { return format(decode(index)); }

  bool operator==(const Language& other) const {
    return predicates_ == other.predicates_ && constants_ == other.constants_;
  }

 private:
  std::vector<PredicateSymbol> predicates_;
  std::vector<std::string> constants_;
  std::vector<std::size_t> offsets_;
  std::size_t atom_count_ = 0;
  int target_ = -1;
  std::unordered_map<std::string, int> pred_lookup_;
  std::unordered_map<std::string, int> const_lookup_;
};

std::vector<GroundAtom> build_atom_index(const Language& language);

struct GroundedClause {
  GroundAtom head;
  std::vector<std::pair<GroundAtom, GroundAtom>> bindings;

  bool operator==(const GroundedClause&) const = default;
};

// One entry per head grounding. Bindings enumerate the non-head variables that
// actually occur in the body (a single empty binding when none does).
std::vector<GroundedClause> ground_clause(const Clause& clause, const Language& language);

Valuation initial_valuation(const std::vector<Atom>& bk_facts, const Language& language);

std::string format_literal(const Literal& literal, const Language& language);
std::string format_clause(const Clause& clause, const Language& language);

}  // namespace dilp
