// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/evaluator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dilp {

bool Program::operator==(const Program& o) const {
  if (clauses.size() != o.clauses.size()) return false;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (!(clauses[i].clause == o.clauses[i].clause) ||
        clauses[i].template_index != o.clauses[i].template_index ||
        clauses[i].slot != o.clauses[i].slot) {
      return false;
    }
  }
  return true;
}

namespace {

std::size_t argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = i;
  }
  return best;
}

}  // namespace

Program trim_program(const Program& program, const Language& language) {
  std::set<int> reachable{language.target()};
  std::vector<int> frontier{language.target()};
  while (!frontier.empty()) {
    const int p = frontier.back();
    frontier.pop_back();
    for (const auto& pc : program.clauses) {
      if (pc.clause.head.pred != p) continue;
      for (const auto& lit : pc.clause.body) {
        if (language.predicate(lit.pred).learnable() && reachable.insert(lit.pred).second) {
          frontier.push_back(lit.pred);
        }
      }
    }
  }
  Program out;
  for (const auto& pc : program.clauses) {
    if (reachable.count(pc.clause.head.pred)) out.clauses.push_back(pc);
  }
  return out;
}

Program extract_program(const WeightStore& weights, const Model& model, bool trim) {
  const auto& shape = weights.shape();
  if (shape.templates() != model.templates.size()) throw Error("weight store does not match model");
  Program program;
  for (std::size_t t = 0; t < model.templates.size(); ++t) {
    const Template& tpl = model.templates[t];
    const auto& clauses = model.clauses[static_cast<std::size_t>(tpl.head_arity - 1)];
    std::array<ClauseCandidate, kClauseSlots> chosen{};
    switch (shape.mode()) {
      case WeightMode::per_literal:
        for (int s = 0; s < kClauseSlots; ++s) {
          chosen[static_cast<std::size_t>(s)].literals = {
              static_cast<int>(argmax(weights.row(t, s * kLiteralSlots))),
              static_cast<int>(argmax(weights.row(t, s * kLiteralSlots + 1)))};
        }
        break;
      case WeightMode::per_clause:
        for (int s = 0; s < kClauseSlots; ++s) {
          chosen[static_cast<std::size_t>(s)] = clauses.at(argmax(weights.row(t, s)));
        }
        break;
      case WeightMode::per_template: {
        const std::size_t pair = argmax(weights.row(t, 0));
        chosen[0] = clauses.at(pair / clauses.size());
        chosen[1] = clauses.at(pair % clauses.size());
        break;
      }
    }
    for (int s = 0; s < kClauseSlots; ++s) {
      program.clauses.push_back(
          {chosen[static_cast<std::size_t>(s)].to_clause(tpl, model.literals), static_cast<int>(t), s});
    }
  }
  return trim ? trim_program(program, model.language) : program;
}

namespace {

// Semi-naive bottom-up evaluation. Each round joins, for every clause, one
// body literal against the previous round's new atoms and the other against
// everything known so far.
class SemiNaive {
 public:
  SemiNaive(const Program& program, const Language& language)
      : program_(program), lang_(language), n_(static_cast<int>(language.num_constants())) {}

  Interpretation run(const std::vector<Atom>& bk) {
    known_.assign(lang_.atom_count(), 0);
    std::vector<std::size_t> delta;
    for (const auto& f : bk) {
      const std::size_t i = lang_.resolve(f).index;
      if (!known_[i]) {
        known_[i] = 1;
        delta.push_back(i);
      }
    }
    while (!delta.empty()) {
      std::vector<std::vector<std::size_t>> by_pred(lang_.num_predicates());
      for (std::size_t a : delta) by_pred[static_cast<std::size_t>(lang_.decode(a).pred)].push_back(a);
      std::vector<std::size_t> fresh;
      for (const auto& pc : program_.clauses) {
        for (int i = 0; i < 2; ++i) {
          for (std::size_t a : by_pred[static_cast<std::size_t>(pc.clause.body[static_cast<std::size_t>(i)].pred)]) {
            join(pc.clause, i, lang_.decode(a), fresh);
          }
        }
      }
      delta.clear();
      for (std::size_t a : fresh) {
        if (!known_[a]) {
          known_[a] = 1;
          delta.push_back(a);
        }
      }
    }
    return known_;
  }

 private:
  // Binds literal `i` to `atom`, then enumerates the variables still free.
  void join(const Clause& c, int i, const GroundAtom& atom, std::vector<std::size_t>& out) const {
    std::array<int, kNumVars> theta{-1, -1, -1};
    const Literal& lit = c.body[static_cast<std::size_t>(i)];
    for (int k = 0; k < lit.arity; ++k) {
      int& slot = theta[static_cast<std::size_t>(lit.args[static_cast<std::size_t>(k)])];
      if (slot >= 0 && slot != atom.args[static_cast<std::size_t>(k)]) return;
      slot = atom.args[static_cast<std::size_t>(k)];
    }
    const Literal& other = c.body[static_cast<std::size_t>(1 - i)];
    enumerate(c, other, theta, 0, out);
  }

  void enumerate(const Clause& c, const Literal& other, std::array<int, kNumVars>& theta, int var,
                 std::vector<std::size_t>& out) const {
    if (var == kNumVars) {
      const int a1 = other.arity == 2 ? theta[static_cast<std::size_t>(other.args[1])] : 0;
      if (!known_[lang_.atom_index(other.pred, theta[static_cast<std::size_t>(other.args[0])], a1)]) return;
      const int h1 = c.head.arity == 2 ? theta[1] : 0;
      out.push_back(lang_.atom_index(c.head.pred, theta[0], h1));
      return;
    }
    // Only variables the other literal or the head needs get enumerated.
    const Var v = static_cast<Var>(var);
    const bool needed = other.uses(v) || c.head.uses(v);
    if (theta[static_cast<std::size_t>(var)] >= 0 || !needed) {
      enumerate(c, other, theta, var + 1, out);
      return;
    }
    for (int k = 0; k < n_; ++k) {
      theta[static_cast<std::size_t>(var)] = k;
      enumerate(c, other, theta, var + 1, out);
    }
    theta[static_cast<std::size_t>(var)] = -1;
  }

  const Program& program_;
  const Language& lang_;
  int n_;
  Interpretation known_;
};

}  // namespace

Interpretation classical_eval(const Program& program, const std::vector<Atom>& bk,
                              const Language& language) {
  return SemiNaive(program, language).run(bk);
}

std::vector<bool> fuzzy_eval(const WeightStore& weights, const CompiledDomain& domain,
                             const EvalConfig& config) {
  ForwardChainer fc(domain.model, config.tnorms);
  fc.set_weights(weights);
  const Valuation v = fc.infer(domain.ev0, config.infer_steps);
  std::vector<bool> out;
  out.reserve(domain.examples.size());
  for (const auto& e : domain.examples) out.push_back(v[e.atom] >= config.threshold);
  return out;
}

bool examples_correct(const std::vector<bool>& predictions, const std::vector<Example>& examples) {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (predictions[i] != examples[i].positive) return false;
  }
  return true;
}

bool classical_correct(const Program& program, const CompiledDomain& domain) {
  const Interpretation truth = classical_eval(program, domain.facts, domain.model.language);
  for (const auto& e : domain.examples) {
    if (static_cast<bool>(truth[e.atom]) != e.positive) return false;
  }
  return true;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::C: return "C";
    case Category::F: return "F";
    case Category::CT: return "CT";
    case Category::FT: return "FT";
    case Category::FAIL: return "FAIL";
  }
  return "?";
}

Category parse_category(std::string_view text) {
  for (Category c : {Category::C, Category::F, Category::CT, Category::FT, Category::FAIL}) {
    if (to_string(c) == text) return c;
  }
  throw Error("unknown outcome category '" + std::string(text) + "'");
}

Category categorize(bool c, bool f, bool ct, bool ft) {
  if (c) return Category::C;
  if (f) return Category::F;
  if (ct) return Category::CT;
  if (ft) return Category::FT;
  return Category::FAIL;
}

Outcome classify_outcome(const WeightStore& weights, const Program& program,
                         const CompiledDomain& train, const CompiledDomain& test,
                         const EvalConfig& config) {
  Outcome o;
  o.c = classical_correct(program, test);
  o.ct = classical_correct(program, train);
  o.f = examples_correct(fuzzy_eval(weights, test, config), test.examples);
  o.ft = examples_correct(fuzzy_eval(weights, train, config), train.examples);
  o.category = categorize(o.c, o.f, o.ct, o.ft);
  return o;
}

std::string format_program(const Program& program, const Language& language) {
  std::string out;
  for (const auto& pc : program.clauses) out += format_clause(pc.clause, language) + "\n";
  return out;
}

std::string program_dot(const Program& program, const Language& language, const std::string& title) {
  std::ostringstream out;
  out << "digraph \"" << title << "\" {\n";
  out << "  rankdir=TB;\n";
  std::set<int> nodes;
  std::set<std::pair<int, int>> edges;
  for (const auto& pc : program.clauses) {
    nodes.insert(pc.clause.head.pred);
    for (const auto& lit : pc.clause.body) {
      nodes.insert(lit.pred);
      edges.insert({pc.clause.head.pred, lit.pred});
    }
  }
  for (int p : nodes) {
    const auto& sym = language.predicate(p);
    const char* shape = sym.kind == PredKind::extensional ? "box"
                        : sym.kind == PredKind::target    ? "doubleoctagon"
                                                          : "ellipse";
    out << "  \"" << sym.name << "\" [shape=" << shape << "];\n";
  }
  for (auto [a, b] : edges) {
    out << "  \"" << language.predicate(a).name << "\" -> \"" << language.predicate(b).name << "\";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace dilp
