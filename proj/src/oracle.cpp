// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace dilp::oracle {

namespace {

double conj_op(double a, double b, TNorm k) {
  if (k == TNorm::max) return a < b ? a : b;
  if (k == TNorm::product) return a * b;
  const double s = a + b - 1.0;
  return s > 0.0 ? s : 0.0;
}

double disj_op(double a, double b, TNorm k) {
  if (k == TNorm::max) return a > b ? a : b;
  if (k == TNorm::product) return a + b - a * b;
  const double s = a + b;
  return s < 1.0 ? s : 1.0;
}

std::vector<double> row_probabilities(const WeightStore& w, std::size_t t, int r) {
  const auto row = w.row(t, r);
  double top = row[0];
  for (double x : row) top = x > top ? x : top;
  std::vector<double> p(row.size());
  double z = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    p[i] = std::exp(row[i] - top);
    z += p[i];
  }
  for (double& x : p) x /= z;
  return p;
}

std::size_t ground(const Language& lang, const Literal& lit, int x, int y, int z) {
  const int vals[3] = {x, y, z};
  const int a0 = vals[static_cast<int>(lit.args[0])];
  const int a1 = lit.arity == 2 ? vals[static_cast<int>(lit.args[1])] : 0;
  return lang.atom_index(lit.pred, a0, a1);
}

}  // namespace

NaiveInterpreter::NaiveInterpreter(const Language& language, const PruneConfig& prune,
                                   TNormConfig tnorms, std::size_t work_cap)
    : lang_(language), prune_(prune), tn_(tnorms) {
  templates_ = make_templates(lang_);
  literals_ = enumerate_literal_candidates(lang_, 2, prune_);
  for (const auto& t : templates_) {
    auto& slot = clauses_[static_cast<std::size_t>(t.head_arity - 1)];
    if (slot.empty()) slot = enumerate_clause_candidates(literals_, t.head_arity, prune_);
  }
  const double n = static_cast<double>(lang_.num_constants());
  const double work = static_cast<double>(templates_.size()) * 4.0 * n * n * n *
                      static_cast<double>(literals_.size());
  if (work > static_cast<double>(work_cap)) {
    throw Error("naive interpreter refuses: " + std::to_string(static_cast<long long>(work)) +
                " reads per step exceeds cap");
  }
}

double NaiveInterpreter::literal_value(const Valuation& v, const std::vector<double>& probs, int x,
                                       int y, int z) const {
  double acc = 0.0;
  for (std::size_t c = 0; c < literals_.size(); ++c) {
    acc += probs[c] * v[ground(lang_, literals_[c].literal, x, y, z)];
  }
  return acc;
}

double NaiveInterpreter::exists(const Valuation& /*v*/, int head_arity, int x, int y,
                                const std::function<double(int, int, int)>& conj) const {
  const int n = static_cast<int>(lang_.num_constants());
  bool first = true;
  double acc = 0.0;
  const int ys = head_arity == 2 ? 1 : n;
  for (int yy = 0; yy < ys; ++yy) {
    for (int z = 0; z < n; ++z) {
      const double c = conj(x, head_arity == 2 ? y : yy, z);
      acc = first ? c : disj_op(acc, c, tn_.or_exists);
      first = false;
    }
  }
  return acc;
}

double NaiveInterpreter::clause_value(const Valuation& v, const Literal& a, const Literal& b,
                                      int head_arity, int x, int y) const {
  return exists(v, head_arity, x, y, [&](int xx, int yy, int zz) {
    return conj_op(v[ground(lang_, a, xx, yy, zz)], v[ground(lang_, b, xx, yy, zz)], tn_.and_literal);
  });
}

Valuation NaiveInterpreter::step(const Valuation& v, const WeightStore& weights) const {
  const int n = static_cast<int>(lang_.num_constants());
  Valuation out = v;
  for (std::size_t t = 0; t < templates_.size(); ++t) {
    const Template& tpl = templates_[t];
    const auto& cands = clauses_[static_cast<std::size_t>(tpl.head_arity - 1)];
    std::vector<std::vector<double>> probs;
    for (int r = 0; r < weights.shape().rows_per_template(); ++r) {
      probs.push_back(row_probabilities(weights, t, r));
    }
    const int ys = tpl.head_arity == 2 ? n : 1;
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < ys; ++y) {
        double head = 0.0;
        switch (weights.mode()) {
          case WeightMode::per_literal: {
            double slot[2];
            for (int s = 0; s < 2; ++s) {
              const auto& p0 = probs[static_cast<std::size_t>(2 * s)];
              const auto& p1 = probs[static_cast<std::size_t>(2 * s + 1)];
              slot[s] = exists(v, tpl.head_arity, x, y, [&](int xx, int yy, int zz) {
                return conj_op(literal_value(v, p0, xx, yy, zz), literal_value(v, p1, xx, yy, zz),
                               tn_.and_literal);
              });
            }
            head = disj_op(slot[0], slot[1], tn_.or_clausal);
            break;
          }
          case WeightMode::per_clause: {
            double slot[2] = {0.0, 0.0};
            for (std::size_t d = 0; d < cands.size(); ++d) {
              const Literal& a = literals_[static_cast<std::size_t>(cands[d].literals[0])].literal;
              const Literal& b = literals_[static_cast<std::size_t>(cands[d].literals[1])].literal;
              const double cv = clause_value(v, a, b, tpl.head_arity, x, y);
              slot[0] += probs[0][d] * cv;
              slot[1] += probs[1][d] * cv;
            }
            head = disj_op(slot[0], slot[1], tn_.or_clausal);
            break;
          }
          case WeightMode::per_template: {
            std::vector<double> cv(cands.size());
            for (std::size_t d = 0; d < cands.size(); ++d) {
              const Literal& a = literals_[static_cast<std::size_t>(cands[d].literals[0])].literal;
              const Literal& b = literals_[static_cast<std::size_t>(cands[d].literals[1])].literal;
              cv[d] = clause_value(v, a, b, tpl.head_arity, x, y);
            }
            for (std::size_t d1 = 0; d1 < cands.size(); ++d1)
              for (std::size_t d2 = 0; d2 < cands.size(); ++d2)
                head += probs[0][d1 * cands.size() + d2] * disj_op(cv[d1], cv[d2], tn_.or_clausal);
            break;
          }
        }
        const std::size_t atom = lang_.atom_index(tpl.head, x, y);
        out[atom] = disj_op(v[atom], head, tn_.or_step);
      }
    }
  }
  return out;
}

Valuation NaiveInterpreter::infer(const Valuation& ev0, const WeightStore& weights, int steps) const {
  Valuation v = ev0;
  for (int i = 0; i < steps; ++i) v = step(v, weights);
  return v;
}

Valuation naive_infer(const Valuation& ev0, const WeightStore& weights, const Language& language,
                      const PruneConfig& prune, const TNormConfig& tnorms, int steps) {
  return NaiveInterpreter(language, prune, tnorms).infer(ev0, weights, steps);
}

Interpretation naive_classical_eval(const Program& program, const std::vector<Atom>& bk,
                                    const Language& language) {
  Interpretation truth(language.atom_count(), 0);
  for (const auto& f : bk) truth[language.resolve(f).index] = 1;
  const int n = static_cast<int>(language.num_constants());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& pc : program.clauses) {
      const Clause& c = pc.clause;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z) {
            if (!truth[ground(language, c.body[0], x, y, z)]) continue;
            if (!truth[ground(language, c.body[1], x, y, z)]) continue;
            const std::size_t head = ground(language, c.head, x, y, z);
            if (!truth[head]) {
              truth[head] = 1;
              changed = true;
            }
          }
    }
  }
  return truth;
}

double exhaustive_program_count(std::size_t literal_candidates, int templates_count) {
  const double c = static_cast<double>(literal_candidates);
  const double clauses = c * (c + 1.0) / 2.0;
  const double pairs = clauses * (clauses + 1.0) / 2.0;
  return std::pow(pairs, templates_count);
}

std::vector<Program> exhaustive_solve(const Task& task, int templates_count, std::size_t cap) {
  const Language lang = make_language(task.predicates, task.train.constants, templates_count);
  const auto templates = make_templates(lang);
  const auto literals = enumerate_literal_candidates(lang, 2, {});
  const double count = exhaustive_program_count(literals.size(), templates_count);
  if (count > static_cast<double>(cap)) {
    throw Error("exhaustive search refuses: " + std::to_string(static_cast<long double>(count)) +
                " programs exceeds cap " + std::to_string(cap));
  }

  std::vector<std::array<int, 2>> bodies;
  for (int i = 0; i < static_cast<int>(literals.size()); ++i)
    for (int j = i; j < static_cast<int>(literals.size()); ++j) bodies.push_back({i, j});
  std::vector<std::array<std::size_t, 2>> pairs;
  for (std::size_t a = 0; a < bodies.size(); ++a)
    for (std::size_t b = a; b < bodies.size(); ++b) pairs.push_back({a, b});

  std::vector<std::size_t> pos, neg;
  for (const auto& a : task.train.positives) pos.push_back(lang.resolve(a).index);
  for (const auto& a : task.train.negatives) neg.push_back(lang.resolve(a).index);

  std::vector<Program> solutions;
  std::vector<std::size_t> odometer(templates.size(), 0);
  while (true) {
    Program prog;
    for (std::size_t t = 0; t < templates.size(); ++t) {
      const auto& pr = pairs[odometer[t]];
      for (int s = 0; s < 2; ++s) {
        const auto& body = bodies[pr[static_cast<std::size_t>(s)]];
        Clause c;
        c.head = Literal{templates[t].head, templates[t].head_arity, {Var::x, Var::y}};
        c.body = {literals[static_cast<std::size_t>(body[0])].literal,
                  literals[static_cast<std::size_t>(body[1])].literal};
        prog.clauses.push_back({c, static_cast<int>(t), s});
      }
    }
    const Interpretation truth = naive_classical_eval(prog, task.train.facts, lang);
    const bool ok = std::all_of(pos.begin(), pos.end(), [&](std::size_t i) { return truth[i] != 0; }) &&
                    std::none_of(neg.begin(), neg.end(), [&](std::size_t i) { return truth[i] != 0; });
    if (ok) solutions.push_back(std::move(prog));

    std::size_t k = 0;
    while (k < odometer.size() && ++odometer[k] == pairs.size()) odometer[k++] = 0;
    if (k == odometer.size()) break;
  }
  return solutions;
}

}  // namespace dilp::oracle
