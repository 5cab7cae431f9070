// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/engine.hpp"

#include <omp.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace dilp {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Pattern ids of dyadic literals: 3 * first + second over x=0, y=1, z=2.
enum : int { kXX = 0, kXY, kXZ, kYX, kYY, kYZ, kZX, kZY, kZZ };
enum : int { kUX = 0, kUY, kUZ };
constexpr int kDyadicPatterns = 9;
constexpr int kUnaryPatterns = 3;

// n-ary disjunction over existential bindings.
double or_reduce(const double* x, std::size_t n, TNorm kind, std::size_t& arg) {
  arg = 0;
  switch (kind) {
    case TNorm::max: {
      double best = x[0];
      for (std::size_t i = 1; i < n; ++i) {
        if (x[i] > best) {
          best = x[i];
          arg = i;
        }
      }
      return best;
    }
    case TNorm::product: {
      double keep = 1.0;
      for (std::size_t i = 0; i < n; ++i) keep *= 1.0 - x[i];
      return 1.0 - keep;
    }
    case TNorm::lukasiewicz: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x[i];
      return std::min(s, 1.0);
    }
  }
  return 0.0;
}

// gx[i] = g * d(or_reduce)/dx[i]
void or_reduce_grad(const double* x, std::size_t n, TNorm kind, std::size_t arg, double g,
                    double* gx) {
  switch (kind) {
    case TNorm::max:
      std::fill(gx, gx + n, 0.0);
      gx[arg] = g;
      return;
    case TNorm::product: {
      std::size_t zeros = 0;
      std::size_t zero_at = 0;
      double keep = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double q = 1.0 - x[i];
        if (q == 0.0) {
          ++zeros;
          zero_at = i;
        } else {
          keep *= q;
        }
      }
      if (zeros == 0) {
        for (std::size_t i = 0; i < n; ++i) gx[i] = g * keep / (1.0 - x[i]);
      } else {
        std::fill(gx, gx + n, 0.0);
        if (zeros == 1) gx[zero_at] = g * keep;
      }
      return;
    }
    case TNorm::lukasiewicz: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x[i];
      std::fill(gx, gx + n, s <= 1.0 ? g : 0.0);
      return;
    }
  }
}

void and_elementwise(const double* a, const double* b, double* out, std::size_t n, TNorm kind) {
  switch (kind) {
    case TNorm::max:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::min(a[i], b[i]);
      return;
    case TNorm::product:
      for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
      return;
    case TNorm::lukasiewicz:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::max(a[i] + b[i] - 1.0, 0.0);
      return;
  }
}

struct Workspace {
  std::vector<double> lit[kClauseSlots][kLiteralSlots];  // N^3 each
  std::vector<double> conj[kClauseSlots];
  std::vector<double> clause[kClauseSlots];  // per head
  std::vector<std::size_t> arg[kClauseSlots];
  std::vector<double> txy, txz, tyz;
  std::vector<double> g_lit[kLiteralSlots];
  std::vector<double> g_conj;
  std::vector<double> head;

  explicit Workspace(std::size_t n) {
    const std::size_t n3 = n * n * n;
    for (auto& slot : lit)
      for (auto& l : slot) l.assign(n3, 0.0);
    for (auto& c : conj) c.assign(n3, 0.0);
    for (auto& c : clause) c.assign(n * n, 0.0);
    for (auto& a : arg) a.assign(n * n, 0);
    txy.assign(n * n, 0.0);
    txz.assign(n * n, 0.0);
    tyz.assign(n * n, 0.0);
    for (auto& g : g_lit) g.assign(n3, 0.0);
    g_conj.assign(n3, 0.0);
    head.assign(n * n, 0.0);
  }
};

}  // namespace

WeightShape Model::weight_shape(WeightMode mode) const {
  if (mode != WeightMode::per_literal) {
    for (const auto& t : templates) {
      if (clauses[static_cast<std::size_t>(t.head_arity - 1)].empty()) {
        throw Error("model compiled without clause candidates");
      }
    }
  }
  return make_weight_shape(mode, templates, literals.size(),
                           {clauses[0].size(), clauses[1].size()});
}

Model compile_model(Language language, const ModelOptions& options) {
  Model m{std::move(language), {}, options.prune, {}, {}, std::nullopt};
  m.templates = make_templates(m.language);
  m.literals = enumerate_literal_candidates(m.language, 2, options.prune);
  if (options.build_clauses) {
    for (const auto& t : m.templates) {
      auto& slot = m.clauses[static_cast<std::size_t>(t.head_arity - 1)];
      if (slot.empty()) slot = enumerate_clause_candidates(m.literals, t.head_arity, options.prune);
    }
  }
  if (options.build_index) {
    m.index = build_inference_index(m.templates, m.language, m.literals, options.max_index_bytes);
  }
  return m;
}

ModelOptions options_for(WeightMode mode, PruneConfig prune) {
  ModelOptions o;
  o.prune = prune;
  o.build_index = mode != WeightMode::per_literal;
  o.build_clauses = mode != WeightMode::per_literal;
  return o;
}

struct ForwardChainer::Impl {
  const Model& m;
  TNormConfig tn;
  std::size_t n = 0, n2 = 0, n3 = 0;
  std::size_t templates = 0;

  std::vector<int> dyadic;  // language predicate ids
  std::vector<int> unary;
  std::vector<int> column;  // per language predicate: row in Vd or Vu

  WeightShape shape;
  std::vector<double> probs;  // softmaxed logits, weight-store layout
  RowMatrix pd;  // (rows * 9) x |dyadic|
  RowMatrix pu;  // (rows * 3) x |unary|

  Impl(const Model& model, TNormConfig tnorms) : m(model), tn(tnorms) {
    n = m.language.num_constants();
    n2 = n * n;
    n3 = n2 * n;
    templates = m.templates.size();
    column.assign(m.language.num_predicates(), -1);
    for (int p = 0; p < static_cast<int>(m.language.num_predicates()); ++p) {
      auto& list = m.language.predicate(p).arity == 2 ? dyadic : unary;
      column[static_cast<std::size_t>(p)] = static_cast<int>(list.size());
      list.push_back(p);
    }
  }

  std::size_t heads(const Template& t) const { return t.head_arity == 2 ? n2 : n; }
  std::size_t bindings(const Template& t) const { return t.head_arity == 2 ? n : n2; }

  void set_weights(const WeightStore& w) {
    shape = w.shape();
    if (shape.templates() != templates) throw Error("weight store does not match model");
    probs.assign(w.size(), 0.0);
    const int rows = shape.rows_per_template();
    for (std::size_t t = 0; t < templates; ++t) {
      for (int r = 0; r < rows; ++r) {
        const std::size_t off = shape.row_offset(t, r);
        softmax(w.row(t, r), {probs.data() + off, shape.row_length(t)});
      }
    }
    if (shape.mode() != WeightMode::per_literal) return;
    for (std::size_t t = 0; t < templates; ++t) {
      if (shape.row_length(t) != m.literals.size()) throw Error("weight store does not match model");
    }
    const std::size_t lit_rows = templates * kClauseSlots * kLiteralSlots;
    pd = RowMatrix::Zero(static_cast<Eigen::Index>(lit_rows * kDyadicPatterns),
                         static_cast<Eigen::Index>(dyadic.size()));
    pu = RowMatrix::Zero(static_cast<Eigen::Index>(lit_rows * kUnaryPatterns),
                         static_cast<Eigen::Index>(unary.size()));
    for (std::size_t r = 0; r < lit_rows; ++r) {
      const double* p = probs.data() + r * m.literals.size();
      for (const auto& c : m.literals) {
        const auto col = column[static_cast<std::size_t>(c.literal.pred)];
        if (c.literal.arity == 2) {
          pd(static_cast<Eigen::Index>(r * kDyadicPatterns + static_cast<std::size_t>(c.pattern)), col) =
              p[c.candidate_id];
        } else {
          pu(static_cast<Eigen::Index>(r * kUnaryPatterns + static_cast<std::size_t>(c.pattern)), col) =
              p[c.candidate_id];
        }
      }
    }
  }

  // ---- per-literal kernel -------------------------------------------------

  void gather_blocks(const Valuation& v, RowMatrix& vd, RowMatrix& vu) const {
    vd.resize(static_cast<Eigen::Index>(dyadic.size()), static_cast<Eigen::Index>(n2));
    vu.resize(static_cast<Eigen::Index>(unary.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < dyadic.size(); ++i) {
      std::copy_n(v.data() + m.language.offset(dyadic[i]), n2, vd.data() + i * n2);
    }
    for (std::size_t i = 0; i < unary.size(); ++i) {
      std::copy_n(v.data() + m.language.offset(unary[i]), n, vu.data() + i * n);
    }
  }

  // Pattern sums of every literal row: A = Pd * Vd, B = Pu * Vu.
  void pattern_sums(const RowMatrix& vd, const RowMatrix& vu, RowMatrix& a, RowMatrix& b) const {
    a.noalias() = pd * vd;
    if (unary.empty()) {
      b = RowMatrix::Zero(pu.rows(), static_cast<Eigen::Index>(n));
    } else {
      b.noalias() = pu * vu;
    }
  }

  // out[(x*N + y)*N + z] for literal row r.
  void mixed(const RowMatrix& a, const RowMatrix& b, std::size_t r, Workspace& ws,
             double* out) const {
    const double* A = a.data() + r * kDyadicPatterns * n2;
    const double* B = b.data() + r * kUnaryPatterns * n;
    auto blk = [&](int pat) { return A + static_cast<std::size_t>(pat) * n2; };
    const double* axx = blk(kXX);
    const double* axy = blk(kXY);
    const double* axz = blk(kXZ);
    const double* ayx = blk(kYX);
    const double* ayy = blk(kYY);
    const double* ayz = blk(kYZ);
    const double* azx = blk(kZX);
    const double* azy = blk(kZY);
    const double* azz = blk(kZZ);
    const double* bx = B + kUX * n;
    const double* by = B + kUY * n;
    const double* bz = B + kUZ * n;
    double* txy = ws.txy.data();
    double* txz = ws.txz.data();
    double* tyz = ws.tyz.data();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        txy[i * n + j] = axy[i * n + j] + ayx[j * n + i] + axx[i * n + i] + ayy[j * n + j] + bx[i] + by[j];
        txz[i * n + j] = axz[i * n + j] + azx[j * n + i] + azz[j * n + j] + bz[j];
        tyz[i * n + j] = ayz[i * n + j] + azy[j * n + i];
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const double base = txy[x * n + y];
        const double* rx = txz + x * n;
        const double* ry = tyz + y * n;
        double* o = out + (x * n + y) * n;
        for (std::size_t z = 0; z < n; ++z) o[z] = base + rx[z] + ry[z];
      }
    }
  }

  // Backward of `mixed`: accumulates dL/dA and dL/dB rows of literal row r.
  void mixed_grad(const double* g, std::size_t r, Workspace& ws, RowMatrix& ga,
                  RowMatrix& gb) const {
    double* A = ga.data() + r * kDyadicPatterns * n2;
    double* B = gb.data() + r * kUnaryPatterns * n;
    auto blk = [&](int pat) { return A + static_cast<std::size_t>(pat) * n2; };
    double* gxy = ws.txy.data();
    double* gxz = ws.txz.data();
    double* gyz = ws.tyz.data();
    std::fill(ws.txy.begin(), ws.txy.end(), 0.0);
    std::fill(ws.txz.begin(), ws.txz.end(), 0.0);
    std::fill(ws.tyz.begin(), ws.tyz.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const double* gr = g + (x * n + y) * n;
        double* rx = gxz + x * n;
        double* ry = gyz + y * n;
        double s = 0.0;
        for (std::size_t z = 0; z < n; ++z) {
          s += gr[z];
          rx[z] += gr[z];
          ry[z] += gr[z];
        }
        gxy[x * n + y] = s;
      }
    }
    double* axx = blk(kXX);
    double* axy = blk(kXY);
    double* axz = blk(kXZ);
    double* ayx = blk(kYX);
    double* ayy = blk(kYY);
    double* ayz = blk(kYZ);
    double* azx = blk(kZX);
    double* azy = blk(kZY);
    double* azz = blk(kZZ);
    double* bx = B + kUX * n;
    double* by = B + kUY * n;
    double* bz = B + kUZ * n;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double vxy = gxy[i * n + j];
        const double vxz = gxz[i * n + j];
        const double vyz = gyz[i * n + j];
        axy[i * n + j] += vxy;
        ayx[j * n + i] += vxy;
        axx[i * n + i] += vxy;
        ayy[j * n + j] += vxy;
        bx[i] += vxy;
        by[j] += vxy;
        axz[i * n + j] += vxz;
        azx[j * n + i] += vxz;
        azz[j * n + j] += vxz;
        bz[j] += vxz;
        ayz[i * n + j] += vyz;
        azy[j * n + i] += vyz;
      }
    }
  }

  // Clause slot forward for template t: fills ws.lit, ws.conj, ws.clause, ws.arg.
  void clause_forward(const RowMatrix& a, const RowMatrix& b, std::size_t t, int s,
                      Workspace& ws) const {
    const Template& tpl = m.templates[t];
    const std::size_t r0 = (t * kClauseSlots + static_cast<std::size_t>(s)) * kLiteralSlots;
    mixed(a, b, r0, ws, ws.lit[s][0].data());
    mixed(a, b, r0 + 1, ws, ws.lit[s][1].data());
    and_elementwise(ws.lit[s][0].data(), ws.lit[s][1].data(), ws.conj[s].data(), n3, tn.and_literal);
    const std::size_t hs = heads(tpl);
    const std::size_t bs = bindings(tpl);
    for (std::size_t h = 0; h < hs; ++h) {
      ws.clause[s][h] = or_reduce(ws.conj[s].data() + h * bs, bs, tn.or_exists, ws.arg[s][h]);
    }
  }

  Valuation step_per_literal(const Valuation& v) const {
    RowMatrix vd, vu, a, b;
    gather_blocks(v, vd, vu);
    pattern_sums(vd, vu, a, b);
    Valuation out = v;
#pragma omp parallel
    {
      Workspace ws(n);
#pragma omp for schedule(dynamic)
      for (std::size_t t = 0; t < templates; ++t) {
        for (int s = 0; s < kClauseSlots; ++s) clause_forward(a, b, t, s, ws);
        const auto& atoms = (*this).head_atoms(t);
        for (std::size_t h = 0; h < atoms.size(); ++h) {
          const double head = tnorm_or(ws.clause[0][h], ws.clause[1][h], tn.or_clausal);
          out[atoms[h]] = clamp_unit(tnorm_or(v[atoms[h]], head, tn.or_step));
        }
      }
    }
    return out;
  }

  std::vector<std::uint32_t> head_atom_list(std::size_t t) const {
    const Template& tpl = m.templates[t];
    std::vector<std::uint32_t> atoms(heads(tpl));
    for (std::size_t h = 0; h < atoms.size(); ++h) {
      atoms[h] = static_cast<std::uint32_t>(m.language.offset(tpl.head) + h);
    }
    return atoms;
  }

  std::vector<std::vector<std::uint32_t>> head_lists;
  const std::vector<std::uint32_t>& head_atoms(std::size_t t) const { return head_lists[t]; }

  // One reverse step of the per-literal kernel. `g_next` is dL/dV_{i+1};
  // returns dL/dV_i and accumulates dL/dPd, dL/dPu.
  Valuation backward_per_literal(const Valuation& v, const Valuation& g_next, RowMatrix& gpd,
                                 RowMatrix& gpu) const {
    RowMatrix vd, vu, a, b;
    gather_blocks(v, vd, vu);
    pattern_sums(vd, vu, a, b);
    RowMatrix ga = RowMatrix::Zero(a.rows(), a.cols());
    RowMatrix gb = RowMatrix::Zero(b.rows(), b.cols());
    Valuation g = g_next;
#pragma omp parallel
    {
      Workspace ws(n);
      std::vector<double> g_clause[kClauseSlots];
      for (auto& gc : g_clause) gc.assign(n2, 0.0);
#pragma omp for schedule(dynamic)
      for (std::size_t t = 0; t < templates; ++t) {
        const Template& tpl = m.templates[t];
        for (int s = 0; s < kClauseSlots; ++s) clause_forward(a, b, t, s, ws);
        const auto& atoms = head_atoms(t);
        bool any = false;
        for (std::size_t h = 0; h < atoms.size(); ++h) {
          const double c0 = ws.clause[0][h];
          const double c1 = ws.clause[1][h];
          const double head = tnorm_or(c0, c1, tn.or_clausal);
          const Partials ps = tnorm_or_grad(v[atoms[h]], head, tn.or_step);
          const double gn = g_next[atoms[h]];
          g[atoms[h]] = gn * ps.da;
          const double g_head = gn * ps.db;
          const Partials pc = tnorm_or_grad(c0, c1, tn.or_clausal);
          g_clause[0][h] = g_head * pc.da;
          g_clause[1][h] = g_head * pc.db;
          any = any || g_head != 0.0;
        }
        if (!any) continue;
        const std::size_t hs = heads(tpl);
        const std::size_t bs = bindings(tpl);
        for (int s = 0; s < kClauseSlots; ++s) {
          for (std::size_t h = 0; h < hs; ++h) {
            or_reduce_grad(ws.conj[s].data() + h * bs, bs, tn.or_exists, ws.arg[s][h],
                           g_clause[s][h], ws.g_conj.data() + h * bs);
          }
          const double* l0 = ws.lit[s][0].data();
          const double* l1 = ws.lit[s][1].data();
          double* g0 = ws.g_lit[0].data();
          double* g1 = ws.g_lit[1].data();
          for (std::size_t i = 0; i < n3; ++i) {
            const double gc = ws.g_conj[i];
            if (gc == 0.0) {
              g0[i] = 0.0;
              g1[i] = 0.0;
              continue;
            }
            const Partials pa = tnorm_and_grad(l0[i], l1[i], tn.and_literal);
            g0[i] = gc * pa.da;
            g1[i] = gc * pa.db;
          }
          const std::size_t r0 = (t * kClauseSlots + static_cast<std::size_t>(s)) * kLiteralSlots;
          mixed_grad(g0, r0, ws, ga, gb);
          mixed_grad(g1, r0 + 1, ws, ga, gb);
        }
      }
    }
    gpd.noalias() += ga * vd.transpose();
    RowMatrix gvd = pd.transpose() * ga;
    for (std::size_t i = 0; i < dyadic.size(); ++i) {
      double* dst = g.data() + m.language.offset(dyadic[i]);
      const double* src = gvd.data() + i * n2;
      for (std::size_t k = 0; k < n2; ++k) dst[k] += src[k];
    }
    if (!unary.empty()) {
      gpu.noalias() += gb * vu.transpose();
      RowMatrix gvu = pu.transpose() * gb;
      for (std::size_t i = 0; i < unary.size(); ++i) {
        double* dst = g.data() + m.language.offset(unary[i]);
        const double* src = gvu.data() + i * n;
        for (std::size_t k = 0; k < n; ++k) dst[k] += src[k];
      }
    }
    return g;
  }

  std::vector<double> logits_grad_per_literal(const RowMatrix& gpd, const RowMatrix& gpu) const {
    std::vector<double> gp(probs.size(), 0.0);
    const std::size_t c_count = m.literals.size();
    const std::size_t lit_rows = templates * kClauseSlots * kLiteralSlots;
    for (std::size_t r = 0; r < lit_rows; ++r) {
      double* out = gp.data() + r * c_count;
      for (const auto& c : m.literals) {
        const auto col = column[static_cast<std::size_t>(c.literal.pred)];
        out[c.candidate_id] =
            c.literal.arity == 2
                ? gpd(static_cast<Eigen::Index>(r * kDyadicPatterns + static_cast<std::size_t>(c.pattern)), col)
                : gpu(static_cast<Eigen::Index>(r * kUnaryPatterns + static_cast<std::size_t>(c.pattern)), col);
      }
    }
    return gp;
  }

  // ---- clause-level kernels (per-clause, per-template) ----------------------

  // values[d * H + h]: classical-shape clause value of clause candidate d.
  struct ClauseValues {
    std::vector<double> values;
    std::vector<std::size_t> arg;
  };

  const GatherTable& table(int arity) const { return m.index.value().table(arity); }

  ClauseValues clause_values(const Valuation& v, int arity) const {
    const auto& cands = m.clauses[static_cast<std::size_t>(arity - 1)];
    const GatherTable& tab = table(arity);
    const std::size_t hs = tab.heads();
    const std::size_t bs = tab.bindings();
    ClauseValues cv;
    cv.values.assign(cands.size() * hs, 0.0);
    cv.arg.assign(cands.size() * hs, 0);
#pragma omp parallel
    {
      std::vector<double> conj(bs);
#pragma omp for schedule(static)
      for (std::size_t d = 0; d < cands.size(); ++d) {
        const auto c1 = static_cast<std::size_t>(cands[d].literals[0]);
        const auto c2 = static_cast<std::size_t>(cands[d].literals[1]);
        for (std::size_t h = 0; h < hs; ++h) {
          for (std::size_t bi = 0; bi < bs; ++bi) {
            const std::uint32_t* sl = tab.slice(h, bi);
            conj[bi] = tnorm_and(v[sl[c1]], v[sl[c2]], tn.and_literal);
          }
          cv.values[d * hs + h] = or_reduce(conj.data(), bs, tn.or_exists, cv.arg[d * hs + h]);
        }
      }
    }
    return cv;
  }

  // Accumulates dL/dV from dL/d(clause values).
  void clause_values_grad(const Valuation& v, int arity, const ClauseValues& cv,
                          const std::vector<double>& g_cv, Valuation& g) const {
    const auto& cands = m.clauses[static_cast<std::size_t>(arity - 1)];
    const GatherTable& tab = table(arity);
    const std::size_t hs = tab.heads();
    const std::size_t bs = tab.bindings();
#pragma omp parallel
    {
      Valuation local(g.size(), 0.0);
      std::vector<double> conj(bs), gconj(bs);
#pragma omp for schedule(static)
      for (std::size_t d = 0; d < cands.size(); ++d) {
        const auto c1 = static_cast<std::size_t>(cands[d].literals[0]);
        const auto c2 = static_cast<std::size_t>(cands[d].literals[1]);
        for (std::size_t h = 0; h < hs; ++h) {
          const double gv = g_cv[d * hs + h];
          if (gv == 0.0) continue;
          for (std::size_t bi = 0; bi < bs; ++bi) {
            const std::uint32_t* sl = tab.slice(h, bi);
            conj[bi] = tnorm_and(v[sl[c1]], v[sl[c2]], tn.and_literal);
          }
          or_reduce_grad(conj.data(), bs, tn.or_exists, cv.arg[d * hs + h], gv, gconj.data());
          for (std::size_t bi = 0; bi < bs; ++bi) {
            if (gconj[bi] == 0.0) continue;
            const std::uint32_t* sl = tab.slice(h, bi);
            const Partials pa = tnorm_and_grad(v[sl[c1]], v[sl[c2]], tn.and_literal);
            local[sl[c1]] += gconj[bi] * pa.da;
            local[sl[c2]] += gconj[bi] * pa.db;
          }
        }
      }
#pragma omp critical
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += local[i];
    }
  }

  // Head values of template t from clause values (per-clause / per-template).
  void template_heads(std::size_t t, const ClauseValues& cv, std::vector<double>& head,
                      std::vector<double>* cs0, std::vector<double>* cs1) const {
    const Template& tpl = m.templates[t];
    const std::size_t hs = heads(tpl);
    const std::size_t dcount = m.clauses[static_cast<std::size_t>(tpl.head_arity - 1)].size();
    head.assign(hs, 0.0);
    if (shape.mode() == WeightMode::per_clause) {
      std::vector<double> cs[kClauseSlots];
      for (int s = 0; s < kClauseSlots; ++s) {
        cs[s].assign(hs, 0.0);
        const double* p = probs.data() + shape.row_offset(t, s);
        for (std::size_t d = 0; d < dcount; ++d) {
          const double w = p[d];
          const double* val = cv.values.data() + d * hs;
          for (std::size_t h = 0; h < hs; ++h) cs[s][h] += w * val[h];
        }
      }
      for (std::size_t h = 0; h < hs; ++h) head[h] = tnorm_or(cs[0][h], cs[1][h], tn.or_clausal);
      if (cs0) *cs0 = cs[0];
      if (cs1) *cs1 = cs[1];
    } else {
      const double* p = probs.data() + shape.row_offset(t, 0);
      for (std::size_t d1 = 0; d1 < dcount; ++d1) {
        const double* v1 = cv.values.data() + d1 * hs;
        for (std::size_t d2 = 0; d2 < dcount; ++d2) {
          const double w = p[d1 * dcount + d2];
          const double* v2 = cv.values.data() + d2 * hs;
          for (std::size_t h = 0; h < hs; ++h) head[h] += w * tnorm_or(v1[h], v2[h], tn.or_clausal);
        }
      }
    }
  }

  Valuation step_clause_modes(const Valuation& v) const {
    ClauseValues cv[2];
    bool have[2] = {false, false};
    for (const auto& tpl : m.templates) {
      const int k = tpl.head_arity - 1;
      if (!have[k]) {
        cv[k] = clause_values(v, tpl.head_arity);
        have[k] = true;
      }
    }
    Valuation out = v;
#pragma omp parallel
    {
      std::vector<double> head;
#pragma omp for schedule(dynamic)
      for (std::size_t t = 0; t < templates; ++t) {
        template_heads(t, cv[m.templates[t].head_arity - 1], head, nullptr, nullptr);
        const auto& atoms = head_atoms(t);
        for (std::size_t h = 0; h < atoms.size(); ++h) {
          out[atoms[h]] = clamp_unit(tnorm_or(v[atoms[h]], head[h], tn.or_step));
        }
      }
    }
    return out;
  }

  Valuation backward_clause_modes(const Valuation& v, const Valuation& g_next,
                                  std::vector<double>& gp) const {
    ClauseValues cv[2];
    std::vector<double> g_cv[2];
    for (const auto& tpl : m.templates) {
      const int k = tpl.head_arity - 1;
      if (g_cv[k].empty()) {
        cv[k] = clause_values(v, tpl.head_arity);
        g_cv[k].assign(cv[k].values.size(), 0.0);
      }
    }
    Valuation g = g_next;
    // Templates of one arity all feed the same clause value gradient, so this
    // loop stays serial; clause-level modes are for small hypothesis spaces.
    std::vector<double> head, cs0, cs1;
    for (std::size_t t = 0; t < templates; ++t) {
      const Template& tpl = m.templates[t];
      const int k = tpl.head_arity - 1;
      const std::size_t hs = heads(tpl);
      const std::size_t dcount = m.clauses[static_cast<std::size_t>(k)].size();
      template_heads(t, cv[k], head, &cs0, &cs1);
      const auto& atoms = head_atoms(t);
      std::vector<double> g_head(hs);
      for (std::size_t h = 0; h < hs; ++h) {
        const Partials ps = tnorm_or_grad(v[atoms[h]], head[h], tn.or_step);
        g[atoms[h]] = g_next[atoms[h]] * ps.da;
        g_head[h] = g_next[atoms[h]] * ps.db;
      }
      const double* vals = cv[k].values.data();
      double* gvals = g_cv[k].data();
      if (shape.mode() == WeightMode::per_clause) {
        for (int s = 0; s < kClauseSlots; ++s) {
          const std::size_t off = shape.row_offset(t, s);
          const double* p = probs.data() + off;
          std::vector<double> g_cs(hs);
          for (std::size_t h = 0; h < hs; ++h) {
            const Partials pc = tnorm_or_grad(cs0[h], cs1[h], tn.or_clausal);
            g_cs[h] = g_head[h] * (s == 0 ? pc.da : pc.db);
          }
          for (std::size_t d = 0; d < dcount; ++d) {
            double acc = 0.0;
            for (std::size_t h = 0; h < hs; ++h) {
              acc += g_cs[h] * vals[d * hs + h];
              gvals[d * hs + h] += p[d] * g_cs[h];
            }
            gp[off + d] += acc;
          }
        }
      } else {
        const std::size_t off = shape.row_offset(t, 0);
        const double* p = probs.data() + off;
        for (std::size_t d1 = 0; d1 < dcount; ++d1) {
          for (std::size_t d2 = 0; d2 < dcount; ++d2) {
            const double w = p[d1 * dcount + d2];
            double acc = 0.0;
            for (std::size_t h = 0; h < hs; ++h) {
              const double a = vals[d1 * hs + h];
              const double b = vals[d2 * hs + h];
              acc += g_head[h] * tnorm_or(a, b, tn.or_clausal);
              const Partials pc = tnorm_or_grad(a, b, tn.or_clausal);
              gvals[d1 * hs + h] += w * g_head[h] * pc.da;
              gvals[d2 * hs + h] += w * g_head[h] * pc.db;
            }
            gp[off + d1 * dcount + d2] += acc;
          }
        }
      }
    }
    for (int k = 0; k < 2; ++k) {
      if (!g_cv[k].empty()) clause_values_grad(v, k + 1, cv[k], g_cv[k], g);
    }
    return g;
  }

  // ---- shared ---------------------------------------------------------------

  Valuation step(const Valuation& v) const {
    if (v.size() != m.language.atom_count()) throw Error("valuation size does not match language");
    if (probs.empty()) throw Error("weights not set");
    return shape.mode() == WeightMode::per_literal ? step_per_literal(v) : step_clause_modes(v);
  }

  std::vector<double> softmax_backward(const std::vector<double>& gp) const {
    std::vector<double> gw(gp.size(), 0.0);
    const int rows = shape.rows_per_template();
    for (std::size_t t = 0; t < templates; ++t) {
      const std::size_t len = shape.row_length(t);
      for (int r = 0; r < rows; ++r) {
        const std::size_t off = shape.row_offset(t, r);
        double dot = 0.0;
        for (std::size_t i = 0; i < len; ++i) dot += probs[off + i] * gp[off + i];
        for (std::size_t i = 0; i < len; ++i) gw[off + i] = probs[off + i] * (gp[off + i] - dot);
      }
    }
    return gw;
  }

  std::vector<double> backward(const std::vector<Valuation>& trace, const Valuation& grad_final) const {
    if (trace.empty()) throw Error("empty inference trace");
    Valuation g = grad_final;
    if (shape.mode() == WeightMode::per_literal) {
      RowMatrix gpd = RowMatrix::Zero(pd.rows(), pd.cols());
      RowMatrix gpu = RowMatrix::Zero(pu.rows(), pu.cols());
      for (std::size_t i = trace.size() - 1; i-- > 0;) {
        g = backward_per_literal(trace[i], g, gpd, gpu);
      }
      return softmax_backward(logits_grad_per_literal(gpd, gpu));
    }
    std::vector<double> gp(probs.size(), 0.0);
    for (std::size_t i = trace.size() - 1; i-- > 0;) {
      g = backward_clause_modes(trace[i], g, gp);
    }
    return softmax_backward(gp);
  }
};

ForwardChainer::ForwardChainer(const Model& model, TNormConfig tnorms)
    : model_(model), tnorms_(tnorms), impl_(std::make_unique<Impl>(model, tnorms)) {
  for (std::size_t t = 0; t < model.templates.size(); ++t) {
    impl_->head_lists.push_back(impl_->head_atom_list(t));
  }
}

ForwardChainer::~ForwardChainer() = default;

void ForwardChainer::set_weights(const WeightStore& weights) { impl_->set_weights(weights); }

Valuation ForwardChainer::step(const Valuation& v) const { return impl_->step(v); }

Valuation ForwardChainer::infer(const Valuation& ev0, int steps,
                                std::vector<Valuation>* trace) const {
  Valuation v = ev0;
  if (trace) {
    trace->clear();
    trace->reserve(static_cast<std::size_t>(steps) + 1);
    trace->push_back(v);
  }
  for (int i = 0; i < steps; ++i) {
    v = impl_->step(v);
    if (trace) trace->push_back(v);
  }
  return v;
}

std::vector<double> ForwardChainer::backward(const std::vector<Valuation>& trace,
                                             const Valuation& grad_final) const {
  return impl_->backward(trace, grad_final);
}

Valuation forward_chain_step(const Valuation& v, const WeightStore& weights, const Model& model,
                             const TNormConfig& tnorms) {
  ForwardChainer fc(model, tnorms);
  fc.set_weights(weights);
  return fc.step(v);
}

Valuation infer(const Valuation& ev0, const WeightStore& weights, const Model& model,
                const TNormConfig& tnorms, int steps) {
  if (steps < 1) throw Error("inference needs at least one step");
  ForwardChainer fc(model, tnorms);
  fc.set_weights(weights);
  return fc.infer(ev0, steps);
}

LossTerms balanced_loss(const Valuation& v, const std::vector<Example>& examples,
                        const std::vector<std::uint8_t>& mask, Valuation* grad) {
  const bool all = mask.empty();
  LossTerms terms;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (!all && !mask[i]) continue;
    (examples[i].positive ? terms.positives : terms.negatives) += 1;
  }
  if (grad) grad->assign(v.size(), 0.0);
  const double lo = kLossEpsilon;
  const double hi = 1.0 - kLossEpsilon;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (!all && !mask[i]) continue;
    const auto& e = examples[i];
    const double raw = v[e.atom];
    const double p = std::clamp(raw, lo, hi);
    const bool inside = raw > lo && raw < hi;
    if (e.positive) {
      const double scale = 0.5 / static_cast<double>(terms.positives);
      terms.loss -= scale * std::log(p);
      if (grad && inside) (*grad)[e.atom] -= scale / p;
    } else {
      const double scale = 0.5 / static_cast<double>(terms.negatives);
      terms.loss -= scale * std::log(1.0 - p);
      if (grad && inside) (*grad)[e.atom] += scale / (1.0 - p);
    }
  }
  return terms;
}

LossAndGradient loss_and_gradient(const ForwardChainer& chainer, const Valuation& ev0,
                                  const std::vector<Example>& examples,
                                  const std::vector<std::uint8_t>& mask, int steps) {
  std::vector<Valuation> trace;
  LossAndGradient out;
  out.final_valuation = chainer.infer(ev0, steps, &trace);
  Valuation g;
  out.loss = balanced_loss(out.final_valuation, examples, mask, &g).loss;
  out.full_loss = balanced_loss(out.final_valuation, examples, {}).loss;
  out.gradient = chainer.backward(trace, g);
  return out;
}

}  // namespace dilp
