// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "dilp/engine.hpp"
#include "dilp/tasks.hpp"
#include "dilp/tnorm.hpp"
#include "dilp/weights.hpp"
#include "test_util.hpp"

namespace dilp {
namespace {

const TNorm kAll[] = {TNorm::max, TNorm::product, TNorm::lukasiewicz};

TEST(TNormTest, BoundaryAndRange) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (TNorm k : kAll) {
    for (double a : {0.0, 0.3, 1.0}) {
      EXPECT_DOUBLE_EQ(tnorm_and(a, 1.0, k), a);
      EXPECT_DOUBLE_EQ(tnorm_or(a, 0.0, k), a);
      EXPECT_DOUBLE_EQ(tnorm_and(a, 0.0, k), 0.0);
      EXPECT_DOUBLE_EQ(tnorm_or(a, 1.0, k), 1.0);
    }
    for (int i = 0; i < 1000; ++i) {
      const double a = u(rng), b = u(rng);
      for (double v : {tnorm_and(a, b, k), tnorm_or(a, b, k)}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      EXPECT_DOUBLE_EQ(tnorm_and(a, b, k), tnorm_and(b, a, k));
      EXPECT_NEAR(tnorm_or(a, b, k), 1.0 - tnorm_and(1.0 - a, 1.0 - b, k), 1e-12);
    }
  }
  EXPECT_EQ(parse_tnorm("product"), TNorm::product);
  EXPECT_THROW(parse_tnorm("goedel"), Error);
}

TEST(TNormTest, GradientsMatchDifferences) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double h = 1e-6;
  for (TNorm k : kAll) {
    for (int i = 0; i < 200; ++i) {
      const double a = u(rng), b = u(rng);
      if (std::fabs(a - b) < 1e-3 || std::fabs(a + b - 1.0) < 1e-3) continue;
      const Partials ga = tnorm_and_grad(a, b, k);
      const Partials go = tnorm_or_grad(a, b, k);
      EXPECT_NEAR(ga.da, (tnorm_and(a + h, b, k) - tnorm_and(a - h, b, k)) / (2 * h), 1e-6);
      EXPECT_NEAR(ga.db, (tnorm_and(a, b + h, k) - tnorm_and(a, b - h, k)) / (2 * h), 1e-6);
      EXPECT_NEAR(go.da, (tnorm_or(a + h, b, k) - tnorm_or(a - h, b, k)) / (2 * h), 1e-6);
      EXPECT_NEAR(go.db, (tnorm_or(a, b + h, k) - tnorm_or(a, b - h, k)) / (2 * h), 1e-6);
    }
  }
}

TEST(TNormTest, TiesRouteToFirstOperand) {
  const Partials g = tnorm_or_grad(0.4, 0.4, TNorm::max);
  EXPECT_EQ(g.da, 1.0);
  EXPECT_EQ(g.db, 0.0);
  const Partials m = tnorm_and_grad(0.4, 0.4, TNorm::max);
  EXPECT_EQ(m.da, 1.0);
  EXPECT_EQ(m.db, 0.0);
}

TEST(Softmax, ShiftInvariantAndNormalised) {
  std::vector<double> logits{2.0, -1.0, 0.5, 700.0};
  std::vector<double> a(4), b(4);
  softmax(logits, a);
  for (double& x : logits) x += 123.0;
  softmax(logits, b);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)], 1e-12);
    sum += a[static_cast<std::size_t>(i)];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(WeightShapeTest, RowLayout) {
  const Language l = make_language({{"succ", 2, PredKind::extensional}, {"e", 1, PredKind::target}},
                                   {"0"}, 3);
  const auto templates = make_templates(l);
  const WeightShape lit = make_weight_shape(WeightMode::per_literal, templates, 30, {7, 11});
  EXPECT_EQ(lit.rows_per_template(), 4);
  EXPECT_EQ(lit.parameter_count(), 3u * 4 * 30);
  const WeightShape cl = make_weight_shape(WeightMode::per_clause, templates, 30, {7, 11});
  EXPECT_EQ(cl.rows_per_template(), 2);
  EXPECT_EQ(cl.row_length(0), 7u);  // unary target
  EXPECT_EQ(cl.row_length(1), 11u);
  EXPECT_EQ(cl.parameter_count(), 2u * (7 + 11 + 11));
  const WeightShape tp = make_weight_shape(WeightMode::per_template, templates, 30, {7, 11});
  EXPECT_EQ(tp.parameter_count(), 49u + 121u + 121u);
  EXPECT_EQ(tp.row_offset(2, 0), 49u + 121u);
}

TEST(Checkpoint, BitExactRoundTrip) {
  for (WeightMode m : {WeightMode::per_literal, WeightMode::per_clause, WeightMode::per_template}) {
    std::mt19937_64 rng(9);
    const Language l = make_language(
        {{"succ", 2, PredKind::extensional}, {"p", 2, PredKind::target}}, {"0", "1"}, 2);
    const Model model = compile_model(l, options_for(m));
    WeightStore w = testing::random_weights(model.weight_shape(m), rng, 3.0);
    w.params()[0] = std::nextafter(1.0, 2.0);
    w.params()[1] = -0.0;
    w.params()[2] = 1e-310;  // subnormal
    std::stringstream ss;
    save_weights(w, ss);
    const WeightStore back = load_weights(ss);
    ASSERT_EQ(back.shape(), w.shape());
    ASSERT_EQ(back.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      EXPECT_EQ(std::memcmp(&back.params()[i], &w.params()[i], sizeof(double)), 0) << i;
    }
  }
}

TEST(Checkpoint, RejectsCorruptInput) {
  std::stringstream bad("dilp-weights 9\n");
  EXPECT_THROW(load_weights(bad), Error);
  std::stringstream short_file("dilp-weights 1\nmode per_literal\nrows 4\nlengths 2\n0x1p+0\n");
  EXPECT_THROW(load_weights(short_file), Error);
  EXPECT_THROW(load_weights(std::string("/nonexistent/file.w")), Error);
}

TEST(WeightModeTest, Parse) {
  EXPECT_EQ(parse_weight_mode("per_clause"), WeightMode::per_clause);
  EXPECT_EQ(parse_weight_mode("literal"), WeightMode::per_literal);
  EXPECT_THROW(parse_weight_mode("per_atom"), Error);
}

}  // namespace
}  // namespace dilp
