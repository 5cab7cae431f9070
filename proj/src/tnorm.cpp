// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/tnorm.hpp"

#include <algorithm>
#include <cassert>

#include "dilp/logic.hpp"

namespace dilp {

std::string_view to_string(TNorm t) {
  switch (t) {
    case TNorm::max: return "max";
    case TNorm::product: return "product";
    case TNorm::lukasiewicz: return "lukasiewicz";
  }
  return "?";
}

TNorm parse_tnorm(std::string_view text) {
  if (text == "max") return TNorm::max;
  if (text == "product") return TNorm::product;
  if (text == "lukasiewicz") return TNorm::lukasiewicz;
  throw Error("unknown t-norm '" + std::string(text) + "'");
}

double tnorm_and(double a, double b, TNorm kind) {
  assert(a >= -1e-9 && a <= 1.0 + 1e-9 && b >= -1e-9 && b <= 1.0 + 1e-9);
  switch (kind) {
    case TNorm::max: return std::min(a, b);
    case TNorm::product: return a * b;
    case TNorm::lukasiewicz: return std::max(a + b - 1.0, 0.0);
  }
  return 0.0;
}

double tnorm_or(double a, double b, TNorm kind) {
  assert(a >= -1e-9 && a <= 1.0 + 1e-9 && b >= -1e-9 && b <= 1.0 + 1e-9);
  switch (kind) {
    case TNorm::max: return std::max(a, b);
    case TNorm::product: return a + b - a * b;
    case TNorm::lukasiewicz: return std::min(a + b, 1.0);
  }
  return 0.0;
}

Partials tnorm_and_grad(double a, double b, TNorm kind) {
  switch (kind) {
    case TNorm::max: return a <= b ? Partials{1.0, 0.0} : Partials{0.0, 1.0};
    case TNorm::product: return {b, a};
    case TNorm::lukasiewicz: return a + b - 1.0 >= 0.0 ? Partials{1.0, 1.0} : Partials{};
  }
  return {};
}

Partials tnorm_or_grad(double a, double b, TNorm kind) {
  switch (kind) {
    case TNorm::max: return a >= b ? Partials{1.0, 0.0} : Partials{0.0, 1.0};
    case TNorm::product: return {1.0 - b, 1.0 - a};
    case TNorm::lukasiewicz: return a + b <= 1.0 ? Partials{1.0, 1.0} : Partials{};
  }
  return {};
}

}  // namespace dilp
