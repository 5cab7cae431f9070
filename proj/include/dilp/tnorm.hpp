// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dilp {

// Named by the t-norm; the disjunction is always its dual t-conorm.
//   max:         and = min(a, b),         or = max(a, b)
//   product:     and = a * b,             or = a + b - a * b
//   lukasiewicz: and = max(a + b - 1, 0), or = min(a + b, 1)
enum class TNorm : std::uint8_t { max, product, lukasiewicz };

std::string_view to_string(TNorm t);
TNorm parse_tnorm(std::string_view text);

struct TNormConfig {
  TNorm and_literal = TNorm::product;
  TNorm or_exists = TNorm::max;
  TNorm or_clausal = TNorm::max;
  TNorm or_step = TNorm::max;

  // Operators of the earlier per-template formulation: product for the step
  // disjunction.
  static TNormConfig original() { return {TNorm::product, TNorm::max, TNorm::max, TNorm::product}; }
  bool operator==(const TNormConfig&) const = default;
};

double tnorm_and(double a, double b, TNorm kind);
double tnorm_or(double a, double b, TNorm kind);

// Partial derivatives of the binary operators. Where the operator is not
// differentiable (max/min ties, the kinks of the Lukasiewicz forms) the
// subgradient routes entirely to the first operand.
struct Partials {
  double da = 0.0;
  double db = 0.0;
};

// Rounding in the softmax mixtures can leave a value a few ulps outside
// [0, 1]; valuations are written through this.
inline double clamp_unit(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

Partials tnorm_and_grad(double a, double b, TNorm kind);
Partials tnorm_or_grad(double a, double b, TNorm kind);

}  // namespace dilp
