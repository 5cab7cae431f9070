// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

namespace dilp {

struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
};

enum class SignificanceMethod { z_test, fisher_exact };

struct Significance {
  double p_value = 1.0;
  SignificanceMethod method = SignificanceMethod::z_test;
};

// Two-sided test of equal success rates. Uses the pooled two-proportion
// z-test unless some expected cell count is below 5 (or the pooled rate is 0
// or 1), in which case Fisher's exact test is used.
Significance significance(Proportion a, Proportion b);

double fisher_exact(Proportion a, Proportion b);
double two_proportion_z(Proportion a, Proportion b);

}  // namespace dilp
