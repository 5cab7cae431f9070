// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "dilp/logic.hpp"

namespace dilp {

namespace {

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check(Proportion p) {
  if (p.trials == 0) throw Error("significance needs nonempty cells");
  if (p.successes > p.trials) throw Error("more successes than trials");
}

}  // namespace

double two_proportion_z(Proportion a, Proportion b) {
  check(a);
  check(b);
  const double na = static_cast<double>(a.trials);
  const double nb = static_cast<double>(b.trials);
  const double pa = static_cast<double>(a.successes) / na;
  const double pb = static_cast<double>(b.successes) / nb;
  const double pooled = (static_cast<double>(a.successes + b.successes)) / (na + nb);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb));
  if (se == 0.0) return 1.0;
  const double z = std::fabs(pa - pb) / se;
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

// Two-sided: sum of the probabilities of all tables with the same margins
// that are no more likely than the observed one.
double fisher_exact(Proportion a, Proportion b) {
  check(a);
  check(b);
  const double na = static_cast<double>(a.trials);
  const double nb = static_cast<double>(b.trials);
  const double k = static_cast<double>(a.successes + b.successes);
  const double n = na + nb;
  const double lo = std::max(0.0, k - nb);
  const double hi = std::min(k, na);
  const double denom = log_choose(n, k);
  auto logp = [&](double x) { return log_choose(na, x) + log_choose(nb, k - x) - denom; };
  const double observed = logp(static_cast<double>(a.successes));
  double p = 0.0;
  for (double x = lo; x <= hi; x += 1.0) {
    const double lx = logp(x);
    if (lx <= observed + 1e-7) p += std::exp(lx);
  }
  return std::min(1.0, p);
}

Significance significance(Proportion a, Proportion b) {
  check(a);
  check(b);
  const double na = static_cast<double>(a.trials);
  const double nb = static_cast<double>(b.trials);
  const double s = static_cast<double>(a.successes + b.successes);
  const double pooled = s / (na + nb);
  const double min_expected =
      std::min({na * pooled, na * (1.0 - pooled), nb * pooled, nb * (1.0 - pooled)});
  if (min_expected < 5.0) return {fisher_exact(a, b), SignificanceMethod::fisher_exact};
  return {two_proportion_z(a, b), SignificanceMethod::z_test};
}

}  // namespace dilp
