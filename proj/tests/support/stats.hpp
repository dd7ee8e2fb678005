#pragma once

// Statistical helpers for oracle tests: exact hypergeometric pmf, chi-square
// critical values at alpha = 0.01, Spearman rank correlation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "topoconc/analysis.hpp"

namespace teststats {

inline double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(double(n + 1)) - std::lgamma(double(k + 1)) -
         std::lgamma(double(n - k + 1));
}

// P(X = x) for X ~ HG(N, K, E): x successes in K draws from a population of
// N with E marked.
inline double hypergeom_pmf(std::int64_t N, std::int64_t K, std::int64_t E,
                            std::int64_t x) {
  const double lp =
      log_choose(E, x) + log_choose(N - E, K - x) - log_choose(N, K);
  return std::isinf(lp) ? 0.0 : std::exp(lp);
}

// Upper 99th percentile of chi-square by degrees of freedom.
inline double chi_square_crit_99(int df) {
  static const double table[] = {0,      6.635,  9.210,  11.345, 13.277,
                                 15.086, 16.812, 18.475, 20.090, 21.666,
                                 23.209};
  return table[df];
}

inline std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double mid = (double(i) + double(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = mid;
    i = j + 1;
  }
  return r;
}

// Spearman rho over pairwise-complete entries.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    xs.push_back(x[i]);
    ys.push_back(y[i]);
  }
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  return topoconc::pearson(rx, ry);
}

}  // namespace teststats
