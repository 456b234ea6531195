//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace metamol::eval {
namespace {

void check_pairs(std::span<const double> xs, std::span<const double> ys, std::size_t min) {
  if (xs.size() != ys.size())
    throw MetricError("length mismatch");
  if (xs.size() < min)
    throw MetricError("at least " + std::to_string(min) + " points required");
}

double mean(std::span<const double> v) {
  double s = 0;
  for (double x: v)
    s += x;
  return s / static_cast<double>(v.size());
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
      ++j;
    for (std::size_t k = i; k <= j; ++k)
      r[idx[k]] = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
    i = j + 1;
  }
  return r;
}

}  // namespace

std::optional<double> pearsonr(std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys, 2);
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0)
    return std::nullopt;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::fmax(-1.0, std::fmin(1.0, r));
}

std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys, 2);
  const std::vector<double> rx = average_ranks(xs), ry = average_ranks(ys);
  return pearsonr(rx, ry);
}

double pct_difference(std::span<const double> preds, std::span<const double> truths) {
  check_pairs(preds, truths, 0);
  if (preds.empty())
    return 0;
  double s = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double den = std::fabs(preds[i]) + std::fabs(truths[i]);
    if (den > 0)
      s += std::fabs(preds[i] - truths[i]) / den;
  }
  return s / static_cast<double>(preds.size());
}

LineFit fit_degree_one(std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys, 2);
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0)
    throw MetricError("fewer than two distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace metamol::eval
