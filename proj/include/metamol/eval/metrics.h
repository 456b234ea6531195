//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <span>
#include <stdexcept>

namespace metamol::eval {

class MetricError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Sample covariance over the product of sample standard deviations.
/// nullopt when either side has zero variance. Throws MetricError on
/// unequal lengths or fewer than two points.
std::optional<double> pearsonr(std::span<const double> xs, std::span<const double> ys);

/// Mean of |p - t| / (|p| + |t|); pairs with |p| + |t| = 0 contribute 0.
/// An empty input gives 0.
double pct_difference(std::span<const double> preds, std::span<const double> truths);

/// Pearson correlation of average ranks (ties share their mean rank).
std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys);

struct LineFit {
  double slope = 0;
  double intercept = 0;
};

/// Least-squares line. Throws MetricError with fewer than two distinct x.
LineFit fit_degree_one(std::span<const double> xs, std::span<const double> ys);

}  // namespace metamol::eval
