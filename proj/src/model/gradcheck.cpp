//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/model/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "metamol/model/transformer.h"

namespace metamol::model {

double GradCheckReport::max_relative_error() const {
  double worst = 0;
  for (const BlockCheck &b: blocks)
    worst = std::max(worst, b.relative_error);
  return worst;
}

bool GradCheckReport::ok(double tolerance) const {
  return max_relative_error() < tolerance;
}

GradCheckReport gradient_check(const Params<double> &params,
                               const std::vector<std::vector<int>> &sequences,
                               const std::vector<std::vector<bool>> &masks, double step,
                               std::size_t per_block) {
  Params<double> grad(params.config());
  loss_and_grad(params, sequences, masks, &grad);
  Params<double> probe = params;

  GradCheckReport report;
  for (std::size_t bi = 0; bi < params.blocks().size(); ++bi) {
    const BlockInfo &info = params.blocks()[bi];
    BlockCheck check;
    check.name = info.name;
    const std::size_t n = info.size();
    const std::size_t stride = per_block == 0 || per_block >= n ? 1 : n / per_block;
    double max_numeric = 0;
    for (std::size_t k = 0; k < n; k += stride) {
      const std::size_t i = info.offset + k;
      const double saved = probe.data()[i];
      probe.data()[i] = saved + step;
      const double up = loss_and_grad<double>(probe, sequences, masks, nullptr).sum;
      probe.data()[i] = saved - step;
      const double down = loss_and_grad<double>(probe, sequences, masks, nullptr).sum;
      probe.data()[i] = saved;
      const double numeric = (up - down) / (2 * step);
      const double analytic = grad.data()[i];
      ++check.checked;
      if (analytic == 0 && std::fabs(numeric) < 1e-12)
        ++check.zero_entries;
      max_numeric = std::max(max_numeric, std::fabs(numeric));
      check.max_abs_gradient = std::max(check.max_abs_gradient, std::fabs(analytic));
      check.max_abs_error = std::max(check.max_abs_error, std::fabs(analytic - numeric));
    }
    check.relative_error = max_numeric > 0 ? check.max_abs_error / max_numeric
                           : check.max_abs_error > 0 ? INFINITY
                                                     : 0.0;
    report.blocks.push_back(check);
  }
  return report;
}

}  // namespace metamol::model
