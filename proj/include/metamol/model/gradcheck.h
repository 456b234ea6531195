//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "metamol/model/params.h"

namespace metamol::model {

struct BlockCheck {
  std::string name;
  std::size_t checked = 0;
  // max |analytic - numeric| / max |numeric| over the block.
  double relative_error = 0;
  double max_abs_error = 0;
  double max_abs_gradient = 0;
  // Entries whose analytic and numeric gradients are both zero (unused
  // vocabulary rows, say). Reported, never a failure.
  std::size_t zero_entries = 0;
};

struct GradCheckReport {
  std::vector<BlockCheck> blocks;

  double max_relative_error() const;
  // Blocks with a gradient everywhere zero are skipped.
  bool ok(double tolerance) const;
};

/// Central differences of the summed loss against the analytic gradient,
/// for every entry of every block (or `per_block` evenly spaced entries).
GradCheckReport gradient_check(const Params<double> &params,
                               const std::vector<std::vector<int>> &sequences,
                               const std::vector<std::vector<bool>> &masks, double step = 1e-5,
                               std::size_t per_block = 0);

}  // namespace metamol::model
