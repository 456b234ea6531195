//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "metamol/lang/vocab.h"
#include "metamol/model/checkpoint.h"
#include "metamol/train/trainer.h"

namespace metamol::train {

// Model input for a downstream regression: the [GLM_prop_val] tag, the SMILES
// tokens, SEP and EOS.
std::vector<int> property_input(const lang::Vocab &vocab, std::string_view smiles);

// [max-pool | mean-pool] over non-PAD rows of `hidden`; 1 x 2d. argmax gets
// the row chosen for each max-pooled feature when not null.
template <class T>
model::RowVec<T> pool_features(const model::Mat<T> &hidden, const std::vector<int> &tokens,
                               std::vector<int> *argmax = nullptr);

/// Regression head: 2d -> d (Swish) -> 1. Targets are standardized with
/// y_mean and y_scale; predictions are mapped back.
template <class T>
struct RegressionHead {
  int d_model = 0;
  // w1 (2d x d), b1 (d), w2 (d), b2 (1).
  std::vector<T> data;
  double y_mean = 0;
  double y_scale = 1;

  static RegressionHead init(int d_model, std::uint64_t seed);
  // Output in standardized units.
  double forward(const model::RowVec<T> &features) const;
  double predict(const model::RowVec<T> &features) const {
    return forward(features) * y_scale + y_mean;
  }
};

struct RegressionExample {
  std::vector<int> tokens;
  double y = 0;
};

template <class T>
struct FineTuneState {
  TrainState<T> backbone;
  RegressionHead<T> head;
  std::vector<T> head_m, head_v;
  std::int64_t step = 0;

  // Starts from a pre-trained backbone (moments reset); the target scale is
  // taken from `examples`.
  static FineTuneState init(const model::Params<T> &pretrained,
                            const std::vector<RegressionExample> &examples, std::uint64_t seed);

  double predict(const std::vector<int> &tokens) const;

  // Backbone blocks plus "head.*" blocks; y_mean/y_scale in metadata.
  model::Checkpoint to_checkpoint(const std::vector<std::string> &vocab) const;
  static FineTuneState from_checkpoint(const model::Checkpoint &c);
};

/// One end-to-end step on the standardized squared error; returns the batch
/// mean of that error before the update.
template <class T>
double finetune_step(FineTuneState<T> &state, const std::vector<RegressionExample> &batch,
                     const TrainHyper &h);

extern template struct RegressionHead<float>;
extern template struct RegressionHead<double>;
extern template struct FineTuneState<float>;
extern template struct FineTuneState<double>;

}  // namespace metamol::train
