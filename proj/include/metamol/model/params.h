//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "metamol/model/config.h"

namespace metamol::model {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using RowVec = Eigen::Matrix<T, 1, Eigen::Dynamic>;
// 64-byte aligned so vectorized kernels see the same alignment on every
// allocation; otherwise reductions can round differently run to run.
template <class T>
using ParamBuffer = std::vector<T, Eigen::aligned_allocator<T>>;
template <class T>
using MatMap = Eigen::Map<Mat<T>>;
template <class T>
using ConstMatMap = Eigen::Map<const Mat<T>>;

enum class LayerBlock {
  kAttnNorm,
  kWq,
  kWk,
  kWv,
  kWo,
  kFfnNorm,
  kWGate,
  kWUp,
  kWDown,
};
inline constexpr int kLayerBlocks = 9;

struct BlockInfo {
  std::string name;
  std::size_t offset;
  int rows;
  int cols;

  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

// embed, then per layer the nine LayerBlocks, then final_norm and out.
std::vector<BlockInfo> param_layout(const ModelConfig &c);

/// All weights in one contiguous buffer with named row-major views. Norm
/// gains are 1 x d_model blocks. The same type holds gradients and
/// optimizer moments.
template <class T>
class Params {
public:
  Params() = default;
  // Zero-filled.
  explicit Params(const ModelConfig &config);

  const ModelConfig &config() const { return config_; }
  const std::vector<BlockInfo> &blocks() const { return blocks_; }
  ParamBuffer<T> &data() { return data_; }
  const ParamBuffer<T> &data() const { return data_; }
  std::size_t size() const { return data_.size(); }

  MatMap<T> block(int i);
  ConstMatMap<T> block(int i) const;
  int layer_block(int layer, LayerBlock b) const { return 1 + layer * kLayerBlocks + static_cast<int>(b); }
  int final_norm_block() const { return 1 + config_.layers * kLayerBlocks; }
  int out_block() const { return final_norm_block() + 1; }

  MatMap<T> embed() { return block(0); }
  ConstMatMap<T> embed() const { return block(0); }
  MatMap<T> layer(int l, LayerBlock b) { return block(layer_block(l, b)); }
  ConstMatMap<T> layer(int l, LayerBlock b) const { return block(layer_block(l, b)); }
  ConstMatMap<T> final_norm() const { return block(final_norm_block()); }
  ConstMatMap<T> out() const { return block(out_block()); }

  void set_zero();
  // normal(0, 0.02); residual output projections (Wo, Wdown) scaled by
  // 1/sqrt(2 layers); norm gains 1.
  void init(std::uint64_t seed);

  template <class U>
  Params<U> cast() const {
    Params<U> out(config_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      out.data()[i] = static_cast<U>(data_[i]);
    return out;
  }

private:
  ModelConfig config_;
  std::vector<BlockInfo> blocks_;
  ParamBuffer<T> data_;
};

extern template class Params<float>;
extern template class Params<double>;

}  // namespace metamol::model
