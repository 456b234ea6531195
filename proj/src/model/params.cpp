//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/model/params.h"

#include <cmath>

#include "metamol/util/random.h"

namespace metamol::model {

std::vector<BlockInfo> param_layout(const ModelConfig &c) {
  c.validate();
  std::vector<BlockInfo> out;
  std::size_t offset = 0;
  auto add = [&](std::string name, int rows, int cols) {
    out.push_back({ std::move(name), offset, rows, cols });
    offset += static_cast<std::size_t>(rows) * cols;
  };
  const int d = c.d_model, f = c.ffn_dim;
  add("embed", c.vocab_size, d);
  for (int l = 0; l < c.layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    add(p + "attn_norm", 1, d);
    add(p + "wq", d, d);
    add(p + "wk", d, d);
    add(p + "wv", d, d);
    add(p + "wo", d, d);
    add(p + "ffn_norm", 1, d);
    add(p + "w_gate", d, f);
    add(p + "w_up", d, f);
    add(p + "w_down", f, d);
  }
  add("final_norm", 1, d);
  add("out", d, c.vocab_size);
  return out;
}

template <class T>
Params<T>::Params(const ModelConfig &config)
  : config_(config), blocks_(param_layout(config)),
    data_(blocks_.back().offset + blocks_.back().size(), T(0)) { }

template <class T>
MatMap<T> Params<T>::block(int i) {
  const BlockInfo &b = blocks_.at(i);
  return MatMap<T>(data_.data() + b.offset, b.rows, b.cols);
}

template <class T>
ConstMatMap<T> Params<T>::block(int i) const {
  const BlockInfo &b = blocks_.at(i);
  return ConstMatMap<T>(data_.data() + b.offset, b.rows, b.cols);
}

template <class T>
void Params<T>::set_zero() {
  std::fill(data_.begin(), data_.end(), T(0));
}

template <class T>
void Params<T>::init(std::uint64_t seed) {
  Rng rng(seed);
  const double residual_scale = 1.0 / std::sqrt(2.0 * config_.layers);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const BlockInfo &b = blocks_[i];
    T *p = data_.data() + b.offset;
    const bool gain = b.name.ends_with("norm");
    const bool residual = b.name.ends_with(".wo") || b.name.ends_with(".w_down");
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (gain)
        p[k] = T(1);
      else
        p[k] = static_cast<T>(0.02 * normal01(rng) * (residual ? residual_scale : 1.0));
    }
  }
}

template class Params<float>;
template class Params<double>;

}  // namespace metamol::model
