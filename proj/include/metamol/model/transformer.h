//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "metamol/model/params.h"

namespace metamol::model {

class ModelError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kNormEps = 1e-6;

// Row-wise x / sqrt(mean(x^2) + eps) * gain.
template <class T>
Mat<T> rmsnorm(const Mat<T> &x, const RowVec<T> &gain);

// Rotates consecutive feature pairs of every head; row r sits at position
// first_position + r. Throws ModelError for an odd d_head.
template <class T>
Mat<T> rope_rotate(const Mat<T> &x, int d_head, int first_position, double base);

// Causal multi-head attention of one sequence plus the residual:
// X + concat(H^1..H^h) Wo, with Q, K rotated and the logits scaled by
// 1/sqrt(d_head). `probs`, when given, receives one l x l matrix per head.
template <class T>
Mat<T> attention_block(const Mat<T> &x, const Params<T> &p, int layer,
                       std::vector<Mat<T>> *probs = nullptr);

// (Swish(x Wg) * (x Wu)) Wd, without the residual.
template <class T>
Mat<T> swiglu_ffn(const Mat<T> &x, const Mat<T> &w_gate, const Mat<T> &w_up, const Mat<T> &w_down);

struct LossResult {
  double sum = 0;
  std::size_t count = 0;

  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

/// Forward pass over several sequences packed row-wise, keeping what the
/// backward pass needs. Positions restart at 0 for each sequence and
/// attention never crosses sequences.
template <class T>
class ForwardPass {
public:
  ForwardPass(const Params<T> &params, const std::vector<std::vector<int>> &sequences);

  int rows() const { return static_cast<int>(tokens_.size()); }
  int sequence_start(int s) const { return starts_[s]; }
  int sequence_length(int s) const { return lengths_[s]; }
  int sequence_count() const { return static_cast<int>(starts_.size()); }

  // Final normalized hidden states, one row per token.
  const Mat<T> &hidden() const { return hf_; }
  Mat<T> logits() const;

  // Accumulates parameter gradients given d(objective)/d(hidden).
  void backward_hidden(const Mat<T> &d_hidden, Params<T> &grad) const;

  // Sum of -log p(token t | tokens < t) over positions with mask[t] true,
  // accumulating its gradient into `grad` when not null.
  LossResult loss(const std::vector<std::vector<bool>> &masks, Params<T> *grad) const;

private:
  struct LayerCache {
    Mat<T> x_in, n1, q, k, v, att, x_mid, n2, a, b, s;
    RowVec<T> r1, r2;
    std::vector<Mat<T>> probs;
  };

  const Params<T> &p_;
  std::vector<int> tokens_;
  std::vector<int> starts_, lengths_;
  std::vector<LayerCache> layers_;
  Mat<T> x_final_, nf_, hf_;
  RowVec<T> rf_;
};

extern template class ForwardPass<float>;
extern template class ForwardPass<double>;

template <class T>
Mat<T> forward_logits(const Params<T> &p, const std::vector<int> &tokens);

// Summed negative log-likelihood of one sequence; tokens where mask is
// true are targets.
template <class T>
LossResult glm_loss(const Mat<T> &logits, const std::vector<int> &tokens,
                    const std::vector<bool> &mask);

/// Loss over a batch and the gradient of its sum (added into `grad`).
template <class T>
LossResult loss_and_grad(const Params<T> &p, const std::vector<std::vector<int>> &sequences,
                         const std::vector<std::vector<bool>> &masks, Params<T> *grad);

/// Token-by-token decoding with cached keys and values.
template <class T>
class IncrementalDecoder {
public:
  explicit IncrementalDecoder(const Params<T> &params);

  void reset();
  int position() const { return pos_; }
  // Feeds one token and returns the logits for the next one.
  RowVec<T> step(int token);

private:
  struct Rope;

  const Params<T> &p_;
  std::shared_ptr<const Rope> rope_;
  int pos_ = 0;
  std::vector<Mat<T>> keys_, values_;
};

extern template class IncrementalDecoder<float>;
extern template class IncrementalDecoder<double>;

}  // namespace metamol::model
