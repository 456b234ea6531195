//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/model/transformer.h"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace metamol::model {
namespace {

template <class T>
void rms_forward(const Mat<T> &x, const RowVec<T> &gain, Mat<T> &n, RowVec<T> &r, Mat<T> &h) {
  const T d = static_cast<T>(x.cols());
  r.resize(x.rows());
  n.resize(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    r(i) = std::sqrt(x.row(i).squaredNorm() / d + static_cast<T>(kNormEps));
    n.row(i) = x.row(i) / r(i);
  }
  h = n.array().rowwise() * gain.array();
}

template <class T>
void rms_backward(const Mat<T> &dh, const Mat<T> &n, const RowVec<T> &r, const RowVec<T> &gain,
                  MatMap<T> d_gain, Mat<T> &dx) {
  const T d = static_cast<T>(n.cols());
  d_gain.row(0) += (dh.array() * n.array()).colwise().sum().matrix();
  const Mat<T> dn = dh.array().rowwise() * gain.array();
  for (Eigen::Index i = 0; i < n.rows(); ++i)
    dx.row(i) += (dn.row(i) - n.row(i) * (dn.row(i).dot(n.row(i)) / d)) / r(i);
}

// cos/sin of position * theta_j for positions [0, len).
template <class T>
struct RopeTable {
  Mat<T> cos, sin;

  RopeTable(int len, int d_head, double base): cos(len, d_head / 2), sin(len, d_head / 2) {
    for (int j = 0; j < d_head / 2; ++j) {
      const double theta = std::pow(base, -2.0 * j / d_head);
      for (int p = 0; p < len; ++p) {
        cos(p, j) = static_cast<T>(std::cos(p * theta));
        sin(p, j) = static_cast<T>(std::sin(p * theta));
      }
    }
  }
};

// Rotates rows [row0, row0 + len) as positions [pos0, pos0 + len). A
// negative sign applies the inverse rotation.
template <class T>
void rotate_rows(Mat<T> &m, int row0, int len, int pos0, int d_head, const RopeTable<T> &tab,
                 T sign) {
  const int half = d_head / 2;
  const int heads = static_cast<int>(m.cols()) / d_head;
  for (int r = 0; r < len; ++r) {
    T *row = m.row(row0 + r).data();
    for (int j = 0; j < half; ++j) {
      const T c = tab.cos(pos0 + r, j), s = sign * tab.sin(pos0 + r, j);
      for (int h = 0; h < heads; ++h) {
        T &x0 = row[h * d_head + 2 * j];
        T &x1 = row[h * d_head + 2 * j + 1];
        const T a = x0, b = x1;
        x0 = a * c - b * s;
        x1 = a * s + b * c;
      }
    }
  }
}

// Causal softmax(Q K^T * scale) V for one head of one sequence.
template <class T>
void attend(const Mat<T> &q, const Mat<T> &k, const Mat<T> &v, int row0, int len, int col0,
            int d_head, Mat<T> &out, Mat<T> &probs) {
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d_head)));
  probs.noalias() = q.block(row0, col0, len, d_head) * k.block(row0, col0, len, d_head).transpose();
  for (int i = 0; i < len; ++i) {
    T *row = probs.row(i).data();
    T mx = -std::numeric_limits<T>::infinity();
    for (int j = 0; j <= i; ++j) {
      row[j] *= scale;
      mx = std::max(mx, row[j]);
    }
    T sum = 0;
    for (int j = 0; j <= i; ++j) {
      row[j] = std::exp(row[j] - mx);
      sum += row[j];
    }
    for (int j = 0; j <= i; ++j)
      row[j] /= sum;
    for (int j = i + 1; j < len; ++j)
      row[j] = 0;
  }
  out.block(row0, col0, len, d_head).noalias() = probs * v.block(row0, col0, len, d_head);
}

template <class T>
RowVec<T> gain_of(const Params<T> &p, int block) {
  return p.block(block).row(0);
}

template <class T>
T sigmoid(T z) {
  return T(1) / (T(1) + std::exp(-z));
}

}  // namespace

template <class T>
Mat<T> rmsnorm(const Mat<T> &x, const RowVec<T> &gain) {
  Mat<T> n, h;
  RowVec<T> r;
  rms_forward(x, gain, n, r, h);
  return h;
}

template <class T>
Mat<T> rope_rotate(const Mat<T> &x, int d_head, int first_position, double base) {
  if (d_head <= 0 || d_head % 2 != 0 || x.cols() % d_head != 0)
    throw ModelError("rotary embedding needs an even head dimension dividing the width");
  Mat<T> out = x;
  const RopeTable<T> tab(first_position + static_cast<int>(x.rows()), d_head, base);
  rotate_rows(out, 0, static_cast<int>(x.rows()), first_position, d_head, tab, T(1));
  return out;
}

template <class T>
Mat<T> attention_block(const Mat<T> &x, const Params<T> &p, int layer, std::vector<Mat<T>> *probs) {
  const ModelConfig &c = p.config();
  const int len = static_cast<int>(x.rows());
  if (len > c.max_len)
    throw ModelError("sequence longer than max_len");
  const Mat<T> h = rmsnorm<T>(x, gain_of(p, p.layer_block(layer, LayerBlock::kAttnNorm)));
  Mat<T> q = h * p.layer(layer, LayerBlock::kWq);
  Mat<T> k = h * p.layer(layer, LayerBlock::kWk);
  const Mat<T> v = h * p.layer(layer, LayerBlock::kWv);
  const RopeTable<T> tab(len, c.d_head, c.rope_base);
  rotate_rows(q, 0, len, 0, c.d_head, tab, T(1));
  rotate_rows(k, 0, len, 0, c.d_head, tab, T(1));
  Mat<T> att(len, c.d_model);
  if (probs)
    probs->assign(c.heads, Mat<T>());
  Mat<T> pr(len, len);
  for (int hd = 0; hd < c.heads; ++hd) {
    attend(q, k, v, 0, len, hd * c.d_head, c.d_head, att, pr);
    if (probs)
      (*probs)[hd] = pr;
  }
  return x + att * p.layer(layer, LayerBlock::kWo);
}

template <class T>
Mat<T> swiglu_ffn(const Mat<T> &x, const Mat<T> &w_gate, const Mat<T> &w_up, const Mat<T> &w_down) {
  const Mat<T> a = x * w_gate;
  const Mat<T> b = x * w_up;
  const Mat<T> s = a.unaryExpr([](T z) { return z * sigmoid(z); }).cwiseProduct(b);
  return s * w_down;
}

template <class T>
ForwardPass<T>::ForwardPass(const Params<T> &params, const std::vector<std::vector<int>> &sequences)
  : p_(params) {
  const ModelConfig &c = p_.config();
  int max_len = 0;
  for (const std::vector<int> &seq: sequences) {
    if (seq.empty())
      throw ModelError("empty sequence");
    if (static_cast<int>(seq.size()) > c.max_len)
      throw ModelError("sequence of " + std::to_string(seq.size()) + " tokens exceeds max_len "
                       + std::to_string(c.max_len));
    starts_.push_back(static_cast<int>(tokens_.size()));
    lengths_.push_back(static_cast<int>(seq.size()));
    max_len = std::max(max_len, static_cast<int>(seq.size()));
    for (int t: seq) {
      if (t < 0 || t >= c.vocab_size)
        throw ModelError("token id " + std::to_string(t) + " outside the vocabulary");
      tokens_.push_back(t);
    }
  }
  const int n = rows();
  const int d = c.d_model;
  const RopeTable<T> tab(max_len, c.d_head, c.rope_base);
  const auto emb = p_.embed();
  Mat<T> x(n, d);
  for (int r = 0; r < n; ++r)
    x.row(r) = emb.row(tokens_[r]);

  layers_.resize(c.layers);
  Mat<T> h;
  for (int l = 0; l < c.layers; ++l) {
    LayerCache &L = layers_[l];
    rms_forward(x, gain_of(p_, p_.layer_block(l, LayerBlock::kAttnNorm)), L.n1, L.r1, h);
    L.q.noalias() = h * p_.layer(l, LayerBlock::kWq);
    L.k.noalias() = h * p_.layer(l, LayerBlock::kWk);
    L.v.noalias() = h * p_.layer(l, LayerBlock::kWv);
    L.att.resize(n, d);
    L.probs.resize(starts_.size() * c.heads);
    for (std::size_t s = 0; s < starts_.size(); ++s) {
      rotate_rows(L.q, starts_[s], lengths_[s], 0, c.d_head, tab, T(1));
      rotate_rows(L.k, starts_[s], lengths_[s], 0, c.d_head, tab, T(1));
      for (int hd = 0; hd < c.heads; ++hd) {
        Mat<T> &pr = L.probs[s * c.heads + hd];
        pr.resize(lengths_[s], lengths_[s]);
        attend(L.q, L.k, L.v, starts_[s], lengths_[s], hd * c.d_head, c.d_head, L.att, pr);
      }
    }
    x.noalias() += L.att * p_.layer(l, LayerBlock::kWo);

    rms_forward(x, gain_of(p_, p_.layer_block(l, LayerBlock::kFfnNorm)), L.n2, L.r2, h);
    L.a.noalias() = h * p_.layer(l, LayerBlock::kWGate);
    L.b.noalias() = h * p_.layer(l, LayerBlock::kWUp);
    L.s = L.a.unaryExpr([](T z) { return z * sigmoid(z); }).cwiseProduct(L.b);
    x.noalias() += L.s * p_.layer(l, LayerBlock::kWDown);
  }
  rms_forward(x, gain_of(p_, p_.final_norm_block()), nf_, rf_, hf_);
}

template <class T>
Mat<T> ForwardPass<T>::logits() const {
  return hf_ * p_.out();
}

template <class T>
void ForwardPass<T>::backward_hidden(const Mat<T> &d_hidden, Params<T> &grad) const {
  const ModelConfig &c = p_.config();
  const int n = rows();
  const int d = c.d_model;
  int max_len = 0;
  for (int len: lengths_)
    max_len = std::max(max_len, len);
  const RopeTable<T> tab(max_len, c.d_head, c.rope_base);
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(c.d_head)));

  Mat<T> dx = Mat<T>::Zero(n, d);
  rms_backward(d_hidden, nf_, rf_, gain_of(p_, p_.final_norm_block()),
               grad.block(p_.final_norm_block()), dx);

  for (int l = c.layers - 1; l >= 0; --l) {
    const LayerCache &L = layers_[l];
    auto blk = [&](LayerBlock b) { return p_.layer(l, b); };
    auto gblk = [&](LayerBlock b) { return grad.layer(l, b); };

    // Feed-forward half: x_out = x_mid + s Wd.
    const RowVec<T> g2 = gain_of(p_, p_.layer_block(l, LayerBlock::kFfnNorm));
    gblk(LayerBlock::kWDown).noalias() += L.s.transpose() * dx;
    const Mat<T> ds = dx * blk(LayerBlock::kWDown).transpose();
    const Mat<T> sig = L.a.unaryExpr([](T z) { return sigmoid(z); });
    const Mat<T> da =
      (ds.array() * L.b.array() * sig.array() * (T(1) + L.a.array() * (T(1) - sig.array()))).matrix();
    const Mat<T> db = (ds.array() * L.a.array() * sig.array()).matrix();
    const Mat<T> h2 = L.n2.array().rowwise() * g2.array();
    gblk(LayerBlock::kWGate).noalias() += h2.transpose() * da;
    gblk(LayerBlock::kWUp).noalias() += h2.transpose() * db;
    Mat<T> dh = da * blk(LayerBlock::kWGate).transpose();
    dh.noalias() += db * blk(LayerBlock::kWUp).transpose();
    rms_backward(dh, L.n2, L.r2, g2, gblk(LayerBlock::kFfnNorm), dx);

    // Attention half: x_mid = x_in + att Wo.
    const RowVec<T> g1 = gain_of(p_, p_.layer_block(l, LayerBlock::kAttnNorm));
    gblk(LayerBlock::kWo).noalias() += L.att.transpose() * dx;
    const Mat<T> datt = dx * blk(LayerBlock::kWo).transpose();
    Mat<T> dq(n, d), dk(n, d), dv(n, d);
    for (std::size_t s = 0; s < starts_.size(); ++s) {
      const int r0 = starts_[s], len = lengths_[s];
      for (int hd = 0; hd < c.heads; ++hd) {
        const int c0 = hd * c.d_head;
        const Mat<T> &pr = L.probs[s * c.heads + hd];
        const auto d_o = datt.block(r0, c0, len, c.d_head);
        const Mat<T> dp = d_o * L.v.block(r0, c0, len, c.d_head).transpose();
        dv.block(r0, c0, len, c.d_head).noalias() = pr.transpose() * d_o;
        Mat<T> dsc(len, len);
        for (int i = 0; i < len; ++i) {
          const T dot = dp.row(i).head(i + 1).dot(pr.row(i).head(i + 1));
          dsc.row(i) = pr.row(i).array() * (dp.row(i).array() - dot);
        }
        dsc *= scale;
        dq.block(r0, c0, len, c.d_head).noalias() = dsc * L.k.block(r0, c0, len, c.d_head);
        dk.block(r0, c0, len, c.d_head).noalias() = dsc.transpose() * L.q.block(r0, c0, len, c.d_head);
      }
      rotate_rows(dq, r0, len, 0, c.d_head, tab, T(-1));
      rotate_rows(dk, r0, len, 0, c.d_head, tab, T(-1));
    }
    const Mat<T> h1 = L.n1.array().rowwise() * g1.array();
    gblk(LayerBlock::kWq).noalias() += h1.transpose() * dq;
    gblk(LayerBlock::kWk).noalias() += h1.transpose() * dk;
    gblk(LayerBlock::kWv).noalias() += h1.transpose() * dv;
    dh.noalias() = dq * blk(LayerBlock::kWq).transpose();
    dh.noalias() += dk * blk(LayerBlock::kWk).transpose();
    dh.noalias() += dv * blk(LayerBlock::kWv).transpose();
    rms_backward(dh, L.n1, L.r1, g1, gblk(LayerBlock::kAttnNorm), dx);
  }
  auto demb = grad.embed();
  for (int r = 0; r < n; ++r)
    demb.row(tokens_[r]) += dx.row(r);
}

template <class T>
LossResult ForwardPass<T>::loss(const std::vector<std::vector<bool>> &masks, Params<T> *grad) const {
  if (masks.size() != starts_.size())
    throw ModelError("one loss mask per sequence required");
  const Mat<T> lg = logits();
  Mat<T> dlogits;
  if (grad)
    dlogits = Mat<T>::Zero(lg.rows(), lg.cols());
  LossResult out;
  for (std::size_t s = 0; s < starts_.size(); ++s) {
    if (static_cast<int>(masks[s].size()) != lengths_[s])
      throw ModelError("loss mask length differs from the sequence");
    for (int t = 1; t < lengths_[s]; ++t) {
      if (!masks[s][t])
        continue;
      const int r = starts_[s] + t - 1;
      const int target = tokens_[starts_[s] + t];
      const T mx = lg.row(r).maxCoeff();
      const T sum = (lg.row(r).array() - mx).exp().sum();
      const T lse = mx + std::log(sum);
      out.sum += static_cast<double>(lse - lg(r, target));
      ++out.count;
      if (grad) {
        dlogits.row(r) = (lg.row(r).array() - lse).exp();
        dlogits(r, target) -= T(1);
      }
    }
  }
  if (grad) {
    grad->block(p_.out_block()).noalias() += hf_.transpose() * dlogits;
    backward_hidden(dlogits * p_.out().transpose(), *grad);
  }
  return out;
}

template <class T>
Mat<T> forward_logits(const Params<T> &p, const std::vector<int> &tokens) {
  return ForwardPass<T>(p, { tokens }).logits();
}

template <class T>
LossResult glm_loss(const Mat<T> &logits, const std::vector<int> &tokens,
                    const std::vector<bool> &mask) {
  if (mask.size() != tokens.size() || static_cast<std::size_t>(logits.rows()) != tokens.size())
    throw ModelError("logits, tokens and mask must have one entry per position");
  LossResult out;
  for (std::size_t t = 1; t < tokens.size(); ++t) {
    if (!mask[t])
      continue;
    const auto row = logits.row(t - 1);
    const double mx = static_cast<double>(row.maxCoeff());
    double sum = 0;
    for (Eigen::Index j = 0; j < row.size(); ++j)
      sum += std::exp(static_cast<double>(row(j)) - mx);
    out.sum += mx + std::log(sum) - static_cast<double>(row(tokens[t]));
    ++out.count;
  }
  if (out.count == 0)
    throw ModelError("empty target");
  return out;
}

template <class T>
LossResult loss_and_grad(const Params<T> &p, const std::vector<std::vector<int>> &sequences,
                         const std::vector<std::vector<bool>> &masks, Params<T> *grad) {
  return ForwardPass<T>(p, sequences).loss(masks, grad);
}

template <class T>
struct IncrementalDecoder<T>::Rope: RopeTable<T> {
  using RopeTable<T>::RopeTable;
};

template <class T>
IncrementalDecoder<T>::IncrementalDecoder(const Params<T> &params)
  : p_(params), rope_(std::make_shared<Rope>(params.config().max_len, params.config().d_head,
                                             params.config().rope_base)) {
  reset();
}

template <class T>
void IncrementalDecoder<T>::reset() {
  const ModelConfig &c = p_.config();
  pos_ = 0;
  keys_.assign(c.layers, Mat<T>(c.max_len, c.d_model));
  values_.assign(c.layers, Mat<T>(c.max_len, c.d_model));
}

template <class T>
RowVec<T> IncrementalDecoder<T>::step(int token) {
  const ModelConfig &c = p_.config();
  if (pos_ >= c.max_len)
    throw ModelError("decoder reached max_len");
  if (token < 0 || token >= c.vocab_size)
    throw ModelError("token id outside the vocabulary");
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(c.d_head)));
  Mat<T> x = p_.embed().row(token);
  Mat<T> n, h;
  RowVec<T> r;
  for (int l = 0; l < c.layers; ++l) {
    rms_forward(x, gain_of(p_, p_.layer_block(l, LayerBlock::kAttnNorm)), n, r, h);
    Mat<T> q = h * p_.layer(l, LayerBlock::kWq);
    Mat<T> k = h * p_.layer(l, LayerBlock::kWk);
    rotate_rows(q, 0, 1, pos_, c.d_head, *rope_, T(1));
    rotate_rows(k, 0, 1, pos_, c.d_head, *rope_, T(1));
    keys_[l].row(pos_) = k.row(0);
    values_[l].row(pos_) = h * p_.layer(l, LayerBlock::kWv);
    Mat<T> att(1, c.d_model);
    for (int hd = 0; hd < c.heads; ++hd) {
      const int c0 = hd * c.d_head;
      RowVec<T> sc = (keys_[l].block(0, c0, pos_ + 1, c.d_head) * q.block(0, c0, 1, c.d_head).transpose())
                       .transpose() * scale;
      const T mx = sc.maxCoeff();
      sc = (sc.array() - mx).exp();
      sc /= sc.sum();
      att.block(0, c0, 1, c.d_head).noalias() = sc * values_[l].block(0, c0, pos_ + 1, c.d_head);
    }
    x.noalias() += att * p_.layer(l, LayerBlock::kWo);
    rms_forward(x, gain_of(p_, p_.layer_block(l, LayerBlock::kFfnNorm)), n, r, h);
    x.noalias() += swiglu_ffn<T>(h, p_.layer(l, LayerBlock::kWGate), p_.layer(l, LayerBlock::kWUp),
                                 p_.layer(l, LayerBlock::kWDown));
  }
  rms_forward(x, gain_of(p_, p_.final_norm_block()), n, r, h);
  ++pos_;
  return h * p_.out();
}

#define METAMOL_INSTANTIATE(T)                                                                     \
  template Mat<T> rmsnorm<T>(const Mat<T> &, const RowVec<T> &);                                   \
  template Mat<T> rope_rotate<T>(const Mat<T> &, int, int, double);                                \
  template Mat<T> attention_block<T>(const Mat<T> &, const Params<T> &, int, std::vector<Mat<T>> *); \
  template Mat<T> swiglu_ffn<T>(const Mat<T> &, const Mat<T> &, const Mat<T> &, const Mat<T> &);   \
  template Mat<T> forward_logits<T>(const Params<T> &, const std::vector<int> &);                  \
  template LossResult glm_loss<T>(const Mat<T> &, const std::vector<int> &,                        \
                                  const std::vector<bool> &);                                      \
  template LossResult loss_and_grad<T>(const Params<T> &, const std::vector<std::vector<int>> &,   \
                                       const std::vector<std::vector<bool>> &, Params<T> *);       \
  template class ForwardPass<T>;                                                                   \
  template class IncrementalDecoder<T>;

METAMOL_INSTANTIATE(float)
METAMOL_INSTANTIATE(double)

}  // namespace metamol::model
