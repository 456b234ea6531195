//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/train/finetune.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "metamol/chem/smiles.h"
#include "metamol/lang/task.h"
#include "metamol/model/transformer.h"
#include "metamol/util/random.h"

namespace metamol::train {

std::vector<int> property_input(const lang::Vocab &vocab, std::string_view smiles) {
  const lang::TaskSpec spec { lang::Knowledge::kProperty, lang::Noise::kSequence,
                              lang::Direction::kObject };
  std::vector<int> out { vocab.id(spec.tag()) };
  for (int t: vocab.encode(chem::tokenize_smiles(smiles)))
    out.push_back(t);
  out.push_back(lang::kSep);
  out.push_back(lang::kEos);
  return out;
}

template <class T>
model::RowVec<T> pool_features(const model::Mat<T> &hidden, const std::vector<int> &tokens,
                               std::vector<int> *argmax) {
  const int d = static_cast<int>(hidden.cols());
  if (static_cast<Eigen::Index>(tokens.size()) != hidden.rows())
    throw std::invalid_argument("token count does not match hidden rows");
  model::RowVec<T> f = model::RowVec<T>::Zero(2 * d);
  std::vector<int> arg(d, -1);
  int count = 0;
  for (int r = 0; r < hidden.rows(); ++r) {
    if (tokens[r] == lang::kPad)
      continue;
    for (int j = 0; j < d; ++j) {
      if (arg[j] < 0 || hidden(r, j) > f[j]) {
        f[j] = hidden(r, j);
        arg[j] = r;
      }
      f[d + j] += hidden(r, j);
    }
    ++count;
  }
  if (count == 0)
    throw std::invalid_argument("no non-padding positions to pool");
  f.tail(d) /= static_cast<T>(count);
  if (argmax)
    *argmax = std::move(arg);
  return f;
}

namespace {

template <class T>
struct HeadView {
  int d;
  const T *w1, *b1, *w2, *b2;

  HeadView(int d_model, const T *data)
      : d(d_model), w1(data), b1(data + 2 * d * d), w2(b1 + d), b2(w2 + d) { }
};

std::size_t head_size(int d) {
  return static_cast<std::size_t>(2 * d) * d + 2 * d + 1;
}

double sigmoid(double x) {
  return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

template <class T>
RegressionHead<T> RegressionHead<T>::init(int d_model, std::uint64_t seed) {
  RegressionHead h;
  h.d_model = d_model;
  h.data.assign(head_size(d_model), T(0));
  Rng rng(seed);
  const std::size_t w1 = static_cast<std::size_t>(2 * d_model) * d_model;
  const double s1 = 1.0 / std::sqrt(2.0 * d_model);
  const double s2 = 1.0 / std::sqrt(static_cast<double>(d_model));
  for (std::size_t i = 0; i < w1; ++i)
    h.data[i] = static_cast<T>(normal01(rng) * s1);
  for (int i = 0; i < d_model; ++i)
    h.data[w1 + d_model + i] = static_cast<T>(normal01(rng) * s2);
  return h;
}

template <class T>
double RegressionHead<T>::forward(const model::RowVec<T> &f) const {
  HeadView<T> v(d_model, data.data());
  double y = v.b2[0];
  for (int k = 0; k < d_model; ++k) {
    double z = v.b1[k];
    for (int i = 0; i < 2 * d_model; ++i)
      z += static_cast<double>(f[i]) * v.w1[i * d_model + k];
    y += z * sigmoid(z) * v.w2[k];
  }
  return y;
}

template <class T>
FineTuneState<T> FineTuneState<T>::init(const model::Params<T> &pretrained,
                                        const std::vector<RegressionExample> &examples,
                                        std::uint64_t seed) {
  if (examples.empty())
    throw std::invalid_argument("no fine-tuning examples");
  FineTuneState s;
  s.backbone.params = pretrained;
  s.backbone.m = model::Params<T>(pretrained.config());
  s.backbone.v = model::Params<T>(pretrained.config());
  s.backbone.seed = seed;
  s.head = RegressionHead<T>::init(pretrained.config().d_model, mix_seed(seed, 0x4845));
  double mean = 0;
  for (const auto &e: examples)
    mean += e.y;
  mean /= static_cast<double>(examples.size());
  double var = 0;
  for (const auto &e: examples)
    var += (e.y - mean) * (e.y - mean);
  var /= static_cast<double>(examples.size());
  s.head.y_mean = mean;
  s.head.y_scale = var > 0 ? std::sqrt(var) : 1.0;
  s.head_m.assign(s.head.data.size(), T(0));
  s.head_v.assign(s.head.data.size(), T(0));
  return s;
}

template <class T>
double FineTuneState<T>::predict(const std::vector<int> &tokens) const {
  model::ForwardPass<T> fp(backbone.params, { tokens });
  return head.predict(pool_features<T>(fp.hidden(), tokens));
}

template <class T>
model::Checkpoint FineTuneState<T>::to_checkpoint(const std::vector<std::string> &vocab) const {
  model::Checkpoint c = backbone.to_checkpoint(vocab);
  c.step = step;
  nlohmann::json meta = nlohmann::json::parse(c.metadata);
  meta["y_mean"] = head.y_mean;
  meta["y_scale"] = head.y_scale;
  meta["head"] = "regression";
  c.metadata = meta.dump();
  auto add = [&](const std::string &name, const std::vector<T> &v) {
    model::CheckpointBlock b { name, 1, static_cast<int>(v.size()), {} };
    b.data.assign(v.begin(), v.end());
    c.blocks.push_back(std::move(b));
  };
  add("head.params", head.data);
  add("head.adam.m", head_m);
  add("head.adam.v", head_v);
  return c;
}

template <class T>
FineTuneState<T> FineTuneState<T>::from_checkpoint(const model::Checkpoint &c) {
  FineTuneState s;
  s.backbone = TrainState<T>::from_checkpoint(c);
  s.step = c.step;
  const auto *hp = c.find("head.params");
  if (!hp)
    throw model::CheckpointError("checkpoint has no regression head");
  const int d = c.config.d_model;
  if (hp->data.size() != head_size(d))
    throw model::CheckpointError("regression head has the wrong size");
  s.head.d_model = d;
  s.head.data.assign(hp->data.begin(), hp->data.end());
  auto load = [&](const char *name, std::vector<T> &out) {
    const auto *b = c.find(name);
    if (b && b->data.size() == hp->data.size())
      out.assign(b->data.begin(), b->data.end());
    else
      out.assign(hp->data.size(), T(0));
  };
  load("head.adam.m", s.head_m);
  load("head.adam.v", s.head_v);
  const auto meta = nlohmann::json::parse(c.metadata, nullptr, false);
  if (meta.is_object()) {
    s.head.y_mean = meta.value("y_mean", 0.0);
    s.head.y_scale = meta.value("y_scale", 1.0);
  }
  return s;
}

template <class T>
double finetune_step(FineTuneState<T> &state, const std::vector<RegressionExample> &batch,
                     const TrainHyper &h) {
  if (batch.empty())
    throw std::invalid_argument("empty batch");
  const int d = state.head.d_model;
  std::vector<std::vector<int>> seqs;
  for (const auto &e: batch)
    seqs.push_back(e.tokens);
  model::ForwardPass<T> fp(state.backbone.params, seqs);
  const model::Mat<T> &hidden = fp.hidden();
  model::Mat<T> d_hidden = model::Mat<T>::Zero(hidden.rows(), hidden.cols());
  std::vector<double> head_grad(state.head.data.size(), 0.0);
  HeadView<T> v(d, state.head.data.data());
  const std::size_t b1_off = static_cast<std::size_t>(2 * d) * d;
  const std::size_t w2_off = b1_off + d;
  const std::size_t b2_off = w2_off + d;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  double loss = 0;

  for (int s = 0; s < fp.sequence_count(); ++s) {
    const int start = fp.sequence_start(s);
    const int len = fp.sequence_length(s);
    const model::Mat<T> hs = hidden.middleRows(start, len);
    std::vector<int> argmax;
    const model::RowVec<T> f = pool_features<T>(hs, batch[s].tokens, &argmax);
    std::vector<double> z(d), a(d);
    double y = v.b2[0];
    for (int k = 0; k < d; ++k) {
      z[k] = v.b1[k];
      for (int i = 0; i < 2 * d; ++i)
        z[k] += static_cast<double>(f[i]) * v.w1[i * d + k];
      a[k] = z[k] * sigmoid(z[k]);
      y += a[k] * v.w2[k];
    }
    const double target = (batch[s].y - state.head.y_mean) / state.head.y_scale;
    const double err = y - target;
    loss += err * err * inv_b;
    const double dy = 2.0 * err * inv_b;
    head_grad[b2_off] += dy;
    std::vector<double> df(2 * d, 0.0);
    for (int k = 0; k < d; ++k) {
      head_grad[w2_off + k] += dy * a[k];
      const double sg = sigmoid(z[k]);
      const double dz = dy * v.w2[k] * (sg + z[k] * sg * (1 - sg));
      head_grad[b1_off + k] += dz;
      for (int i = 0; i < 2 * d; ++i) {
        head_grad[static_cast<std::size_t>(i) * d + k] += dz * f[i];
        df[i] += dz * v.w1[i * d + k];
      }
    }
    int count = 0;
    for (int t: batch[s].tokens)
      count += t != lang::kPad ? 1 : 0;
    for (int j = 0; j < d; ++j) {
      d_hidden(start + argmax[j], j) += static_cast<T>(df[j]);
      const T share = static_cast<T>(df[d + j] / count);
      for (int r = 0; r < len; ++r) {
        if (batch[s].tokens[r] != lang::kPad)
          d_hidden(start + r, j) += share;
      }
    }
  }
  if (!std::isfinite(loss))
    throw TrainError("non-finite fine-tuning loss at step " + std::to_string(state.step));

  model::Params<T> grad(state.backbone.params.config());
  fp.backward_hidden(d_hidden, grad);
  // Joint clipping over backbone and head.
  std::vector<T> hg(head_grad.begin(), head_grad.end());
  double sq = 0;
  for (T g: grad.data())
    sq += static_cast<double>(g) * g;
  for (T g: hg)
    sq += static_cast<double>(g) * g;
  const double norm = std::sqrt(sq);
  if (h.clip_norm > 0 && norm > h.clip_norm) {
    const T scale = static_cast<T>(h.clip_norm / norm);
    for (T &g: grad.data())
      g *= scale;
    for (T &g: hg)
      g *= scale;
  }
  const double lr = h.lr_at(state.step);
  adam_update(state.backbone.params.data(), state.backbone.m.data(), state.backbone.v.data(),
              grad.data(), lr, h, state.step + 1);
  adam_update(state.head.data, state.head_m, state.head_v, hg, lr, h, state.step + 1);
  ++state.step;
  state.backbone.step = state.step;
  return loss;
}

template struct RegressionHead<float>;
template struct RegressionHead<double>;
template struct FineTuneState<float>;
template struct FineTuneState<double>;
template model::RowVec<float> pool_features<float>(const model::Mat<float> &,
                                                   const std::vector<int> &, std::vector<int> *);
template model::RowVec<double> pool_features<double>(const model::Mat<double> &,
                                                     const std::vector<int> &, std::vector<int> *);
template double finetune_step<float>(FineTuneState<float> &, const std::vector<RegressionExample> &,
                                     const TrainHyper &);
template double finetune_step<double>(FineTuneState<double> &,
                                      const std::vector<RegressionExample> &, const TrainHyper &);

}  // namespace metamol::train
