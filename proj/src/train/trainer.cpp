//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/train/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metamol/model/transformer.h"
#include "metamol/util/random.h"

namespace metamol::train {

int TrainHyper::warmup() const {
  if (warmup_steps >= 0)
    return warmup_steps;
  return std::max(1, total_steps / 100);
}

double TrainHyper::lr_at(std::int64_t step) const {
  const int w = warmup();
  if (w <= 0 || step + 1 >= w)
    return lr;
  return lr * static_cast<double>(step + 1) / w;
}

namespace {

template <class T>
void adam_impl(std::span<T> params, std::span<T> m, std::span<T> v, std::span<const T> grad,
               double lr, const TrainHyper &h, std::int64_t t) {
  if (m.size() != params.size() || v.size() != params.size() || grad.size() != params.size())
    throw TrainError("optimizer buffers differ in size");
  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(t));
  const T b1 = static_cast<T>(h.beta1), b2 = static_cast<T>(h.beta2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const T g = grad[i];
    m[i] = b1 * m[i] + (1 - b1) * g;
    v[i] = b2 * v[i] + (1 - b2) * g * g;
    const double mh = m[i] / c1;
    const double vh = v[i] / c2;
    params[i] -= static_cast<T>(lr * mh / (std::sqrt(vh) + h.eps));
  }
}

template <class T>
double clip_impl(std::span<T> grad, double max_norm) {
  double sq = 0;
  for (T g: grad)
    sq += static_cast<double>(g) * g;
  const double norm = std::sqrt(sq);
  if (max_norm > 0 && norm > max_norm) {
    const T s = static_cast<T>(max_norm / norm);
    for (T &g: grad)
      g *= s;
  }
  return norm;
}

}  // namespace

void adam_update(std::span<float> params, std::span<float> m, std::span<float> v,
                 std::span<const float> grad, double lr, const TrainHyper &h, std::int64_t t) {
  adam_impl(params, m, v, grad, lr, h, t);
}

void adam_update(std::span<double> params, std::span<double> m, std::span<double> v,
                 std::span<const double> grad, double lr, const TrainHyper &h, std::int64_t t) {
  adam_impl(params, m, v, grad, lr, h, t);
}

double clip_gradient(std::span<float> grad, double max_norm) {
  return clip_impl(grad, max_norm);
}

double clip_gradient(std::span<double> grad, double max_norm) {
  return clip_impl(grad, max_norm);
}

template <class T>
TrainState<T> TrainState<T>::init(const model::ModelConfig &config, std::uint64_t seed) {
  TrainState s;
  s.params = model::Params<T>(config);
  s.params.init(seed);
  s.m = model::Params<T>(config);
  s.v = model::Params<T>(config);
  s.seed = seed;
  return s;
}

template <class T>
model::Checkpoint TrainState<T>::to_checkpoint(const std::vector<std::string> &vocab) const {
  model::Checkpoint c;
  c.config = params.config();
  c.vocab = vocab;
  c.step = step;
  c.precision_bytes = sizeof(T);
  nlohmann::json meta;
  meta["seed"] = seed;
  meta["ema_loss"] = ema_loss;
  meta["last_loss"] = last_loss;
  c.metadata = meta.dump();
  c.add_params(params);
  c.add_params(m, "adam.m.");
  c.add_params(v, "adam.v.");
  return c;
}

template <class T>
TrainState<T> TrainState<T>::from_checkpoint(const model::Checkpoint &c) {
  TrainState s;
  s.params = c.params<T>();
  if (c.find("adam.m.embed")) {
    s.m = c.params<T>("adam.m.");
    s.v = c.params<T>("adam.v.");
  } else {
    s.m = model::Params<T>(c.config);
    s.v = model::Params<T>(c.config);
  }
  s.step = c.step;
  const auto meta = nlohmann::json::parse(c.metadata, nullptr, false);
  if (meta.is_object()) {
    s.seed = meta.value("seed", std::uint64_t { 1 });
    s.ema_loss = meta.value("ema_loss", 0.0);
    s.last_loss = meta.value("last_loss", 0.0);
  }
  return s;
}

PairListSource::PairListSource(std::vector<lang::TrainingPair> pairs): pairs_(std::move(pairs)) {
  if (pairs_.empty())
    throw TrainError("empty pair list");
}

std::vector<lang::TrainingPair> PairListSource::batch(std::uint64_t seed, std::int64_t step,
                                                      int size) {
  if (static_cast<std::size_t>(size) >= pairs_.size())
    return pairs_;
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(step)));
  std::vector<lang::TrainingPair> out;
  out.reserve(size);
  for (int i = 0; i < size; ++i)
    out.push_back(pairs_[uniform_index(rng, pairs_.size())]);
  return out;
}

MoleculeSource::MoleculeSource(const lang::Vocab &vocab, const std::vector<lang::Molecule> &molecules,
                               lang::TaskMix mix, lang::SampleOptions options)
    : vocab_(vocab), molecules_(molecules), mix_(mix), options_(options) {
  if (molecules_.empty())
    throw TrainError("no molecules");
}

std::vector<lang::TrainingPair> MoleculeSource::batch(std::uint64_t seed, std::int64_t step,
                                                      int size) {
  std::vector<lang::TrainingPair> out;
  out.reserve(size);
  const std::uint64_t base = mix_seed(seed, static_cast<std::uint64_t>(step));
  for (int i = 0; i < size; ++i) {
    Rng rng(mix_seed(base, static_cast<std::uint64_t>(i)));
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000)
        throw TrainError("could not draw a valid sample in 1000 attempts");
      const lang::Molecule &mol = molecules_[uniform_index(rng, molecules_.size())];
      const auto spec = lang::TaskSpec::from_index(mix_.sample(rng));
      try {
        out.push_back(lang::make_sample(vocab_, mol, spec, rng, options_));
        break;
      } catch (const lang::SampleError &) {
      } catch (const lang::VocabError &) {
      }
    }
  }
  return out;
}

template <class T>
StepResult train_step(TrainState<T> &state, const std::vector<lang::TrainingPair> &pairs,
                      const TrainHyper &h) {
  std::vector<std::vector<int>> seqs;
  std::vector<std::vector<bool>> masks;
  seqs.reserve(pairs.size());
  masks.reserve(pairs.size());
  for (const auto &p: pairs) {
    seqs.push_back(p.stream());
    masks.push_back(p.loss_mask());
  }
  model::Params<T> grad(state.params.config());
  const model::LossResult lr = model::loss_and_grad(state.params, seqs, masks, &grad);
  StepResult r;
  r.tokens = lr.count;
  r.loss = lr.mean();
  if (!std::isfinite(r.loss) || lr.count == 0) {
    std::ostringstream os;
    os << "non-finite loss at step " << state.step << " (sum " << lr.sum << ", " << lr.count
       << " target tokens)";
    throw TrainError(os.str());
  }
  const T inv = static_cast<T>(1.0 / static_cast<double>(lr.count));
  for (T &g: grad.data())
    g *= inv;
  r.grad_norm = clip_gradient(grad.data(), h.clip_norm);
  if (!std::isfinite(r.grad_norm)) {
    std::ostringstream os;
    os << "non-finite gradient at step " << state.step;
    throw TrainError(os.str());
  }
  r.lr = h.lr_at(state.step);
  adam_update(state.params.data(), state.m.data(), state.v.data(), grad.data(), r.lr, h,
              state.step + 1);
  state.ema_loss = state.step == 0 ? r.loss : 0.98 * state.ema_loss + 0.02 * r.loss;
  state.last_loss = r.loss;
  ++state.step;
  return r;
}

template <class T>
std::vector<double> train(TrainState<T> &state, BatchSource &source, const TrainHyper &h,
                          const TrainCallbacks &cb) {
  std::vector<double> losses;
  while (state.step < h.total_steps) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto batch = source.batch(state.seed, state.step, h.batch_size);
    StepResult r;
    try {
      r = train_step(state, batch, h);
    } catch (const TrainError &) {
      if (!cb.snapshot_path.empty())
        model::save_checkpoint(cb.snapshot_path, state.to_checkpoint(cb.vocab));
      throw;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    losses.push_back(r.loss);
    if (cb.log) {
      nlohmann::ordered_json j;
      j["step"] = state.step;
      j["loss"] = r.loss;
      j["lr"] = r.lr;
      j["tokens_per_sec"] = secs > 0 ? r.tokens / secs : 0.0;
      j["grad_norm"] = r.grad_norm;
      *cb.log << j.dump() << '\n';
      cb.log->flush();
    }
    if (cb.on_step && !cb.on_step(state.step, r))
      break;
  }
  return losses;
}

#define METAMOL_TRAIN_INSTANTIATE(T)                                                          \
  template struct TrainState<T>;                                                             \
  template StepResult train_step<T>(TrainState<T> &, const std::vector<lang::TrainingPair> &, \
                                    const TrainHyper &);                                     \
  template std::vector<double> train<T>(TrainState<T> &, BatchSource &, const TrainHyper &,  \
                                        const TrainCallbacks &);

METAMOL_TRAIN_INSTANTIATE(float)
METAMOL_TRAIN_INSTANTIATE(double)

}  // namespace metamol::train
