//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "metamol/lang/corpus.h"
#include "metamol/model/checkpoint.h"
#include "metamol/model/params.h"

namespace metamol::train {

class TrainError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct TrainHyper {
  double lr = 1e-3;
  // Linear warmup length; negative means 1% of total_steps (at least 1).
  int warmup_steps = -1;
  int total_steps = 1000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 1.0;
  int batch_size = 16;
  std::uint64_t seed = 1;

  int warmup() const;
  double lr_at(std::int64_t step) const;
};

// In-place Adam update with bias correction; `t` counts from 1.
void adam_update(std::span<float> params, std::span<float> m, std::span<float> v,
                 std::span<const float> grad, double lr, const TrainHyper &h, std::int64_t t);
void adam_update(std::span<double> params, std::span<double> m, std::span<double> v,
                 std::span<const double> grad, double lr, const TrainHyper &h, std::int64_t t);

// Scales grad so its L2 norm is at most max_norm; returns the norm before.
double clip_gradient(std::span<float> grad, double max_norm);
double clip_gradient(std::span<double> grad, double max_norm);

template <class T>
struct TrainState {
  model::Params<T> params;
  model::Params<T> m;
  model::Params<T> v;
  std::int64_t step = 0;
  std::uint64_t seed = 1;
  double ema_loss = 0;
  double last_loss = 0;

  // Fresh parameters from `seed`, zero moments.
  static TrainState init(const model::ModelConfig &config, std::uint64_t seed);

  model::Checkpoint to_checkpoint(const std::vector<std::string> &vocab) const;
  static TrainState from_checkpoint(const model::Checkpoint &c);
};

/// Batches are a pure function of (seed, step), which makes a resumed run
/// see exactly the data an uninterrupted one would.
class BatchSource {
public:
  virtual ~BatchSource() = default;
  virtual std::vector<lang::TrainingPair> batch(std::uint64_t seed, std::int64_t step,
                                                int size) = 0;
};

/// Fixed pairs. When size covers the list every pair is used in order,
/// otherwise pairs are drawn with replacement.
class PairListSource: public BatchSource {
public:
  explicit PairListSource(std::vector<lang::TrainingPair> pairs);
  std::vector<lang::TrainingPair> batch(std::uint64_t seed, std::int64_t step, int size) override;

private:
  std::vector<lang::TrainingPair> pairs_;
};

/// Samples molecules and tasks on the fly.
class MoleculeSource: public BatchSource {
public:
  MoleculeSource(const lang::Vocab &vocab, const std::vector<lang::Molecule> &molecules,
                 lang::TaskMix mix, lang::SampleOptions options);
  std::vector<lang::TrainingPair> batch(std::uint64_t seed, std::int64_t step, int size) override;

private:
  const lang::Vocab &vocab_;
  const std::vector<lang::Molecule> &molecules_;
  lang::TaskMix mix_;
  lang::SampleOptions options_;
};

struct StepResult {
  // Mean per target token.
  double loss = 0;
  double grad_norm = 0;
  double lr = 0;
  std::size_t tokens = 0;
};

/// One optimizer step on `pairs`: mean per-token loss, gradient clipping,
/// warmup schedule, Adam. Throws TrainError on a non-finite loss.
template <class T>
StepResult train_step(TrainState<T> &state, const std::vector<lang::TrainingPair> &pairs,
                      const TrainHyper &h);

struct TrainCallbacks {
  // JSON lines {step, loss, lr, tokens_per_sec, grad_norm}.
  std::ostream *log = nullptr;
  // Called after each step; return false to stop early.
  std::function<bool(std::int64_t step, const StepResult &)> on_step;
  // Where to write the state before a non-finite-loss abort.
  std::string snapshot_path;
  std::vector<std::string> vocab;
};

/// Runs until state.step == h.total_steps. Returns the per-step losses.
template <class T>
std::vector<double> train(TrainState<T> &state, BatchSource &source, const TrainHyper &h,
                          const TrainCallbacks &callbacks = {});

extern template struct TrainState<float>;
extern template struct TrainState<double>;

}  // namespace metamol::train
