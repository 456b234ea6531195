//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/train/trainer.h"

#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "metamol/model/transformer.h"
#include "train_fixture.h"

namespace metamol::train {
namespace {

using testing::SmallCorpus;

const SmallCorpus &corpus32() {
  static const SmallCorpus c(32);
  return c;
}

TEST(Schedule, WarmupThenConstant) {
  TrainHyper h;
  h.lr = 1e-3;
  h.total_steps = 1000;
  EXPECT_EQ(h.warmup(), 10);
  EXPECT_DOUBLE_EQ(h.lr_at(0), 1e-4);
  EXPECT_DOUBLE_EQ(h.lr_at(4), 5e-4);
  EXPECT_DOUBLE_EQ(h.lr_at(9), 1e-3);
  EXPECT_DOUBLE_EQ(h.lr_at(500), 1e-3);
  h.total_steps = 50;
  EXPECT_EQ(h.warmup(), 1);
  EXPECT_DOUBLE_EQ(h.lr_at(0), 1e-3);
  h.warmup_steps = 0;
  EXPECT_DOUBLE_EQ(h.lr_at(0), 1e-3);
}

TEST(Adam, FirstStepMovesBySignedLearningRate) {
  // After one step the bias-corrected moments are g and g^2.
  TrainHyper h;
  std::vector<double> p { 1.0, -2.0, 0.5 }, m(3, 0.0), v(3, 0.0);
  const std::vector<double> g { 0.3, -4.0, 0.0 };
  adam_update(p, m, v, g, 0.01, h, 1);
  EXPECT_NEAR(p[0], 1.0 - 0.01 * 0.3 / (0.3 + 1e-8), 1e-15);
  EXPECT_NEAR(p[1], -2.0 + 0.01 * 4.0 / (4.0 + 1e-8), 1e-15);
  EXPECT_EQ(p[2], 0.5);
  EXPECT_NEAR(m[0], 0.1 * 0.3, 1e-15);
  EXPECT_NEAR(v[1], 0.001 * 16.0, 1e-15);
}

TEST(Adam, SecondStepMatchesHandComputation) {
  TrainHyper h;
  std::vector<double> p { 0.0 }, m { 0.0 }, v { 0.0 };
  adam_update(p, m, v, std::vector<double> { 1.0 }, 0.1, h, 1);
  adam_update(p, m, v, std::vector<double> { -1.0 }, 0.1, h, 2);
  const double m2 = 0.9 * 0.1 - 0.1, v2 = 0.999 * 0.001 + 0.001;
  const double mh = m2 / (1 - 0.81), vh = v2 / (1 - 0.999 * 0.999);
  EXPECT_NEAR(p[0], -0.1 / (1 + 1e-8) - 0.1 * mh / (std::sqrt(vh) + 1e-8), 1e-15);
}

TEST(Clip, ScalesToLimit) {
  std::vector<double> g { 3.0, 4.0 };
  EXPECT_DOUBLE_EQ(clip_gradient(g, 1.0), 5.0);
  EXPECT_NEAR(std::hypot(g[0], g[1]), 1.0, 1e-15);
  EXPECT_NEAR(g[0] / g[1], 0.75, 1e-15);
  std::vector<double> small { 0.3, 0.4 };
  clip_gradient(small, 1.0);
  EXPECT_EQ(small[0], 0.3);
}

TEST(Train, StepZeroLossNearUniform) {
  const auto &c = corpus32();
  auto state = TrainState<double>::init(c.tiny(), 3);
  TrainHyper h;
  const StepResult r = train_step(state, c.pairs(1), h);
  const double expected = std::log(static_cast<double>(c.vocab.size()));
  EXPECT_NEAR(r.loss, expected, 0.05 * expected);
  EXPECT_EQ(state.step, 1);
}

TEST(Train, MemorizesThirtyTwoPairs) {
  const auto &c = corpus32();
  const auto pairs = c.pairs(7);
  ASSERT_EQ(pairs.size(), 32U);
  PairListSource source(pairs);
  auto state = TrainState<float>::init(c.tiny(), 1);
  TrainHyper h;
  h.lr = 1e-2;
  h.total_steps = 2000;
  h.batch_size = 32;
  TrainCallbacks cb;
  cb.on_step = [](std::int64_t, const StepResult &r) { return r.loss >= 0.1; };
  const auto losses = train(state, source, h, cb);
  ASSERT_FALSE(losses.empty());
  EXPECT_LT(losses.back(), 0.1);
  EXPECT_LE(losses.size(), 2000U);
}

std::vector<double> run(const SmallCorpus &c, TrainState<double> &state, int steps) {
  MoleculeSource source(c.vocab, c.molecules, lang::TaskMix::uniform(false), {});
  TrainHyper h;
  h.total_steps = steps;
  h.batch_size = 4;
  h.lr = 3e-3;
  return train(state, source, h);
}

TEST(Train, DeterministicInDoublePrecision) {
  const auto &c = corpus32();
  auto a = TrainState<double>::init(c.tiny(), 11);
  auto b = TrainState<double>::init(c.tiny(), 11);
  const auto la = run(c, a, 8);
  const auto lb = run(c, b, 8);
  EXPECT_EQ(la, lb);
  EXPECT_EQ(a.params.data(), b.params.data());
}

TEST(Train, ResumeEqualsUninterrupted) {
  const auto &c = corpus32();
  auto whole = TrainState<double>::init(c.tiny(), 5);
  const auto reference = run(c, whole, 10);

  auto first = TrainState<double>::init(c.tiny(), 5);
  auto head = run(c, first, 5);
  std::stringstream buf;
  model::write_checkpoint(buf, first.to_checkpoint(c.vocab.tokens()));
  auto resumed = TrainState<double>::from_checkpoint(model::read_checkpoint(buf));
  EXPECT_EQ(resumed.step, 5);
  const auto tail = run(c, resumed, 10);
  head.insert(head.end(), tail.begin(), tail.end());
  EXPECT_EQ(head, reference);
  EXPECT_EQ(resumed.params.data(), whole.params.data());
  EXPECT_EQ(resumed.m.data(), whole.m.data());
  EXPECT_EQ(resumed.v.data(), whole.v.data());
}

TEST(Train, SmallStepDecreasesLossOnFixedBatch) {
  const auto &c = corpus32();
  const auto batch = c.pairs(2);
  std::vector<std::vector<int>> seqs;
  std::vector<std::vector<bool>> masks;
  for (const auto &p: batch) {
    seqs.push_back(p.stream());
    masks.push_back(p.loss_mask());
  }
  const auto start = TrainState<double>::init(c.tiny(), 9);
  const double before = model::loss_and_grad<double>(start.params, seqs, masks, nullptr).mean();
  int decreased = 0;
  for (double lr: { 1e-2, 1e-3, 1e-4 }) {
    auto s = start;
    TrainHyper h;
    h.lr = lr;
    h.warmup_steps = 0;
    train_step(s, batch, h);
    const double after = model::loss_and_grad<double>(s.params, seqs, masks, nullptr).mean();
    decreased += after < before ? 1 : 0;
  }
  EXPECT_GE(decreased, 1);
}

TEST(Train, NonFiniteLossAbortsWithSnapshot) {
  const auto &c = corpus32();
  auto state = TrainState<double>::init(c.tiny(), 1);
  state.params.data()[state.params.blocks().back().offset] = std::nan("");
  PairListSource source(c.pairs(1));
  TrainHyper h;
  h.total_steps = 3;
  const auto path = std::filesystem::temp_directory_path() / "metamol_abort_test.ckpt";
  std::filesystem::remove(path);
  TrainCallbacks cb;
  cb.snapshot_path = path.string();
  cb.vocab = c.vocab.tokens();
  try {
    train(state, source, h, cb);
    FAIL() << "expected TrainError";
  } catch (const TrainError &e) {
    EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos) << e.what();
  }
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
}

TEST(Train, LogLines) {
  const auto &c = corpus32();
  auto state = TrainState<float>::init(c.tiny(), 1);
  PairListSource source(c.pairs(1));
  TrainHyper h;
  h.total_steps = 2;
  h.batch_size = 4;
  std::ostringstream log;
  TrainCallbacks cb;
  cb.log = &log;
  train(state, source, h, cb);
  std::istringstream in(log.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    for (const char *key: { "\"step\"", "\"loss\"", "\"lr\"", "\"tokens_per_sec\"" })
      EXPECT_NE(line.find(key), std::string::npos) << line;
  }
  EXPECT_EQ(n, 2);
}

TEST(Sources, BatchesDependOnlyOnSeedAndStep) {
  const auto &c = corpus32();
  MoleculeSource a(c.vocab, c.molecules, lang::TaskMix::uniform(false), {});
  MoleculeSource b(c.vocab, c.molecules, lang::TaskMix::uniform(false), {});
  EXPECT_EQ(a.batch(1, 3, 5), b.batch(1, 3, 5));
  a.batch(1, 0, 5);
  EXPECT_EQ(a.batch(1, 3, 5), b.batch(1, 3, 5));
  EXPECT_NE(a.batch(1, 3, 5), a.batch(1, 4, 5));
  EXPECT_NE(a.batch(1, 3, 5), a.batch(2, 3, 5));

  PairListSource p(c.pairs(1));
  EXPECT_EQ(p.batch(1, 0, 64).size(), 32U);
  EXPECT_EQ(p.batch(1, 0, 8), p.batch(1, 0, 8));
  EXPECT_THROW(PairListSource({}), TrainError);
}

}  // namespace
}  // namespace metamol::train
