//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/train/finetune.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "metamol/desc/descriptors.h"
#include "metamol/model/transformer.h"
#include "train_fixture.h"

namespace metamol::train {
namespace {

using testing::SmallCorpus;

TEST(Pooling, ConstantStatesGiveRepeatedVector) {
  model::RowVec<double> h(4);
  h << 0.5, -1.0, 2.0, 0.0;
  model::Mat<double> states(6, 4);
  for (int r = 0; r < 6; ++r)
    states.row(r) = h;
  const auto f = pool_features<double>(states, { 7, 8, 9, 10, 11, 12 });
  ASSERT_EQ(f.size(), 8);
  EXPECT_EQ(f.head(4), h);
  EXPECT_LT((f.tail(4) - h).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Pooling, MaxAndMeanOverNonPadRows) {
  model::Mat<double> s(3, 2);
  s << 1, -5, 3, -1, 100, 100;
  std::vector<int> argmax;
  const auto f = pool_features<double>(s, { 7, 8, lang::kPad }, &argmax);
  EXPECT_EQ(f[0], 3);
  EXPECT_EQ(f[1], -1);
  EXPECT_EQ(f[2], 2);
  EXPECT_EQ(f[3], -3);
  EXPECT_EQ(argmax, (std::vector<int> { 1, 1 }));
  EXPECT_THROW(pool_features<double>(s, { 0, 0, 0 }), std::invalid_argument);
  EXPECT_THROW(pool_features<double>(s, { 7, 8 }), std::invalid_argument);
}

TEST(Head, PaddingLeavesPredictionUnchanged) {
  const SmallCorpus c(4);
  const std::vector<RegressionExample> ex { { property_input(c.vocab, c.smiles[0]), 1.0 },
                                            { property_input(c.vocab, c.smiles[1]), 3.0 } };
  model::Params<double> backbone(c.tiny());
  backbone.init(2);
  const auto state = FineTuneState<double>::init(backbone, ex, 1);
  std::vector<int> padded = ex[0].tokens;
  padded.insert(padded.end(), 5, lang::kPad);
  EXPECT_NEAR(state.predict(padded), state.predict(ex[0].tokens), 1e-12);
  EXPECT_THROW(state.predict(std::vector<int>(4, lang::kPad)), std::invalid_argument);
  EXPECT_DOUBLE_EQ(state.head.y_mean, 2.0);
  EXPECT_DOUBLE_EQ(state.head.y_scale, 1.0);
}

TEST(Head, PropertyInputLayout) {
  const SmallCorpus c(2);
  const auto t = property_input(c.vocab, "CCO");
  ASSERT_EQ(t.size(), 6U);
  EXPECT_EQ(c.vocab.token(t[0]), "[GLM_prop_val]");
  EXPECT_EQ(c.vocab.token(t[1]), "C");
  EXPECT_EQ(c.vocab.token(t[3]), "O");
  EXPECT_EQ(t[4], lang::kSep);
  EXPECT_EQ(t[5], lang::kEos);
}

TEST(FineTune, FitsMolecularWeightOnSixtyFourMolecules) {
  const SmallCorpus c(64);
  std::vector<RegressionExample> ex;
  for (const auto &m: c.molecules)
    ex.push_back({ property_input(c.vocab, m.smiles), desc::mol_wt(m.graph) });
  model::Params<float> backbone(c.tiny());
  backbone.init(3);
  auto state = FineTuneState<float>::init(backbone, ex, 3);
  TrainHyper h;
  h.lr = 3e-3;
  h.total_steps = 400;
  double first = 0, last = 0;
  for (int s = 0; s < h.total_steps; ++s) {
    last = finetune_step(state, ex, h);
    if (s == 0)
      first = last;
  }
  EXPECT_LT(last, first);
  double mean = 0;
  for (const auto &e: ex)
    mean += e.y / ex.size();
  double ss_res = 0, ss_tot = 0;
  for (const auto &e: ex) {
    const double p = state.predict(e.tokens);
    ss_res += (p - e.y) * (p - e.y);
    ss_tot += (e.y - mean) * (e.y - mean);
  }
  EXPECT_GT(1 - ss_res / ss_tot, 0.9);

  std::stringstream buf;
  model::write_checkpoint(buf, state.to_checkpoint(c.vocab.tokens()));
  const auto back = FineTuneState<float>::from_checkpoint(model::read_checkpoint(buf));
  EXPECT_EQ(back.predict(ex[5].tokens), state.predict(ex[5].tokens));
  EXPECT_EQ(back.step, 400);
}

TEST(FineTune, CheckpointWithoutHeadIsRejected) {
  const SmallCorpus c(2);
  auto s = TrainState<float>::init(c.tiny(), 1);
  EXPECT_THROW(FineTuneState<float>::from_checkpoint(s.to_checkpoint(c.vocab.tokens())),
               model::CheckpointError);
}

}  // namespace
}  // namespace metamol::train
