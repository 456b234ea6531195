//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string_view>
#include <vector>

#include "metamol/model/params.h"
#include "metamol/util/random.h"

namespace metamol::train {

enum class DecodeMode { kGreedy, kTopK, kTemperature };

DecodeMode parse_decode_mode(std::string_view name);
const char *to_string(DecodeMode mode);

struct DecodeParams {
  DecodeMode mode = DecodeMode::kGreedy;
  int top_k = 10;
  // Also applied inside top-k.
  double temperature = 1.0;
  // Positive logits of already generated tokens are divided by this,
  // negative ones multiplied. 1 disables it.
  double repetition_penalty = 1.0;
  int max_new_tokens = 256;
  int eos_id = 2;
};

struct Generation {
  // Generated tokens only, EOS excluded.
  std::vector<int> tokens;
  bool hit_eos = false;
  // Stopped by max_new_tokens or the context limit.
  bool truncated = false;
};

// Applies the repetition penalty in place.
template <class T>
void penalize(model::RowVec<T> &logits, const std::vector<int> &generated, double penalty);

// Sampling distribution over the vocabulary for the next token (one-hot for
// greedy), after penalty, temperature and top-k filtering.
template <class T>
std::vector<double> next_token_distribution(const model::RowVec<T> &logits,
                                            const std::vector<int> &generated,
                                            const DecodeParams &dp);

// Continues `prefix` until EOS or a limit.
template <class T>
Generation generate(const model::Params<T> &params, const std::vector<int> &prefix,
                    const DecodeParams &dp, Rng &rng);

// Final hidden states, one row per token.
template <class T>
model::Mat<T> embed_sequence(const model::Params<T> &params, const std::vector<int> &tokens);

}  // namespace metamol::train
