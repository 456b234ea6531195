//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/train/generate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "metamol/model/transformer.h"

namespace metamol::train {

DecodeMode parse_decode_mode(std::string_view name) {
  if (name == "greedy")
    return DecodeMode::kGreedy;
  if (name == "top-k" || name == "topk")
    return DecodeMode::kTopK;
  if (name == "temperature")
    return DecodeMode::kTemperature;
  throw std::invalid_argument("unknown decoding mode '" + std::string(name) + "'");
}

const char *to_string(DecodeMode mode) {
  switch (mode) {
  case DecodeMode::kGreedy:
    return "greedy";
  case DecodeMode::kTopK:
    return "top-k";
  case DecodeMode::kTemperature:
    return "temperature";
  }
  return "?";
}

template <class T>
void penalize(model::RowVec<T> &logits, const std::vector<int> &generated, double penalty) {
  if (penalty == 1.0)
    return;
  std::vector<bool> seen(logits.size(), false);
  for (int t: generated) {
    if (t < 0 || t >= logits.size() || seen[t])
      continue;
    seen[t] = true;
    T &x = logits[t];
    x = x > 0 ? static_cast<T>(x / penalty) : static_cast<T>(x * penalty);
  }
}

template <class T>
std::vector<double> next_token_distribution(const model::RowVec<T> &raw,
                                            const std::vector<int> &generated,
                                            const DecodeParams &dp) {
  model::RowVec<T> logits = raw;
  penalize(logits, generated, dp.repetition_penalty);
  const int v = static_cast<int>(logits.size());
  std::vector<double> p(v, 0.0);
  if (dp.mode == DecodeMode::kGreedy) {
    Eigen::Index best = 0;
    logits.maxCoeff(&best);
    p[best] = 1.0;
    return p;
  }
  if (!(dp.temperature > 0))
    throw std::invalid_argument("temperature must be positive");
  std::vector<int> keep(v);
  std::iota(keep.begin(), keep.end(), 0);
  if (dp.mode == DecodeMode::kTopK) {
    if (dp.top_k <= 0)
      throw std::invalid_argument("top-k must be positive");
    const int k = std::min(dp.top_k, v);
    // Ties broken by lower id so the kept set is deterministic.
    std::partial_sort(keep.begin(), keep.begin() + k, keep.end(), [&](int a, int b) {
      return logits[a] > logits[b] || (logits[a] == logits[b] && a < b);
    });
    keep.resize(k);
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (int i: keep)
    mx = std::max(mx, static_cast<double>(logits[i]) / dp.temperature);
  double z = 0;
  for (int i: keep) {
    p[i] = std::exp(static_cast<double>(logits[i]) / dp.temperature - mx);
    z += p[i];
  }
  for (double &x: p)
    x /= z;
  return p;
}

namespace {

int draw(const std::vector<double> &p, Rng &rng) {
  const double u = uniform01(rng);
  double c = 0;
  int last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0)
      continue;
    c += p[i];
    last = static_cast<int>(i);
    if (u < c)
      return last;
  }
  return last;
}

}  // namespace

template <class T>
Generation generate(const model::Params<T> &params, const std::vector<int> &prefix,
                    const DecodeParams &dp, Rng &rng) {
  if (prefix.empty())
    throw std::invalid_argument("empty prefix");
  const int max_len = params.config().max_len;
  if (static_cast<int>(prefix.size()) > max_len)
    throw std::invalid_argument("prefix longer than the context");
  model::IncrementalDecoder<T> dec(params);
  model::RowVec<T> logits;
  for (int t: prefix)
    logits = dec.step(t);
  Generation g;
  while (true) {
    if (static_cast<int>(g.tokens.size()) >= dp.max_new_tokens || dec.position() >= max_len) {
      g.truncated = true;
      break;
    }
    const auto p = next_token_distribution(logits, g.tokens, dp);
    const int next = dp.mode == DecodeMode::kGreedy
                         ? static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin())
                         : draw(p, rng);
    if (next == dp.eos_id) {
      g.hit_eos = true;
      break;
    }
    g.tokens.push_back(next);
    if (dec.position() >= max_len) {
      g.truncated = true;
      break;
    }
    logits = dec.step(next);
  }
  return g;
}

template <class T>
model::Mat<T> embed_sequence(const model::Params<T> &params, const std::vector<int> &tokens) {
  model::ForwardPass<T> fp(params, { tokens });
  return fp.hidden();
}

#define METAMOL_GEN_INSTANTIATE(T)                                                          \
  template void penalize<T>(model::RowVec<T> &, const std::vector<int> &, double);          \
  template std::vector<double> next_token_distribution<T>(                                  \
      const model::RowVec<T> &, const std::vector<int> &, const DecodeParams &);           \
  template Generation generate<T>(const model::Params<T> &, const std::vector<int> &,       \
                                  const DecodeParams &, Rng &);                             \
  template model::Mat<T> embed_sequence<T>(const model::Params<T> &, const std::vector<int> &);

METAMOL_GEN_INSTANTIATE(float)
METAMOL_GEN_INSTANTIATE(double)

}  // namespace metamol::train
