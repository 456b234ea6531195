//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metamol/desc/descriptors.h"
#include "metamol/lang/task.h"
#include "metamol/lang/vocab.h"
#include "metamol/util/random.h"

namespace metamol::lang {

class NoiseError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Triple {
  std::string predicate;
  std::vector<std::string> value;
};

struct TokenSpan {
  int begin;
  int end;

  int size() const { return end - begin; }
};

/// tag, s_1..s_l, SEP, p_1, v_1.., ..., p_k, v_k.., EOS
struct MetaSequence {
  std::vector<int> tokens;
  int sep = 0;
  // predicates[i] is one token; values[i] follows it.
  std::vector<TokenSpan> predicates;
  std::vector<TokenSpan> values;

  TokenSpan subject() const { return { 1, sep }; }
  TokenSpan object() const { return { sep + 1, static_cast<int>(tokens.size()) - 1 }; }
  int tag() const { return tokens.front(); }
};

/// Source and target of one denoising example. The model sees
/// source ‖ target ‖ EOS and is scored on the target part.
struct TrainingPair {
  int tag = 0;
  std::vector<int> source;
  std::vector<int> target;

  std::vector<int> stream() const;
  // True where the token at that position is scored.
  std::vector<bool> loss_mask() const;
  bool operator==(const TrainingPair &) const = default;
};

/// Throws VocabError when a token or predicate is missing.
MetaSequence build_meta_sequence(const Vocab &vocab, const std::vector<std::string> &smiles_tokens,
                                 const std::vector<Triple> &triples, int tag_id);
MetaSequence build_meta_sequence(const Vocab &vocab, std::string_view smiles,
                                 const std::vector<desc::PropertyValue> &properties,
                                 std::string_view tag);

/// Masks each region token with probability `rate` (at least one). The
/// object region is the value tokens only.
TrainingPair apply_token_noise(const MetaSequence &seq, double rate, Direction region, Rng &rng);

/// Subject: the SMILES collapses to one SPAN. Object: each value becomes
/// VALUE and the target lists the values separated by SEP.
TrainingPair apply_sequence_noise(const MetaSequence &seq, Direction region);

/// Shuffles the region and asks for the original order back. Subject units
/// are single tokens; object units are predicates and whole values. The
/// shuffle is never the identity unless every ordering is the same.
TrainingPair apply_order_noise(const MetaSequence &seq, Direction region, Rng &rng);

/// Undoes a noise operator: the token list of the original MetaSequence.
/// Throws NoiseError when the pair does not fit the spec's layout.
std::vector<int> restore_sequence(const TrainingPair &pair, const TaskSpec &spec);

TrainingPair apply_noise(const MetaSequence &seq, const TaskSpec &spec, double mask_rate,
                         Rng &rng);

}  // namespace metamol::lang
