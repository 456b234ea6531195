//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "metamol/lang/corpus.h"
#include "metamol/model/config.h"
#include "test_util.h"

namespace metamol::train::testing {

// The first n sample molecules with a vocabulary derived from them.
struct SmallCorpus {
  std::vector<std::string> smiles;
  std::vector<lang::Molecule> molecules;
  lang::Vocab vocab;

  explicit SmallCorpus(std::size_t n): smiles(first(n)), vocab(lang::Vocab::from_smiles(smiles)) {
    for (const std::string &s: smiles)
      molecules.push_back(lang::make_molecule(s));
  }

  static std::vector<std::string> first(std::size_t n) {
    std::vector<std::string> all = test::sample_smiles();
    all.resize(std::min(n, all.size()));
    return all;
  }

  model::ModelConfig tiny() const {
    model::ModelConfig c = model::preset("tiny");
    c.vocab_size = vocab.size();
    return c;
  }

  // One pass of the uniform non-conformation mix.
  std::vector<lang::TrainingPair> pairs(std::uint64_t seed) const {
    lang::CorpusStream stream(vocab, molecules, lang::TaskMix::uniform(false), seed);
    std::vector<lang::TrainingPair> out;
    while (auto p = stream.next())
      out.push_back(*p);
    return out;
  }
};

}  // namespace metamol::train::testing
