//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/lang/vocab.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "metamol/chem/smiles.h"
#include "metamol/desc/descriptors.h"
#include "metamol/fp/fingerprint.h"
#include "metamol/lang/task.h"

namespace metamol::lang {

const char *const kSpecialTokens[kFirstTaskTag] = {
  "[PAD]", "[BOS]", "[EOS]", "[SEP]", "[MASK]", "[VALUE]", "[SPAN]",
};

namespace {

const char *const kBaseSmiles[] = {
  "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I", "b", "c", "n", "o", "p", "s",
  "(", ")", "=", "#", "-", ":", "/", "\\", ".",
  "1", "2", "3", "4", "5", "6", "7", "8", "9",
  "[nH]", "[NH+]", "[NH2+]", "[NH3+]", "[N+]", "[n+]", "[nH+]", "[O-]", "[N-]", "[S+]",
};

const char *const kNumeric[] = {
  "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", ".", "-", "e",
};

}  // namespace

Vocab::Vocab(std::vector<std::string> tokens): tokens_(std::move(tokens)) {
  if (static_cast<int>(tokens_.size()) < kFirstTaskTag + kTaskCount)
    throw VocabError("vocabulary too small");
  for (int i = 0; i < kFirstTaskTag; ++i) {
    if (tokens_[i] != kSpecialTokens[i])
      throw VocabError("special token " + std::string(kSpecialTokens[i]) + " out of place");
  }
  for (int t = 0; t < kTaskCount; ++t) {
    if (tokens_[kFirstTaskTag + t] != TaskSpec::from_index(t).tag())
      throw VocabError("task tag out of place at id " + std::to_string(kFirstTaskTag + t));
  }
  for (int i = 0; i < size(); ++i) {
    if (tokens_[i].empty())
      throw VocabError("empty token at id " + std::to_string(i));
    if (!index_.emplace(tokens_[i], i).second)
      throw VocabError("duplicate token " + tokens_[i]);
  }
}

Vocab Vocab::build(const std::vector<std::string> &extra_smiles_tokens) {
  std::vector<std::string> tokens;
  std::set<std::string> seen;
  auto add = [&](const std::string &t) {
    if (seen.insert(t).second)
      tokens.push_back(t);
  };
  for (const char *s: kSpecialTokens)
    add(s);
  for (const TaskSpec &spec: all_tasks())
    add(spec.tag());
  add(std::string(kFieldSeparator));
  for (const char *s: kBaseSmiles)
    add(s);
  std::vector<std::string> extra = extra_smiles_tokens;
  std::sort(extra.begin(), extra.end());
  for (const std::string &s: extra)
    add(s);
  for (const desc::RegistryEntry &e: desc::PropertyRegistry::instance().entries())
    add(std::string(e.name));
  for (auto k: { fp::FingerprintKind::kECFP, fp::FingerprintKind::kFCFP, fp::FingerprintKind::kPath })
    add(fp::to_string(k));
  for (const char *s: kNumeric)
    add(s);
  return Vocab(std::move(tokens));
}

Vocab Vocab::from_smiles(const std::vector<std::string> &smiles) {
  std::set<std::string> extra;
  for (const std::string &s: smiles) {
    try {
      for (const chem::SmilesToken &t: chem::lex_smiles(s))
        extra.emplace(t.text);
    } catch (const chem::SmilesError &) {
    }
  }
  return build({ extra.begin(), extra.end() });
}

Vocab Vocab::load(std::istream &in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (!line.empty())
      tokens.push_back(line);
  }
  return Vocab(std::move(tokens));
}

Vocab Vocab::load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw VocabError("cannot open vocabulary " + path);
  return load(in);
}

void Vocab::save(std::ostream &out) const {
  for (const std::string &t: tokens_)
    out << t << '\n';
}

const std::string &Vocab::token(int id) const {
  if (id < 0 || id >= size())
    throw VocabError("token id out of range: " + std::to_string(id));
  return tokens_[id];
}

std::optional<int> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

int Vocab::id(std::string_view token) const {
  if (auto found = find(token))
    return *found;
  throw VocabError("token not in vocabulary: " + std::string(token));
}

std::vector<int> Vocab::encode(const std::vector<std::string> &tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const std::string &t: tokens)
    out.push_back(id(t));
  return out;
}

std::vector<std::string> Vocab::decode(const std::vector<int> &ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int id: ids)
    out.push_back(token(id));
  return out;
}

}  // namespace metamol::lang
