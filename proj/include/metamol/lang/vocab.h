//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace metamol::lang {

class VocabError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Fixed ids of the special tokens; task tags follow at kFirstTaskTag.
enum SpecialId : int {
  kPad = 0,
  kBos,
  kEos,
  kSep,
  kMask,
  kValue,
  kSpan,
  kFirstTaskTag,
};

/// Token inventory: specials, the 18 task tags, SMILES tokens, property
/// names, fingerprint kinds and the numeric alphabet. Strings shared between
/// groups (ring-closure digits and value digits, say) map to one id.
class Vocab {
public:
  /// Built-in tokens plus every token in `extra_smiles_tokens` (sorted,
  /// deduplicated). Bracket atoms seen in a corpus go there.
  static Vocab build(const std::vector<std::string> &extra_smiles_tokens = {});

  /// Scans SMILES lines and builds a vocabulary covering all their tokens.
  /// Lines that fail to lex are ignored.
  static Vocab from_smiles(const std::vector<std::string> &smiles);

  /// One token per line.
  static Vocab load(std::istream &in);
  static Vocab load_file(const std::string &path);
  void save(std::ostream &out) const;

  explicit Vocab(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string &token(int id) const;
  std::optional<int> find(std::string_view token) const;
  /// Throws VocabError on a miss.
  int id(std::string_view token) const;

  std::vector<int> encode(const std::vector<std::string> &tokens) const;
  std::vector<std::string> decode(const std::vector<int> &ids) const;

  const std::vector<std::string> &tokens() const { return tokens_; }
  bool operator==(const Vocab &other) const { return tokens_ == other.tokens_; }

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Token strings of the specials, indexed by SpecialId.
extern const char *const kSpecialTokens[kFirstTaskTag];

// Separates the fields of one conformer record inside a value.
inline constexpr std::string_view kFieldSeparator = ",";

}  // namespace metamol::lang
