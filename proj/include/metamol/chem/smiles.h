//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metamol/chem/mol_graph.h"

namespace metamol::chem {

/// Failure categories reported by the SMILES reader. Each error carries the
/// byte offset of the offending token so command-line tools can point at it.
enum class SmilesErrorKind {
  kEmpty,
  kDanglingBracket,
  kSyntax,
  kUnclosedRing,
  kUnmatchedParenthesis,
  kUnknownElement,
  kValenceOverflow,
  kAromaticity,
  kMultipleComponents,
};

const char *to_string(SmilesErrorKind kind);

class SmilesError: public std::runtime_error {
public:
  SmilesError(SmilesErrorKind kind, std::size_t offset, const std::string &msg);

  SmilesErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

private:
  SmilesErrorKind kind_;
  std::size_t offset_;
};

enum class SmilesTokenKind {
  kAtom,
  kBracketAtom,
  kBond,
  kBranchOpen,
  kBranchClose,
  kRingBond,
  kDot,
  kOther,
};

struct SmilesToken {
  std::string_view text;
  std::size_t offset;
  SmilesTokenKind kind;
};

/// Splits a SMILES string into lexical tokens. Two-letter organic atoms (Cl,
/// Br), whole bracket atoms and %nn ring closures are single tokens; every
/// other byte is its own token. Concatenating the token texts reproduces the
/// input exactly. Throws SmilesError on an unterminated bracket.
std::vector<SmilesToken> lex_smiles(std::string_view text);
std::vector<std::string> tokenize_smiles(std::string_view text);

/// Parses a single-component SMILES string. Stereo marks are read and
/// dropped; lower-case atoms must form rings that pass the Hueckel check;
/// Kekule rings that satisfy it are converted to aromatic form.
MolGraph parse_smiles(std::string_view text);

/// Non-throwing variant used where malformed input is expected.
std::optional<MolGraph> try_parse_smiles(std::string_view text,
                                         SmilesError *error = nullptr);

/// Writes a SMILES string by depth-first traversal starting from the atom
/// with the smallest refinement class. Re-parsing the result yields a graph
/// with the same canonical key.
std::string write_smiles(const MolGraph &g);

/// Hydrogen count an unbracketed atom would receive, or nullopt when the
/// bond-order sum exceeds every allowed valence of the element.
std::optional<int> organic_implicit_h(const Atom &atom, int bond_order_sum,
                                      bool has_double_bond);

}  // namespace metamol::chem
