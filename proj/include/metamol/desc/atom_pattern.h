//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metamol/chem/mol_graph.h"

namespace metamol::desc {

class PatternError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Molecule with hydrogens promoted to real atoms, as needed by atom typing
/// rules that type hydrogens separately. Heavy atoms keep their indices.
struct ExplicitHGraph {
  struct Node {
    int atomic_number;
    bool aromatic;
    int formal_charge;
    int h_count;
    int connections;
  };
  struct Edge {
    int atom;
    chem::BondOrder order;
  };

  std::vector<Node> nodes;
  std::vector<std::vector<Edge>> adjacency;
  int heavy_count = 0;

  static ExplicitHGraph from(const chem::MolGraph &g);
};

/// Tree-shaped atom pattern in a small subset of SMARTS: bracket atoms with
/// #n, element symbols (upper case aliphatic, lower case aromatic), a, A,
/// Hn, Xn, Dn and charges, combined with !, &, implicit and, ',' and ';';
/// bare organic symbols; bonds - = # : ~ with the default meaning single or
/// aromatic; branches in parentheses. Ring closures are not supported.
class AtomPattern {
public:
  explicit AtomPattern(std::string_view text);
  ~AtomPattern();
  AtomPattern(AtomPattern &&) noexcept;
  AtomPattern &operator=(AtomPattern &&) noexcept;

  // True if the pattern matches with its first atom mapped to `root`.
  bool matches_at(const ExplicitHGraph &g, int root) const;

  const std::string &text() const { return text_; }

private:
  struct Impl;
  std::string text_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace metamol::desc
