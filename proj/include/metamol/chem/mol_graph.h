//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include "metamol/chem/element.h"

namespace metamol::chem {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Integer electron-pair count used for valence bookkeeping; aromatic bonds
// count as one here and the extra pi electron is handled per atom.
constexpr int integer_order(BondOrder order) {
  return order == BondOrder::kAromatic ? 1 : static_cast<int>(order);
}

struct Atom {
  int atomic_number = 6;
  bool aromatic = false;
  int formal_charge = 0;
  std::optional<int> isotope;
  // Hydrogen count written inside a bracket atom.
  std::optional<int> explicit_h;
  bool bracket = false;
  // Filled by MolGraph.
  int degree = 0;
  // Derived from the valence table for organic-subset atoms.
  int implicit_h = 0;

  int total_h() const { return explicit_h.value_or(0) + implicit_h; }
  const Element &elem() const { return element(atomic_number); }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  // Filled by ring perception.
  bool in_ring = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

using Ring = std::vector<int>;

class GraphError: public std::exception {
public:
  explicit GraphError(const char *what): what_(what) { }
  const char *what() const noexcept override { return what_; }

private:
  const char *what_;
};

// Hydrogen-suppressed molecular graph. Atom order is the order in which the
// atoms were written, which downstream sequence codecs rely on. Instances
// are immutable once constructed.
class MolGraph {
public:
  MolGraph() = default;

  // Validates the edge list, builds adjacency, degrees and the SSSR.
  // Throws GraphError on self loops, duplicate edges or bad indices.
  MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  const Atom &atom(int idx) const { return atoms_[idx]; }
  const Bond &bond(int idx) const { return bonds_[idx]; }
  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }

  std::span<const Neighbor> neighbors(int idx) const {
    return { adjacency_.data() + offsets_[idx],
             adjacency_.data() + offsets_[idx + 1] };
  }

  // Index of the bond joining a and b, or -1.
  int find_bond(int a, int b) const;

  // Smallest set of smallest rings, each as an ordered atom cycle.
  const std::vector<Ring> &rings() const { return rings_; }
  bool atom_in_ring(int idx) const { return atom_ring_count_[idx] > 0; }
  bool atom_in_ring_of_size(int idx, int size) const;
  int component_count() const { return components_; }

  // Sum of integer bond orders around an atom (aromatic bonds count 1).
  int bond_order_sum(int idx) const;
  bool has_bond_of_order(int idx, BondOrder order) const;

  // Graph with atom i of the result equal to atom order[i] of this graph.
  MolGraph renumbered(std::span<const int> order) const;

private:
  void build_adjacency();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<Neighbor> adjacency_;
  std::vector<int> offsets_ { 0 };
  std::vector<Ring> rings_;
  std::vector<int> atom_ring_count_;
  int components_ = 0;
};

}  // namespace metamol::chem
