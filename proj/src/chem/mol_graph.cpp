//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/chem/mol_graph.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "metamol/chem/rings.h"

namespace metamol::chem {

MolGraph::MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  const int n = atom_count();
  std::vector<std::pair<int, int>> seen;
  seen.reserve(bonds_.size());
  for (const Bond &b: bonds_) {
    if (b.begin < 0 || b.end < 0 || b.begin >= n || b.end >= n)
      throw GraphError("bond endpoint out of range");
    if (b.begin == b.end)
      throw GraphError("bond joins an atom to itself");
    seen.emplace_back(std::minmax(b.begin, b.end));
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw GraphError("duplicate bond");

  build_adjacency();

  // Connected components by union-find.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  components_ = n;
  for (const Bond &b: bonds_) {
    int ra = find(b.begin), rb = find(b.end);
    if (ra != rb) {
      parent[ra] = rb;
      --components_;
    }
  }

  rings_ = internal::sssr(n, bonds_, adjacency_, offsets_, components_);
  atom_ring_count_.assign(n, 0);
  for (Bond &b: bonds_)
    b.in_ring = false;
  for (const Ring &ring: rings_) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      ++atom_ring_count_[ring[i]];
      int bi = find_bond(ring[i], ring[(i + 1) % ring.size()]);
      bonds_[bi].in_ring = true;
    }
  }
}

void MolGraph::build_adjacency() {
  const int n = atom_count();
  std::vector<int> counts(n, 0);
  for (const Bond &b: bonds_) {
    ++counts[b.begin];
    ++counts[b.end];
  }
  offsets_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    offsets_[i + 1] = offsets_[i] + counts[i];
  adjacency_.assign(offsets_[n], Neighbor {0, 0});
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int bi = 0; bi < bond_count(); ++bi) {
    const Bond &b = bonds_[bi];
    adjacency_[fill[b.begin]++] = { b.end, bi };
    adjacency_[fill[b.end]++] = { b.begin, bi };
  }
  for (int i = 0; i < n; ++i) {
    int heavy = 0;
    for (const Neighbor &nb: neighbors(i))
      heavy += atoms_[nb.atom].atomic_number != 1 ? 1 : 0;
    atoms_[i].degree = heavy;
  }
}

int MolGraph::find_bond(int a, int b) const {
  for (const Neighbor &nb: neighbors(a)) {
    if (nb.atom == b)
      return nb.bond;
  }
  return -1;
}

bool MolGraph::atom_in_ring_of_size(int idx, int size) const {
  if (atom_ring_count_[idx] == 0)
    return false;
  return std::any_of(rings_.begin(), rings_.end(), [&](const Ring &r) {
    return static_cast<int>(r.size()) == size
           && std::find(r.begin(), r.end(), idx) != r.end();
  });
}

int MolGraph::bond_order_sum(int idx) const {
  int sum = 0;
  for (const Neighbor &nb: neighbors(idx))
    sum += integer_order(bonds_[nb.bond].order);
  return sum;
}

bool MolGraph::has_bond_of_order(int idx, BondOrder order) const {
  return std::any_of(neighbors(idx).begin(), neighbors(idx).end(),
                     [&](const Neighbor &nb) {
                       return bonds_[nb.bond].order == order;
                     });
}

MolGraph MolGraph::renumbered(std::span<const int> order) const {
  std::vector<int> new_index(atoms_.size());
  std::vector<Atom> atoms;
  atoms.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    new_index[order[i]] = static_cast<int>(i);
    atoms.push_back(atoms_[order[i]]);
  }
  std::vector<Bond> bonds;
  bonds.reserve(bonds_.size());
  for (const Bond &b: bonds_)
    bonds.push_back({ new_index[b.begin], new_index[b.end], b.order, false });
  std::sort(bonds.begin(), bonds.end(), [](const Bond &x, const Bond &y) {
    return std::minmax(x.begin, x.end) < std::minmax(y.begin, y.end);
  });
  return MolGraph(std::move(atoms), std::move(bonds));
}

}  // namespace metamol::chem
