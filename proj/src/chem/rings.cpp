//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/chem/rings.h"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>

namespace metamol::chem {
namespace internal {
namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  Ring cycle;
  std::vector<int> sorted_atoms;
  EdgeSet edges;
};

void set_bit(EdgeSet &s, int i) {
  s[i / 64] |= std::uint64_t {1} << (i % 64);
}

bool test_bit(const EdgeSet &s, int i) {
  return (s[i / 64] >> (i % 64)) & 1U;
}

int lowest_bit(const EdgeSet &s) {
  for (std::size_t w = 0; w < s.size(); ++w) {
    if (s[w] != 0)
      return static_cast<int>(w * 64 + __builtin_ctzll(s[w]));
  }
  return -1;
}

// Rotates a cycle to start at its smallest atom and to continue towards the
// smaller of that atom's two ring neighbors.
Ring normalize_cycle(Ring cycle) {
  auto it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), it, cycle.end());
  if (cycle.size() > 2 && cycle.back() < cycle[1])
    std::reverse(cycle.begin() + 1, cycle.end());
  return cycle;
}

}  // namespace

std::vector<Ring> sssr(int atom_count, const std::vector<Bond> &bonds,
                       const std::vector<Neighbor> &adjacency,
                       const std::vector<int> &offsets, int components) {
  const int n = atom_count;
  const int m = static_cast<int>(bonds.size());
  const int target = m - n + components;
  if (target <= 0)
    return {};

  const std::size_t words = (m + 63) / 64;
  auto nbrs = [&](int v) {
    return std::span<const Neighbor>(adjacency.data() + offsets[v],
                                     adjacency.data() + offsets[v + 1]);
  };

  // Horton candidate cycles: for every root and every non-tree edge, the
  // two tree paths from the root plus the edge, kept when the paths only
  // share the root.
  std::vector<Candidate> candidates;
  std::set<EdgeSet> unique_edges;
  std::vector<int> dist(n), parent(n), parent_bond(n);
  for (int root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[root] = 0;
    parent[root] = -1;
    parent_bond[root] = -1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Neighbor &nb: nbrs(v)) {
        if (dist[nb.atom] < 0) {
          dist[nb.atom] = dist[v] + 1;
          parent[nb.atom] = v;
          parent_bond[nb.atom] = nb.bond;
          q.push(nb.atom);
        }
      }
    }
    for (int bi = 0; bi < m; ++bi) {
      int x = bonds[bi].begin, y = bonds[bi].end;
      if (dist[x] < 0 || dist[y] < 0)
        continue;
      if (parent_bond[x] == bi || parent_bond[y] == bi)
        continue;
      std::vector<int> px, py;
      for (int v = x; v != -1; v = parent[v])
        px.push_back(v);
      for (int v = y; v != -1; v = parent[v])
        py.push_back(v);
      // Both end at root; they must not share any other atom.
      std::vector<int> sx(px.begin(), px.end() - 1), sy(py.begin(), py.end() - 1);
      std::sort(sx.begin(), sx.end());
      std::sort(sy.begin(), sy.end());
      std::vector<int> common;
      std::set_intersection(sx.begin(), sx.end(), sy.begin(), sy.end(),
                            std::back_inserter(common));
      if (!common.empty())
        continue;

      Candidate c;
      c.edges.assign(words, 0);
      set_bit(c.edges, bi);
      for (int v = x; parent[v] != -1; v = parent[v])
        set_bit(c.edges, parent_bond[v]);
      for (int v = y; parent[v] != -1; v = parent[v])
        set_bit(c.edges, parent_bond[v]);
      if (!unique_edges.insert(c.edges).second)
        continue;
      // px runs x..root, py runs y..root; the cycle is root..x, y..root.
      c.cycle.assign(px.rbegin(), px.rend());
      c.cycle.insert(c.cycle.end(), py.begin(), py.end() - 1);
      c.sorted_atoms = c.cycle;
      std::sort(c.sorted_atoms.begin(), c.sorted_atoms.end());
      candidates.push_back(std::move(c));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.cycle.size() != b.cycle.size())
                return a.cycle.size() < b.cycle.size();
              return a.sorted_atoms < b.sorted_atoms;
            });

  // Greedy selection of GF(2)-independent cycles.
  std::vector<EdgeSet> basis;
  std::vector<int> pivots;
  std::vector<Ring> rings;
  for (const Candidate &c: candidates) {
    EdgeSet v = c.edges;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (test_bit(v, pivots[i])) {
        for (std::size_t w = 0; w < words; ++w)
          v[w] ^= basis[i][w];
      }
    }
    int pivot = lowest_bit(v);
    if (pivot < 0)
      continue;
    // Keep the basis fully reduced on existing pivots.
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (test_bit(basis[i], pivot)) {
        for (std::size_t w = 0; w < words; ++w)
          basis[i][w] ^= v[w];
      }
    }
    basis.push_back(std::move(v));
    pivots.push_back(pivot);
    rings.push_back(normalize_cycle(c.cycle));
    if (static_cast<int>(rings.size()) == target)
      break;
  }
  return rings;
}

}  // namespace internal

std::vector<Ring> perceive_rings(const MolGraph &g) {
  std::vector<Neighbor> adjacency;
  std::vector<int> offsets { 0 };
  for (int i = 0; i < g.atom_count(); ++i) {
    for (const Neighbor &nb: g.neighbors(i))
      adjacency.push_back(nb);
    offsets.push_back(static_cast<int>(adjacency.size()));
  }
  return internal::sssr(g.atom_count(), g.bonds(), adjacency, offsets,
                        g.component_count());
}

}  // namespace metamol::chem
