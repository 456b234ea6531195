//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/chem/aromaticity.h"

#include <algorithm>
#include <numeric>
#include <set>

namespace metamol::chem {
namespace {

bool huckel(int pi) {
  return pi >= 2 && (pi - 2) % 4 == 0;
}

// Atom double-bonded outside the aromatic system, if any.
int exocyclic_double_partner(const MolGraph &g, int atom) {
  for (const Neighbor &nb: g.neighbors(atom)) {
    if (g.bond(nb.bond).order == BondOrder::kDouble)
      return nb.atom;
  }
  return -1;
}

bool ring_is_aromatic_candidate(const MolGraph &g, const Ring &ring) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (!g.atom(ring[i]).aromatic)
      return false;
    int bi = g.find_bond(ring[i], ring[(i + 1) % ring.size()]);
    if (g.bond(bi).order != BondOrder::kAromatic)
      return false;
  }
  return true;
}

bool rings_share_bond(const Ring &a, const Ring &b) {
  int shared = 0;
  for (int x: a)
    shared += std::find(b.begin(), b.end(), x) != b.end() ? 1 : 0;
  return shared >= 2;
}

std::optional<int> pi_sum(const MolGraph &g, const std::set<int> &atoms) {
  int total = 0;
  for (int a: atoms) {
    std::optional<int> pi = pi_electrons(g, a);
    if (!pi)
      return std::nullopt;
    total += *pi;
  }
  return total;
}

}  // namespace

std::optional<int> pi_electrons(const MolGraph &g, int idx) {
  const Atom &a = g.atom(idx);
  const int partner = exocyclic_double_partner(g, idx);
  const int connections = a.degree + a.total_h();
  switch (a.atomic_number) {
  case 6:
    if (partner >= 0)
      return g.atom(partner).atomic_number == 6 ? 1 : 0;
    if (a.formal_charge == 0)
      return 1;
    return a.formal_charge < 0 ? 2 : 0;
  case 7:
  case 15:
  case 33:
    if (partner >= 0)
      return 1;
    if (a.formal_charge > 0)
      return 1;
    if (a.formal_charge < 0)
      return 2;
    return connections >= 3 ? 2 : 1;
  case 8:
  case 16:
  case 34:
    if (partner >= 0)
      return std::nullopt;
    return a.formal_charge > 0 ? 1 : 2;
  case 5:
    return a.formal_charge < 0 ? 1 : 0;
  default:
    return std::nullopt;
  }
}

std::optional<int> find_invalid_aromatic_atom(const MolGraph &g) {
  std::vector<const Ring *> candidates;
  for (const Ring &r: g.rings()) {
    if (ring_is_aromatic_candidate(g, r))
      candidates.push_back(&r);
  }
  std::vector<bool> ok(g.atom_count(), false);
  auto accept = [&](const std::set<int> &atoms) {
    std::optional<int> pi = pi_sum(g, atoms);
    if (pi && huckel(*pi)) {
      for (int a: atoms)
        ok[a] = true;
    }
  };

  const std::size_t nc = candidates.size();
  for (const Ring *r: candidates)
    accept(std::set<int>(r->begin(), r->end()));
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = i + 1; j < nc; ++j) {
      if (!rings_share_bond(*candidates[i], *candidates[j]))
        continue;
      std::set<int> u(candidates[i]->begin(), candidates[i]->end());
      u.insert(candidates[j]->begin(), candidates[j]->end());
      accept(u);
    }
  }
  // Whole fused systems.
  std::vector<int> group(nc);
  std::iota(group.begin(), group.end(), 0);
  auto find = [&](int x) {
    while (group[x] != x)
      x = group[x] = group[group[x]];
    return x;
  };
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = i + 1; j < nc; ++j) {
      if (rings_share_bond(*candidates[i], *candidates[j]))
        group[find(static_cast<int>(i))] = find(static_cast<int>(j));
    }
  }
  for (std::size_t root = 0; root < nc; ++root) {
    std::set<int> u;
    for (std::size_t i = 0; i < nc; ++i) {
      if (find(static_cast<int>(i)) == static_cast<int>(root))
        u.insert(candidates[i]->begin(), candidates[i]->end());
    }
    if (!u.empty())
      accept(u);
  }

  for (int i = 0; i < g.atom_count(); ++i) {
    if (g.atom(i).aromatic && !ok[i])
      return i;
  }
  return std::nullopt;
}

MolGraph aromatize_kekule_rings(const MolGraph &g) {
  std::vector<Atom> atoms = g.atoms();
  std::vector<Bond> bonds = g.bonds();
  auto ring_bond = [&](const Ring &r, std::size_t i) {
    return g.find_bond(r[i], r[(i + 1) % r.size()]);
  };

  bool changed_any = false;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Ring &ring: g.rings()) {
      const std::size_t n = ring.size();
      bool all_aromatic = true;
      for (std::size_t i = 0; i < n; ++i)
        all_aromatic = all_aromatic && bonds[ring_bond(ring, i)].order == BondOrder::kAromatic;
      if (all_aromatic)
        continue;

      int pi = 0;
      bool viable = true;
      for (std::size_t i = 0; i < n && viable; ++i) {
        const int v = ring[i];
        const Atom &a = atoms[v];
        const Bond &in = bonds[ring_bond(ring, (i + n - 1) % n)];
        const Bond &out = bonds[ring_bond(ring, i)];
        if (!a.elem().aromatic_capable || in.order == BondOrder::kTriple
            || out.order == BondOrder::kTriple) {
          viable = false;
          break;
        }
        if (in.order == BondOrder::kDouble || out.order == BondOrder::kDouble) {
          pi += 1;
          continue;
        }
        if (in.order == BondOrder::kAromatic || out.order == BondOrder::kAromatic) {
          pi += 1;
          continue;
        }
        int exo = -1;
        bool exo_in_ring = false;
        for (const Neighbor &nb: g.neighbors(v)) {
          if (bonds[nb.bond].order == BondOrder::kDouble) {
            exo = nb.atom;
            exo_in_ring = bonds[nb.bond].in_ring;
          }
        }
        const int z = a.atomic_number;
        if (exo >= 0 && exo_in_ring) {
          // double bond belonging to a neighbouring ring
          pi += 1;
        } else if (exo >= 0) {
          const int ez = atoms[exo].atomic_number;
          if (z == 6 && (ez == 7 || ez == 8 || ez == 16)) {
            // exocyclic carbonyl-like carbon donates nothing
          } else {
            viable = false;
          }
        } else if ((z == 7 || z == 15) && a.formal_charge == 0
                   && a.degree + a.total_h() == 3) {
          pi += 2;
        } else if ((z == 8 || z == 16 || z == 34) && a.formal_charge == 0) {
          pi += 2;
        } else if (z == 6 && a.formal_charge == -1) {
          pi += 2;
        } else {
          viable = false;
        }
      }
      if (!viable || !huckel(pi))
        continue;
      for (std::size_t i = 0; i < n; ++i) {
        atoms[ring[i]].aromatic = true;
        bonds[ring_bond(ring, i)].order = BondOrder::kAromatic;
      }
      changed = true;
      changed_any = true;
    }
  }
  if (!changed_any)
    return g;
  return MolGraph(std::move(atoms), std::move(bonds));
}

}  // namespace metamol::chem
