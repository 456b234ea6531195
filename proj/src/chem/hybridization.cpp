//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/chem/hybridization.h"

#include <algorithm>

#include "metamol/chem/aromaticity.h"

namespace metamol::chem {
namespace {

int connections(const Atom &a) {
  return a.degree + a.total_h();
}

// Electrons the atom could put into a pi system; positive means it can take
// part in conjugation.
int donatable_electrons(const Atom &a) {
  const Element &el = a.elem();
  const int dv = el.default_valence;
  if (dv <= 1)
    return -1;
  const int deg = connections(a);
  if (deg > 3)
    return -1;
  const int lone = std::max(el.outer_electrons - dv - a.formal_charge, 0);
  return dv - deg + lone;
}

bool conjugation_candidate(const Atom &a) {
  const int z = a.atomic_number;
  const int nouter = a.elem().outer_electrons;
  const bool shape = z <= 10 || (nouter != 5 && nouter != 6)
                     || (nouter == 6 && a.degree < 2);
  return shape && donatable_electrons(a) > 0;
}

bool multiple(BondOrder o) {
  return o != BondOrder::kSingle;
}

}  // namespace

int total_valence(const MolGraph &g, int idx) {
  const Atom &a = g.atom(idx);
  int v = g.bond_order_sum(idx) + a.total_h();
  if (a.aromatic && !g.has_bond_of_order(idx, BondOrder::kDouble)) {
    std::optional<int> pi = pi_electrons(g, idx);
    if (pi && *pi == 1)
      v += 1;
  }
  return v;
}

std::vector<bool> conjugated_bonds(const MolGraph &g) {
  std::vector<bool> conj(g.bond_count(), false);
  for (int b = 0; b < g.bond_count(); ++b)
    conj[b] = g.bond(b).order == BondOrder::kAromatic;

  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom &a = g.atom(i);
    if (!conjugation_candidate(a))
      continue;
    const int sbo = connections(a);
    if (sbo < 2 || sbo > 3)
      continue;
    for (const Neighbor &n1: g.neighbors(i)) {
      if (!multiple(g.bond(n1.bond).order))
        continue;
      for (const Neighbor &n2: g.neighbors(i)) {
        if (n2.bond == n1.bond)
          continue;
        const Atom &b = g.atom(n2.atom);
        if (connections(b) > 3 || !conjugation_candidate(b))
          continue;
        conj[n1.bond] = true;
        conj[n2.bond] = true;
      }
    }
  }
  return conj;
}

std::vector<Hybridization> hybridize(const MolGraph &g) {
  const std::vector<bool> conj = conjugated_bonds(g);
  std::vector<Hybridization> out(g.atom_count(), Hybridization::kS);
  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom &a = g.atom(i);
    const int deg = connections(a);
    int norbs = deg;
    if (a.atomic_number > 1) {
      const int nouter = a.elem().outer_electrons;
      const int valence = total_valence(g, i);
      const int free = nouter - (valence + a.formal_charge);
      norbs = deg + free / 2;
    }
    bool touches_conj = false;
    for (const Neighbor &nb: g.neighbors(i))
      touches_conj = touches_conj || conj[nb.bond];
    switch (norbs) {
    case 0:
    case 1:
      out[i] = Hybridization::kS;
      break;
    case 2:
      out[i] = Hybridization::kSP;
      break;
    case 3:
      out[i] = Hybridization::kSP2;
      break;
    case 4:
      out[i] = deg < 4 && touches_conj ? Hybridization::kSP2 : Hybridization::kSP3;
      break;
    case 5:
      out[i] = Hybridization::kSP3D;
      break;
    default:
      out[i] = Hybridization::kSP3D2;
      break;
    }
  }
  return out;
}

}  // namespace metamol::chem
