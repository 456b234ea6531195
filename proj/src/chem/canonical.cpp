//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/chem/canonical.h"

#include <algorithm>
#include <cstdio>
#include <utility>

#include "metamol/util/hash.h"

namespace metamol::chem {

std::vector<std::uint64_t> refine_atom_classes(const MolGraph &g) {
  const int n = g.atom_count();
  std::vector<std::uint64_t> labels(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    labels[i] = Fnv1a()
                    .add(a.atomic_number)
                    .add(a.formal_charge)
                    .add(a.degree)
                    .add(a.total_h())
                    .add(a.aromatic)
                    .add(a.isotope.value_or(0))
                    .value();
  }
  std::vector<std::uint64_t> next(n);
  std::vector<std::pair<int, std::uint64_t>> env;
  for (int round = 0; round < std::max(n, 1); ++round) {
    for (int i = 0; i < n; ++i) {
      env.clear();
      for (const Neighbor &nb: g.neighbors(i))
        env.emplace_back(static_cast<int>(g.bond(nb.bond).order), labels[nb.atom]);
      std::sort(env.begin(), env.end());
      Fnv1a h;
      h.add(labels[i]);
      for (const auto &[order, label]: env)
        h.add(order).add(label);
      next[i] = h.value();
    }
    labels.swap(next);
  }
  return labels;
}

std::string canonical_key(const MolGraph &g) {
  std::vector<std::uint64_t> labels = refine_atom_classes(g);
  std::sort(labels.begin(), labels.end());
  Fnv1a lo, hi(0x9e3779b97f4a7c15ULL);
  lo.add(g.atom_count()).add(g.bond_count());
  hi.add(g.bond_count()).add(g.atom_count());
  for (std::uint64_t l: labels) {
    lo.add(l);
    hi.add(~l);
  }
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                static_cast<unsigned long long>(hi.value()),
                static_cast<unsigned long long>(lo.value()));
  return buf;
}

}  // namespace metamol::chem
