//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/desc/descriptors.h"

#include <algorithm>
#include <string>

#include "metamol/chem/element.h"
#include "metamol/chem/hybridization.h"

namespace metamol::desc {
namespace {

bool is_n_or_o(const chem::Atom &a) {
  return a.atomic_number == 7 || a.atomic_number == 8;
}

// Single bond C-N where the carbon also carries a C=O.
bool is_amide_cn(const chem::MolGraph &g, const chem::Bond &b) {
  for (auto [c, n]: { std::pair { b.begin, b.end }, std::pair { b.end, b.begin } }) {
    if (g.atom(c).atomic_number != 6 || g.atom(n).atomic_number != 7)
      continue;
    for (const chem::Neighbor &nb: g.neighbors(c)) {
      if (g.bond(nb.bond).order == chem::BondOrder::kDouble
          && g.atom(nb.atom).atomic_number == 8)
        return true;
    }
  }
  return false;
}

template <auto F>
double as_double(const chem::MolGraph &g) {
  return static_cast<double>(F(g));
}

double mol_logp(const chem::MolGraph &g) {
  return crippen(g).logp;
}

double mol_mr(const chem::MolGraph &g) {
  return crippen(g).mr;
}

}  // namespace

PropertyRegistry::PropertyRegistry()
  : entries_ {
      { "MolWt", mol_wt, false },
      { "HeavyAtomCount", as_double<heavy_atom_count>, true },
      { "NHD", as_double<num_h_donors>, true },
      { "NHA", as_double<num_h_acceptors>, true },
      { "NRB", as_double<num_rotatable_bonds>, true },
      { "NAR", as_double<num_aromatic_rings>, true },
      { "RingCount", as_double<ring_count>, true },
      { "FractionCSP3", fraction_csp3, false },
      { "TPSA", tpsa, false },
      { "MolLogP", mol_logp, false },
      { "MolMR", mol_mr, false },
      { "Kappa1", kappa1, false },
      { "Chi0v", chi0v, false },
      { "Chi1v", chi1v, false },
      { "Chi3v", chi3v, false },
      { "Ipc", ipc, false },
    } { }

const PropertyRegistry &PropertyRegistry::instance() {
  static const PropertyRegistry r;
  return r;
}

const RegistryEntry *PropertyRegistry::find(std::string_view name) const {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const RegistryEntry &e) { return e.name == name; });
  return it == entries_.end() ? nullptr : &*it;
}

std::size_t PropertyRegistry::index_of(std::string_view name) const {
  const RegistryEntry *e = find(name);
  if (!e)
    throw DescriptorError("unknown property '" + std::string(name) + "'");
  return static_cast<std::size_t>(e - entries_.data());
}

double compute(std::string_view name, const chem::MolGraph &g) {
  const RegistryEntry *e = PropertyRegistry::instance().find(name);
  if (!e)
    throw DescriptorError("unknown property '" + std::string(name) + "'");
  if (g.empty())
    throw DescriptorError("cannot compute descriptors of an empty graph");
  return e->fn(g);
}

std::vector<PropertyValue> compute_all(const chem::MolGraph &g) {
  if (g.empty())
    throw DescriptorError("cannot compute descriptors of an empty graph");
  std::vector<PropertyValue> out;
  for (const RegistryEntry &e: PropertyRegistry::instance().entries())
    out.push_back({ std::string(e.name), e.fn(g) });
  return out;
}

bool lipinski_pass(const chem::MolGraph &g) {
  if (g.empty())
    throw DescriptorError("cannot compute descriptors of an empty graph");
  const double mw = mol_wt(g);
  const int hbd = num_h_donors(g);
  const int hba = num_h_acceptors(g);
  const double logp = crippen(g).logp;
  const int nrb = num_rotatable_bonds(g);
  return mw >= 0 && mw <= 500 && hbd <= 5 && hba <= 10 && logp >= -2 && logp <= 5
         && nrb <= 10;
}

double mol_wt(const chem::MolGraph &g) {
  double sum = 0;
  for (const chem::Atom &a: g.atoms()) {
    sum += a.isotope ? chem::isotope_mass(a.atomic_number, *a.isotope)
                     : a.elem().average_mass;
    sum += a.total_h() * chem::kHydrogenMass;
  }
  return sum;
}

int heavy_atom_count(const chem::MolGraph &g) {
  return g.atom_count();
}

int num_h_donors(const chem::MolGraph &g) {
  return static_cast<int>(std::count_if(g.atoms().begin(), g.atoms().end(),
                                        [](const chem::Atom &a) {
                                          return is_n_or_o(a) && a.total_h() > 0;
                                        }));
}

int num_h_acceptors(const chem::MolGraph &g) {
  return static_cast<int>(std::count_if(g.atoms().begin(), g.atoms().end(), is_n_or_o));
}

int num_rotatable_bonds(const chem::MolGraph &g) {
  int n = 0;
  for (const chem::Bond &b: g.bonds()) {
    if (b.order != chem::BondOrder::kSingle || b.in_ring)
      continue;
    if (g.atom(b.begin).degree < 2 || g.atom(b.end).degree < 2)
      continue;
    if (is_amide_cn(g, b))
      continue;
    ++n;
  }
  return n;
}

int num_aromatic_rings(const chem::MolGraph &g) {
  int n = 0;
  for (const chem::Ring &r: g.rings()) {
    bool aromatic = true;
    for (std::size_t i = 0; i < r.size() && aromatic; ++i) {
      const int b = g.find_bond(r[i], r[(i + 1) % r.size()]);
      aromatic = g.atom(r[i]).aromatic && g.bond(b).order == chem::BondOrder::kAromatic;
    }
    n += aromatic ? 1 : 0;
  }
  return n;
}

int ring_count(const chem::MolGraph &g) {
  return static_cast<int>(g.rings().size());
}

double fraction_csp3(const chem::MolGraph &g) {
  const std::vector<chem::Hybridization> hyb = chem::hybridize(g);
  int carbons = 0;
  int sp3 = 0;
  for (int i = 0; i < g.atom_count(); ++i) {
    if (g.atom(i).atomic_number != 6)
      continue;
    ++carbons;
    sp3 += hyb[i] == chem::Hybridization::kSP3 ? 1 : 0;
  }
  return carbons ? static_cast<double>(sp3) / carbons : 0.0;
}

}  // namespace metamol::desc
