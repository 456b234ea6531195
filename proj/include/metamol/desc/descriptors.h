//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metamol/chem/mol_graph.h"

namespace metamol::desc {

class DescriptorError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PropertyValue {
  std::string name;
  double value;
};

using DescriptorFn = double (*)(const chem::MolGraph &);

struct RegistryEntry {
  std::string_view name;
  DescriptorFn fn;
  // Integer-valued descriptors are compared exactly against goldens.
  bool integral;
};

/// Fixed, ordered set of descriptors. The order is part of the corpus
/// format: property sampling indexes into it.
class PropertyRegistry {
public:
  static const PropertyRegistry &instance();

  std::span<const RegistryEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const RegistryEntry *find(std::string_view name) const;
  // Throws DescriptorError for an unknown name.
  std::size_t index_of(std::string_view name) const;

private:
  PropertyRegistry();
  std::vector<RegistryEntry> entries_;
};

double compute(std::string_view name, const chem::MolGraph &g);
std::vector<PropertyValue> compute_all(const chem::MolGraph &g);

/// Lipinski screen: MolWt <= 500, donors <= 5, acceptors <= 10,
/// -2 <= logP <= 5 and at most 10 rotatable bonds.
bool lipinski_pass(const chem::MolGraph &g);

double mol_wt(const chem::MolGraph &g);
int heavy_atom_count(const chem::MolGraph &g);
int num_h_donors(const chem::MolGraph &g);
int num_h_acceptors(const chem::MolGraph &g);
int num_rotatable_bonds(const chem::MolGraph &g);
int num_aromatic_rings(const chem::MolGraph &g);
int ring_count(const chem::MolGraph &g);
double fraction_csp3(const chem::MolGraph &g);

double tpsa(const chem::MolGraph &g);

struct CrippenContribs {
  double logp = 0;
  double mr = 0;
};
CrippenContribs crippen(const chem::MolGraph &g);
// Atom type label per heavy atom, then per hydrogen in atom order; empty
// when no rule matched.
std::vector<std::string> crippen_atom_types(const chem::MolGraph &g);

double hall_kier_alpha(const chem::MolGraph &g);
double kappa1(const chem::MolGraph &g);
double chi0v(const chem::MolGraph &g);
double chi1v(const chem::MolGraph &g);
double chi3v(const chem::MolGraph &g);
double ipc(const chem::MolGraph &g);

// Coefficients of det(xI - A) for the heavy-atom adjacency matrix, highest
// power first.
std::vector<long double> characteristic_polynomial(const chem::MolGraph &g);

}  // namespace metamol::desc
