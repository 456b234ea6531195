//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metamol/chem/mol_graph.h"

namespace metamol::chem {

// Weisfeiler-Lehman refinement. Atoms start from (element, charge, degree,
// hydrogen count, aromaticity, isotope) and are repeatedly relabelled with
// the hash of their own label plus the sorted (bond order, neighbor label)
// multiset, for as many rounds as there are atoms. Labels are comparable
// across molecules.
std::vector<std::uint64_t> refine_atom_classes(const MolGraph &g);

// Order-independent 128-bit hex digest of the refined label multiset.
std::string canonical_key(const MolGraph &g);

}  // namespace metamol::chem
