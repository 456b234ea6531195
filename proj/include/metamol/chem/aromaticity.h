//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>

#include "metamol/chem/mol_graph.h"

namespace metamol::chem {

// Pi electrons an atom donates to an aromatic ring under the simplified
// Hueckel model, or nullopt if the atom cannot take part in one.
std::optional<int> pi_electrons(const MolGraph &g, int atom);

// Index of the first lower-case atom that does not lie on a ring (or fused
// pair of rings, or fused ring system) with 4n+2 pi electrons; nullopt when
// every aromatic atom is accounted for.
std::optional<int> find_invalid_aromatic_atom(const MolGraph &g);

// Converts alternating single/double rings that satisfy the 4n+2 rule to
// aromatic atoms and bonds. Hydrogen counts are preserved.
MolGraph aromatize_kekule_rings(const MolGraph &g);

}  // namespace metamol::chem
