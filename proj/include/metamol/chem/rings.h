//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "metamol/chem/mol_graph.h"

namespace metamol::chem {

// Smallest set of smallest rings. The result has exactly
// |bonds| - |atoms| + |components| cycles; among equally sized candidates the
// one with the lexicographically smallest sorted atom set wins. Each ring is
// reported as a cycle starting at its smallest atom index.
std::vector<Ring> perceive_rings(const MolGraph &g);

namespace internal {
std::vector<Ring> sssr(int atom_count, const std::vector<Bond> &bonds,
                       const std::vector<Neighbor> &adjacency,
                       const std::vector<int> &offsets, int components);
}  // namespace internal

}  // namespace metamol::chem
