//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "metamol/chem/mol_graph.h"

namespace metamol::chem {

enum class Hybridization { kS, kSP, kSP2, kSP3, kSP3D, kSP3D2 };

/// Valence of the atom in a Kekule form of the molecule: integer bond
/// orders, hydrogens, and one more for aromatic atoms that carry a ring
/// double bond in the Kekule structure.
int total_valence(const MolGraph &g, int atom);

/// Per-bond conjugation flags. Aromatic bonds are conjugated; otherwise a
/// multiple bond and an adjacent single bond are conjugated when both ends
/// can donate or accept pi electrons.
std::vector<bool> conjugated_bonds(const MolGraph &g);

/// Hybridization from the count of sigma bonds plus lone pairs, with
/// four-orbital atoms that touch a conjugated bond lowered to SP2.
std::vector<Hybridization> hybridize(const MolGraph &g);

}  // namespace metamol::chem
