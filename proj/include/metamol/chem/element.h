//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace metamol::chem {

struct Element {
  int atomic_number;
  std::string_view symbol;
  double average_mass;
  int outer_electrons;
  // Valence assumed when counting lone pairs.
  int default_valence;
  // Covalent radius used by the Hall-Kier alpha fallback.
  double rb0;
  // Allowed valences for organic-subset atoms written without brackets;
  // empty for elements that must always be bracketed.
  std::span<const int> organic_valences;
  bool aromatic_capable;
};

const Element *find_element(std::string_view symbol);
const Element &element(int atomic_number);
bool is_known_element(int atomic_number);

// Exact isotope mass if tabulated, otherwise the mass number itself.
double isotope_mass(int atomic_number, int mass_number);

inline constexpr double kHydrogenMass = 1.008;

}  // namespace metamol::chem
