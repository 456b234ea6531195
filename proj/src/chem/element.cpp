//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/chem/element.h"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace metamol::chem {
namespace {

constexpr std::array<int, 1> kVal1 {1};
constexpr std::array<int, 1> kVal2 {2};
constexpr std::array<int, 1> kVal3 {3};
constexpr std::array<int, 1> kVal4 {4};
constexpr std::array<int, 2> kVal35 {3, 5};
constexpr std::array<int, 3> kVal246 {2, 4, 6};
constexpr std::span<const int> kNone {};

// Average masses follow the IUPAC conventional values used by common
// cheminformatics toolkits.
const std::array kElements {
  Element {1, "H", 1.008, 1, 1, 0.33, kNone, false},
  Element {3, "Li", 6.941, 1, 1, 1.23, kNone, false},
  Element {5, "B", 10.812, 3, 3, 0.82, kVal3, true},
  Element {6, "C", 12.011, 4, 4, 0.77, kVal4, true},
  Element {7, "N", 14.007, 5, 3, 0.70, kVal35, true},
  Element {8, "O", 15.999, 6, 2, 0.66, kVal2, true},
  Element {9, "F", 18.998, 7, 1, 0.611, kVal1, false},
  Element {11, "Na", 22.990, 1, 1, 1.54, kNone, false},
  Element {12, "Mg", 24.305, 2, 2, 1.36, kNone, false},
  Element {14, "Si", 28.086, 4, 4, 0.937, kNone, false},
  Element {15, "P", 30.974, 5, 3, 0.89, kVal35, true},
  Element {16, "S", 32.067, 6, 2, 1.04, kVal246, true},
  Element {17, "Cl", 35.453, 7, 1, 0.997, kVal1, false},
  Element {19, "K", 39.098, 1, 1, 2.03, kNone, false},
  Element {20, "Ca", 40.078, 2, 2, 1.74, kNone, false},
  Element {33, "As", 74.922, 5, 3, 1.20, kNone, true},
  Element {34, "Se", 78.960, 6, 2, 1.17, kNone, true},
  Element {35, "Br", 79.904, 7, 1, 1.167, kVal1, false},
  Element {53, "I", 126.904, 7, 1, 1.387, kVal1, false},
};

struct IsotopeMass {
  int atomic_number;
  int mass_number;
  double mass;
};

const std::array kIsotopes {
  IsotopeMass {1, 2, 2.014101778},  IsotopeMass {1, 3, 3.016049278},
  IsotopeMass {6, 11, 11.0114336},  IsotopeMass {6, 12, 12.0},
  IsotopeMass {6, 13, 13.00335484}, IsotopeMass {6, 14, 14.00324199},
  IsotopeMass {7, 13, 13.00573861}, IsotopeMass {7, 15, 15.0001089},
  IsotopeMass {8, 15, 15.0030656},  IsotopeMass {8, 17, 16.9991317},
  IsotopeMass {8, 18, 17.999161},   IsotopeMass {9, 18, 18.000938},
  IsotopeMass {9, 19, 18.99840322}, IsotopeMass {15, 32, 31.97390727},
  IsotopeMass {16, 32, 31.972071},  IsotopeMass {16, 34, 33.9678669},
  IsotopeMass {16, 35, 34.96903216}, IsotopeMass {17, 36, 35.96830698},
  IsotopeMass {17, 37, 36.96590259}, IsotopeMass {35, 76, 75.924541},
  IsotopeMass {35, 77, 76.921379},  IsotopeMass {35, 79, 78.9183371},
  IsotopeMass {35, 81, 80.9162906}, IsotopeMass {53, 123, 122.905589},
  IsotopeMass {53, 124, 123.9062099}, IsotopeMass {53, 125, 124.9046302},
  IsotopeMass {53, 131, 130.9061246},
};

}  // namespace

const Element *find_element(std::string_view symbol) {
  auto it = std::find_if(kElements.begin(), kElements.end(),
                         [&](const Element &e) { return e.symbol == symbol; });
  return it == kElements.end() ? nullptr : &*it;
}

bool is_known_element(int atomic_number) {
  return std::any_of(
      kElements.begin(), kElements.end(),
      [&](const Element &e) { return e.atomic_number == atomic_number; });
}

const Element &element(int atomic_number) {
  for (const Element &e: kElements) {
    if (e.atomic_number == atomic_number)
      return e;
  }
  throw std::out_of_range("unsupported atomic number "
                          + std::to_string(atomic_number));
}

double isotope_mass(int atomic_number, int mass_number) {
  for (const IsotopeMass &iso: kIsotopes) {
    if (iso.atomic_number == atomic_number && iso.mass_number == mass_number)
      return iso.mass;
  }
  return mass_number;
}

}  // namespace metamol::chem
