//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <optional>

#include "metamol/chem/element.h"
#include "metamol/desc/descriptors.h"
#include "param_tables.h"

namespace metamol::desc {
namespace {

// neighbors, h, charge, single, double, triple, aromatic, in3ring
constexpr std::size_t kKeys = 8;

struct AtomEnvironment {
  std::array<int, kKeys> keys;
};

struct TpsaRule {
  int atomic_number;
  std::array<std::optional<int>, kKeys> keys;
  double value;
};

struct TpsaFallback {
  int atomic_number;
  double base;
  double per_neighbor;
  double per_h;
};

struct TpsaTable {
  std::vector<TpsaRule> rules;
  std::vector<TpsaFallback> fallbacks;
};

int element_number(std::string_view sym) {
  const chem::Element *el = chem::find_element(sym);
  if (!el)
    throw DescriptorError("tpsa table: unknown element");
  return el->atomic_number;
}

TpsaTable load_table() {
  TpsaTable t;
  for (const auto &row: internal::split_table(internal::tpsa_table_text())) {
    if (row.size() != 3 + kKeys)
      throw DescriptorError("tpsa table: expected 11 columns");
    const int z = element_number(row[1]);
    const double value = internal::table_number(row[2 + kKeys], "tpsa");
    if (row[0] == "fallback") {
      t.fallbacks.push_back({ z, value, internal::table_number(row[2], "tpsa"),
                              internal::table_number(row[3], "tpsa") });
      continue;
    }
    if (row[0] != "rule")
      throw DescriptorError("tpsa table: unknown row kind");
    TpsaRule r { z, {}, value };
    for (std::size_t k = 0; k < kKeys; ++k) {
      if (row[2 + k] != "*")
        r.keys[k] = static_cast<int>(internal::table_number(row[2 + k], "tpsa"));
    }
    t.rules.push_back(r);
  }
  return t;
}

const TpsaTable &table() {
  static const TpsaTable t = load_table();
  return t;
}

AtomEnvironment environment(const chem::MolGraph &g, int i) {
  const chem::Atom &a = g.atom(i);
  AtomEnvironment env {};
  env.keys[0] = a.degree;
  env.keys[1] = a.total_h();
  env.keys[2] = a.formal_charge;
  for (const chem::Neighbor &nb: g.neighbors(i)) {
    switch (g.bond(nb.bond).order) {
    case chem::BondOrder::kSingle: ++env.keys[3]; break;
    case chem::BondOrder::kDouble: ++env.keys[4]; break;
    case chem::BondOrder::kTriple: ++env.keys[5]; break;
    case chem::BondOrder::kAromatic: ++env.keys[6]; break;
    }
  }
  env.keys[7] = g.atom_in_ring_of_size(i, 3) ? 1 : 0;
  return env;
}

}  // namespace

double tpsa(const chem::MolGraph &g) {
  const TpsaTable &t = table();
  double total = 0;
  for (int i = 0; i < g.atom_count(); ++i) {
    const int z = g.atom(i).atomic_number;
    auto fb = std::find_if(t.fallbacks.begin(), t.fallbacks.end(),
                           [&](const TpsaFallback &f) { return f.atomic_number == z; });
    if (fb == t.fallbacks.end())
      continue;
    const AtomEnvironment env = environment(g, i);
    const TpsaRule *hit = nullptr;
    for (const TpsaRule &r: t.rules) {
      if (r.atomic_number != z)
        continue;
      bool ok = true;
      for (std::size_t k = 0; k < kKeys && ok; ++k)
        ok = !r.keys[k] || *r.keys[k] == env.keys[k];
      if (ok) {
        hit = &r;
        break;
      }
    }
    if (hit)
      total += hit->value;
    else
      total += std::max(0.0, fb->base - fb->per_neighbor * env.keys[0] + fb->per_h * env.keys[1]);
  }
  return total;
}

}  // namespace metamol::desc
