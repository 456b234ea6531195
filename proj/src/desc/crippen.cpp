//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <string>

#include "metamol/desc/atom_pattern.h"
#include "metamol/desc/descriptors.h"
#include "param_tables.h"

namespace metamol::desc {
namespace {

struct CrippenRule {
  std::string label;
  AtomPattern pattern;
  double logp;
  double mr;
};

std::vector<CrippenRule> load_rules() {
  std::vector<CrippenRule> rules;
  for (const auto &row: internal::split_table(internal::crippen_table_text())) {
    if (row.size() != 4)
      throw DescriptorError("crippen table: expected 4 columns");
    rules.push_back({ std::string(row[0]), AtomPattern(row[1]),
                      internal::table_number(row[2], "crippen"),
                      internal::table_number(row[3], "crippen") });
  }
  return rules;
}

const std::vector<CrippenRule> &rules() {
  static const std::vector<CrippenRule> r = load_rules();
  return r;
}

// Index of the first matching rule per node of the hydrogen-expanded graph.
std::vector<int> assign_types(const ExplicitHGraph &h) {
  const std::vector<CrippenRule> &table = rules();
  std::vector<int> type(h.nodes.size(), -1);
  for (std::size_t i = 0; i < h.nodes.size(); ++i) {
    for (std::size_t r = 0; r < table.size(); ++r) {
      if (table[r].pattern.matches_at(h, static_cast<int>(i))) {
        type[i] = static_cast<int>(r);
        break;
      }
    }
  }
  return type;
}

}  // namespace

CrippenContribs crippen(const chem::MolGraph &g) {
  const ExplicitHGraph h = ExplicitHGraph::from(g);
  const std::vector<CrippenRule> &table = rules();
  CrippenContribs out;
  for (int t: assign_types(h)) {
    if (t < 0)
      continue;
    out.logp += table[t].logp;
    out.mr += table[t].mr;
  }
  return out;
}

std::vector<std::string> crippen_atom_types(const chem::MolGraph &g) {
  const std::vector<CrippenRule> &table = rules();
  std::vector<std::string> out;
  for (int t: assign_types(ExplicitHGraph::from(g)))
    out.push_back(t < 0 ? std::string() : table[t].label);
  return out;
}

}  // namespace metamol::desc
