//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/desc/atom_pattern.h"

#include <gtest/gtest.h>

#include "metamol/chem/smiles.h"
#include "metamol/desc/descriptors.h"

namespace metamol::desc {
namespace {

// Root indices the pattern matches at.
std::vector<int> roots(std::string_view pattern, std::string_view smiles) {
  const ExplicitHGraph g = ExplicitHGraph::from(chem::parse_smiles(smiles));
  const AtomPattern p(pattern);
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
    if (p.matches_at(g, i))
      out.push_back(i);
  }
  return out;
}

TEST(ExplicitHGraph, HydrogensFollowHeavyAtoms) {
  const ExplicitHGraph g = ExplicitHGraph::from(chem::parse_smiles("CO"));
  ASSERT_EQ(g.nodes.size(), 6U);
  EXPECT_EQ(g.heavy_count, 2);
  EXPECT_EQ(g.nodes[0].connections, 4);
  EXPECT_EQ(g.nodes[1].h_count, 1);
  EXPECT_EQ(g.nodes[5].atomic_number, 1);
  EXPECT_EQ(g.adjacency[5].front().atom, 1);
}

TEST(AtomPattern, Primitives) {
  EXPECT_EQ(roots("[CH3]", "CCO"), (std::vector<int> { 0 }));
  EXPECT_EQ(roots("[#8]", "CCO"), (std::vector<int> { 2 }));
  EXPECT_EQ(roots("[#1]", "C").size(), 4U);
  EXPECT_EQ(roots("c", "Cc1ccccc1").size(), 6U);
  EXPECT_EQ(roots("[CX4]", "Cc1ccccc1"), (std::vector<int> { 0 }));
  EXPECT_EQ(roots("[N+]", "C[NH3+]"), (std::vector<int> { 1 }));
  EXPECT_EQ(roots("[O-]", "CC(=O)[O-]"), (std::vector<int> { 3 }));
  EXPECT_EQ(roots("[O;-0]", "CC(=O)[O-]"), (std::vector<int> { 2 }));
  EXPECT_EQ(roots("[Cl]", "CCl"), (std::vector<int> { 1 }));
  EXPECT_EQ(roots("[#9,#17,#35,#53;-]", "[Br-]"), (std::vector<int> { 0 }));
}

TEST(AtomPattern, LogicalOperators) {
  EXPECT_EQ(roots("[!C;A;!#1]", "CCO"), (std::vector<int> { 2 }));
  EXPECT_EQ(roots("[N,O]", "CNCO"), (std::vector<int> { 1, 3 }));
  EXPECT_EQ(roots("[!#1;A,a]", "Oc1ccccc1").size(), 7U);
  EXPECT_EQ(roots("[C&H2]", "CCC"), (std::vector<int> { 1 }));
}

TEST(AtomPattern, Bonds) {
  EXPECT_EQ(roots("[C]=O", "CC(=O)O"), (std::vector<int> { 1 }));
  EXPECT_EQ(roots("[C]O", "CC(=O)O"), (std::vector<int> { 1 }));
  EXPECT_EQ(roots("[C]#N", "CC#N"), (std::vector<int> { 1 }));
  EXPECT_EQ(roots("c:c", "c1ccccc1").size(), 6U);
  EXPECT_TRUE(roots("c-c", "c1ccccc1").empty());
  EXPECT_EQ(roots("c-c", "c1ccccc1-c1ccccc1").size(), 2U);
  EXPECT_EQ(roots("C~O", "CC(=O)O"), (std::vector<int> { 1 }));
}

TEST(AtomPattern, BranchesNeedDistinctAtoms) {
  EXPECT_EQ(roots("[CH](C)(C)C", "CC(C)C"), (std::vector<int> { 1 }));
  EXPECT_TRUE(roots("[CH](C)(C)C", "CC(C)O").empty());
  EXPECT_EQ(roots("[c](:a)(:a):a", "c1ccc2ccccc2c1").size(), 2U);
  EXPECT_EQ(roots("[#1]OC=[#6,#7,O,S]", "CC(=O)O"), (std::vector<int> { 7 }));
}

TEST(AtomPattern, Errors) {
  EXPECT_THROW(AtomPattern(""), PatternError);
  EXPECT_THROW(AtomPattern("[C"), PatternError);
  EXPECT_THROW(AtomPattern("C(C"), PatternError);
  EXPECT_THROW(AtomPattern("[Zz]"), PatternError);
  EXPECT_THROW(AtomPattern("C1CC1"), PatternError);
}

TEST(CrippenTypes, ReferenceAssignments) {
  // Types as assigned by the reference toolkit.
  EXPECT_EQ(crippen_atom_types(chem::parse_smiles("CCO")),
            (std::vector<std::string> { "C1", "C3", "O2", "H1", "H1", "H1", "H1", "H1", "H2" }));
  EXPECT_EQ(crippen_atom_types(chem::parse_smiles("c1cc[nH]c1")),
            (std::vector<std::string> { "C18", "C18", "C18", "N11", "C18", "H1", "H1", "H1",
                                        "H3", "H1" }));
  EXPECT_EQ(crippen_atom_types(chem::parse_smiles("CC(=O)O")).back(), "H4");
}

TEST(Crippen, ClosedSums) {
  // methane: C1 + 4 H1
  const CrippenContribs c = crippen(chem::parse_smiles("C"));
  EXPECT_NEAR(c.logp, 0.1441 + 4 * 0.123, 1e-12);
  EXPECT_NEAR(c.mr, 2.503 + 4 * 1.057, 1e-12);
}

}  // namespace
}  // namespace metamol::desc
