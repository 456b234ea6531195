//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/chem/canonical.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "metamol/chem/smiles.h"
#include "test_util.h"

namespace metamol::chem {
namespace {

TEST(CanonicalKey, RenumberingInvariance) {
  EXPECT_EQ(canonical_key(parse_smiles("CCO")), canonical_key(parse_smiles("OCC")));
  EXPECT_NE(canonical_key(parse_smiles("CCO")), canonical_key(parse_smiles("CCN")));
  EXPECT_NE(canonical_key(parse_smiles("CC=O")), canonical_key(parse_smiles("CCO")));
  EXPECT_NE(canonical_key(parse_smiles("CCCC")), canonical_key(parse_smiles("CC(C)C")));
}

TEST(CanonicalKey, HundredPermutationsOfTwentyAtoms) {
  MolGraph g = parse_smiles("CC(C)Cc1ccc(cc1)C(C)C(=O)NC(CO)CO");
  ASSERT_EQ(g.atom_count(), 20);
  std::mt19937_64 rng(5);
  std::vector<int> perm(g.atom_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::string> keys;
  for (int i = 0; i < 100; ++i) {
    std::shuffle(perm.begin(), perm.end(), rng);
    keys.insert(canonical_key(g.renumbered(perm)));
  }
  EXPECT_EQ(keys.size(), 1U);
  EXPECT_EQ(*keys.begin(), canonical_key(g));
}

TEST(CanonicalKey, PermutationInvarianceOnCorpus) {
  std::mt19937_64 rng(9);
  for (const std::string &smi: test::sample_smiles()) {
    MolGraph g = parse_smiles(smi);
    const std::string key = canonical_key(g);
    std::vector<int> perm(g.atom_count());
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < 20; ++i) {
      std::shuffle(perm.begin(), perm.end(), rng);
      ASSERT_EQ(canonical_key(g.renumbered(perm)), key) << smi;
    }
  }
}

TEST(CanonicalKey, DistinguishesCorpusMolecules) {
  std::set<std::string> keys;
  std::vector<std::string> smiles = test::sample_smiles();
  for (const std::string &smi: smiles)
    keys.insert(canonical_key(parse_smiles(smi)));
  // The sample is de-duplicated by the reference toolkit's canonical form.
  EXPECT_EQ(keys.size(), std::set<std::string>(smiles.begin(), smiles.end()).size());
}

}  // namespace
}  // namespace metamol::chem
