//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metamol/chem/mol_graph.h"

namespace metamol::fp {

inline constexpr int kFingerprintBits = 176;

enum class FingerprintKind { kECFP, kFCFP, kPath };

const char *to_string(FingerprintKind kind);
std::optional<FingerprintKind> parse_kind(std::string_view name);

class FingerprintError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Fingerprint {
  FingerprintKind kind;
  // Radius for ECFP/FCFP, maximum path length in bonds for PATH.
  int parameter;
  std::bitset<kFingerprintBits> bits;

  // 44 hex digits; digit k holds bits 4k..4k+3, lowest bit first.
  std::string hex() const;
  static Fingerprint from_hex(FingerprintKind kind, int parameter, std::string_view hex);

  bool operator==(const Fingerprint &) const = default;
};

// FCFP class bits.
enum FeatureClass : std::uint8_t {
  kDonor = 1 << 0,
  kAcceptor = 1 << 1,
  kNegative = 1 << 2,
  kPositive = 1 << 3,
  kAromatic = 1 << 4,
  kHalogen = 1 << 5,
};

std::vector<std::uint8_t> feature_classes(const chem::MolGraph &g);

/// Sorted, distinct identifiers before folding.
std::vector<std::uint64_t> ecfp_identifiers(const chem::MolGraph &g, int radius);
std::vector<std::uint64_t> fcfp_identifiers(const chem::MolGraph &g, int radius);
std::vector<std::uint64_t> path_identifiers(const chem::MolGraph &g, int max_length);

/// Sets bit (id mod 176) for every identifier.
Fingerprint fold(FingerprintKind kind, int parameter, std::span<const std::uint64_t> ids);

// Radius in [0,4].
Fingerprint ecfp(const chem::MolGraph &g, int radius, int nbits = kFingerprintBits);
// Radius in [0,6].
Fingerprint fcfp(const chem::MolGraph &g, int radius, int nbits = kFingerprintBits);
// Path length in [1,7].
Fingerprint path_fp(const chem::MolGraph &g, int max_length, int nbits = kFingerprintBits);

Fingerprint compute_fingerprint(FingerprintKind kind, const chem::MolGraph &g, int parameter);

/// |a & b| / |a | b|; 1.0 when both are empty. Throws on kind or
/// parameter mismatch.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

}  // namespace metamol::fp
