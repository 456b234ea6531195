//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace metamol::conf {

class ConformerError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Heavy-atom coordinates in Angstrom, one per atom in SMILES order.
struct Conformer {
  std::vector<Eigen::Vector3d> coords;
  std::size_t size() const { return coords.size(); }
};

/// Local coordinates of one atom relative to the three atoms before it in
/// SMILES order. Record 0 carries nothing, record 1 only d, record 2 d and
/// alpha, later records alpha, beta and d. Angles are in degrees.
struct InternalRecord {
  double d = 0;
  double alpha = 0;
  double beta = 0;
  // Set when beta is undefined (collinear reference atoms) and was fixed
  // to zero; decoding then picks a deterministic reference plane.
  bool degenerate = false;

  // Number of meaningful fields for the record at position i.
  static int arity(std::size_t i) { return i == 0 ? 0 : i == 1 ? 1 : i == 2 ? 2 : 3; }
};

struct InternalConformer {
  std::vector<InternalRecord> records;
  std::size_t size() const { return records.size(); }
  bool degenerate() const;
};

// Threshold on |sin(angle)| below which three points count as collinear.
inline constexpr double kCollinearSin = 1e-6;

InternalConformer encode_conformer(const Conformer &c);
Conformer decode_conformer(const InternalConformer &ic);

/// RMSD after optimal rigid superposition (Kabsch with reflection fix).
double rmsd_aligned(const Conformer &a, const Conformer &b);

/// Renders record fields as decimal text: angles to 0.1 degree, distances to
/// 0.001 Angstrom, in the field order alpha, beta, d (or d, alpha / d).
std::vector<std::vector<std::string>> quantize_internal(const InternalConformer &ic);
InternalConformer dequantize_internal(const std::vector<std::vector<std::string>> &fields);

std::string format_angle(double degrees);
std::string format_distance(double angstrom);

}  // namespace metamol::conf
