//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <string>
#include <vector>

namespace metamol::desc {

/// One line of a reference JSON-lines file:
/// {"smiles", "properties": {name: value}, "fingerprints": {kind: hex},
///  "fingerprint_bits", "ring_count", "aromatic_ring_count"}.
/// Hex digit k of a fingerprint holds bits 4k..4k+3, lowest bit first.
struct GoldenRecord {
  std::string smiles;
  std::map<std::string, double> properties;
  std::map<std::string, std::string> fingerprints;
  int fingerprint_bits = 0;
  int ring_count = 0;
  int aromatic_ring_count = 0;
};

// Throws std::runtime_error with the line number on malformed input.
std::vector<GoldenRecord> read_golden_file(const std::string &path);

struct Tolerance {
  double absolute = 0;
  double relative = 0;
};

// Exact for integer descriptors; 0.02 for MolWt, TPSA, MolLogP and MolMR;
// 1e-3 for Kappa1 and the chi indices; 1e-6 relative for Ipc.
Tolerance parity_tolerance(const std::string &property);
bool within(const Tolerance &tol, double actual, double expected);

struct ParityMismatch {
  std::string smiles;
  std::string field;
  double actual;
  double expected;
};

struct ParityReport {
  int records = 0;
  int values_checked = 0;
  std::vector<ParityMismatch> mismatches;
  bool ok() const { return records > 0 && mismatches.empty(); }
};

/// Recomputes every property plus ring counts for each record and lists
/// values outside tolerance. Unparseable SMILES are reported as a mismatch
/// on the "smiles" field.
ParityReport check_descriptor_parity(const std::vector<GoldenRecord> &records);

}  // namespace metamol::desc
