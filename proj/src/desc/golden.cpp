//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/desc/golden.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "metamol/chem/smiles.h"
#include "metamol/desc/descriptors.h"

namespace metamol::desc {

std::vector<GoldenRecord> read_golden_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::vector<GoldenRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      GoldenRecord r;
      r.smiles = j.at("smiles").get<std::string>();
      for (auto &[k, v]: j.at("properties").items())
        r.properties[k] = v.get<double>();
      if (j.contains("fingerprints")) {
        for (auto &[k, v]: j.at("fingerprints").items())
          r.fingerprints[k] = v.get<std::string>();
      }
      r.fingerprint_bits = j.value("fingerprint_bits", 0);
      r.ring_count = j.value("ring_count", 0);
      r.aromatic_ring_count = j.value("aromatic_ring_count", 0);
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception &e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

Tolerance parity_tolerance(const std::string &property) {
  const RegistryEntry *e = PropertyRegistry::instance().find(property);
  if (e && e->integral)
    return {};
  if (property == "MolWt" || property == "TPSA" || property == "MolLogP"
      || property == "MolMR")
    return { 0.02, 0 };
  if (property == "Ipc")
    return { 0, 1e-6 };
  if (property == "FractionCSP3")
    return { 1e-9, 0 };
  return { 1e-3, 0 };
}

bool within(const Tolerance &tol, double actual, double expected) {
  if (!std::isfinite(actual) || !std::isfinite(expected))
    return false;
  const double diff = std::fabs(actual - expected);
  if (tol.relative > 0)
    return diff <= tol.relative * std::max(std::fabs(expected), 1e-12);
  return diff <= tol.absolute;
}

ParityReport check_descriptor_parity(const std::vector<GoldenRecord> &records) {
  ParityReport report;
  for (const GoldenRecord &r: records) {
    ++report.records;
    std::optional<chem::MolGraph> g = chem::try_parse_smiles(r.smiles);
    if (!g) {
      report.mismatches.push_back(
        { r.smiles, "smiles", std::numeric_limits<double>::quiet_NaN(), 0 });
      continue;
    }
    auto check = [&](const std::string &field, double actual, double expected,
                     const Tolerance &tol) {
      ++report.values_checked;
      if (!within(tol, actual, expected))
        report.mismatches.push_back({ r.smiles, field, actual, expected });
    };
    for (const auto &[name, expected]: r.properties) {
      if (!PropertyRegistry::instance().find(name)) {
        report.mismatches.push_back(
          { r.smiles, name, std::numeric_limits<double>::quiet_NaN(), expected });
        continue;
      }
      check(name, compute(name, *g), expected, parity_tolerance(name));
    }
    check("ring_count", ring_count(*g), r.ring_count, {});
    check("aromatic_ring_count", num_aromatic_rings(*g), r.aromatic_ring_count, {});
  }
  return report;
}

}  // namespace metamol::desc
