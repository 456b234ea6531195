//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace metamol::test {

inline std::vector<std::string> read_lines(const std::string &path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty())
      lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> sample_smiles() {
  return read_lines(std::string(METAMOL_TEST_DATA_DIR) + "/moses_sample.smi");
}

}  // namespace metamol::test
