//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "metamol/conf/conformer.h"

namespace metamol::conf {

struct LabelledConformer {
  // SMILES for JSON-lines records; empty for XYZ blocks.
  std::string smiles;
  std::vector<std::string> symbols;
  Conformer conformer;
};

/// XYZ text: blocks of "count", a comment line and "symbol x y z" lines.
/// Bare "symbol x y z" lines without a header are read as a single block.
std::vector<LabelledConformer> read_xyz(std::istream &in);
void write_xyz(std::ostream &out, const LabelledConformer &c);

/// JSON lines {"smiles": ..., "coords": [[x, y, z], ...]}.
std::vector<LabelledConformer> read_conformer_jsonl(std::istream &in);
void write_conformer_jsonl(std::ostream &out, const LabelledConformer &c);

/// JSON lines {"smiles": ..., "records": [[], [d], [d, a], [a, b, d], ...],
/// "degenerate": [indices]} holding internal coordinates.
struct LabelledInternal {
  std::string smiles;
  InternalConformer internal;
};
std::vector<LabelledInternal> read_internal_jsonl(std::istream &in);
void write_internal_jsonl(std::ostream &out, const LabelledInternal &c);

}  // namespace metamol::conf
