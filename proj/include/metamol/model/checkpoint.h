//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metamol/model/params.h"

namespace metamol::model {

class CheckpointError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr char kCheckpointMagic[8] = { 'M', 'M', 'L', 'M', 'C', 'K', 'P', 'T' };
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointBlock {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> data;
};

/// magic, u32 version, u64 header length, JSON header (config, vocabulary,
/// step, storage precision, metadata, block table), then each block's
/// little-endian data in table order.
struct Checkpoint {
  ModelConfig config;
  std::vector<std::string> vocab;
  std::int64_t step = 0;
  // Storage width of the block data: 4 or 8 bytes.
  int precision_bytes = 4;
  // Free-form JSON object text.
  std::string metadata = "{}";
  std::vector<CheckpointBlock> blocks;

  const CheckpointBlock *find(std::string_view name) const;

  // Adds every parameter block, names prefixed.
  template <class T>
  void add_params(const Params<T> &p, const std::string &prefix = "");
  // Throws CheckpointError when a block is missing or has the wrong shape.
  template <class T>
  Params<T> params(const std::string &prefix = "") const;
};

void write_checkpoint(std::ostream &out, const Checkpoint &c);
Checkpoint read_checkpoint(std::istream &in);
void save_checkpoint(const std::string &path, const Checkpoint &c);
Checkpoint load_checkpoint(const std::string &path);

}  // namespace metamol::model
