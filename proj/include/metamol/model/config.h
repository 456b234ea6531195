//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metamol::model {

class ConfigError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ModelConfig {
  int layers = 2;
  int heads = 2;
  int d_model = 16;
  int d_head = 8;
  int ffn_dim = 48;
  int vocab_size = 50;
  int max_len = 512;
  double rope_base = 10000.0;

  // Throws ConfigError when d_model != heads * d_head, d_head is odd or a
  // size is not positive.
  void validate() const;
  bool operator==(const ModelConfig &) const = default;
};

// tiny: 2 x d16, small: 4 x d128, full: 12 x d768 with ffn 2560.
ModelConfig preset(std::string_view name);

/// key=value lines; '#' starts a comment. "preset=<name>" first loads a
/// preset that later keys override.
ModelConfig parse_config(std::istream &in);
ModelConfig load_config(const std::string &path);
std::string to_text(const ModelConfig &c);

}  // namespace metamol::model
