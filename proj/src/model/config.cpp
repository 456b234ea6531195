//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/model/config.h"

#include <fstream>
#include <sstream>

namespace metamol::model {
namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

int to_int(const std::string &key, const std::string &v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw ConfigError("bad integer for " + key + ": " + v);
  return out;
}

}  // namespace

void ModelConfig::validate() const {
  if (layers <= 0 || heads <= 0 || d_model <= 0 || d_head <= 0 || ffn_dim <= 0 || vocab_size <= 0
      || max_len <= 0 || !(rope_base > 0))
    throw ConfigError("model sizes must be positive");
  if (d_head % 2 != 0)
    throw ConfigError("rotary embedding needs an even head dimension");
  if (heads * d_head != d_model)
    throw ConfigError("d_model must equal heads * d_head");
}

ModelConfig preset(std::string_view name) {
  ModelConfig c;
  if (name == "tiny") {
    c = { 2, 2, 16, 8, 48, 50, 512, 10000.0 };
  } else if (name == "small") {
    c = { 4, 4, 128, 32, 384, 50, 512, 10000.0 };
  } else if (name == "full") {
    c = { 12, 12, 768, 64, 2560, 50, 512, 10000.0 };
  } else {
    throw ConfigError("unknown preset " + std::string(name));
  }
  return c;
}

ModelConfig parse_config(std::istream &in) {
  ModelConfig c = preset("tiny");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "preset")
      c = preset(value);
    else if (key == "layers")
      c.layers = to_int(key, value);
    else if (key == "heads")
      c.heads = to_int(key, value);
    else if (key == "d_model")
      c.d_model = to_int(key, value);
    else if (key == "d_head")
      c.d_head = to_int(key, value);
    else if (key == "ffn_dim")
      c.ffn_dim = to_int(key, value);
    else if (key == "vocab_size")
      c.vocab_size = to_int(key, value);
    else if (key == "max_len")
      c.max_len = to_int(key, value);
    else if (key == "rope_base") {
      try {
        c.rope_base = std::stod(value);
      } catch (const std::exception &) {
        throw ConfigError("bad rope_base: " + value);
      }
    } else {
      throw ConfigError("unknown config key " + key);
    }
  }
  c.validate();
  return c;
}

ModelConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config " + path);
  return parse_config(in);
}

std::string to_text(const ModelConfig &c) {
  std::ostringstream out;
  out << "layers=" << c.layers << "\nheads=" << c.heads << "\nd_model=" << c.d_model
      << "\nd_head=" << c.d_head << "\nffn_dim=" << c.ffn_dim << "\nvocab_size=" << c.vocab_size
      << "\nmax_len=" << c.max_len << "\nrope_base=" << c.rope_base << "\n";
  return out.str();
}

}  // namespace metamol::model
