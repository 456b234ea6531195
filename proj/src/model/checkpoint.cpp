//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/model/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace metamol::model {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little endian");

template <class U>
void put(std::ostream &out, U v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof v);
}

template <class U>
U get(std::istream &in) {
  U v {};
  if (!in.read(reinterpret_cast<char *>(&v), sizeof v))
    throw CheckpointError("truncated checkpoint");
  return v;
}

nlohmann::json config_json(const ModelConfig &c) {
  return { { "layers", c.layers },   { "heads", c.heads },           { "d_model", c.d_model },
           { "d_head", c.d_head },   { "ffn_dim", c.ffn_dim },       { "vocab_size", c.vocab_size },
           { "max_len", c.max_len }, { "rope_base", c.rope_base } };
}

ModelConfig config_from(const nlohmann::json &j) {
  ModelConfig c;
  c.layers = j.at("layers");
  c.heads = j.at("heads");
  c.d_model = j.at("d_model");
  c.d_head = j.at("d_head");
  c.ffn_dim = j.at("ffn_dim");
  c.vocab_size = j.at("vocab_size");
  c.max_len = j.at("max_len");
  c.rope_base = j.at("rope_base");
  c.validate();
  return c;
}

}  // namespace

const CheckpointBlock *Checkpoint::find(std::string_view name) const {
  for (const CheckpointBlock &b: blocks) {
    if (b.name == name)
      return &b;
  }
  return nullptr;
}

template <class T>
void Checkpoint::add_params(const Params<T> &p, const std::string &prefix) {
  for (const BlockInfo &info: p.blocks()) {
    CheckpointBlock b { prefix + info.name, info.rows, info.cols, {} };
    b.data.assign(p.data().begin() + info.offset, p.data().begin() + info.offset + info.size());
    blocks.push_back(std::move(b));
  }
}

template <class T>
Params<T> Checkpoint::params(const std::string &prefix) const {
  Params<T> p(config);
  for (const BlockInfo &info: p.blocks()) {
    const CheckpointBlock *b = find(prefix + info.name);
    if (!b)
      throw CheckpointError("checkpoint lacks block " + prefix + info.name);
    if (b->rows != info.rows || b->cols != info.cols)
      throw CheckpointError("block " + b->name + " has the wrong shape");
    for (std::size_t k = 0; k < info.size(); ++k)
      p.data()[info.offset + k] = static_cast<T>(b->data[k]);
  }
  return p;
}

template void Checkpoint::add_params<float>(const Params<float> &, const std::string &);
template void Checkpoint::add_params<double>(const Params<double> &, const std::string &);
template Params<float> Checkpoint::params<float>(const std::string &) const;
template Params<double> Checkpoint::params<double>(const std::string &) const;

void write_checkpoint(std::ostream &out, const Checkpoint &c) {
  if (c.precision_bytes != 4 && c.precision_bytes != 8)
    throw CheckpointError("precision must be 4 or 8 bytes");
  nlohmann::json header;
  header["config"] = config_json(c.config);
  header["vocab"] = c.vocab;
  header["step"] = c.step;
  header["precision_bytes"] = c.precision_bytes;
  try {
    header["metadata"] = nlohmann::json::parse(c.metadata);
  } catch (const nlohmann::json::exception &) {
    throw CheckpointError("checkpoint metadata is not JSON");
  }
  nlohmann::json table = nlohmann::json::array();
  for (const CheckpointBlock &b: c.blocks) {
    if (b.data.size() != static_cast<std::size_t>(b.rows) * b.cols)
      throw CheckpointError("block " + b.name + " size mismatch");
    table.push_back({ { "name", b.name }, { "rows", b.rows }, { "cols", b.cols } });
  }
  header["blocks"] = table;
  const std::string text = header.dump();
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const CheckpointBlock &b: c.blocks) {
    for (double v: b.data) {
      if (c.precision_bytes == 4)
        put<float>(out, static_cast<float>(v));
      else
        put<double>(out, v);
    }
  }
  if (!out)
    throw CheckpointError("checkpoint write failed");
}

Checkpoint read_checkpoint(std::istream &in) {
  char magic[sizeof kCheckpointMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
    throw CheckpointError("not a checkpoint (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  const auto length = get<std::uint64_t>(in);
  if (length > (1ULL << 30))
    throw CheckpointError("checkpoint header too large");
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length)))
    throw CheckpointError("truncated checkpoint header");
  Checkpoint c;
  try {
    const nlohmann::json header = nlohmann::json::parse(text);
    c.config = config_from(header.at("config"));
    c.vocab = header.at("vocab").get<std::vector<std::string>>();
    c.step = header.at("step");
    c.precision_bytes = header.at("precision_bytes");
    c.metadata = header.at("metadata").dump();
    for (const auto &b: header.at("blocks"))
      c.blocks.push_back({ b.at("name"), b.at("rows"), b.at("cols"), {} });
  } catch (const nlohmann::json::exception &e) {
    throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
  } catch (const ConfigError &e) {
    throw CheckpointError(std::string("bad checkpoint config: ") + e.what());
  }
  if (c.precision_bytes != 4 && c.precision_bytes != 8)
    throw CheckpointError("bad checkpoint precision");
  for (CheckpointBlock &b: c.blocks) {
    if (b.rows < 0 || b.cols < 0)
      throw CheckpointError("negative block shape");
    b.data.resize(static_cast<std::size_t>(b.rows) * b.cols);
    for (double &v: b.data)
      v = c.precision_bytes == 4 ? static_cast<double>(get<float>(in)) : get<double>(in);
  }
  return c;
}

void save_checkpoint(const std::string &path, const Checkpoint &c) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out)
      throw CheckpointError("cannot write " + tmp);
    write_checkpoint(out, c);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw CheckpointError("cannot rename " + tmp + " to " + path);
}

Checkpoint load_checkpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CheckpointError("cannot open checkpoint " + path);
  return read_checkpoint(in);
}

}  // namespace metamol::model
