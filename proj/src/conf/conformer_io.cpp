//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/conf/conformer_io.h"

#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace metamol::conf {
namespace {

using nlohmann::json;

bool parse_atom_line(const std::string &line, std::string &symbol, Eigen::Vector3d &p) {
  std::istringstream ls(line);
  double x, y, z;
  if (!(ls >> symbol >> x >> y >> z))
    return false;
  std::string rest;
  if (ls >> rest)
    return false;
  p = { x, y, z };
  return true;
}

bool is_count_line(const std::string &line, int &count) {
  std::istringstream ls(line);
  std::string rest;
  return (ls >> count) && !(ls >> rest) && count >= 0;
}

bool blank(const std::string &s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

double finite_number(const json &v) {
  if (!v.is_number())
    throw ConformerError("coordinate is not a number");
  return v.get<double>();
}

}  // namespace

std::vector<LabelledConformer> read_xyz(std::istream &in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    lines.push_back(line);
  std::vector<LabelledConformer> out;
  std::size_t i = 0;
  while (i < lines.size() && blank(lines[i]))
    ++i;
  if (i == lines.size())
    return out;
  int count = 0;
  if (!is_count_line(lines[i], count)) {
    LabelledConformer c;
    for (; i < lines.size(); ++i) {
      if (blank(lines[i]))
        continue;
      std::string sym;
      Eigen::Vector3d p;
      if (!parse_atom_line(lines[i], sym, p))
        throw ConformerError("xyz line " + std::to_string(i + 1) + ": expected 'symbol x y z'");
      c.symbols.push_back(sym);
      c.conformer.coords.push_back(p);
    }
    out.push_back(std::move(c));
    return out;
  }
  while (i < lines.size()) {
    if (blank(lines[i])) {
      ++i;
      continue;
    }
    if (!is_count_line(lines[i], count))
      throw ConformerError("xyz line " + std::to_string(i + 1) + ": expected atom count");
    if (i + 2 + static_cast<std::size_t>(count) > lines.size())
      throw ConformerError("xyz block at line " + std::to_string(i + 1) + " is truncated");
    i += 2;
    LabelledConformer c;
    for (int k = 0; k < count; ++k, ++i) {
      std::string sym;
      Eigen::Vector3d p;
      if (!parse_atom_line(lines[i], sym, p))
        throw ConformerError("xyz line " + std::to_string(i + 1) + ": expected 'symbol x y z'");
      c.symbols.push_back(sym);
      c.conformer.coords.push_back(p);
    }
    out.push_back(std::move(c));
  }
  return out;
}

void write_xyz(std::ostream &out, const LabelledConformer &c) {
  out << c.conformer.size() << '\n' << c.smiles << '\n';
  char buf[128];
  for (std::size_t i = 0; i < c.conformer.size(); ++i) {
    const Eigen::Vector3d &p = c.conformer.coords[i];
    const std::string sym = i < c.symbols.size() ? c.symbols[i] : "X";
    std::snprintf(buf, sizeof buf, "%-2s %.10f %.10f %.10f\n", sym.c_str(), p.x(), p.y(), p.z());
    out << buf;
  }
}

std::vector<LabelledConformer> read_conformer_jsonl(std::istream &in) {
  std::vector<LabelledConformer> out;
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (blank(line))
      continue;
    try {
      const json j = json::parse(line);
      LabelledConformer c;
      c.smiles = j.at("smiles").get<std::string>();
      for (const json &p: j.at("coords")) {
        if (!p.is_array() || p.size() != 3)
          throw ConformerError("coordinate must have three components");
        c.conformer.coords.emplace_back(finite_number(p[0]), finite_number(p[1]),
                                        finite_number(p[2]));
      }
      out.push_back(std::move(c));
    } catch (const json::exception &e) {
      throw ConformerError("conformer line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ConformerError &e) {
      throw ConformerError("conformer line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_conformer_jsonl(std::ostream &out, const LabelledConformer &c) {
  json coords = json::array();
  for (const Eigen::Vector3d &p: c.conformer.coords)
    coords.push_back({ p.x(), p.y(), p.z() });
  out << json { { "smiles", c.smiles }, { "coords", coords } }.dump() << '\n';
}

std::vector<LabelledInternal> read_internal_jsonl(std::istream &in) {
  std::vector<LabelledInternal> out;
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (blank(line))
      continue;
    try {
      const json j = json::parse(line);
      LabelledInternal li;
      li.smiles = j.value("smiles", "");
      const json &recs = j.at("records");
      li.internal.records.resize(recs.size());
      for (std::size_t i = 0; i < recs.size(); ++i) {
        const json &f = recs[i];
        InternalRecord &r = li.internal.records[i];
        if (!f.is_array() || static_cast<int>(f.size()) != InternalRecord::arity(i))
          throw ConformerError("record " + std::to_string(i) + " has the wrong field count");
        if (f.size() == 1) {
          r.d = finite_number(f[0]);
        } else if (f.size() == 2) {
          r.d = finite_number(f[0]);
          r.alpha = finite_number(f[1]);
        } else if (f.size() == 3) {
          r.alpha = finite_number(f[0]);
          r.beta = finite_number(f[1]);
          r.d = finite_number(f[2]);
        }
      }
      for (const json &k: j.value("degenerate", json::array())) {
        const std::size_t idx = k.get<std::size_t>();
        if (idx >= li.internal.size())
          throw ConformerError("degenerate index out of range");
        li.internal.records[idx].degenerate = true;
      }
      out.push_back(std::move(li));
    } catch (const json::exception &e) {
      throw ConformerError("internal line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ConformerError &e) {
      throw ConformerError("internal line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_internal_jsonl(std::ostream &out, const LabelledInternal &c) {
  json recs = json::array();
  json degenerate = json::array();
  for (std::size_t i = 0; i < c.internal.size(); ++i) {
    const InternalRecord &r = c.internal.records[i];
    switch (InternalRecord::arity(i)) {
    case 0: recs.push_back(json::array()); break;
    case 1: recs.push_back({ r.d }); break;
    case 2: recs.push_back({ r.d, r.alpha }); break;
    default: recs.push_back({ r.alpha, r.beta, r.d }); break;
    }
    if (r.degenerate)
      degenerate.push_back(i);
  }
  json j { { "smiles", c.smiles }, { "records", recs } };
  if (!degenerate.empty())
    j["degenerate"] = degenerate;
  out << j.dump() << '\n';
}

}  // namespace metamol::conf
