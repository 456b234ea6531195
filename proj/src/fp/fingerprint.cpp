//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/fp/fingerprint.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "../desc/param_tables.h"
#include "metamol/desc/atom_pattern.h"
#include "metamol/util/hash.h"

namespace metamol::fp {
namespace {

using Ids = std::vector<std::uint64_t>;
using BondSet = std::vector<std::uint64_t>;

void check_bits(int nbits) {
  if (nbits != kFingerprintBits)
    throw FingerprintError("fingerprints are " + std::to_string(kFingerprintBits) + " bits");
}

void check_range(const char *what, int value, int lo, int hi) {
  if (value < lo || value > hi)
    throw FingerprintError(std::string(what) + " must be in [" + std::to_string(lo) + ","
                           + std::to_string(hi) + "]");
}

std::uint8_t order_code(chem::BondOrder o) {
  return static_cast<std::uint8_t>(o);
}

struct FeatureRule {
  std::uint8_t bit;
  desc::AtomPattern pattern;
};

std::vector<FeatureRule> load_feature_rules() {
  static const std::map<std::string_view, std::uint8_t> kBits {
    { "donor", kDonor },       { "acceptor", kAcceptor }, { "negative", kNegative },
    { "positive", kPositive }, { "aromatic", kAromatic }, { "halogen", kHalogen },
  };
  std::vector<FeatureRule> rules;
  for (const auto &row: desc::internal::split_table(desc::internal::fcfp_feature_table_text())) {
    auto it = kBits.find(row.at(0));
    if (row.size() != 2 || it == kBits.end())
      throw FingerprintError("malformed FCFP feature table");
    rules.push_back({ it->second, desc::AtomPattern(row[1]) });
  }
  return rules;
}

const std::vector<FeatureRule> &feature_rules() {
  static const std::vector<FeatureRule> r = load_feature_rules();
  return r;
}

// Morgan iteration from the given initial invariants. Identifiers whose
// bond environment repeats one already emitted are dropped.
Ids morgan(const chem::MolGraph &g, std::vector<std::uint64_t> ids, int radius) {
  const int n = g.atom_count();
  const std::size_t words = (static_cast<std::size_t>(g.bond_count()) + 63) / 64;
  std::set<std::uint64_t> out(ids.begin(), ids.end());
  std::vector<BondSet> env(n, BondSet(words, 0));
  std::set<BondSet> seen;

  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    std::vector<BondSet> next_env = env;
    for (int a = 0; a < n; ++a) {
      std::vector<std::pair<std::uint8_t, std::uint64_t>> nbrs;
      for (const chem::Neighbor &nb: g.neighbors(a)) {
        nbrs.emplace_back(order_code(g.bond(nb.bond).order), ids[nb.atom]);
        next_env[a][nb.bond / 64] |= std::uint64_t { 1 } << (nb.bond % 64);
        for (std::size_t w = 0; w < words; ++w)
          next_env[a][w] |= env[nb.atom][w];
      }
      std::sort(nbrs.begin(), nbrs.end());
      Fnv1a h;
      h.add(static_cast<std::uint32_t>(r)).add(ids[a]);
      for (auto [o, id]: nbrs)
        h.add(o).add(id);
      next[a] = h.value();
    }
    std::vector<std::pair<BondSet, std::uint64_t>> round;
    for (int a = 0; a < n; ++a)
      round.emplace_back(next_env[a], next[a]);
    std::sort(round.begin(), round.end());
    for (std::size_t i = 0; i < round.size(); ++i) {
      if (i > 0 && round[i].first == round[i - 1].first)
        continue;
      if (seen.insert(round[i].first).second)
        out.insert(round[i].second);
    }
    ids = std::move(next);
    env = std::move(next_env);
  }
  return Ids(out.begin(), out.end());
}

void collect_paths(const chem::MolGraph &g, int max_length, std::vector<int> &atoms,
                   std::vector<std::uint8_t> &orders, std::vector<char> &on_path,
                   std::set<std::uint64_t> &out) {
  const int last = atoms.back();
  for (const chem::Neighbor &nb: g.neighbors(last)) {
    if (on_path[nb.atom])
      continue;
    atoms.push_back(nb.atom);
    orders.push_back(order_code(g.bond(nb.bond).order));
    on_path[nb.atom] = 1;

    // element, order, element, ... read in both directions
    std::vector<int> fwd, rev;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      fwd.push_back(g.atom(atoms[i]).atomic_number);
      if (i < orders.size())
        fwd.push_back(orders[i]);
    }
    rev.assign(fwd.rbegin(), fwd.rend());
    const std::vector<int> &canon = std::min(fwd, rev);
    Fnv1a h;
    h.add(static_cast<std::uint32_t>(orders.size()));
    for (int x: canon)
      h.add(static_cast<std::uint32_t>(x));
    out.insert(h.value());

    if (static_cast<int>(orders.size()) < max_length)
      collect_paths(g, max_length, atoms, orders, on_path, out);
    on_path[nb.atom] = 0;
    orders.pop_back();
    atoms.pop_back();
  }
}

}  // namespace

const char *to_string(FingerprintKind kind) {
  switch (kind) {
  case FingerprintKind::kECFP: return "ECFP";
  case FingerprintKind::kFCFP: return "FCFP";
  case FingerprintKind::kPath: return "PATH";
  }
  return "?";
}

std::optional<FingerprintKind> parse_kind(std::string_view name) {
  for (FingerprintKind k: { FingerprintKind::kECFP, FingerprintKind::kFCFP, FingerprintKind::kPath }) {
    if (name == to_string(k))
      return k;
  }
  return std::nullopt;
}

std::string Fingerprint::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (int k = 0; k < kFingerprintBits / 4; ++k) {
    int v = 0;
    for (int b = 0; b < 4; ++b)
      v |= bits[4 * k + b] ? 1 << b : 0;
    out += kDigits[v];
  }
  return out;
}

Fingerprint Fingerprint::from_hex(FingerprintKind kind, int parameter, std::string_view hex) {
  if (hex.size() != kFingerprintBits / 4)
    throw FingerprintError("expected " + std::to_string(kFingerprintBits / 4) + " hex digits");
  Fingerprint fp { kind, parameter, {} };
  for (int k = 0; k < kFingerprintBits / 4; ++k) {
    const char c = hex[k];
    int v;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'a' && c <= 'f')
      v = c - 'a' + 10;
    else
      throw FingerprintError("bad hex digit");
    for (int b = 0; b < 4; ++b)
      fp.bits[4 * k + b] = (v >> b) & 1;
  }
  return fp;
}

std::vector<std::uint8_t> feature_classes(const chem::MolGraph &g) {
  const desc::ExplicitHGraph h = desc::ExplicitHGraph::from(g);
  std::vector<std::uint8_t> out(g.atom_count(), 0);
  for (int i = 0; i < g.atom_count(); ++i) {
    for (const FeatureRule &r: feature_rules()) {
      if (!(out[i] & r.bit) && r.pattern.matches_at(h, i))
        out[i] |= r.bit;
    }
  }
  return out;
}

std::vector<std::uint64_t> ecfp_identifiers(const chem::MolGraph &g, int radius) {
  check_range("ECFP radius", radius, 0, 4);
  std::vector<std::uint64_t> ids(g.atom_count());
  for (int i = 0; i < g.atom_count(); ++i) {
    const chem::Atom &a = g.atom(i);
    ids[i] = Fnv1a()
               .add(static_cast<std::uint8_t>(a.atomic_number))
               .add(static_cast<std::uint8_t>(a.degree))
               .add(static_cast<std::uint8_t>(a.total_h()))
               .add(static_cast<std::int8_t>(a.formal_charge))
               .add(static_cast<std::uint8_t>(a.aromatic))
               .add(static_cast<std::uint8_t>(g.atom_in_ring(i)))
               .value();
  }
  return morgan(g, std::move(ids), radius);
}

std::vector<std::uint64_t> fcfp_identifiers(const chem::MolGraph &g, int radius) {
  check_range("FCFP radius", radius, 0, 6);
  const std::vector<std::uint8_t> cls = feature_classes(g);
  std::vector<std::uint64_t> ids(g.atom_count());
  for (int i = 0; i < g.atom_count(); ++i)
    ids[i] = Fnv1a().add(std::uint8_t { 0xfc }).add(cls[i]).value();
  return morgan(g, std::move(ids), radius);
}

std::vector<std::uint64_t> path_identifiers(const chem::MolGraph &g, int max_length) {
  check_range("path length", max_length, 1, 7);
  std::set<std::uint64_t> out;
  std::vector<char> on_path(g.atom_count(), 0);
  for (int start = 0; start < g.atom_count(); ++start) {
    std::vector<int> atoms { start };
    std::vector<std::uint8_t> orders;
    on_path[start] = 1;
    collect_paths(g, max_length, atoms, orders, on_path, out);
    on_path[start] = 0;
  }
  return Ids(out.begin(), out.end());
}

Fingerprint fold(FingerprintKind kind, int parameter, std::span<const std::uint64_t> ids) {
  Fingerprint fp { kind, parameter, {} };
  for (std::uint64_t id: ids)
    fp.bits.set(id % kFingerprintBits);
  return fp;
}

Fingerprint ecfp(const chem::MolGraph &g, int radius, int nbits) {
  check_bits(nbits);
  return fold(FingerprintKind::kECFP, radius, ecfp_identifiers(g, radius));
}

Fingerprint fcfp(const chem::MolGraph &g, int radius, int nbits) {
  check_bits(nbits);
  return fold(FingerprintKind::kFCFP, radius, fcfp_identifiers(g, radius));
}

Fingerprint path_fp(const chem::MolGraph &g, int max_length, int nbits) {
  check_bits(nbits);
  return fold(FingerprintKind::kPath, max_length, path_identifiers(g, max_length));
}

Fingerprint compute_fingerprint(FingerprintKind kind, const chem::MolGraph &g, int parameter) {
  switch (kind) {
  case FingerprintKind::kECFP: return ecfp(g, parameter);
  case FingerprintKind::kFCFP: return fcfp(g, parameter);
  case FingerprintKind::kPath: return path_fp(g, parameter);
  }
  throw FingerprintError("unknown fingerprint kind");
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.kind != b.kind || a.parameter != b.parameter)
    throw FingerprintError("tanimoto needs fingerprints of the same kind and parameter");
  const std::size_t both = (a.bits & b.bits).count();
  const std::size_t any = (a.bits | b.bits).count();
  return any == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(any);
}

}  // namespace metamol::fp
