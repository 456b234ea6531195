//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/chem/smiles.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <utility>

#include "metamol/chem/aromaticity.h"
#include "metamol/chem/canonical.h"

namespace metamol::chem {

const char *to_string(SmilesErrorKind kind) {
  switch (kind) {
  case SmilesErrorKind::kEmpty:
    return "empty";
  case SmilesErrorKind::kDanglingBracket:
    return "dangling-bracket";
  case SmilesErrorKind::kSyntax:
    return "syntax";
  case SmilesErrorKind::kUnclosedRing:
    return "unclosed-ring";
  case SmilesErrorKind::kUnmatchedParenthesis:
    return "unmatched-parenthesis";
  case SmilesErrorKind::kUnknownElement:
    return "unknown-element";
  case SmilesErrorKind::kValenceOverflow:
    return "valence-overflow";
  case SmilesErrorKind::kAromaticity:
    return "aromaticity";
  case SmilesErrorKind::kMultipleComponents:
    return "multiple-components";
  }
  return "unknown";
}

SmilesError::SmilesError(SmilesErrorKind kind, std::size_t offset,
                         const std::string &msg)
    : std::runtime_error(std::string(to_string(kind)) + " at byte "
                         + std::to_string(offset) + ": " + msg),
      kind_(kind), offset_(offset) { }

std::vector<SmilesToken> lex_smiles(std::string_view text) {
  std::vector<SmilesToken> tokens;
  std::size_t i = 0;
  auto push = [&](std::size_t len, SmilesTokenKind kind) {
    tokens.push_back({ text.substr(i, len), i, kind });
    i += len;
  };
  while (i < text.size()) {
    const char c = text[i];
    const char next = i + 1 < text.size() ? text[i + 1] : '\0';
    if (c == '[') {
      std::size_t close = text.find(']', i);
      if (close == std::string_view::npos)
        throw SmilesError(SmilesErrorKind::kDanglingBracket, i,
                          "'[' without matching ']'");
      push(close - i + 1, SmilesTokenKind::kBracketAtom);
    } else if ((c == 'C' && next == 'l') || (c == 'B' && next == 'r')) {
      push(2, SmilesTokenKind::kAtom);
    } else if (std::string_view("BCNOPSFIbcnops").find(c)
               != std::string_view::npos) {
      push(1, SmilesTokenKind::kAtom);
    } else if (c == '%' && i + 2 < text.size()
               && std::isdigit(static_cast<unsigned char>(next))
               && std::isdigit(static_cast<unsigned char>(text[i + 2]))) {
      push(3, SmilesTokenKind::kRingBond);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      push(1, SmilesTokenKind::kRingBond);
    } else if (std::string_view("-=#$:/\\").find(c) != std::string_view::npos) {
      push(1, SmilesTokenKind::kBond);
    } else if (c == '(') {
      push(1, SmilesTokenKind::kBranchOpen);
    } else if (c == ')') {
      push(1, SmilesTokenKind::kBranchClose);
    } else if (c == '.') {
      push(1, SmilesTokenKind::kDot);
    } else {
      push(1, SmilesTokenKind::kOther);
    }
  }
  return tokens;
}

std::vector<std::string> tokenize_smiles(std::string_view text) {
  std::vector<std::string> out;
  for (const SmilesToken &t: lex_smiles(text))
    out.emplace_back(t.text);
  return out;
}

std::optional<int> organic_implicit_h(const Atom &atom, int bond_order_sum,
                                      bool has_double_bond) {
  const Element &e = atom.elem();
  const bool needs_pi = atom.aromatic && !has_double_bond;
  for (int v: e.organic_valences) {
    if (v < bond_order_sum)
      continue;
    if (needs_pi && v == bond_order_sum) {
      // The pi electron must come from a lone pair (pyrrole-type N, furan O)
      // or, for boron, an empty p orbital.
      if (e.outer_electrons - v >= 2 || e.atomic_number == 5)
        return 0;
      continue;
    }
    return v - bond_order_sum - (needs_pi ? 1 : 0);
  }
  return std::nullopt;
}

namespace {

struct PendingBond {
  int begin;
  int end;
  std::optional<BondOrder> order;  // nullopt: implicit
  std::size_t offset;
};

int parse_int(std::string_view s, std::size_t &pos) {
  int v = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    v = v * 10 + (s[pos++] - '0');
  return v;
}

Atom parse_bracket_atom(std::string_view tok, std::size_t offset) {
  Atom atom;
  atom.bracket = true;
  std::size_t pos = 1;
  const std::size_t end = tok.size() - 1;
  auto fail = [&](SmilesErrorKind kind, const std::string &msg) {
    throw SmilesError(kind, offset, msg + " in '" + std::string(tok) + "'");
  };

  if (pos < end && std::isdigit(static_cast<unsigned char>(tok[pos])))
    atom.isotope = parse_int(tok, pos);

  if (pos >= end || !std::isalpha(static_cast<unsigned char>(tok[pos])))
    fail(SmilesErrorKind::kSyntax, "missing element symbol");

  const Element *elem = nullptr;
  if (std::islower(static_cast<unsigned char>(tok[pos]))) {
    atom.aromatic = true;
    for (std::string_view sym: { "se", "as", "b", "c", "n", "o", "p", "s" }) {
      if (tok.substr(pos, sym.size()) == sym) {
        std::string upper(sym);
        upper[0] = static_cast<char>(std::toupper(upper[0]));
        elem = find_element(upper);
        pos += sym.size();
        break;
      }
    }
    if (elem == nullptr)
      fail(SmilesErrorKind::kUnknownElement, "unknown aromatic symbol");
  } else {
    std::size_t len = 1;
    if (pos + 1 < end && std::islower(static_cast<unsigned char>(tok[pos + 1])))
      len = 2;
    elem = find_element(tok.substr(pos, len));
    if (elem == nullptr)
      fail(SmilesErrorKind::kUnknownElement,
           "unsupported element '" + std::string(tok.substr(pos, len)) + "'");
    pos += len;
  }
  if (elem->atomic_number == 1)
    fail(SmilesErrorKind::kUnknownElement,
         "explicit hydrogen atoms are not supported");
  atom.atomic_number = elem->atomic_number;

  // Chirality is read and discarded.
  while (pos < end && tok[pos] == '@')
    ++pos;
  for (std::string_view cls: { "TH", "AL", "SP", "TB", "OH" }) {
    if (tok.substr(pos, 2) == cls) {
      pos += 2;
      parse_int(tok, pos);
      break;
    }
  }

  int h = 0;
  if (pos < end && tok[pos] == 'H') {
    ++pos;
    h = 1;
    if (pos < end && std::isdigit(static_cast<unsigned char>(tok[pos])))
      h = parse_int(tok, pos);
  }
  atom.explicit_h = h;

  if (pos < end && (tok[pos] == '+' || tok[pos] == '-')) {
    const char sign = tok[pos];
    int magnitude = 0;
    while (pos < end && tok[pos] == sign) {
      ++magnitude;
      ++pos;
    }
    if (magnitude == 1 && pos < end
        && std::isdigit(static_cast<unsigned char>(tok[pos])))
      magnitude = parse_int(tok, pos);
    atom.formal_charge = sign == '+' ? magnitude : -magnitude;
  }

  if (pos < end && tok[pos] == ':') {
    ++pos;
    parse_int(tok, pos);
  }
  if (pos != end)
    fail(SmilesErrorKind::kSyntax, "unexpected character");
  return atom;
}

Atom parse_organic_atom(std::string_view tok) {
  Atom atom;
  if (std::islower(static_cast<unsigned char>(tok[0]))) {
    atom.aromatic = true;
    std::string upper(tok);
    upper[0] = static_cast<char>(std::toupper(upper[0]));
    atom.atomic_number = find_element(upper)->atomic_number;
  } else {
    atom.atomic_number = find_element(tok)->atomic_number;
  }
  return atom;
}

std::optional<BondOrder> bond_symbol_order(char c, std::size_t offset) {
  switch (c) {
  case '-':
  case '/':
  case '\\':
    return BondOrder::kSingle;
  case '=':
    return BondOrder::kDouble;
  case '#':
    return BondOrder::kTriple;
  case ':':
    return BondOrder::kAromatic;
  default:
    throw SmilesError(SmilesErrorKind::kSyntax, offset,
                      std::string("unsupported bond symbol '") + c + "'");
  }
}

}  // namespace

MolGraph parse_smiles(std::string_view text) {
  if (text.empty())
    throw SmilesError(SmilesErrorKind::kEmpty, 0, "empty SMILES");
  const std::vector<SmilesToken> tokens = lex_smiles(text);

  std::vector<Atom> atoms;
  std::vector<std::size_t> atom_offsets;
  std::vector<PendingBond> pending;

  struct RingOpen {
    int atom;
    std::optional<BondOrder> order;
    std::size_t offset;
  };
  std::map<int, RingOpen> open_rings;
  std::vector<std::pair<int, std::size_t>> branches;
  int prev = -1;
  std::optional<std::pair<BondOrder, std::size_t>> bond;

  auto syntax = [](std::size_t off, const std::string &msg) {
    return SmilesError(SmilesErrorKind::kSyntax, off, msg);
  };
  auto has_edge = [&](int a, int b) {
    return std::any_of(pending.begin(), pending.end(), [&](const PendingBond &p) {
      return (p.begin == a && p.end == b) || (p.begin == b && p.end == a);
    });
  };

  for (const SmilesToken &tok: tokens) {
    switch (tok.kind) {
    case SmilesTokenKind::kAtom:
    case SmilesTokenKind::kBracketAtom: {
      Atom atom = tok.kind == SmilesTokenKind::kAtom
                      ? parse_organic_atom(tok.text)
                      : parse_bracket_atom(tok.text, tok.offset);
      if (atom.aromatic && !atom.elem().aromatic_capable)
        throw SmilesError(SmilesErrorKind::kAromaticity, tok.offset,
                          "element cannot be aromatic");
      const int idx = static_cast<int>(atoms.size());
      atoms.push_back(atom);
      atom_offsets.push_back(tok.offset);
      if (prev >= 0) {
        std::optional<BondOrder> order;
        if (bond)
          order = bond->first;
        pending.push_back({ prev, idx, order, tok.offset });
      } else if (bond) {
        throw syntax(bond->second, "bond without preceding atom");
      }
      bond.reset();
      prev = idx;
      break;
    }
    case SmilesTokenKind::kBond:
      if (prev < 0)
        throw syntax(tok.offset, "bond without preceding atom");
      if (bond)
        throw syntax(tok.offset, "two consecutive bond symbols");
      bond = std::make_pair(*bond_symbol_order(tok.text[0], tok.offset),
                            tok.offset);
      break;
    case SmilesTokenKind::kBranchOpen:
      if (prev < 0)
        throw syntax(tok.offset, "branch without preceding atom");
      if (bond)
        throw syntax(tok.offset, "bond symbol before branch");
      branches.emplace_back(prev, tok.offset);
      break;
    case SmilesTokenKind::kBranchClose:
      if (branches.empty())
        throw SmilesError(SmilesErrorKind::kUnmatchedParenthesis, tok.offset,
                          "')' without matching '('");
      if (bond)
        throw syntax(tok.offset, "dangling bond symbol in branch");
      prev = branches.back().first;
      branches.pop_back();
      break;
    case SmilesTokenKind::kRingBond: {
      if (prev < 0)
        throw syntax(tok.offset, "ring bond without preceding atom");
      int number = tok.text[0] == '%' ? (tok.text[1] - '0') * 10
                                            + (tok.text[2] - '0')
                                      : tok.text[0] - '0';
      std::optional<BondOrder> order;
      if (bond)
        order = bond->first;
      bond.reset();
      auto it = open_rings.find(number);
      if (it == open_rings.end()) {
        open_rings[number] = { prev, order, tok.offset };
        break;
      }
      const RingOpen ring = it->second;
      open_rings.erase(it);
      if (ring.atom == prev || has_edge(ring.atom, prev))
        throw syntax(tok.offset, "ring closure duplicates an existing bond");
      if (ring.order && order && *ring.order != *order)
        throw syntax(tok.offset, "conflicting ring-closure bond orders");
      pending.push_back({ ring.atom, prev, ring.order ? ring.order : order,
                          tok.offset });
      break;
    }
    case SmilesTokenKind::kDot:
      throw SmilesError(SmilesErrorKind::kMultipleComponents, tok.offset,
                        "multi-component SMILES are not supported");
    case SmilesTokenKind::kOther:
      if (tok.text == "*")
        throw SmilesError(SmilesErrorKind::kUnknownElement, tok.offset,
                          "wildcard atoms are not supported");
      throw syntax(tok.offset, "unexpected character '"
                                   + std::string(tok.text) + "'");
    }
  }
  if (bond)
    throw syntax(bond->second, "trailing bond symbol");
  if (!branches.empty())
    throw SmilesError(SmilesErrorKind::kUnmatchedParenthesis,
                      branches.back().second, "'(' without matching ')'");
  if (!open_rings.empty()) {
    auto first = std::min_element(
        open_rings.begin(), open_rings.end(),
        [](const auto &a, const auto &b) { return a.second.offset < b.second.offset; });
    throw SmilesError(SmilesErrorKind::kUnclosedRing, first->second.offset,
                      "ring bond " + std::to_string(first->first)
                          + " is never closed");
  }
  if (atoms.empty())
    throw syntax(0, "no atoms");

  // Implicit bonds between two aromatic atoms are aromatic only inside rings,
  // which needs ring perception on a provisional graph first.
  std::vector<Bond> bonds;
  bonds.reserve(pending.size());
  for (const PendingBond &p: pending) {
    BondOrder order = BondOrder::kSingle;
    if (p.order)
      order = *p.order;
    else if (atoms[p.begin].aromatic && atoms[p.end].aromatic)
      order = BondOrder::kAromatic;
    bonds.push_back({ p.begin, p.end, order, false });
  }
  MolGraph provisional(atoms, bonds);
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const Bond &b = provisional.bond(static_cast<int>(i));
    if (b.order != BondOrder::kAromatic || b.in_ring)
      continue;
    if (pending[i].order)
      throw SmilesError(SmilesErrorKind::kAromaticity, pending[i].offset,
                        "aromatic bond outside a ring");
    bonds[i].order = BondOrder::kSingle;
  }
  if (provisional.component_count() != 1)
    throw SmilesError(SmilesErrorKind::kMultipleComponents, 0,
                      "graph is disconnected");

  MolGraph typed(atoms, bonds);
  for (int i = 0; i < typed.atom_count(); ++i) {
    if (atoms[i].bracket)
      continue;
    std::optional<int> h =
        organic_implicit_h(atoms[i], typed.bond_order_sum(i),
                           typed.has_bond_of_order(i, BondOrder::kDouble));
    if (!h)
      throw SmilesError(SmilesErrorKind::kValenceOverflow, atom_offsets[i],
                        "bond orders exceed the allowed valence");
    atoms[i].implicit_h = *h;
  }

  MolGraph result(std::move(atoms), std::move(bonds));
  if (std::optional<int> bad = find_invalid_aromatic_atom(result))
    throw SmilesError(SmilesErrorKind::kAromaticity, atom_offsets[*bad],
                      "aromatic atom is not on a 4n+2 ring");
  return aromatize_kekule_rings(result);
}

std::optional<MolGraph> try_parse_smiles(std::string_view text,
                                         SmilesError *error) {
  try {
    return parse_smiles(text);
  } catch (const SmilesError &e) {
    if (error != nullptr)
      *error = e;
  } catch (const GraphError &e) {
    if (error != nullptr)
      *error = SmilesError(SmilesErrorKind::kSyntax, 0, e.what());
  }
  return std::nullopt;
}

namespace {

bool writable_as_organic(const MolGraph &g, int idx) {
  const Atom &a = g.atom(idx);
  if (a.formal_charge != 0 || a.isotope || a.elem().organic_valences.empty())
    return false;
  if (a.aromatic
      && std::string_view("BCNOPS").find(a.elem().symbol) == std::string_view::npos)
    return false;
  std::optional<int> h = organic_implicit_h(
      a, g.bond_order_sum(idx), g.has_bond_of_order(idx, BondOrder::kDouble));
  return h && *h == a.total_h();
}

void append_atom(std::string &out, const MolGraph &g, int idx) {
  const Atom &a = g.atom(idx);
  std::string symbol(a.elem().symbol);
  if (a.aromatic)
    symbol[0] = static_cast<char>(std::tolower(symbol[0]));
  if (writable_as_organic(g, idx)) {
    out += symbol;
    return;
  }
  out += '[';
  if (a.isotope)
    out += std::to_string(*a.isotope);
  out += symbol;
  if (a.total_h() > 0) {
    out += 'H';
    if (a.total_h() > 1)
      out += std::to_string(a.total_h());
  }
  if (a.formal_charge != 0) {
    out += a.formal_charge > 0 ? '+' : '-';
    if (std::abs(a.formal_charge) > 1)
      out += std::to_string(std::abs(a.formal_charge));
  }
  out += ']';
}

void append_bond(std::string &out, const MolGraph &g, int bond_idx) {
  const Bond &b = g.bond(bond_idx);
  switch (b.order) {
  case BondOrder::kSingle:
    if (g.atom(b.begin).aromatic && g.atom(b.end).aromatic)
      out += '-';
    break;
  case BondOrder::kDouble:
    out += '=';
    break;
  case BondOrder::kTriple:
    out += '#';
    break;
  case BondOrder::kAromatic:
    break;
  }
}

void append_ring_number(std::string &out, int number) {
  if (number < 10) {
    out += static_cast<char>('0' + number);
  } else {
    out += '%';
    out += std::to_string(number);
  }
}

}  // namespace

std::string write_smiles(const MolGraph &g) {
  const int n = g.atom_count();
  if (n == 0)
    return {};
  const std::vector<std::uint64_t> classes = refine_atom_classes(g);
  auto before = [&](int a, int b) {
    return std::make_pair(classes[a], a) < std::make_pair(classes[b], b);
  };

  // Pass 1: DFS order, tree children and ring-closure bonds.
  std::vector<int> order_index(n, -1);
  std::vector<std::vector<int>> children(n);
  std::vector<std::vector<int>> ring_bonds(n);
  std::vector<bool> bond_used(g.bond_count(), false);
  int counter = 0;
  int start = 0;
  for (int i = 1; i < n; ++i) {
    if (before(i, start))
      start = i;
  }
  std::vector<int> stack { start };
  // Iterative DFS with explicit neighbor cursors.
  std::vector<std::vector<int>> sorted_nbrs(n);
  for (int i = 0; i < n; ++i) {
    for (const Neighbor &nb: g.neighbors(i))
      sorted_nbrs[i].push_back(nb.atom);
    std::sort(sorted_nbrs[i].begin(), sorted_nbrs[i].end(), before);
  }
  std::vector<std::size_t> cursor(n, 0);
  order_index[start] = counter++;
  while (!stack.empty()) {
    int v = stack.back();
    if (cursor[v] == sorted_nbrs[v].size()) {
      stack.pop_back();
      continue;
    }
    int u = sorted_nbrs[v][cursor[v]++];
    int bi = g.find_bond(v, u);
    if (bond_used[bi])
      continue;
    bond_used[bi] = true;
    if (order_index[u] >= 0) {
      ring_bonds[u].push_back(bi);
      ring_bonds[v].push_back(bi);
      continue;
    }
    order_index[u] = counter++;
    children[v].push_back(u);
    stack.push_back(u);
  }

  // Pass 2: emit.
  std::string out;
  std::map<int, int> open_numbers;  // bond index -> ring number
  std::vector<bool> number_in_use(100, false);
  struct Frame {
    int atom;
    std::size_t next_child;
  };
  std::vector<Frame> frames;
  auto emit_atom = [&](int v) {
    append_atom(out, g, v);
    std::vector<int> rb = ring_bonds[v];
    std::sort(rb.begin(), rb.end(), [&](int x, int y) {
      return order_index[g.bond(x).other(v)] < order_index[g.bond(y).other(v)];
    });
    for (int bi: rb) {
      auto it = open_numbers.find(bi);
      if (it != open_numbers.end()) {
        append_bond(out, g, bi);
        append_ring_number(out, it->second);
        number_in_use[it->second] = false;
        open_numbers.erase(it);
      } else {
        int number = 1;
        while (number_in_use[number])
          ++number;
        number_in_use[number] = true;
        open_numbers[bi] = number;
        append_bond(out, g, bi);
        append_ring_number(out, number);
      }
    }
  };

  emit_atom(start);
  frames.push_back({ start, 0 });
  while (!frames.empty()) {
    Frame &f = frames.back();
    const std::vector<int> &kids = children[f.atom];
    if (f.next_child == kids.size()) {
      frames.pop_back();
      if (!frames.empty()
          && frames.back().next_child < children[frames.back().atom].size())
        out += ')';
      continue;
    }
    const int parent = f.atom;
    const int child = kids[f.next_child++];
    const bool branch = f.next_child < kids.size();
    if (branch)
      out += '(';
    append_bond(out, g, g.find_bond(parent, child));
    emit_atom(child);
    frames.push_back({ child, 0 });
  }
  return out;
}

}  // namespace metamol::chem
