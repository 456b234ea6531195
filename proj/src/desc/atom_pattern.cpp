//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/desc/atom_pattern.h"

#include <cctype>

#include "metamol/chem/element.h"

namespace metamol::desc {

using chem::BondOrder;

ExplicitHGraph ExplicitHGraph::from(const chem::MolGraph &g) {
  ExplicitHGraph out;
  const int n = g.atom_count();
  out.heavy_count = n;
  out.nodes.reserve(n);
  out.adjacency.resize(n);
  for (int i = 0; i < n; ++i) {
    const chem::Atom &a = g.atom(i);
    out.nodes.push_back(
      { a.atomic_number, a.aromatic, a.formal_charge, a.total_h(),
        a.degree + a.total_h() });
    for (const chem::Neighbor &nb: g.neighbors(i))
      out.adjacency[i].push_back({ nb.atom, g.bond(nb.bond).order });
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < g.atom(i).total_h(); ++k) {
      const int h = static_cast<int>(out.nodes.size());
      out.nodes.push_back({ 1, false, 0, 0, 1 });
      out.adjacency.push_back({ { i, BondOrder::kSingle } });
      out.adjacency[i].push_back({ h, BondOrder::kSingle });
    }
  }
  return out;
}

namespace {

enum class Prim {
  kTrue,
  kAtomicNum,
  kAromatic,
  kHCount,
  kConnections,
  kCharge,
};

struct Expr {
  enum Kind { kPrim, kNot, kAnd, kOr } kind = kPrim;
  Prim prim = Prim::kTrue;
  int value = 0;
  std::vector<Expr> kids;

  bool eval(const ExplicitHGraph::Node &a) const {
    switch (kind) {
    case kNot:
      return !kids[0].eval(a);
    case kAnd:
      for (const Expr &k: kids) {
        if (!k.eval(a))
          return false;
      }
      return true;
    case kOr:
      for (const Expr &k: kids) {
        if (k.eval(a))
          return true;
      }
      return false;
    case kPrim:
      break;
    }
    switch (prim) {
    case Prim::kTrue:
      return true;
    case Prim::kAtomicNum:
      return a.atomic_number == value;
    case Prim::kAromatic:
      return a.aromatic == (value != 0);
    case Prim::kHCount:
      return a.h_count == value;
    case Prim::kConnections:
      return a.connections == value;
    case Prim::kCharge:
      return a.formal_charge == value;
    }
    return false;
  }
};

Expr prim(Prim p, int v) {
  Expr e;
  e.prim = p;
  e.value = v;
  return e;
}

Expr combine(Expr::Kind kind, Expr a, Expr b) {
  Expr e;
  e.kind = kind;
  e.kids.push_back(std::move(a));
  e.kids.push_back(std::move(b));
  return e;
}

Expr element_expr(int z, bool aromatic) {
  return combine(Expr::kAnd, prim(Prim::kAtomicNum, z),
                 prim(Prim::kAromatic, aromatic ? 1 : 0));
}

enum class BondTest { kDefault, kSingle, kDouble, kTriple, kAromatic, kAny };

bool bond_matches(BondTest t, BondOrder o) {
  switch (t) {
  case BondTest::kDefault:
    return o == BondOrder::kSingle || o == BondOrder::kAromatic;
  case BondTest::kSingle:
    return o == BondOrder::kSingle;
  case BondTest::kDouble:
    return o == BondOrder::kDouble;
  case BondTest::kTriple:
    return o == BondOrder::kTriple;
  case BondTest::kAromatic:
    return o == BondOrder::kAromatic;
  case BondTest::kAny:
    return true;
  }
  return false;
}

struct Node {
  Expr expr;
  int parent;
  BondTest bond;
};

class Parser {
public:
  explicit Parser(std::string_view s): s_(s) { }

  std::vector<Node> parse() {
    if (s_.empty())
      fail("empty pattern");
    add_atom(-1, BondTest::kDefault);
    chain(0);
    if (pos_ != s_.size())
      fail("unexpected character");
    return std::move(nodes_);
  }

private:
  [[noreturn]] void fail(const char *what) const {
    throw PatternError(std::string(what) + " at offset " + std::to_string(pos_)
                       + " in '" + std::string(s_) + "'");
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void chain(int prev) {
    while (!at_end() && peek() != ')') {
      if (peek() == '(') {
        ++pos_;
        BondTest b = bond();
        int child = add_atom(prev, b);
        chain(child);
        if (peek() != ')')
          fail("unclosed branch");
        ++pos_;
      } else {
        BondTest b = bond();
        prev = add_atom(prev, b);
      }
    }
  }

  BondTest bond() {
    switch (peek()) {
    case '-': ++pos_; return BondTest::kSingle;
    case '=': ++pos_; return BondTest::kDouble;
    case '#': ++pos_; return BondTest::kTriple;
    case ':': ++pos_; return BondTest::kAromatic;
    case '~': ++pos_; return BondTest::kAny;
    default: return BondTest::kDefault;
    }
  }

  int add_atom(int parent, BondTest b) {
    Expr e;
    if (peek() == '[') {
      ++pos_;
      e = low_and();
      if (peek() != ']')
        fail("expected ']'");
      ++pos_;
    } else {
      e = bare_atom();
    }
    nodes_.push_back({ std::move(e), parent, b });
    return static_cast<int>(nodes_.size()) - 1;
  }

  Expr bare_atom() {
    const char c = peek();
    if (c == '*') {
      ++pos_;
      return prim(Prim::kTrue, 0);
    }
    if (c == 'a' || c == 'A') {
      ++pos_;
      return prim(Prim::kAromatic, c == 'a' ? 1 : 0);
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string_view sym = s_.substr(pos_, 1);
      if (pos_ + 1 < s_.size()) {
        std::string_view two = s_.substr(pos_, 2);
        if (two == "Cl" || two == "Br")
          sym = two;
      }
      const chem::Element *el = chem::find_element(sym);
      if (!el)
        fail("unknown element");
      pos_ += sym.size();
      return element_expr(el->atomic_number, false);
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string up(1, static_cast<char>(std::toupper(c)));
      const chem::Element *el = chem::find_element(up);
      if (!el)
        fail("unknown aromatic element");
      ++pos_;
      return element_expr(el->atomic_number, true);
    }
    fail("expected atom");
  }

  Expr low_and() {
    Expr e = or_expr();
    while (peek() == ';') {
      ++pos_;
      e = combine(Expr::kAnd, std::move(e), or_expr());
    }
    return e;
  }

  Expr or_expr() {
    Expr e = high_and();
    while (peek() == ',') {
      ++pos_;
      e = combine(Expr::kOr, std::move(e), high_and());
    }
    return e;
  }

  Expr high_and() {
    Expr e = unary();
    for (;;) {
      const char c = peek();
      if (c == '&') {
        ++pos_;
      } else if (c == '\0' || c == ';' || c == ',' || c == ']') {
        break;
      }
      e = combine(Expr::kAnd, std::move(e), unary());
    }
    return e;
  }

  Expr unary() {
    if (peek() == '!') {
      ++pos_;
      Expr e;
      e.kind = Expr::kNot;
      e.kids.push_back(unary());
      return e;
    }
    return primitive();
  }

  int number(int fallback) {
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      return fallback;
    int v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + (s_[pos_++] - '0');
    return v;
  }

  Expr primitive() {
    const char c = peek();
    if (c == '\0')
      fail("truncated atom expression");
    if (c == '#') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        fail("expected atomic number");
      return prim(Prim::kAtomicNum, number(0));
    }
    if (c == '+' || c == '-') {
      const int sign = c == '+' ? 1 : -1;
      ++pos_;
      if (std::isdigit(static_cast<unsigned char>(peek())))
        return prim(Prim::kCharge, sign * number(0));
      int count = 1;
      while (peek() == c) {
        ++pos_;
        ++count;
      }
      return prim(Prim::kCharge, sign * count);
    }
    if (c == 'H') {
      ++pos_;
      return prim(Prim::kHCount, number(1));
    }
    if (c == 'X' || c == 'D') {
      // Hydrogens are real atoms in the target graph, so D and X coincide.
      ++pos_;
      return prim(Prim::kConnections, number(1));
    }
    if (c == 'a' || c == 'A') {
      const bool arsenic = c == 'A' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 's';
      if (!arsenic) {
        ++pos_;
        return prim(Prim::kAromatic, c == 'a' ? 1 : 0);
      }
    }
    if (c == '*') {
      ++pos_;
      return prim(Prim::kTrue, 0);
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (pos_ + 1 < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_ + 1]))) {
        if (const chem::Element *el = chem::find_element(s_.substr(pos_, 2))) {
          pos_ += 2;
          return element_expr(el->atomic_number, false);
        }
      }
      const chem::Element *el = chem::find_element(s_.substr(pos_, 1));
      if (!el)
        fail("unknown element");
      ++pos_;
      return element_expr(el->atomic_number, false);
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      for (std::size_t len: { 2, 1 }) {
        if (pos_ + len > s_.size())
          continue;
        std::string sym(s_.substr(pos_, len));
        sym[0] = static_cast<char>(std::toupper(sym[0]));
        const chem::Element *el = chem::find_element(sym);
        if (el && el->aromatic_capable) {
          pos_ += len;
          return element_expr(el->atomic_number, true);
        }
      }
      fail("unknown aromatic element");
    }
    fail("unsupported primitive");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace

struct AtomPattern::Impl {
  std::vector<Node> nodes;

  bool extend(const ExplicitHGraph &g, std::vector<int> &map,
              std::vector<char> &used, std::size_t k) const {
    if (k == nodes.size())
      return true;
    const Node &node = nodes[k];
    for (const ExplicitHGraph::Edge &e: g.adjacency[map[node.parent]]) {
      if (used[e.atom] || !bond_matches(node.bond, e.order)
          || !node.expr.eval(g.nodes[e.atom]))
        continue;
      map[k] = e.atom;
      used[e.atom] = 1;
      const bool ok = extend(g, map, used, k + 1);
      used[e.atom] = 0;
      if (ok)
        return true;
    }
    return false;
  }
};

AtomPattern::AtomPattern(std::string_view text)
  : text_(text), impl_(std::make_unique<Impl>()) {
  impl_->nodes = Parser(text).parse();
}

AtomPattern::~AtomPattern() = default;
AtomPattern::AtomPattern(AtomPattern &&) noexcept = default;
AtomPattern &AtomPattern::operator=(AtomPattern &&) noexcept = default;

bool AtomPattern::matches_at(const ExplicitHGraph &g, int root) const {
  const std::vector<Node> &nodes = impl_->nodes;
  if (!nodes[0].expr.eval(g.nodes[root]))
    return false;
  if (nodes.size() == 1)
    return true;
  std::vector<int> map(nodes.size(), -1);
  std::vector<char> used(g.nodes.size(), 0);
  map[0] = root;
  used[root] = 1;
  return impl_->extend(g, map, used, 1);
}

}  // namespace metamol::desc
