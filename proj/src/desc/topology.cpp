//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include "metamol/chem/element.h"
#include "metamol/chem/hybridization.h"
#include "metamol/desc/descriptors.h"

namespace metamol::desc {
namespace {

using chem::Hybridization;

// Valence delta: (Zv - h) for the first row, (Zv - h) / (Z - Zv - 1) below.
double valence_delta(const chem::Atom &a) {
  const int z = a.atomic_number;
  const double nv = a.elem().outer_electrons;
  const double h = a.total_h();
  if (z <= 10)
    return nv - h;
  return (nv - h) / (z - nv - 1);
}

struct AlphaRow {
  int atomic_number;
  // sp, sp2, sp3; NaN where the table has no entry.
  std::array<double, 3> alpha;
};

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

const std::array kAlpha {
  AlphaRow { 6, { -0.22, -0.13, 0.0 } },
  AlphaRow { 7, { -0.29, -0.20, -0.04 } },
  AlphaRow { 8, { kNone, -0.20, -0.04 } },
  AlphaRow { 9, { kNone, kNone, -0.07 } },
  AlphaRow { 15, { kNone, 0.30, 0.43 } },
  AlphaRow { 16, { kNone, 0.22, 0.35 } },
  AlphaRow { 17, { kNone, kNone, 0.29 } },
  AlphaRow { 35, { kNone, kNone, 0.48 } },
  AlphaRow { 53, { kNone, kNone, 0.73 } },
};

double atom_alpha(const chem::Atom &a, Hybridization hyb) {
  auto row = std::find_if(kAlpha.begin(), kAlpha.end(), [&](const AlphaRow &r) {
    return r.atomic_number == a.atomic_number;
  });
  if (row == kAlpha.end())
    return a.elem().rb0 / chem::element(6).rb0 - 1.0;
  int idx = 2;
  if (hyb == Hybridization::kSP)
    idx = 0;
  else if (hyb == Hybridization::kSP2)
    idx = 1;
  const double v = row->alpha[idx];
  return std::isnan(v) ? row->alpha[2] : v;
}

}  // namespace

double hall_kier_alpha(const chem::MolGraph &g) {
  const std::vector<Hybridization> hyb = chem::hybridize(g);
  double sum = 0;
  for (int i = 0; i < g.atom_count(); ++i)
    sum += atom_alpha(g.atom(i), hyb[i]);
  return sum;
}

double kappa1(const chem::MolGraph &g) {
  const double alpha = hall_kier_alpha(g);
  const double a = g.atom_count() + alpha;
  const double p = g.bond_count() + alpha;
  if (p == 0)
    return 0;
  return a * (a - 1) * (a - 1) / (p * p);
}

double chi0v(const chem::MolGraph &g) {
  double sum = 0;
  for (const chem::Atom &a: g.atoms()) {
    const double d = valence_delta(a);
    if (d != 0)
      sum += 1 / std::sqrt(d);
  }
  return sum;
}

double chi1v(const chem::MolGraph &g) {
  double sum = 0;
  for (const chem::Bond &b: g.bonds()) {
    const double d = valence_delta(g.atom(b.begin)) * valence_delta(g.atom(b.end));
    if (d != 0)
      sum += 1 / std::sqrt(d);
  }
  return sum;
}

double chi3v(const chem::MolGraph &g) {
  // Paths of three distinct bonds; a closed three-membered ring is one path
  // over its three atoms.
  std::set<std::array<int, 3>> seen;
  double sum = 0;
  for (int b1 = 0; b1 < g.bond_count(); ++b1) {
    const chem::Bond &mid = g.bond(b1);
    for (const chem::Neighbor &left: g.neighbors(mid.begin)) {
      if (left.bond == b1)
        continue;
      for (const chem::Neighbor &right: g.neighbors(mid.end)) {
        if (right.bond == b1 || right.bond == left.bond)
          continue;
        std::array<int, 3> key { left.bond, b1, right.bond };
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second)
          continue;
        std::array<int, 4> atoms { left.atom, mid.begin, mid.end, right.atom };
        double prod = 1;
        const bool closed = left.atom == right.atom;
        for (int k = 0; k < (closed ? 3 : 4); ++k)
          prod *= valence_delta(g.atom(atoms[k]));
        if (prod != 0)
          sum += 1 / std::sqrt(prod);
      }
    }
  }
  return sum;
}

std::vector<long double> characteristic_polynomial(const chem::MolGraph &g) {
  // Faddeev-LeVerrier on the integer adjacency matrix. Every intermediate
  // is an integer, so 128-bit arithmetic keeps it exact.
  using Int = __int128;
  const int n = g.atom_count();
  std::vector<Int> adj(static_cast<std::size_t>(n) * n, 0);
  for (const chem::Bond &b: g.bonds()) {
    adj[b.begin * n + b.end] = 1;
    adj[b.end * n + b.begin] = 1;
  }
  std::vector<long double> coeff(n + 1, 0);
  coeff[0] = 1;
  std::vector<Int> m(adj.size(), 0), am(adj.size(), 0);
  for (int i = 0; i < n; ++i)
    m[i * n + i] = 1;
  for (int k = 1; k <= n; ++k) {
    // am = A * M_{k-1}
    std::fill(am.begin(), am.end(), 0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!adj[i * n + j])
          continue;
        for (int c = 0; c < n; ++c)
          am[i * n + c] += m[j * n + c];
      }
    }
    Int trace = 0;
    for (int i = 0; i < n; ++i)
      trace += am[i * n + i];
    const Int ck = -trace / k;
    coeff[k] = static_cast<long double>(ck);
    m = am;
    for (int i = 0; i < n; ++i)
      m[i * n + i] += ck;
  }
  return coeff;
}

double ipc(const chem::MolGraph &g) {
  std::vector<long double> c = characteristic_polynomial(g);
  long double total = 0;
  for (long double &x: c) {
    x = std::fabs(x);
    total += x;
  }
  if (total == 0)
    return 0;
  long double entropy = 0;
  for (long double x: c) {
    if (x > 0) {
      const long double p = x / total;
      entropy -= p * std::log2(p);
    }
  }
  return static_cast<double>(total * entropy);
}

}  // namespace metamol::desc
