//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/conf/conformer.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Dense>

namespace metamol::conf {
namespace {

using Eigen::Vector3d;

constexpr double kDeg = 180.0 / std::numbers::pi;

double angle_at(const Vector3d &a, const Vector3d &b, const Vector3d &c) {
  const Vector3d u = a - b;
  const Vector3d v = c - b;
  return std::atan2(u.cross(v).norm(), u.dot(v)) * kDeg;
}

bool collinear(const Vector3d &a, const Vector3d &b, const Vector3d &c) {
  const Vector3d u = (a - b).normalized();
  const Vector3d v = (c - b).normalized();
  return u.cross(v).norm() < kCollinearSin;
}

// Torsion a-b-c-d in (-180, 180].
double dihedral(const Vector3d &a, const Vector3d &b, const Vector3d &c, const Vector3d &d) {
  const Vector3d b1 = b - a;
  const Vector3d b2 = c - b;
  const Vector3d b3 = d - c;
  const Vector3d n1 = b1.cross(b2);
  const Vector3d n2 = b2.cross(b3);
  const double x = n1.dot(n2);
  const double y = n1.cross(n2).dot(b2.normalized());
  double deg = std::atan2(y, x) * kDeg;
  if (deg <= -180.0)
    deg += 360.0;
  return deg;
}

// Unit normal of the plane through a, b, c; a fixed perpendicular to b-c
// when the points are collinear.
Vector3d frame_normal(const Vector3d &a, const Vector3d &b, const Vector3d &c, bool degenerate) {
  const Vector3d bc = (c - b).normalized();
  if (!degenerate) {
    const Vector3d n = (b - a).cross(bc);
    if (n.norm() >= kCollinearSin * (b - a).norm())
      return n.normalized();
  }
  Eigen::Index axis = 0;
  bc.cwiseAbs().minCoeff(&axis);
  return bc.cross(Vector3d::Unit(axis)).normalized();
}

void check_record(const InternalRecord &r, std::size_t i) {
  const int n = InternalRecord::arity(i);
  auto bad = [&](const char *what) {
    throw ConformerError("record " + std::to_string(i) + ": " + what);
  };
  if (n >= 1 && !(std::isfinite(r.d) && r.d > 0))
    bad("distance must be positive");
  if (n >= 2 && !(std::isfinite(r.alpha) && r.alpha >= 0 && r.alpha <= 180))
    bad("angle must lie in [0, 180]");
  if (n >= 3 && !(std::isfinite(r.beta) && r.beta >= -180 && r.beta <= 180))
    bad("dihedral must lie in [-180, 180]");
}

std::string fixed(double v, const char *fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  std::string s(buf);
  // "-0.0" and friends
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
    s.erase(0, 1);
  return s;
}

double parse_field(const std::string &s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConformerError("bad number '" + s + "'");
  return v;
}

}  // namespace

bool InternalConformer::degenerate() const {
  for (const InternalRecord &r: records) {
    if (r.degenerate)
      return true;
  }
  return false;
}

InternalConformer encode_conformer(const Conformer &c) {
  if (c.coords.empty())
    throw ConformerError("conformer has no atoms");
  InternalConformer ic;
  ic.records.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c.coords[i].allFinite())
      throw ConformerError("non-finite coordinate at atom " + std::to_string(i));
    InternalRecord &r = ic.records[i];
    if (i == 0)
      continue;
    const Vector3d &p4 = c.coords[i];
    const Vector3d &p3 = c.coords[i - 1];
    r.d = (p4 - p3).norm();
    if (r.d == 0)
      throw ConformerError("atoms " + std::to_string(i - 1) + " and " + std::to_string(i)
                           + " coincide");
    if (i == 1)
      continue;
    const Vector3d &p2 = c.coords[i - 2];
    r.alpha = angle_at(p2, p3, p4);
    if (i == 2)
      continue;
    const Vector3d &p1 = c.coords[i - 3];
    if (collinear(p1, p2, p3) || collinear(p2, p3, p4)) {
      r.beta = 0;
      r.degenerate = true;
    } else {
      r.beta = dihedral(p1, p2, p3, p4);
    }
  }
  return ic;
}

Conformer decode_conformer(const InternalConformer &ic) {
  Conformer c;
  c.coords.reserve(ic.size());
  for (std::size_t i = 0; i < ic.size(); ++i) {
    const InternalRecord &r = ic.records[i];
    check_record(r, i);
    if (i == 0) {
      c.coords.push_back(Vector3d::Zero());
      continue;
    }
    if (i == 1) {
      c.coords.push_back(Vector3d(r.d, 0, 0));
      continue;
    }
    const double a = r.alpha / kDeg;
    if (i == 2) {
      c.coords.push_back(c.coords[1] + r.d * Vector3d(-std::cos(a), std::sin(a), 0));
      continue;
    }
    const Vector3d &p1 = c.coords[i - 3];
    const Vector3d &p2 = c.coords[i - 2];
    const Vector3d &p3 = c.coords[i - 1];
    const Vector3d bc = (p3 - p2).normalized();
    const Vector3d n = frame_normal(p1, p2, p3, r.degenerate);
    const Vector3d m = n.cross(bc);
    const double b = r.beta / kDeg;
    c.coords.push_back(p3 + r.d * (-std::cos(a) * bc + std::sin(a) * std::cos(b) * m
                                   + std::sin(a) * std::sin(b) * n));
  }
  return c;
}

double rmsd_aligned(const Conformer &a, const Conformer &b) {
  if (a.size() != b.size())
    throw ConformerError("rmsd needs conformers of equal length");
  if (a.size() == 0)
    throw ConformerError("rmsd of empty conformers");
  const Eigen::Index n = static_cast<Eigen::Index>(a.size());
  Eigen::Matrix<double, Eigen::Dynamic, 3> pa(n, 3), pb(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    pa.row(i) = a.coords[i].transpose();
    pb.row(i) = b.coords[i].transpose();
  }
  pa.rowwise() -= pa.colwise().mean();
  pb.rowwise() -= pb.colwise().mean();
  const Eigen::Matrix3d h = pa.transpose() * pb;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
  fix(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1 : 1;
  const Eigen::Matrix3d rot = svd.matrixV() * fix * svd.matrixU().transpose();
  const double sq = ((pa * rot.transpose()) - pb).squaredNorm();
  return std::sqrt(sq / static_cast<double>(n));
}

std::string format_angle(double degrees) {
  std::string s = fixed(degrees, "%.1f");
  return s == "-180.0" ? "180.0" : s;
}

std::string format_distance(double angstrom) {
  return fixed(angstrom, "%.3f");
}

std::vector<std::vector<std::string>> quantize_internal(const InternalConformer &ic) {
  std::vector<std::vector<std::string>> out;
  out.reserve(ic.size());
  for (std::size_t i = 0; i < ic.size(); ++i) {
    const InternalRecord &r = ic.records[i];
    switch (InternalRecord::arity(i)) {
    case 0: out.push_back({}); break;
    case 1: out.push_back({ format_distance(r.d) }); break;
    case 2: out.push_back({ format_distance(r.d), format_angle(r.alpha) }); break;
    default:
      out.push_back({ format_angle(r.alpha), format_angle(r.beta), format_distance(r.d) });
      break;
    }
  }
  return out;
}

InternalConformer dequantize_internal(const std::vector<std::vector<std::string>> &fields) {
  InternalConformer ic;
  ic.records.resize(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::vector<std::string> &f = fields[i];
    InternalRecord &r = ic.records[i];
    if (static_cast<int>(f.size()) != InternalRecord::arity(i))
      throw ConformerError("record " + std::to_string(i) + " has "
                           + std::to_string(f.size()) + " fields");
    if (f.size() == 1) {
      r.d = parse_field(f[0]);
    } else if (f.size() == 2) {
      r.d = parse_field(f[0]);
      r.alpha = parse_field(f[1]);
    } else if (f.size() == 3) {
      r.alpha = parse_field(f[0]);
      r.beta = parse_field(f[1]);
      r.d = parse_field(f[2]);
    }
    check_record(r, i);
  }
  return ic;
}

}  // namespace metamol::conf
