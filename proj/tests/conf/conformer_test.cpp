//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/conf/conformer.h"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "metamol/conf/conformer_io.h"

namespace metamol::conf {
namespace {

using Eigen::Vector3d;

Conformer make(std::initializer_list<Vector3d> pts) {
  return Conformer { std::vector<Vector3d>(pts) };
}

// Random walk with 1.0-2.0 A steps; each new point avoids lying on the line
// through the previous two, so every torsion is defined.
Conformer random_conformer(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> step(1.0, 2.0);
  std::normal_distribution<double> gauss;
  Conformer c;
  c.coords.push_back(Vector3d(gauss(rng), gauss(rng), gauss(rng)));
  while (static_cast<int>(c.size()) < n) {
    Vector3d dir(gauss(rng), gauss(rng), gauss(rng));
    dir.normalize();
    const Vector3d p = c.coords.back() + step(rng) * dir;
    if (c.size() >= 2) {
      const Vector3d u = (c.coords[c.size() - 2] - c.coords.back()).normalized();
      const Vector3d v = (p - c.coords.back()).normalized();
      if (u.cross(v).norm() < 0.05)
        continue;
    }
    c.coords.push_back(p);
  }
  return c;
}

Eigen::Matrix3d random_rotation(std::mt19937_64 &rng) {
  std::normal_distribution<double> gauss;
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  return q.normalized().toRotationMatrix();
}

Conformer transform(const Conformer &c, const Eigen::Matrix3d &r, const Vector3d &t) {
  Conformer out;
  for (const Vector3d &p: c.coords)
    out.coords.push_back(r * p + t);
  return out;
}

TEST(Encode, PlanarSquare) {
  const Conformer c = make({ { 0, 0, 0 }, { 1, 0, 0 }, { 1, 1, 0 }, { 0, 1, 0 } });
  const InternalConformer ic = encode_conformer(c);
  ASSERT_EQ(ic.size(), 4U);
  EXPECT_NEAR(ic.records[1].d, 1, 1e-12);
  EXPECT_NEAR(ic.records[2].d, 1, 1e-12);
  EXPECT_NEAR(ic.records[2].alpha, 90, 1e-12);
  EXPECT_NEAR(ic.records[3].alpha, 90, 1e-12);
  EXPECT_NEAR(ic.records[3].beta, 0, 1e-12);
  EXPECT_NEAR(ic.records[3].d, 1, 1e-12);
  EXPECT_FALSE(ic.degenerate());
  const Conformer back = decode_conformer(ic);
  EXPECT_NEAR((back.coords[3] - back.coords[2]).norm(), 1, 1e-12);
  EXPECT_LT(rmsd_aligned(back, c), 1e-12);
}

TEST(Encode, DihedralSign) {
  // (1,1,1) sits +90 degrees around the 1->2 axis from the first atom.
  const InternalConformer ic =
    encode_conformer(make({ { 0, 0, 0 }, { 1, 0, 0 }, { 1, 1, 0 }, { 1, 1, 1 } }));
  EXPECT_NEAR(ic.records[3].beta, 90, 1e-12);
  const InternalConformer trans =
    encode_conformer(make({ { 0, 0, 0 }, { 1, 0, 0 }, { 1, 1, 0 }, { 2, 1, 0 } }));
  EXPECT_NEAR(trans.records[3].beta, 180, 1e-12);
}

TEST(Encode, SmallInputs) {
  const Conformer one = make({ { 3, 4, 5 } });
  const InternalConformer ic = encode_conformer(one);
  ASSERT_EQ(ic.size(), 1U);
  const Conformer back = decode_conformer(ic);
  ASSERT_EQ(back.size(), 1U);
  EXPECT_EQ(back.coords[0], Vector3d::Zero());
  const Conformer two = make({ { 0, 0, 0 }, { 0, 0, 2 } });
  const Conformer back2 = decode_conformer(encode_conformer(two));
  EXPECT_NEAR(back2.coords[1].x(), 2, 1e-12);
  EXPECT_NEAR(back2.coords[1].y(), 0, 1e-12);
}

TEST(Encode, ThirdAtomInUpperHalfPlane) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Conformer back = decode_conformer(encode_conformer(random_conformer(rng, 3)));
    EXPECT_GE(back.coords[2].y(), 0);
    EXPECT_EQ(back.coords[2].z(), 0);
  }
}

TEST(Encode, RigidInvariance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> shift(-10, 10);
  for (int k = 0; k < 200; ++k) {
    const Conformer c = random_conformer(rng, 2 + k % 40);
    const InternalConformer ref = encode_conformer(c);
    const Conformer moved =
      transform(c, random_rotation(rng), Vector3d(shift(rng), shift(rng), shift(rng)));
    const InternalConformer got = encode_conformer(moved);
    for (std::size_t i = 0; i < c.size(); ++i) {
      ASSERT_NEAR(got.records[i].d, ref.records[i].d, 1e-9);
      ASSERT_NEAR(got.records[i].alpha, ref.records[i].alpha, 1e-9);
      double db = std::fabs(got.records[i].beta - ref.records[i].beta);
      db = std::min(db, 360 - db);
      ASSERT_LT(db, 1e-9);
    }
  }
  const Conformer c = random_conformer(rng, 10);
  const InternalConformer a = encode_conformer(c);
  const InternalConformer b = encode_conformer(transform(c, Eigen::Matrix3d::Identity(), { 5, 5, 5 }));
  for (std::size_t i = 0; i < c.size(); ++i)
    EXPECT_NEAR(a.records[i].beta, b.records[i].beta, 1e-9);
}

TEST(Encode, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const Conformer c = random_conformer(rng, 1 + k % 64);
    const InternalConformer ic = encode_conformer(c);
    const Conformer back = decode_conformer(ic);
    ASSERT_LT(rmsd_aligned(back, c), 1e-6) << k;
    const InternalConformer again = encode_conformer(back);
    for (std::size_t i = 0; i < ic.size(); ++i) {
      ASSERT_NEAR(again.records[i].d, ic.records[i].d, 1e-6);
      ASSERT_NEAR(again.records[i].alpha, ic.records[i].alpha, 1e-6);
      ASSERT_NEAR(again.records[i].beta, ic.records[i].beta, 1e-6);
    }
  }
}

TEST(Encode, MirrorFlipsDihedral) {
  std::mt19937_64 rng(13);
  const Conformer c = random_conformer(rng, 12);
  Conformer mirror = c;
  for (Vector3d &p: mirror.coords)
    p.z() = -p.z();
  const InternalConformer a = encode_conformer(c);
  const InternalConformer b = encode_conformer(mirror);
  for (std::size_t i = 3; i < c.size(); ++i) {
    EXPECT_NEAR(a.records[i].beta, -b.records[i].beta, 1e-9);
    EXPECT_NEAR(a.records[i].alpha, b.records[i].alpha, 1e-9);
  }
}

TEST(Encode, CollinearFallback) {
  const Conformer line = make({ { 0, 0, 0 }, { 1, 0, 0 }, { 2, 0, 0 }, { 3, 1, 0 }, { 3, 2, 1 } });
  const InternalConformer ic = encode_conformer(line);
  EXPECT_TRUE(ic.records[3].degenerate);
  EXPECT_EQ(ic.records[3].beta, 0);
  EXPECT_FALSE(ic.records[4].degenerate);
  EXPECT_TRUE(ic.degenerate());
  const Conformer back = decode_conformer(ic);
  for (const Vector3d &p: back.coords)
    EXPECT_TRUE(p.allFinite());
  // Distances and angles to the previous atoms are still honoured.
  const InternalConformer again = encode_conformer(back);
  for (std::size_t i = 1; i < ic.size(); ++i)
    EXPECT_NEAR(again.records[i].d, ic.records[i].d, 1e-9);
  EXPECT_NEAR(again.records[3].alpha, ic.records[3].alpha, 1e-9);
  // Here only one torsion is undefined, so the shape survives.
  EXPECT_LT(rmsd_aligned(back, line), 1e-9);
}

TEST(Encode, Errors) {
  EXPECT_THROW(encode_conformer(Conformer {}), ConformerError);
  EXPECT_THROW(encode_conformer(make({ { 0, 0, 0 }, { 0, 0, 0 } })), ConformerError);
  EXPECT_THROW(encode_conformer(make({ { 0, 0, NAN } })), ConformerError);
  InternalConformer bad;
  bad.records.resize(2);
  bad.records[1].d = -1;
  EXPECT_THROW(decode_conformer(bad), ConformerError);
  bad.records.resize(3);
  bad.records[1].d = 1;
  bad.records[2] = { 1, 200, 0, false };
  EXPECT_THROW(decode_conformer(bad), ConformerError);
}

TEST(Rmsd, Examples) {
  std::mt19937_64 rng(17);
  const Conformer c = random_conformer(rng, 20);
  EXPECT_NEAR(rmsd_aligned(c, c), 0, 1e-12);
  EXPECT_NEAR(rmsd_aligned(c, transform(c, random_rotation(rng), { 1, -2, 3 })), 0, 1e-9);
  // Two points 2 A apart against two coincident points: each is 1 A off.
  EXPECT_NEAR(rmsd_aligned(make({ { -1, 0, 0 }, { 1, 0, 0 } }), make({ { 0, 0, 0 }, { 0, 0, 0 } })),
              1.0, 1e-12);
  EXPECT_NEAR(rmsd_aligned(make({ { 0, 0, 0 }, { 4, 0, 0 } }), make({ { 0, 0, 0 }, { 0, 2, 0 } })),
              1.0, 1e-12);
  EXPECT_THROW(rmsd_aligned(c, make({ { 0, 0, 0 } })), ConformerError);
}

TEST(Rmsd, ReflectionIsNotARigidMotion) {
  // A chiral tetrahedron and its mirror image do not superimpose.
  const Conformer c = make({ { 0, 0, 0 }, { 1, 0, 0 }, { 0, 2, 0 }, { 0, 0, 3 } });
  Conformer m = c;
  for (Vector3d &p: m.coords)
    p.z() = -p.z();
  EXPECT_GT(rmsd_aligned(c, m), 0.1);
}

TEST(Quantize, Examples) {
  EXPECT_EQ(format_angle(90.04), "90.0");
  EXPECT_EQ(format_angle(0.0), "0.0");
  EXPECT_EQ(format_angle(-0.04), "0.0");
  EXPECT_EQ(format_angle(-179.97), "180.0");
  EXPECT_EQ(format_angle(-12.36), "-12.4");
  EXPECT_EQ(format_distance(1.0004), "1.000");
  EXPECT_EQ(format_distance(1.5396), "1.540");

  InternalConformer ic;
  ic.records.resize(4);
  ic.records[1].d = 1.0004;
  ic.records[2] = { 1.2, 109.47, 0, false };
  ic.records[3] = { 1.0004, 90.04, 0.0, false };
  const auto q = quantize_internal(ic);
  EXPECT_TRUE(q[0].empty());
  EXPECT_EQ(q[1], (std::vector<std::string> { "1.000" }));
  EXPECT_EQ(q[2], (std::vector<std::string> { "1.200", "109.5" }));
  EXPECT_EQ(q[3], (std::vector<std::string> { "90.0", "0.0", "1.000" }));
}

TEST(Quantize, FixedPointAndBounds) {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 200; ++k) {
    const InternalConformer ic = encode_conformer(random_conformer(rng, 2 + k % 30));
    const auto q = quantize_internal(ic);
    const InternalConformer deq = dequantize_internal(q);
    EXPECT_EQ(quantize_internal(deq), q);
    for (std::size_t i = 0; i < ic.size(); ++i) {
      EXPECT_LE(std::fabs(deq.records[i].d - ic.records[i].d), 0.0005 + 1e-12);
      EXPECT_LE(std::fabs(deq.records[i].alpha - ic.records[i].alpha), 0.05 + 1e-9);
      double db = std::fabs(deq.records[i].beta - ic.records[i].beta);
      EXPECT_LE(std::min(db, 360 - db), 0.05 + 1e-9);
    }
  }
  EXPECT_THROW(dequantize_internal({ {}, { "1.0", "2.0" } }), ConformerError);
  EXPECT_THROW(dequantize_internal({ {}, { "abc" } }), ConformerError);
}

TEST(Quantize, TenAtomChains) {
  std::mt19937_64 rng(23);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const Conformer c = random_conformer(rng, 10);
    const Conformer back = decode_conformer(dequantize_internal(quantize_internal(encode_conformer(c))));
    worst = std::max(worst, rmsd_aligned(back, c));
  }
  EXPECT_LE(worst, 0.05);
}

TEST(ConformerIo, XyzRoundTrip) {
  std::mt19937_64 rng(29);
  LabelledConformer c { "CCO", { "C", "C", "O" }, random_conformer(rng, 3) };
  std::stringstream ss;
  write_xyz(ss, c);
  write_xyz(ss, c);
  const auto back = read_xyz(ss);
  ASSERT_EQ(back.size(), 2U);
  EXPECT_EQ(back[0].symbols, c.symbols);
  EXPECT_LT(rmsd_aligned(back[1].conformer, c.conformer), 1e-9);
  std::istringstream bare("C 0 0 0\nO 1.4 0 0\n");
  const auto b = read_xyz(bare);
  ASSERT_EQ(b.size(), 1U);
  EXPECT_EQ(b[0].conformer.size(), 2U);
  std::istringstream broken("3\ncomment\nC 0 0 0\n");
  EXPECT_THROW(read_xyz(broken), ConformerError);
  std::istringstream junk("C 0 zero 0\n");
  EXPECT_THROW(read_xyz(junk), ConformerError);
}

TEST(ConformerIo, JsonLinesRoundTrip) {
  std::mt19937_64 rng(31);
  LabelledConformer c { "CCCO", {}, random_conformer(rng, 4) };
  std::stringstream ss;
  write_conformer_jsonl(ss, c);
  const auto back = read_conformer_jsonl(ss);
  ASSERT_EQ(back.size(), 1U);
  EXPECT_EQ(back[0].smiles, "CCCO");
  EXPECT_EQ(back[0].conformer.coords, c.conformer.coords);

  LabelledInternal li { "CCCO", encode_conformer(c.conformer) };
  li.internal.records[3].degenerate = true;
  std::stringstream si;
  write_internal_jsonl(si, li);
  const auto lb = read_internal_jsonl(si);
  ASSERT_EQ(lb.size(), 1U);
  EXPECT_TRUE(lb[0].internal.records[3].degenerate);
  EXPECT_EQ(lb[0].internal.records[2].alpha, li.internal.records[2].alpha);
  std::istringstream bad("{\"smiles\":\"C\",\"coords\":[[0,0]]}\n");
  EXPECT_THROW(read_conformer_jsonl(bad), ConformerError);
}

}  // namespace
}  // namespace metamol::conf
