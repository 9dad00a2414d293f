#include <gtest/gtest.h>

#include "wkh/deform.hpp"

using namespace wkh;

namespace {

Vec diagonal_h(double a, double b) {
  Vec h = Vec::Zero(4);
  h(0) = a;
  h(3) = b;
  return h;
}

}  // namespace

TEST(Undeform, PairGroupoidBundleHoldsAndDeltaIsNotMultiplicative) {
  const WeakHopfData pg = pair_groupoid(2);
  for (double a : {1.5, 2.0, 0.5}) {
    const UndeformedStructure u = undeform(pg, diagonal_h(a, a / 2));
    const Report bundle = cor416_bundle(u);
    EXPECT_TRUE(bundle.all_pass()) << a << ": " << bundle.failures();
    EXPECT_GE(multiplicativity_residual(u.data), 1e-3) << a;
    EXPECT_EQ(classify_structure(u).classification, "invalid");
  }
}

TEST(Undeform, IdentityIsANoOp) {
  const WeakHopfData pg = pair_groupoid(2);
  const UndeformedStructure u = undeform(pg, pg.unit());
  EXPECT_LE(structure_distance(u.data, pg), 1e-14);
  EXPECT_LE(multiplicativity_residual(u.data), 1e-14);
}

TEST(Deform, RecoversTheOriginal) {
  const WeakHopfData pg = pair_groupoid(2);
  for (double a : {1.5, 2.0, 0.5}) {
    const DeformedStructure d = deform(undeform(pg, diagonal_h(a, a / 2)));
    EXPECT_LE(structure_distance(d.hopf, pg), 1e-9) << a;
    EXPECT_TRUE(d.report.all_pass()) << d.report.failures();
    EXPECT_LE(d.report.find("S~^2 = Ad G, G = S~(H)^-1 H")->residual, 1e-9);
  }
}

TEST(Deform, RandomPositiveCentralElements) {
  Rng rng(17);
  const WeakHopfData pg = pair_groupoid(3);
  for (int trial = 0; trial < 5; ++trial) {
    Vec h = Vec::Zero(9);
    for (int i = 0; i < 3; ++i) h(pg.algebra.index(0, i, i)) = 1.25 + rng.uniform();
    const UndeformedStructure u = undeform(pg, h);
    EXPECT_TRUE(cor416_bundle(u).all_pass());
    const DeformedStructure d = deform(u);
    EXPECT_LE(structure_distance(d.hopf, pg), 1e-9);
    EXPECT_TRUE(verify_axioms(d.hopf).all_pass());
  }
}

TEST(Undeform, RejectsBadElements) {
  const WeakHopfData pg = pair_groupoid(2);
  EXPECT_THROW(undeform(pg, diagonal_h(1.0, -1.0)), Error);
  Vec offDiagonal = pg.unit();
  offDiagonal(1) = 0.5;
  offDiagonal(2) = 0.5;
  EXPECT_THROW(undeform(pg, offDiagonal), Error);
}

TEST(DeformTower, HaarProjectionIsE2H) {
  const TowerData t = build_tower_from_group(GroupTable::cyclic(3));
  const ReconstructedStructure r = reconstruct(t);
  const DeformedStructure d = deform_tower(t, r);
  EXPECT_TRUE(d.report.all_pass()) << d.report.failures();
  ASSERT_TRUE(d.haarProjection.has_value());
  EXPECT_LE(d.report.find("Haar projection = e2 H")->residual, 1e-9);
  EXPECT_LE(structure_distance(d.hopf, r.onB), 1e-9);
  EXPECT_EQ(central_power_of_G(d, 4, 1e-9), 1);
}
