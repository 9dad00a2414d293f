#include <gtest/gtest.h>

#include "wkh/action.hpp"

using namespace wkh;

namespace {

struct Pipeline {
  TowerData tower;
  ReconstructedStructure structure;
  DeformedStructure deformed;
  ActionData action;
};

Pipeline pipeline(int order) {
  Pipeline p{build_tower_from_group(GroupTable::cyclic(order)), {}, {}, {}};
  p.structure = reconstruct(p.tower);
  p.deformed = deform_tower(p.tower, p.structure);
  p.action = canonical_action(p.tower, p.deformed);
  return p;
}

}  // namespace

TEST(Action, CanonicalActionAxioms) {
  for (int n = 2; n <= 3; ++n) {
    const Pipeline p = pipeline(n);
    const Report r = verify_action(p.action);
    EXPECT_TRUE(r.all_pass()) << n << ": " << r.failures();
    const Report c = canonical_action_checks(p.tower, p.deformed, p.action);
    EXPECT_TRUE(c.all_pass()) << n << ": " << c.failures();
  }
}

TEST(Action, FixedPointsAreM) {
  const Pipeline p = pipeline(3);
  const SubalgebraEmbedding fixed = fixed_points(p.action);
  EXPECT_EQ(fixed.sub.dim(), p.tower.subM.sub.dim());
  const Mat mInM1 = p.tower.subM1.images.completeOrthogonalDecomposition().solve(p.tower.subM.images);
  EXPECT_TRUE(same_span(fixed.images, mInM1, 1e-10));
}

TEST(Action, TrivialActionOfFunctionAlgebraIsAnAction) {
  const WeakHopfData w = function_algebra(GroupTable::cyclic(3));
  const ActionData a = trivial_action(w, MultiMatrixAlgebra({2}));
  EXPECT_TRUE(verify_action(a).all_pass());
  EXPECT_EQ(fixed_points(a).sub.dim(), 4);
}

TEST(Action, BrokenModuleLawIsRejected) {
  Pipeline p = pipeline(2);
  p.action.tensor[1] *= 1.5;
  const Report r = verify_action(p.action);
  EXPECT_FALSE(r.all_pass());
  EXPECT_FALSE(r.find("(b c) ▷ x = b ▷ (c ▷ x)")->pass);
}

TEST(CrossedProduct, DimensionMatchesM2AndChecksPass) {
  for (int n = 2; n <= 3; ++n) {
    const Pipeline p = pipeline(n);
    const CrossedProduct c(p.action);
    EXPECT_EQ(c.dim(), p.tower.ambient.dim());
    EXPECT_TRUE(c.report().all_pass()) << c.report().failures();
  }
}

TEST(CrossedProduct, RandomElementProperties) {
  const Pipeline p = pipeline(2);
  const CrossedProduct c(p.action);
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = rng.complex_vector(c.dim()), y = rng.complex_vector(c.dim()), z = rng.complex_vector(c.dim());
    EXPECT_LE(relative_residual(c.multiply(c.multiply(x, y), z), c.multiply(x, c.multiply(y, z))), 1e-12);
    EXPECT_LE(relative_residual(c.star(c.multiply(x, y)), c.multiply(c.star(y), c.star(x))), 1e-12);
    EXPECT_LE(relative_residual(c.classes(c.lift(x)), x), 1e-12);
  }
}

TEST(CrossedProduct, MinimalAndThetaIsomorphism) {
  for (int n = 2; n <= 3; ++n) {
    const Pipeline p = pipeline(n);
    const CrossedProduct c(p.action);
    const Report m = minimality(c);
    EXPECT_TRUE(m.all_pass()) << m.failures();
    const ThetaMap theta = theta_iso(p.tower, p.deformed, c);
    EXPECT_TRUE(theta.report.all_pass()) << theta.report.failures();
    EXPECT_EQ(theta.images.cols(), c.dim());
  }
}
