#include <gtest/gtest.h>

#include "wkh/weak_hopf.hpp"

using namespace wkh;

namespace {

std::vector<std::pair<std::string, WeakHopfData>> generators() {
  std::vector<std::pair<std::string, WeakHopfData>> out;
  for (int n = 1; n <= 3; ++n) out.emplace_back("PG(" + std::to_string(n) + ")", pair_groupoid(n));
  for (int n = 2; n <= 5; ++n) out.emplace_back("Z/" + std::to_string(n), group_algebra(GroupTable::cyclic(n)));
  out.emplace_back("S3", group_algebra(GroupTable::symmetric(3)));
  out.emplace_back("F(Z/3)", function_algebra(GroupTable::cyclic(3)));
  out.emplace_back("F(S3)", function_algebra(GroupTable::symmetric(3)));
  return out;
}

}  // namespace

TEST(Groups, TablesAreGroups) {
  const GroupTable s3 = GroupTable::symmetric(3);
  EXPECT_EQ(s3.order(), 6);
  EXPECT_FALSE(s3.abelian());
  EXPECT_TRUE(GroupTable::cyclic(4).abelian());
  for (int g = 0; g < 6; ++g) EXPECT_EQ(s3.mul(g, s3.inverse(g)), s3.identity());
  EXPECT_THROW(GroupTable(2, {0, 0, 0, 0}), Error);
}

TEST(Axioms, GeneratorsPass) {
  for (const auto& [name, w] : generators()) {
    const Report r = verify_axioms(w);
    EXPECT_TRUE(r.all_pass()) << name << ": " << r.failures();
    EXPECT_LE(r.max_residual(), 1e-9) << name;
    EXPECT_EQ(r.classification, "weak Kac") << name;
  }
}

TEST(Axioms, PairGroupoidAntipodeSquaresToIdentityExactly) {
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(antipode_square_residual(pair_groupoid(n)), 0.0);
    EXPECT_EQ(antipode_star_residual(pair_groupoid(n)), 0.0);
  }
}

TEST(Axioms, RandomElementProperties) {
  Rng rng(11);
  for (const auto& [name, w] : generators()) {
    const TensorSquare sq(w.algebra);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec x = rng.complex_vector(w.dim()), y = rng.complex_vector(w.dim());
      const Vec xy = w.multiply(x, y);
      EXPECT_LE(relative_residual(w.coproduct(xy), sq.multiply(w.coproduct(x), w.coproduct(y))), 1e-12) << name;
      EXPECT_LE(relative_residual(w.S(xy), w.multiply(w.S(y), w.S(x))), 1e-12) << name;
      EXPECT_LE(relative_residual(w.eps_t(w.eps_t(x)), w.eps_t(x)), 1e-12) << name;
      EXPECT_LE(relative_residual(w.star(w.star(x)), x), 1e-12) << name;
    }
  }
}

TEST(Haar, GroupAlgebraOracle) {
  for (const GroupTable& g : {GroupTable::cyclic(4), GroupTable::symmetric(3)}) {
    const WeakHopfData w = group_algebra(g);
    const HaarData h = haar(w);
    EXPECT_TRUE(h.report.all_pass()) << h.report.failures();
    const int n = g.order();
    const Vec expected = w.presentation * Vec::Constant(n, 1.0 / n);
    EXPECT_LE(relative_residual(h.projection, expected), 1e-12);
    const RowVec onGroup = h.functional * w.presentation;
    for (int k = 0; k < n; ++k) EXPECT_NEAR(std::abs(onGroup(k) - (k == g.identity() ? 1.0 : 0.0)), 0.0, 1e-12);
  }
}

TEST(Haar, PairGroupoidOracle) {
  const int n = 3;
  const WeakHopfData w = pair_groupoid(n);
  const HaarData h = haar(w);
  EXPECT_TRUE(h.report.all_pass()) << h.report.failures();
  EXPECT_LE(relative_residual(h.projection, Vec(Vec::Constant(n * n, 1.0 / n))), 1e-12);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      EXPECT_NEAR(std::abs(h.functional(w.algebra.index(0, i, j)) - (i == j ? 1.0 : 0.0)), 0.0, 1e-12);
}

TEST(Haar, FunctionAlgebraOracle) {
  const GroupTable g = GroupTable::cyclic(5);
  const WeakHopfData w = function_algebra(g);
  const HaarData h = haar(w);
  EXPECT_TRUE(h.report.all_pass()) << h.report.failures();
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(std::abs(h.projection(k) - (k == g.identity() ? 1.0 : 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(h.functional(k) - 0.2), 0.0, 1e-12);
  }
}

TEST(Dual, DoubleDualAndCommutativeDual) {
  for (const auto& [name, w] : generators()) EXPECT_LE(double_dual_residual(w), 1e-12) << name;
  for (int n = 2; n <= 5; ++n) {
    const WeakHopfData d = dual_algebra(group_algebra(GroupTable::cyclic(n)));
    EXPECT_EQ(d.dim(), n);
    EXPECT_EQ(d.algebra.blocks(), std::vector<int>(static_cast<std::size_t>(n), 1));
    EXPECT_TRUE(verify_axioms(d).all_pass());
  }
}

TEST(Connectedness, CriteriaAgree) {
  for (int n = 2; n <= 5; ++n) {
    const Connectedness c = connectedness(group_algebra(GroupTable::cyclic(n)));
    EXPECT_TRUE(c.biconnected);
    EXPECT_EQ(c.cartanIntersectionDim, 1);
  }
  for (int n = 2; n <= 3; ++n) {
    const Connectedness c = connectedness(pair_groupoid(n));
    EXPECT_TRUE(c.connected);
    EXPECT_FALSE(c.dualConnected);
    EXPECT_FALSE(c.biconnected);
    EXPECT_EQ(c.cartanIntersectionDim, n);
  }
}

TEST(Intertwiner, PairGroupoidAndDoubleDual) {
  const WeakHopfData pg = pair_groupoid(2);
  EXPECT_LE(isomorphism_residual(pg, pg, pair_groupoid_intertwiner(pg)), 1e-12);
  const WeakHopfData d = dual_algebra(dual_algebra(pg));
  EXPECT_LE(isomorphism_residual(pg, d, pair_groupoid_intertwiner(d)), 1e-10);
}

TEST(NegativeControl, BrokenCounitIsNamed) {
  WeakHopfData w = pair_groupoid(2);
  w.epsilon(0) = 2.0;
  const Report r = verify_axioms(w);
  EXPECT_FALSE(r.all_pass());
  const Check* c = r.find("counit");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->pass);
  EXPECT_EQ(r.classification, "invalid");
}
