#include <gtest/gtest.h>

#include "wkh/decompose.hpp"
#include "wkh/fd_algebra.hpp"

using namespace wkh;

namespace {

Vec random_element(const MultiMatrixAlgebra& alg, Rng& rng) { return rng.complex_vector(alg.dim()); }

SubalgebraEmbedding diagonal_in(int n) {
  SubalgebraEmbedding e;
  e.sub = MultiMatrixAlgebra(std::vector<int>(static_cast<std::size_t>(n), 1));
  e.ambient = MultiMatrixAlgebra({n});
  e.images = Mat::Zero(n * n, n);
  for (int i = 0; i < n; ++i) e.images(e.ambient.index(0, i, i), i) = 1.0;
  return e;
}

}  // namespace

TEST(MultiMatrix, UnitAssociativityAdjoint) {
  const MultiMatrixAlgebra alg({1, 2, 3});
  EXPECT_EQ(alg.dim(), 14);
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = random_element(alg, rng), y = random_element(alg, rng), z = random_element(alg, rng);
    EXPECT_LE(relative_residual(alg.multiply(alg.unit(), x), x), 1e-14);
    EXPECT_LE(relative_residual(alg.multiply(alg.multiply(x, y), z), alg.multiply(x, alg.multiply(y, z))), 1e-13);
    EXPECT_LE(relative_residual(alg.adjoint(alg.multiply(x, y)), alg.multiply(alg.adjoint(y), alg.adjoint(x))), 1e-13);
    EXPECT_LE(relative_residual(alg.pack(alg.unpack(x)), x), 0.0);
    EXPECT_LE(relative_residual(Vec(alg.left_mult(x) * y), alg.multiply(x, y)), 1e-13);
    EXPECT_LE(relative_residual(Vec(alg.right_mult(x) * y), alg.multiply(y, x)), 1e-13);
  }
}

TEST(MultiMatrix, UnitProductTable) {
  const MultiMatrixAlgebra alg({2, 1});
  EXPECT_EQ(alg.unit_product(alg.index(0, 0, 1), alg.index(0, 1, 0)), alg.index(0, 0, 0));
  EXPECT_EQ(alg.unit_product(alg.index(0, 0, 1), alg.index(0, 0, 1)), -1);
  EXPECT_EQ(alg.unit_product(alg.index(0, 0, 0), alg.index(1, 0, 0)), -1);
}

TEST(MultiMatrix, InverseAndPowers) {
  const MultiMatrixAlgebra alg({2, 1});
  Rng rng(3);
  const Vec x = random_element(alg, rng);
  const Vec p = alg.multiply(alg.adjoint(x), x) + alg.unit();
  EXPECT_LE(relative_residual(alg.multiply(p, alg.inverse(p)), alg.unit()), 1e-12);
  const Vec r = alg.positive_power(p, 0.5, 1e-12);
  EXPECT_LE(relative_residual(alg.multiply(r, r), p), 1e-12);
  EXPECT_GE(alg.min_hermitian_eigenvalue(p), 1.0 - 1e-12);
}

TEST(Trace, NormalizedUniformAndWatatani) {
  const MultiMatrixAlgebra alg({1, 1});
  const TraceState tau(RVec((RVec(2) << 1.0 / 3.0, 2.0 / 3.0).finished()));
  EXPECT_TRUE(tau.normalized(alg));
  const Vec index = watatani_index(alg, tau);
  EXPECT_NEAR(index(0).real(), 3.0, 1e-15);
  EXPECT_NEAR(index(1).real(), 1.5, 1e-15);
  const TraceState u = TraceState::normalized_uniform(MultiMatrixAlgebra({2, 3}));
  EXPECT_NEAR(u.value(MultiMatrixAlgebra({2, 3}), MultiMatrixAlgebra({2, 3}).unit()).real(), 1.0, 1e-15);
}

TEST(ConditionalExpectation, DiagonalOracle) {
  const int n = 3;
  const SubalgebraEmbedding d = diagonal_in(n);
  const TraceState tau = TraceState::normalized_uniform(d.ambient);
  const ConditionalExpectation e(d, tau, 1e-9);
  Rng rng(5);
  const Vec x = random_element(d.ambient, rng);
  const Vec ex = e(x);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      EXPECT_LE(std::abs(ex(d.ambient.index(0, i, j)) - (i == j ? x(d.ambient.index(0, i, j)) : cplx(0.0))), 1e-14);
  EXPECT_LE(relative_residual(e(ex), ex), 1e-14);
  const Vec a = d.images * rng.complex_vector(n);
  EXPECT_LE(relative_residual(e(d.ambient.multiply(a, x)), d.ambient.multiply(a, ex)), 1e-13);
}

TEST(Commutant, DiagonalIsMaximalAbelian) {
  const SubalgebraEmbedding d = diagonal_in(3);
  const SubalgebraEmbedding c = relative_commutant(d);
  EXPECT_EQ(c.sub.dim(), 3);
  EXPECT_TRUE(same_span(c.images, d.images, 1e-10));
  EXPECT_EQ(center(d.ambient).sub.dim(), 1);
}

TEST(Inclusion, MatrixAndMarkovTrace) {
  const SubalgebraEmbedding d = diagonal_in(3);
  const InclusionMatrix m = inclusion_matrix(d);
  ASSERT_EQ(m.entries.rows(), 3);
  ASSERT_EQ(m.entries.cols(), 1);
  EXPECT_EQ(m.entries.sum(), 3);
  const MarkovTrace mt = markov_trace(m);
  EXPECT_NEAR(mt.lambdaInverse, 3.0, 1e-12);
}

TEST(BasicConstruction, DiagonalInFullMatrices) {
  const SubalgebraEmbedding scalars = SubalgebraEmbedding::scalars(MultiMatrixAlgebra({1, 1}));
  const TraceState tau = TraceState::normalized_uniform(scalars.ambient);
  const JonesExtension j = basic_construction(scalars, tau, 0.5);
  EXPECT_TRUE(j.report.all_pass()) << j.report.failures();
  EXPECT_EQ(j.algebra.blocks(), std::vector<int>({2}));
  EXPECT_LE(relative_residual(j.algebra.multiply(j.e, j.e), j.e), 1e-12);
  EXPECT_NEAR(j.extendedTrace.value(j.algebra, j.e).real(), 0.5, 1e-12);
}

TEST(Decompose, RecoversBlocksOfAProduct) {
  const MultiMatrixAlgebra amb({3});
  Mat span(9, 5);
  span.setZero();
  span(amb.index(0, 0, 0), 0) = 1.0;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) span(amb.index(0, 1 + k, 1 + l), 1 + 2 * k + l) = 1.0;
  const SubalgebraEmbedding e = decompose_subalgebra(amb, span, Config{});
  std::vector<int> blocks = e.sub.blocks();
  std::sort(blocks.begin(), blocks.end());
  EXPECT_EQ(blocks, std::vector<int>({1, 2}));
  EXPECT_TRUE(e.verify(1e-10).all_pass());
  EXPECT_TRUE(same_span(e.images, span, 1e-10));
}

TEST(Sweep, EnumeratesOrSamples) {
  std::size_t count = 0;
  EXPECT_EQ(sweep({3, 4}, 100, 0, [&](const std::vector<std::size_t>&) { ++count; }), 12u);
  EXPECT_EQ(count, 12u);
  std::vector<std::vector<std::size_t>> a, b;
  sweep({50, 50, 50}, 10, 7, [&](const std::vector<std::size_t>& ix) { a.push_back(ix); });
  sweep({50, 50, 50}, 10, 7, [&](const std::vector<std::size_t>& ix) { b.push_back(ix); });
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(a, b);
}
