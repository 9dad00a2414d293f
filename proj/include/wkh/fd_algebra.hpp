#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wkh/linalg.hpp"
#include "wkh/report.hpp"

namespace wkh {

/// Direct sum of full matrix blocks M_{m_1} + ... + M_{m_r}.
///
/// Elements are coefficient vectors over the matrix units f^a_{kl}, laid out
/// block by block, row-major inside a block: index(a, k, l) = offset(a) + k*m_a + l.
class MultiMatrixAlgebra {
 public:
  MultiMatrixAlgebra() = default;
  explicit MultiMatrixAlgebra(std::vector<int> blocks);

  const std::vector<int>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_size(int a) const { return blocks_[a]; }
  int dim() const { return dim_; }
  int offset(int a) const { return offsets_[a]; }
  int index(int a, int k, int l) const { return offsets_[a] + k * blocks_[a] + l; }
  /// Block owning coefficient `i`.
  int block_of(int i) const { return blockOf_[i]; }
  /// Index of the adjoint unit: (f^a_{kl})* = f^a_{lk}.
  int adjoint_index(int i) const { return adjointIndex_[i]; }
  /// Side length of the faithful block-diagonal representation.
  int rep_size() const { return repSize_; }

  Vec unit() const;
  Vec basis(int i) const;
  Vec block_unit(int a) const;
  Vec multiply(const Vec& x, const Vec& y) const;
  Vec adjoint(const Vec& x) const;
  /// Product of two matrix units as (index, present) without arithmetic.
  int unit_product(int i, int j) const;

  std::vector<Mat> unpack(const Vec& x) const;
  Vec pack(const std::vector<Mat>& blocks) const;
  Mat to_rep(const Vec& x) const;
  Vec from_rep(const Mat& m) const;

  /// Matrix of y -> x*y (resp. y*x) on coefficient vectors.
  Mat left_mult(const Vec& x) const;
  Mat right_mult(const Vec& x) const;
  /// Permutation matrix of the coefficientwise adjoint (antilinear: x* = P conj(x)).
  Mat adjoint_matrix() const;

  /// Inverse of an invertible element (blockwise).
  Vec inverse(const Vec& x) const;
  /// Blockwise eigenvalues of a self-adjoint element, smallest first.
  double min_hermitian_eigenvalue(const Vec& x) const;
  /// Blockwise principal power of a positive element (Hermitian blocks).
  Vec positive_power(const Vec& x, double power, double tol) const;

  bool operator==(const MultiMatrixAlgebra& o) const { return blocks_ == o.blocks_; }

 private:
  std::vector<int> blocks_;
  std::vector<int> offsets_;
  std::vector<int> blockOf_;
  std::vector<int> adjointIndex_;
  int dim_ = 0;
  int repSize_ = 0;
};

/// Element of a multimatrix algebra tied to its owner.
class AlgebraElement {
 public:
  AlgebraElement(std::shared_ptr<const MultiMatrixAlgebra> owner, Vec coefficients);
  static AlgebraElement unit(std::shared_ptr<const MultiMatrixAlgebra> owner);

  const MultiMatrixAlgebra& algebra() const { return *owner_; }
  const std::shared_ptr<const MultiMatrixAlgebra>& owner() const { return owner_; }
  const Vec& coefficients() const { return coeffs_; }

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator*(cplx s) const;
  AlgebraElement adjoint() const;
  /// Block matrix `a` of the element.
  Mat block(int a) const;

 private:
  void same_owner(const AlgebraElement& o) const;
  std::shared_ptr<const MultiMatrixAlgebra> owner_;
  Vec coeffs_;
};

/// Trace given by its value tau_a on a minimal projection of each block.
class TraceState {
 public:
  TraceState() = default;
  explicit TraceState(RVec weights);

  static TraceState normalized_uniform(const MultiMatrixAlgebra& alg);

  const RVec& weights() const { return weights_; }
  double weight(int a) const { return weights_(a); }
  bool normalized(const MultiMatrixAlgebra& alg) const;

  cplx value(const MultiMatrixAlgebra& alg, const Vec& x) const;
  /// Row vector r with tau(x) = r * x.
  RowVec functional(const MultiMatrixAlgebra& alg) const;
  /// Per-coefficient weights w with tau(x* y) = sum conj(x_i) w_i y_i.
  RVec coefficient_weights(const MultiMatrixAlgebra& alg) const;

 private:
  RVec weights_;
};

/// Unital *-homomorphism sub -> ambient, stored as the ambient coefficients
/// of each matrix unit of `sub` (column i = image of f_i).
struct SubalgebraEmbedding {
  MultiMatrixAlgebra sub;
  MultiMatrixAlgebra ambient;
  Mat images;

  static SubalgebraEmbedding identity(const MultiMatrixAlgebra& alg);
  static SubalgebraEmbedding scalars(const MultiMatrixAlgebra& ambient);

  Vec map(const Vec& subCoefficients) const { return images * subCoefficients; }
  /// Sub coordinates of an ambient element lying in the image (least squares).
  Vec coordinates(const Vec& ambientElement) const;
  /// Distance of an ambient element from the image, relative.
  double distance(const Vec& ambientElement) const;
  /// this: sub -> ambient, outer: ambient -> outer.ambient.
  SubalgebraEmbedding then(const SubalgebraEmbedding& outer) const;
  /// Residuals of unit, product, adjoint preservation and injectivity.
  Report verify(double tol) const;
};

/// Multiplicities of sub blocks (rows) in ambient blocks (columns).
struct InclusionMatrix {
  Eigen::MatrixXi entries;
  std::vector<int> subBlocks;
  std::vector<int> ambientBlocks;
};

struct MarkovTrace {
  double lambdaInverse = 0.0;
  RVec traceVector;  ///< positive, indexed by sub blocks, sum_a m_a t_a = 1
  double residual = 0.0;
};

/// Basic construction of a subalgebra inclusion, realized on the trace-GNS space.
struct JonesExtension {
  MultiMatrixAlgebra algebra;
  SubalgebraEmbedding larger;  ///< D -> <D, e>
  Vec e;                       ///< Jones projection in `algebra` coordinates
  TraceState extendedTrace;
  double lambda = 0.0;
  std::vector<Mat> gnsImages;  ///< matrix units of `algebra` as operators on L2(D)
  Report report{1e-9};
};

/// Trace-orthogonal projection onto a subalgebra image.
class ConditionalExpectation {
 public:
  ConditionalExpectation(const SubalgebraEmbedding& sub, const TraceState& trace, double tol);

  /// E(x) in ambient coordinates.
  Vec operator()(const Vec& x) const { return images_ * sub_coordinates(x); }
  /// E(x) in sub coordinates.
  Vec sub_coordinates(const Vec& x) const;

 private:
  Mat images_;
  Mat solver_;  ///< (V* W V)^{-1} V* W
};

Vec conditional_expectation(const SubalgebraEmbedding& sub, const TraceState& trace, const Vec& x,
                            double tol = 1e-9);
AlgebraElement conditional_expectation(const SubalgebraEmbedding& sub, const TraceState& trace,
                                       const AlgebraElement& x, double tol = 1e-9);

/// sub' ∩ ambient as a block-decomposed subalgebra of the ambient.
SubalgebraEmbedding relative_commutant(const SubalgebraEmbedding& sub, const Config& cfg = {});

/// s' ∩ t for two subalgebras of the same ambient, embedded into the ambient.
SubalgebraEmbedding relative_commutant(const SubalgebraEmbedding& s, const SubalgebraEmbedding& t,
                                       const Config& cfg = {});

/// Centre of the algebra (embedding into the algebra itself).
SubalgebraEmbedding center(const MultiMatrixAlgebra& alg, const Config& cfg = {});
/// Centre of an embedded subalgebra, embedded into the ambient.
SubalgebraEmbedding center(const SubalgebraEmbedding& sub, const Config& cfg = {});

InclusionMatrix inclusion_matrix(const SubalgebraEmbedding& sub, double tol = 1e-9);

MarkovTrace markov_trace(const InclusionMatrix& lambda, double tol = 1e-9);

/// Restriction of an ambient trace to an embedded subalgebra.
TraceState restrict_trace(const SubalgebraEmbedding& sub, const TraceState& ambientTrace);

JonesExtension basic_construction(const SubalgebraEmbedding& sub, const TraceState& trace, double lambda,
                                  const Config& cfg = {});

/// Watatani index sum_a (m_a / tau_a) 1_a of a trace.
Vec watatani_index(const MultiMatrixAlgebra& alg, const TraceState& trace);

/// Smallest ambient subalgebra containing `generators` and the unit, given as
/// an orthonormal coefficient basis (columns). Closure under products is
/// iterated until the dimension stabilizes.
Mat generated_subalgebra(const MultiMatrixAlgebra& ambient, const std::vector<Vec>& generators,
                         const Config& cfg = {});

}  // namespace wkh
