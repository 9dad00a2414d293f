#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wkh/fd_algebra.hpp"
#include "wkh/groups.hpp"

namespace wkh {

/// Coefficients of a tensor in B ⊗ B: v(j*dim + k) multiplies b_j ⊗ b_k.
/// legs() reshapes to the matrix X(j, k), unlegs() flattens back.
Mat legs(const Vec& v, int dim);
Vec unlegs(const Mat& x);

/// B ⊗ B as the multimatrix algebra with blocks m_a * m_b.
class TensorSquare {
 public:
  explicit TensorSquare(const MultiMatrixAlgebra& alg);
  const MultiMatrixAlgebra& algebra() const { return square_; }
  Vec multiply(const Vec& x, const Vec& y) const;

 private:
  int dim_;
  MultiMatrixAlgebra square_;
  std::vector<int> toSquare_;
};

/// Finite-dimensional weak C*-Hopf algebra in the matrix-unit basis of its algebra.
struct WeakHopfData {
  MultiMatrixAlgebra algebra;
  Mat delta;       ///< dim^2 x dim; column i = Δ(b_i) in the layout of legs()
  RowVec epsilon;  ///< ε(b_i)
  Mat antipode;    ///< column i = S(b_i)
  /// x* = involution * conj(x); the block adjoint when empty.
  std::optional<Mat> involution;
  /// Optional named basis (e.g. group elements): column i holds the
  /// coefficients of element `labels[i]`.
  std::vector<std::string> labels;
  Mat presentation;

  int dim() const { return algebra.dim(); }
  Vec unit() const { return algebra.unit(); }
  Vec multiply(const Vec& x, const Vec& y) const { return algebra.multiply(x, y); }
  Vec coproduct(const Vec& x) const { return delta * x; }
  cplx counit(const Vec& x) const { return (epsilon * x)(0); }
  Vec S(const Vec& x) const { return antipode * x; }
  Vec star(const Vec& x) const;
  /// Matrix J of the involution (x* = J conj(x)).
  Mat star_matrix() const;
  /// Matrices of the target and source counital maps.
  Mat eps_t_matrix() const;
  Mat eps_s_matrix() const;
  Vec eps_t(const Vec& x) const { return eps_t_matrix() * x; }
  Vec eps_s(const Vec& x) const { return eps_s_matrix() * x; }

  /// The same structure expressed in the basis whose elements are the columns of `t`.
  WeakHopfData transported(const Mat& t, const MultiMatrixAlgebra& newAlgebra) const;
};

/// ε^t(b) and ε^s(b).
std::pair<Vec, Vec> counital_maps(const WeakHopfData& w, const Vec& b);

/// Residual table for the coalgebra, multiplicativity, counital, antipode and
/// involution axioms; sets `classification`.
Report verify_axioms(const WeakHopfData& w, const Config& cfg = {});

/// max |S^2 - id| and max |S∘* - *∘S| (exact arithmetic on the stored tensors).
double antipode_square_residual(const WeakHopfData& w);
double antipode_star_residual(const WeakHopfData& w);

struct CartanPair {
  SubalgebraEmbedding target;
  SubalgebraEmbedding source;
  Report report{1e-9};
};

CartanPair cartan_subalgebras(const WeakHopfData& w, const Config& cfg = {});

struct HaarData {
  Vec projection;
  RowVec functional;
  Report report{1e-9};
};

Vec haar_projection(const WeakHopfData& w, const Config& cfg = {}, Report* report = nullptr);
RowVec haar_functional(const WeakHopfData& w, const Config& cfg = {}, Report* report = nullptr);
HaarData haar(const WeakHopfData& w, const Config& cfg = {});

/// Dual weak Hopf algebra, block-decomposed. `basisChange` (optional output)
/// holds, per matrix unit of the dual, its coordinates in the dual basis {b^i}.
WeakHopfData dual_algebra(const WeakHopfData& w, const Config& cfg = {}, Mat* basisChange = nullptr);

/// Compares dual(dual(w)) with w through the evaluation map; returns the
/// largest residual over Δ, ε, S, involution and product.
double double_dual_residual(const WeakHopfData& w, const Config& cfg = {});

/// Largest residual of `phi` (coefficients of images of basis elements of
/// `from`) being a weak Hopf *-isomorphism from -> to.
double isomorphism_residual(const WeakHopfData& from, const WeakHopfData& to, const Mat& phi);

struct Connectedness {
  bool connected = false;
  bool dualConnected = false;
  bool biconnected = false;
  int targetCenterDim = 0;     ///< dim(B_t ∩ Z(B))
  int dualTargetCenterDim = 0; ///< dim(B*_t ∩ Z(B*))
  int cartanIntersectionDim = 0; ///< dim(B_t ∩ B_s)
};

/// Throws if dim(B_t ∩ B_s) = 1 and dual connectedness disagree.
Connectedness connectedness(const WeakHopfData& w, const Config& cfg = {});

/// Dimension of the intersection of two column spans.
int intersection_dimension(const Mat& a, const Mat& b, double relTol);

WeakHopfData pair_groupoid(int n);
WeakHopfData group_algebra(const GroupTable& g, const Config& cfg = {});
/// Algebra of functions on G in the basis of point masses δ_g.
WeakHopfData function_algebra(const GroupTable& g);

/// Explicit isomorphism pair_groupoid(n) -> w when w is a full matrix
/// algebra M_n whose target Cartan subalgebra is maximal abelian;
/// column (i*n + j) is the image of E_ij.
Mat pair_groupoid_intertwiner(const WeakHopfData& w, const Config& cfg = {});

}  // namespace wkh
