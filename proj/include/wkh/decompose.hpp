#pragma once

#include <vector>

#include "wkh/fd_algebra.hpp"

namespace wkh {

/// Matrix units of a *-subalgebra of M_K, ordered like MultiMatrixAlgebra
/// coefficients (block, row, column).
struct MatrixUnitSystem {
  std::vector<int> blocks;
  std::vector<Mat> units;
};

/// Wedderburn decomposition of the unital *-algebra spanned by `spanning`
/// (K x K matrices, closed under product and adjoint).
///
/// Minimal central projections come from the spectral decomposition of a
/// random self-adjoint central element, minimal projections inside a block
/// from a random self-adjoint element of that block; blocks are ordered by
/// the eigenvalues of the central element. Deterministic given cfg.seed.
MatrixUnitSystem decompose_matrix_algebra(const std::vector<Mat>& spanning, const Config& cfg);

/// Block decomposition of the *-subalgebra of `ambient` spanned by the
/// columns of `spanningCoefficients`.
SubalgebraEmbedding decompose_subalgebra(const MultiMatrixAlgebra& ambient, const Mat& spanningCoefficients,
                                         const Config& cfg);

/// Finite-dimensional *-algebra given in an arbitrary basis.
struct StructureConstants {
  std::vector<Mat> left;  ///< left[i]: coefficient matrix of y -> x_i y
  Vec unit;
  Mat involution;         ///< x* = involution * conj(x)

  int dim() const { return static_cast<int>(left.size()); }
  Vec multiply(const Vec& x, const Vec& y) const;
};

/// Result of block-decomposing an abstract *-algebra; column i of
/// `basisChange` holds the old-basis coordinates of matrix unit i.
struct AbstractDecomposition {
  MultiMatrixAlgebra algebra;
  Mat basisChange;
};

/// Decomposes an abstract C*-algebra through the GNS representation of the
/// trace x -> Tr(left multiplication by x). Throws if the involution is not
/// positive for that trace.
AbstractDecomposition decompose_abstract(const StructureConstants& sc, const Config& cfg);

}  // namespace wkh
