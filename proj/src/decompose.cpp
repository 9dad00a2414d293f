#include "wkh/decompose.hpp"

#include <algorithm>
#include <cmath>

namespace wkh {

namespace {

Vec vec_of(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat mat_of(const Vec& v, Eigen::Index k) { return Eigen::Map<const Mat>(v.data(), k, k); }

/// Groups sorted eigenvalues into clusters separated by more than `gap`.
std::vector<std::vector<Eigen::Index>> cluster(const RVec& sortedValues, double gap) {
  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < sortedValues.size(); ++i) {
    if (groups.empty() || sortedValues(i) - sortedValues(groups.back().back()) > gap)
      groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

Mat projector(const Mat& vectors, const std::vector<Eigen::Index>& cols) {
  Mat v(vectors.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) v.col(static_cast<Eigen::Index>(j)) = vectors.col(cols[j]);
  return v * v.adjoint();
}

Mat combination(const std::vector<Mat>& basis, const Vec& c) {
  Mat out = Mat::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t i = 0; i < basis.size(); ++i) out += c(static_cast<Eigen::Index>(i)) * basis[i];
  return out;
}

constexpr int kMaxAttempts = 12;

}  // namespace

MatrixUnitSystem decompose_matrix_algebra(const std::vector<Mat>& spanning, const Config& cfg) {
  if (spanning.empty()) throw Error("decompose: empty spanning set");
  const Eigen::Index k = spanning.front().rows();
  const double tol = cfg.tolerance;
  const double rankTol = std::max(tol, 1e-11);

  Mat s(k * k, static_cast<Eigen::Index>(spanning.size()));
  for (std::size_t i = 0; i < spanning.size(); ++i) s.col(static_cast<Eigen::Index>(i)) = vec_of(spanning[i]);
  const Mat q = column_basis(s, rankTol);
  const Eigen::Index r = q.cols();
  std::vector<Mat> basis;
  basis.reserve(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i) basis.push_back(mat_of(q.col(i), k));

  if (distance_to_span(q, vec_of(Mat::Identity(k, k))) > std::sqrt(tol))
    throw Error("not a subalgebra: span does not contain the unit");
  for (const auto& b : basis)
    if (distance_to_span(q, vec_of(b.adjoint())) > std::sqrt(tol))
      throw Error("not a subalgebra: span is not closed under adjoint");

  Rng rng(cfg.seed);

  // Centre: commutant, within the span, of a few random elements.
  Mat centre;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts) throw Error("decompose: centre computation did not stabilize");
    const int ngen = 3 + attempt;
    Mat eq(ngen * k * k, r);
    for (int g = 0; g < ngen; ++g) {
      const Mat x = combination(basis, rng.complex_vector(r));
      for (Eigen::Index i = 0; i < r; ++i)
        eq.block(g * k * k, i, k * k, 1) = vec_of(basis[static_cast<std::size_t>(i)] * x - x * basis[static_cast<std::size_t>(i)]);
    }
    const Mat ns = null_space(eq, rankTol);
    centre = q * ns;
    bool ok = true;
    for (Eigen::Index j = 0; j < centre.cols() && ok; ++j) {
      const Mat z = mat_of(centre.col(j), k);
      for (const auto& b : basis)
        if ((z * b - b * z).cwiseAbs().maxCoeff() > std::sqrt(tol)) {
          ok = false;
          break;
        }
    }
    if (ok) break;
  }
  const Eigen::Index nz = centre.cols();

  // Minimal central projections.
  std::vector<Mat> central;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts) throw Error("decompose: could not separate central projections");
    const Mat y = mat_of(centre * rng.complex_vector(nz), k);
    const Mat h = (y + y.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    const auto groups = cluster(es.eigenvalues(), 1e-7 * scale);
    if (static_cast<Eigen::Index>(groups.size()) != nz) continue;
    central.clear();
    for (const auto& g : groups) central.push_back(projector(es.eigenvectors(), g));
    break;
  }

  MatrixUnitSystem out;
  for (const Mat& p : central) {
    Mat blockSpan(k * k, r);
    for (Eigen::Index i = 0; i < r; ++i) blockSpan.col(i) = vec_of(p * basis[static_cast<std::size_t>(i)]);
    const Mat bq = column_basis(blockSpan, rankTol);
    const auto dimBlock = bq.cols();
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dimBlock))));
    if (m * m != dimBlock) throw Error("decompose: block dimension is not a square");
    std::vector<Mat> blockBasis;
    for (Eigen::Index i = 0; i < dimBlock; ++i) blockBasis.push_back(mat_of(bq.col(i), k));

    out.blocks.push_back(m);
    if (m == 1) {
      out.units.push_back(p);
      continue;
    }

    Eigen::SelfAdjointEigenSolver<Mat> pes(p);
    std::vector<Eigen::Index> rangeCols;
    for (Eigen::Index i = 0; i < k; ++i)
      if (pes.eigenvalues()(i) > 0.5) rangeCols.push_back(i);
    Mat u(k, static_cast<Eigen::Index>(rangeCols.size()));
    for (std::size_t i = 0; i < rangeCols.size(); ++i) u.col(static_cast<Eigen::Index>(i)) = pes.eigenvectors().col(rangeCols[i]);
    const auto rank = u.cols();
    if (rank % m != 0) throw Error("decompose: inconsistent block multiplicity");

    std::vector<Mat> minimal;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts) throw Error("decompose: could not split a block into minimal projections");
      const Mat y = combination(blockBasis, rng.complex_vector(dimBlock));
      const Mat hr = u.adjoint() * ((y + y.adjoint()) * 0.5) * u;
      Eigen::SelfAdjointEigenSolver<Mat> es(hr);
      const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
      const auto groups = cluster(es.eigenvalues(), 1e-7 * scale);
      if (static_cast<int>(groups.size()) != m) continue;
      bool even = std::all_of(groups.begin(), groups.end(),
                              [&](const auto& g) { return static_cast<Eigen::Index>(g.size()) == rank / m; });
      if (!even) continue;
      minimal.clear();
      const Mat vecs = u * es.eigenvectors();
      for (const auto& g : groups) minimal.push_back(projector(vecs, g));
      break;
    }

    std::vector<Mat> column(static_cast<std::size_t>(m));
    column[0] = minimal[0];
    const double rank1 = minimal[0].trace().real();
    for (int i = 1; i < m; ++i) {
      for (int attempt = 0;; ++attempt) {
        if (attempt == kMaxAttempts) throw Error("decompose: could not build partial isometries");
        const Mat x = combination(blockBasis, rng.complex_vector(dimBlock));
        const Mat yk = minimal[static_cast<std::size_t>(i)] * x * minimal[0];
        const double c = (yk.adjoint() * yk).trace().real() / rank1;
        if (c < 1e-6) continue;
        column[static_cast<std::size_t>(i)] = yk / std::sqrt(c);
        break;
      }
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        out.units.push_back(column[static_cast<std::size_t>(a)] * column[static_cast<std::size_t>(b)].adjoint());
  }

  int total = 0;
  for (int m : out.blocks) total += m * m;
  if (total != r) throw Error("decompose: matrix units do not span the algebra");
  return out;
}

SubalgebraEmbedding decompose_subalgebra(const MultiMatrixAlgebra& ambient, const Mat& spanningCoefficients,
                                         const Config& cfg) {
  std::vector<Mat> reps;
  reps.reserve(static_cast<std::size_t>(spanningCoefficients.cols()));
  for (Eigen::Index i = 0; i < spanningCoefficients.cols(); ++i)
    reps.push_back(ambient.to_rep(spanningCoefficients.col(i)));
  reps.push_back(Mat::Identity(ambient.rep_size(), ambient.rep_size()));
  const auto units = decompose_matrix_algebra(reps, cfg);
  SubalgebraEmbedding emb;
  emb.sub = MultiMatrixAlgebra(units.blocks);
  emb.ambient = ambient;
  emb.images.resize(ambient.dim(), emb.sub.dim());
  for (std::size_t i = 0; i < units.units.size(); ++i)
    emb.images.col(static_cast<Eigen::Index>(i)) = ambient.from_rep(units.units[i]);
  return emb;
}

Vec StructureConstants::multiply(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim());
  for (int i = 0; i < dim(); ++i)
    if (x(i) != cplx(0.0)) out += x(i) * (left[static_cast<std::size_t>(i)] * y);
  return out;
}

AbstractDecomposition decompose_abstract(const StructureConstants& sc, const Config& cfg) {
  const int n = sc.dim();
  RowVec traces(n);
  for (int i = 0; i < n; ++i) traces(i) = sc.left[static_cast<std::size_t>(i)].trace();

  auto leftOf = [&](const Vec& a) {
    Mat l = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      if (a(i) != cplx(0.0)) l += a(i) * sc.left[static_cast<std::size_t>(i)];
    return l;
  };

  Mat gram(n, n);
  for (int i = 0; i < n; ++i) {
    const Mat li = leftOf(sc.involution.col(i));
    gram.row(i) = traces * li;
  }
  if (relative_residual(gram, Mat(gram.adjoint())) > std::sqrt(cfg.tolerance))
    throw Error("involution is not compatible with a trace");
  Eigen::SelfAdjointEigenSolver<Mat> ges(gram);
  if (ges.eigenvalues().minCoeff() <= cfg.tolerance * std::max(1.0, ges.eigenvalues().maxCoeff()))
    throw Error("involution is not positive (not a C*-algebra)");
  const Mat h = gram.llt().matrixU();  // gram = h^* h
  const Mat hinv = h.inverse();

  std::vector<Mat> reps;
  for (int i = 0; i < n; ++i) reps.push_back(h * sc.left[static_cast<std::size_t>(i)] * hinv);
  for (int i = 0; i < n; ++i) {
    const Mat adj = h * leftOf(sc.involution.col(i)) * hinv;
    if (relative_residual(adj, Mat(reps[static_cast<std::size_t>(i)].adjoint())) > std::sqrt(cfg.tolerance))
      throw Error("regular representation is not a *-representation");
  }

  const auto units = decompose_matrix_algebra(reps, cfg);
  AbstractDecomposition out;
  out.algebra = MultiMatrixAlgebra(units.blocks);
  out.basisChange.resize(n, n);
  const Vec unitOn = h * sc.unit;
  for (std::size_t i = 0; i < units.units.size(); ++i)
    out.basisChange.col(static_cast<Eigen::Index>(i)) = hinv * (units.units[i] * unitOn);
  return out;
}

}  // namespace wkh
