#include "wkh/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace wkh {

namespace {

struct Svd {
  RVec s;
  Mat u, v;
};

/// BDCSVD, falling back to JacobiSVD when BDCSVD returns non-finite values
/// (it does on some heavily deflating inputs).
Svd svd(const Mat& a, unsigned options) {
  Eigen::BDCSVD<Mat> fast(a, options);
  Svd out{fast.singularValues(), Mat(), Mat()};
  if (options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) out.u = fast.matrixU();
  if (options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) out.v = fast.matrixV();
  if (out.s.allFinite() && out.u.allFinite() && out.v.allFinite()) return out;
  Eigen::JacobiSVD<Mat> slow(a, options);
  out.s = slow.singularValues();
  if (options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) out.u = slow.matrixU();
  if (options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) out.v = slow.matrixV();
  return out;
}

/// SVD with full V; tall inputs are first reduced to their n x n triangular QR factor.
Svd svd_with_v(const Mat& a) {
  if (a.rows() <= a.cols()) return svd(a, Eigen::ComputeFullV);
  const Eigen::HouseholderQR<Mat> qr(a);
  const Mat r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  return svd(r, Eigen::ComputeFullV);
}

int rank_from_singular(const RVec& s, double relTol) {
  if (s.size() == 0) return 0;
  const double cutoff = relTol * std::max(1.0, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++r;
  return r;
}

}  // namespace

Mat null_space(const Mat& a, double relTol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  const Svd d = svd_with_v(a);
  const int r = rank_from_singular(d.s, relTol);
  return d.v.rightCols(n - r);
}

Mat column_basis(const Mat& a, double relTol) {
  if (a.cols() == 0) return Mat(a.rows(), 0);
  const Svd d = svd(a, Eigen::ComputeThinU);
  const int r = rank_from_singular(d.s, relTol);
  return d.u.leftCols(r);
}

int numerical_rank(const Mat& a, double relTol) {
  if (a.size() == 0) return 0;
  return rank_from_singular(svd(a, 0).s, relTol);
}

double condition_number(const Mat& a) {
  const RVec s = svd(a, 0).s;
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

double relative_residual(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("relative_residual: shape mismatch");
  if (a.size() == 0) return 0.0;
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

double relative_residual(const Vec& a, const Vec& b) {
  return relative_residual(Mat(a), Mat(b));
}

double distance_to_span(const Mat& basis, const Vec& v) {
  Vec r = v - basis * (basis.adjoint() * v);
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff() / scale;
}

bool same_span(const Mat& a, const Mat& b, double relTol) {
  const int ra = numerical_rank(a, relTol);
  const int rb = numerical_rank(b, relTol);
  if (ra != rb) return false;
  Mat ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return numerical_rank(ab, relTol) == ra;
}

Vec Rng::complex_vector(Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex();
  return v;
}

RVec Rng::real_vector(Eigen::Index n) {
  RVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform();
  return v;
}

std::size_t sweep(const std::vector<std::size_t>& extents, std::size_t budget, std::uint64_t seed,
                  const std::function<void(const std::vector<std::size_t>&)>& visit) {
  double total = 1.0;
  for (auto e : extents) {
    if (e == 0) return 0;
    total *= static_cast<double>(e);
  }
  std::vector<std::size_t> idx(extents.size(), 0);
  if (total <= static_cast<double>(budget)) {
    const auto count = static_cast<std::size_t>(total);
    for (std::size_t n = 0; n < count; ++n) {
      visit(idx);
      for (std::size_t k = extents.size(); k-- > 0;) {
        if (++idx[k] < extents[k]) break;
        idx[k] = 0;
      }
    }
    return count;
  }
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t n = 0; n < budget; ++n) {
    for (std::size_t k = 0; k < extents.size(); ++k) idx[k] = rng.index(extents[k]);
    visit(idx);
  }
  return budget;
}

Mat hermitian_sqrt(const Mat& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const RVec& ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < tol) throw Error("square root of a non-positive element");
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace wkh
