#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wkh {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RowVec = Eigen::RowVectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Numerical settings shared by every verification routine.
struct Config {
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  /// Maximum number of argument tuples enumerated by a single identity
  /// sweep before switching to seeded random combinations.
  std::size_t sweepBudget = 20000;
};

/// Raised for every domain-level failure; `what()` carries the named reason.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Orthonormal basis of the null space of `a`. Singular values below
/// `relTol * max(1, sigma_max)` count as zero.
Mat null_space(const Mat& a, double relTol);

/// Orthonormal basis of the column span of `a`.
Mat column_basis(const Mat& a, double relTol);

int numerical_rank(const Mat& a, double relTol);

/// 2-norm condition number (sigma_max / sigma_min); infinity when singular.
double condition_number(const Mat& a);

/// Largest |a_ij - b_ij| divided by max(1, |a|_max, |b|_max).
double relative_residual(const Mat& a, const Mat& b);
double relative_residual(const Vec& a, const Vec& b);

/// Distance of `v` from span(basis) (orthonormal columns), relative to max(1, |v|).
double distance_to_span(const Mat& orthonormalBasis, const Vec& v);

/// True when span(a) == span(b) up to `relTol`.
bool same_span(const Mat& a, const Mat& b, double relTol);

/// Deterministic generator for random coefficients.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return dist_(engine_); }
  cplx complex() { return {uniform(), uniform()}; }
  Vec complex_vector(Eigen::Index n);
  RVec real_vector(Eigen::Index n);
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> dist_{-1.0, 1.0};
};

/// Enumerates index tuples over `extents`. When the full product exceeds
/// `budget`, visits `budget` seeded random tuples instead. Returns the
/// number of tuples visited.
std::size_t sweep(const std::vector<std::size_t>& extents, std::size_t budget, std::uint64_t seed,
                  const std::function<void(const std::vector<std::size_t>&)>& visit);

/// Principal square root of a Hermitian positive definite matrix; throws if
/// an eigenvalue is below `tol`.
Mat hermitian_sqrt(const Mat& h, double tol);

}  // namespace wkh
