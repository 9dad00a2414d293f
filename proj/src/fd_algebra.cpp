#include "wkh/fd_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "wkh/decompose.hpp"

namespace wkh {

// ---------------------------------------------------------------------------
// MultiMatrixAlgebra

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error("multimatrix algebra needs at least one block");
  for (int m : blocks_) {
    if (m < 1) throw Error("block sizes must be positive");
    offsets_.push_back(dim_);
    dim_ += m * m;
    repSize_ += m;
  }
  blockOf_.resize(static_cast<std::size_t>(dim_));
  adjointIndex_.resize(static_cast<std::size_t>(dim_));
  for (int a = 0; a < num_blocks(); ++a)
    for (int k = 0; k < blocks_[a]; ++k)
      for (int l = 0; l < blocks_[a]; ++l) {
        blockOf_[static_cast<std::size_t>(index(a, k, l))] = a;
        adjointIndex_[static_cast<std::size_t>(index(a, k, l))] = index(a, l, k);
      }
}

Vec MultiMatrixAlgebra::unit() const {
  Vec u = Vec::Zero(dim_);
  for (int a = 0; a < num_blocks(); ++a)
    for (int k = 0; k < blocks_[a]; ++k) u(index(a, k, k)) = 1.0;
  return u;
}

Vec MultiMatrixAlgebra::basis(int i) const {
  Vec v = Vec::Zero(dim_);
  v(i) = 1.0;
  return v;
}

Vec MultiMatrixAlgebra::block_unit(int a) const {
  Vec u = Vec::Zero(dim_);
  for (int k = 0; k < blocks_[a]; ++k) u(index(a, k, k)) = 1.0;
  return u;
}

std::vector<Mat> MultiMatrixAlgebra::unpack(const Vec& x) const {
  if (x.size() != dim_) throw Error("element does not belong to this algebra");
  std::vector<Mat> out;
  out.reserve(blocks_.size());
  for (int a = 0; a < num_blocks(); ++a) {
    const int m = blocks_[a];
    Mat b(m, m);
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) b(k, l) = x(index(a, k, l));
    out.push_back(std::move(b));
  }
  return out;
}

Vec MultiMatrixAlgebra::pack(const std::vector<Mat>& bs) const {
  Vec x(dim_);
  for (int a = 0; a < num_blocks(); ++a) {
    const int m = blocks_[a];
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) x(index(a, k, l)) = bs[static_cast<std::size_t>(a)](k, l);
  }
  return x;
}

Vec MultiMatrixAlgebra::multiply(const Vec& x, const Vec& y) const {
  Vec out(dim_);
  for (int a = 0; a < num_blocks(); ++a) {
    const int m = blocks_[a];
    const int o = offsets_[a];
    using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> xa(x.data() + o, m, m);
    Eigen::Map<const RowMajor> ya(y.data() + o, m, m);
    Eigen::Map<RowMajor> oa(out.data() + o, m, m);
    oa.noalias() = xa * ya;
  }
  return out;
}

Vec MultiMatrixAlgebra::adjoint(const Vec& x) const {
  Vec out(dim_);
  for (int i = 0; i < dim_; ++i) out(adjointIndex_[static_cast<std::size_t>(i)]) = std::conj(x(i));
  return out;
}

int MultiMatrixAlgebra::unit_product(int i, int j) const {
  const int a = blockOf_[static_cast<std::size_t>(i)];
  if (blockOf_[static_cast<std::size_t>(j)] != a) return -1;
  const int m = blocks_[a];
  const int ri = i - offsets_[a], rj = j - offsets_[a];
  if (ri % m != rj / m) return -1;
  return index(a, ri / m, rj % m);
}

Mat MultiMatrixAlgebra::to_rep(const Vec& x) const {
  Mat r = Mat::Zero(repSize_, repSize_);
  int pos = 0;
  const auto bs = unpack(x);
  for (int a = 0; a < num_blocks(); ++a) {
    r.block(pos, pos, blocks_[a], blocks_[a]) = bs[static_cast<std::size_t>(a)];
    pos += blocks_[a];
  }
  return r;
}

Vec MultiMatrixAlgebra::from_rep(const Mat& r) const {
  if (r.rows() != repSize_ || r.cols() != repSize_) throw Error("representation size mismatch");
  std::vector<Mat> bs;
  int pos = 0;
  for (int a = 0; a < num_blocks(); ++a) {
    bs.push_back(r.block(pos, pos, blocks_[a], blocks_[a]));
    pos += blocks_[a];
  }
  return pack(bs);
}

Mat MultiMatrixAlgebra::left_mult(const Vec& x) const {
  // x f^a_{kl} = sum_p x^a_{pk} f^a_{pl}
  Mat out = Mat::Zero(dim_, dim_);
  for (int a = 0; a < num_blocks(); ++a) {
    const int m = blocks_[a];
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l)
        for (int p = 0; p < m; ++p) out(index(a, p, l), index(a, k, l)) = x(index(a, p, k));
  }
  return out;
}

Mat MultiMatrixAlgebra::right_mult(const Vec& x) const {
  // f^a_{kl} x = sum_q x^a_{lq} f^a_{kq}
  Mat out = Mat::Zero(dim_, dim_);
  for (int a = 0; a < num_blocks(); ++a) {
    const int m = blocks_[a];
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l)
        for (int q = 0; q < m; ++q) out(index(a, k, q), index(a, k, l)) = x(index(a, l, q));
  }
  return out;
}

Mat MultiMatrixAlgebra::adjoint_matrix() const {
  Mat p = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) p(adjointIndex_[static_cast<std::size_t>(i)], i) = 1.0;
  return p;
}

Vec MultiMatrixAlgebra::inverse(const Vec& x) const {
  auto bs = unpack(x);
  for (auto& b : bs) {
    Eigen::FullPivLU<Mat> lu(b);
    if (!lu.isInvertible()) throw Error("element is not invertible");
    b = lu.inverse();
  }
  return pack(bs);
}

double MultiMatrixAlgebra::min_hermitian_eigenvalue(const Vec& x) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : unpack(x)) {
    Eigen::SelfAdjointEigenSolver<Mat> es((b + b.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

Vec MultiMatrixAlgebra::positive_power(const Vec& x, double power, double tol) const {
  auto bs = unpack(x);
  for (auto& b : bs) {
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > std::sqrt(tol) * std::max(1.0, b.cwiseAbs().maxCoeff()))
      throw Error("element is not self-adjoint");
    Eigen::SelfAdjointEigenSolver<Mat> es((b + b.adjoint()) * 0.5);
    if (es.eigenvalues().minCoeff() <= tol) throw Error("element is not positive invertible");
    RVec p = es.eigenvalues().array().pow(power);
    b = es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint();
  }
  return pack(bs);
}

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(std::shared_ptr<const MultiMatrixAlgebra> owner, Vec coefficients)
    : owner_(std::move(owner)), coeffs_(std::move(coefficients)) {
  if (!owner_) throw Error("element without owner");
  if (coeffs_.size() != owner_->dim()) throw Error("coefficient count does not match algebra dimension");
}

AlgebraElement AlgebraElement::unit(std::shared_ptr<const MultiMatrixAlgebra> owner) {
  Vec u = owner->unit();
  return AlgebraElement(std::move(owner), std::move(u));
}

void AlgebraElement::same_owner(const AlgebraElement& o) const {
  if (owner_ != o.owner_ && !(*owner_ == *o.owner_)) throw Error("elements belong to different algebras");
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  same_owner(o);
  return {owner_, coeffs_ + o.coeffs_};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  same_owner(o);
  return {owner_, coeffs_ - o.coeffs_};
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  same_owner(o);
  return {owner_, owner_->multiply(coeffs_, o.coeffs_)};
}

AlgebraElement AlgebraElement::operator*(cplx s) const { return {owner_, coeffs_ * s}; }

AlgebraElement AlgebraElement::adjoint() const { return {owner_, owner_->adjoint(coeffs_)}; }

Mat AlgebraElement::block(int a) const { return owner_->unpack(coeffs_)[static_cast<std::size_t>(a)]; }

// ---------------------------------------------------------------------------
// TraceState

TraceState::TraceState(RVec weights) : weights_(std::move(weights)) {
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    if (!(weights_(i) > 0.0)) throw Error("degenerate trace: block weights must be positive");
}

TraceState TraceState::normalized_uniform(const MultiMatrixAlgebra& alg) {
  // tau(p) proportional to 1 on every minimal projection
  return TraceState(RVec::Constant(alg.num_blocks(), 1.0 / alg.rep_size()));
}

bool TraceState::normalized(const MultiMatrixAlgebra& alg) const {
  double s = 0.0;
  for (int a = 0; a < alg.num_blocks(); ++a) s += alg.block_size(a) * weights_(a);
  return std::abs(s - 1.0) < 1e-12;
}

cplx TraceState::value(const MultiMatrixAlgebra& alg, const Vec& x) const {
  return (functional(alg) * x)(0);
}

RowVec TraceState::functional(const MultiMatrixAlgebra& alg) const {
  if (weights_.size() != alg.num_blocks()) throw Error("trace does not match algebra");
  RowVec r = RowVec::Zero(alg.dim());
  for (int a = 0; a < alg.num_blocks(); ++a)
    for (int k = 0; k < alg.block_size(a); ++k) r(alg.index(a, k, k)) = weights_(a);
  return r;
}

RVec TraceState::coefficient_weights(const MultiMatrixAlgebra& alg) const {
  if (weights_.size() != alg.num_blocks()) throw Error("trace does not match algebra");
  RVec w(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) w(i) = weights_(alg.block_of(i));
  return w;
}

// ---------------------------------------------------------------------------
// SubalgebraEmbedding

SubalgebraEmbedding SubalgebraEmbedding::identity(const MultiMatrixAlgebra& alg) {
  return {alg, alg, Mat::Identity(alg.dim(), alg.dim())};
}

SubalgebraEmbedding SubalgebraEmbedding::scalars(const MultiMatrixAlgebra& ambient) {
  return {MultiMatrixAlgebra({1}), ambient, Mat(ambient.unit())};
}

Vec SubalgebraEmbedding::coordinates(const Vec& x) const {
  // images of distinct matrix units are orthogonal for the coefficient inner product
  Vec c(images.cols());
  for (Eigen::Index i = 0; i < images.cols(); ++i)
    c(i) = images.col(i).dot(x) / images.col(i).squaredNorm();
  return c;
}

double SubalgebraEmbedding::distance(const Vec& x) const {
  return relative_residual(Vec(images * coordinates(x)), x);
}

SubalgebraEmbedding SubalgebraEmbedding::then(const SubalgebraEmbedding& outer) const {
  if (!(ambient == outer.sub)) throw Error("cannot compose embeddings: algebra mismatch");
  return {sub, outer.ambient, outer.images * images};
}

Report SubalgebraEmbedding::verify(double tol) const {
  Report r(tol);
  if (images.rows() != ambient.dim() || images.cols() != sub.dim()) {
    r.require("shape", "", false, "image matrix has the wrong shape");
    return r;
  }
  r.add("unit", "", relative_residual(Vec(map(sub.unit())), ambient.unit()));
  double prod = 0.0, adj = 0.0;
  for (int i = 0; i < sub.dim(); ++i) {
    adj = std::max(adj, relative_residual(ambient.adjoint(images.col(i)), Vec(images.col(sub.adjoint_index(i)))));
    for (int j = 0; j < sub.dim(); ++j) {
      const int p = sub.unit_product(i, j);
      const Vec lhs = ambient.multiply(images.col(i), images.col(j));
      const Vec rhs = p < 0 ? Vec(Vec::Zero(ambient.dim())) : Vec(images.col(p));
      prod = std::max(prod, relative_residual(lhs, rhs));
    }
  }
  r.add("product", "", prod);
  r.add("adjoint", "", adj);
  r.require("injective", "", numerical_rank(images, 1e-9) == sub.dim());
  return r;
}

// ---------------------------------------------------------------------------
// Conditional expectations

ConditionalExpectation::ConditionalExpectation(const SubalgebraEmbedding& sub, const TraceState& trace,
                                               double tol)
    : images_(sub.images) {
  Rng rng(0x5eed);
  const Vec x = sub.images * rng.complex_vector(sub.sub.dim());
  const Vec y = sub.images * rng.complex_vector(sub.sub.dim());
  if (sub.distance(sub.ambient.multiply(x, y)) > std::sqrt(tol) ||
      sub.distance(sub.ambient.adjoint(x)) > std::sqrt(tol) ||
      relative_residual(Vec(sub.map(sub.sub.unit())), sub.ambient.unit()) > std::sqrt(tol))
    throw Error("not a subalgebra");
  const RVec w = trace.coefficient_weights(sub.ambient);
  const Mat vw = sub.images.adjoint() * w.asDiagonal();
  const Mat gram = vw * sub.images;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= tol * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw Error("degenerate trace");
  solver_ = gram.ldlt().solve(vw);
}

Vec ConditionalExpectation::sub_coordinates(const Vec& x) const { return solver_ * x; }

Vec conditional_expectation(const SubalgebraEmbedding& sub, const TraceState& trace, const Vec& x, double tol) {
  return ConditionalExpectation(sub, trace, tol)(x);
}

AlgebraElement conditional_expectation(const SubalgebraEmbedding& sub, const TraceState& trace,
                                       const AlgebraElement& x, double tol) {
  if (!(x.algebra() == sub.ambient)) throw Error("element is not in the ambient algebra");
  return {x.owner(), conditional_expectation(sub, trace, x.coefficients(), tol)};
}

// ---------------------------------------------------------------------------
// Commutants, centres, inclusion matrices

SubalgebraEmbedding relative_commutant(const SubalgebraEmbedding& sub, const Config& cfg) {
  const auto& amb = sub.ambient;
  const int k = amb.dim();
  Mat eq(static_cast<Eigen::Index>(sub.sub.dim()) * k, k);
  for (int i = 0; i < sub.sub.dim(); ++i) {
    const Vec s = sub.images.col(i);
    eq.block(static_cast<Eigen::Index>(i) * k, 0, k, k) = amb.left_mult(s) - amb.right_mult(s);
  }
  const Mat ns = null_space(eq, std::max(cfg.tolerance, 1e-11));
  return decompose_subalgebra(amb, ns, cfg);
}

SubalgebraEmbedding relative_commutant(const SubalgebraEmbedding& s, const SubalgebraEmbedding& t,
                                       const Config& cfg) {
  if (!(s.ambient == t.ambient)) throw Error("relative commutant: embeddings live in different algebras");
  const auto& amb = s.ambient;
  const int k = amb.dim();
  const Eigen::Index dt = t.images.cols();
  Mat eq(static_cast<Eigen::Index>(s.sub.dim()) * k, dt);
  for (int i = 0; i < s.sub.dim(); ++i) {
    const Vec x = s.images.col(i);
    eq.block(static_cast<Eigen::Index>(i) * k, 0, k, dt) = (amb.left_mult(x) - amb.right_mult(x)) * t.images;
  }
  const Mat ns = null_space(eq, std::max(cfg.tolerance, 1e-11));
  return decompose_subalgebra(amb, t.images * ns, cfg);
}

SubalgebraEmbedding center(const MultiMatrixAlgebra& alg, const Config& cfg) {
  return relative_commutant(SubalgebraEmbedding::identity(alg), cfg);
}

SubalgebraEmbedding center(const SubalgebraEmbedding& sub, const Config& cfg) {
  return center(sub.sub, cfg).then(sub);
}

InclusionMatrix inclusion_matrix(const SubalgebraEmbedding& sub, double tol) {
  InclusionMatrix lam;
  lam.subBlocks = sub.sub.blocks();
  lam.ambientBlocks = sub.ambient.blocks();
  lam.entries = Eigen::MatrixXi::Zero(sub.sub.num_blocks(), sub.ambient.num_blocks());
  for (int a = 0; a < sub.sub.num_blocks(); ++a) {
    const auto parts = sub.ambient.unpack(sub.images.col(sub.sub.index(a, 0, 0)));
    for (int b = 0; b < sub.ambient.num_blocks(); ++b) {
      const double t = parts[static_cast<std::size_t>(b)].trace().real();
      const long r = std::lround(t);
      if (std::abs(t - static_cast<double>(r)) > std::sqrt(tol) || r < 0)
        throw Error("inclusion matrix: image of a minimal projection has non-integral rank");
      lam.entries(a, b) = static_cast<int>(r);
    }
  }
  for (int b = 0; b < sub.ambient.num_blocks(); ++b) {
    int s = 0;
    for (int a = 0; a < sub.sub.num_blocks(); ++a) s += lam.entries(a, b) * sub.sub.block_size(a);
    if (s != sub.ambient.block_size(b)) throw Error("embedding not unital");
  }
  return lam;
}

MarkovTrace markov_trace(const InclusionMatrix& lam, double tol) {
  const RMat l = lam.entries.cast<double>();
  const RMat s = l * l.transpose();
  const auto n = s.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Eigen::Index> todo;
  todo.push(0);
  seen[0] = true;
  while (!todo.empty()) {
    const auto i = todo.front();
    todo.pop();
    for (Eigen::Index j = 0; j < n; ++j)
      if (s(i, j) > 0.5 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        todo.push(j);
      }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw Error("inclusion not connected");

  Eigen::SelfAdjointEigenSolver<RMat> es(s);
  MarkovTrace out;
  out.lambdaInverse = es.eigenvalues()(n - 1);
  RVec v = es.eigenvectors().col(n - 1);
  if (v.sum() < 0) v = -v;
  if (v.minCoeff() <= 0.0) throw Error("Perron-Frobenius vector is not positive");
  double norm = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) norm += lam.subBlocks[static_cast<std::size_t>(a)] * v(a);
  out.traceVector = v / norm;
  out.residual = (s * out.traceVector - out.lambdaInverse * out.traceVector).cwiseAbs().maxCoeff() /
                 std::max(1.0, out.lambdaInverse);
  if (out.residual > tol) throw Error("Perron-Frobenius residual above tolerance");
  return out;
}

TraceState restrict_trace(const SubalgebraEmbedding& sub, const TraceState& ambientTrace) {
  RVec w(sub.sub.num_blocks());
  for (int a = 0; a < sub.sub.num_blocks(); ++a)
    w(a) = ambientTrace.value(sub.ambient, sub.images.col(sub.sub.index(a, 0, 0))).real();
  return TraceState(w);
}

Vec watatani_index(const MultiMatrixAlgebra& alg, const TraceState& trace) {
  if (trace.weights().size() != alg.num_blocks()) throw Error("trace does not match algebra");
  Vec out = Vec::Zero(alg.dim());
  for (int a = 0; a < alg.num_blocks(); ++a) {
    if (!(trace.weight(a) > 0.0)) throw Error("Watatani index needs positive weights");
    out += (alg.block_size(a) / trace.weight(a)) * alg.block_unit(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generated subalgebras and the basic construction

Mat generated_subalgebra(const MultiMatrixAlgebra& ambient, const std::vector<Vec>& generators, const Config& cfg) {
  const int k = ambient.dim();
  Mat q(k, 0);
  const double drop = std::max(cfg.tolerance, 1e-10);
  auto add = [&](Vec v) {
    const double scale = std::max(1e-300, v.norm());
    for (int pass = 0; pass < 2; ++pass)
      if (q.cols() > 0) v -= q * (q.adjoint() * v);
    if (v.norm() > drop * scale && v.norm() > 1e-12) {
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = v / v.norm();
      return true;
    }
    return false;
  };
  add(ambient.unit());
  for (const auto& g : generators) add(g);
  for (Eigen::Index done = 0; done < q.cols(); ++done) {
    const Vec b = q.col(done);
    for (const auto& g : generators) add(ambient.multiply(b, g));
    if (q.cols() > k) throw Error("generated_subalgebra: dimension overflow");
  }
  return q;
}

JonesExtension basic_construction(const SubalgebraEmbedding& sub, const TraceState& trace, double lambda,
                                  const Config& cfg) {
  const double tol = cfg.tolerance;
  const MultiMatrixAlgebra& d = sub.ambient;
  if (!sub.verify(tol).all_pass()) throw Error("not a subalgebra");
  if (!(lambda > 0.0)) throw Error("lambda must be positive");

  const InclusionMatrix lam = inclusion_matrix(sub, tol);
  const RMat l = lam.entries.cast<double>();
  const RVec& td = trace.weights();
  {
    const RVec lhs = l.transpose() * l * td;
    const double res = (lhs - td / lambda).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff());
    if (res > tol) {
      std::ostringstream msg;
      msg << "trace not Markov (residual " << res << ")";
      throw Error(msg.str());
    }
  }

  // GNS space L2(D, tau) with orthonormal basis f_i / sqrt(tau_block(i)).
  const int n = d.dim();
  const RVec w = trace.coefficient_weights(d);
  const RVec ws = w.cwiseSqrt();
  const RVec wsi = ws.cwiseInverse();
  const MultiMatrixAlgebra carrier({n});
  auto leftOp = [&](const Vec& x) -> Mat { return ws.asDiagonal() * d.left_mult(x) * wsi.asDiagonal(); };
  auto asCarrier = [&](const Mat& op) {
    Vec v(carrier.dim());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v(carrier.index(0, r, c)) = op(r, c);
    return v;
  };
  const Mat qsub = column_basis(ws.asDiagonal() * sub.images, 1e-12);
  const Mat eOp = qsub * qsub.adjoint();

  Rng rng(cfg.seed ^ 0xb5c0ULL);
  std::vector<Vec> gens;
  for (int g = 0; g < 2; ++g) {
    const Vec x = rng.complex_vector(n);
    gens.push_back(asCarrier(leftOp(x + d.adjoint(x))));
  }
  gens.push_back(asCarrier(eOp));
  const Mat span = generated_subalgebra(carrier, gens, cfg);
  const SubalgebraEmbedding gen = decompose_subalgebra(carrier, span, cfg);

  JonesExtension out;
  out.algebra = gen.sub;
  out.lambda = lambda;
  for (int i = 0; i < gen.sub.dim(); ++i) out.gnsImages.push_back(carrier.to_rep(gen.images.col(i)));

  Mat larger(gen.sub.dim(), n);
  double embedRes = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec op = asCarrier(leftOp(d.basis(i)));
    larger.col(i) = gen.coordinates(op);
    embedRes = std::max(embedRes, gen.distance(op));
  }
  out.larger = {d, gen.sub, larger};
  out.e = gen.coordinates(asCarrier(eOp));

  // Extended trace: Tr(x e y) = lambda tau(x y) for x, y in D.
  const int nb = gen.sub.num_blocks();
  auto blockTraces = [&](const Vec& c) {
    RowVec t = RowVec::Zero(nb);
    for (int a = 0; a < nb; ++a)
      for (int k = 0; k < gen.sub.block_size(a); ++k) t(a) += c(gen.sub.index(a, k, k));
    return t;
  };
  Mat sys(static_cast<Eigen::Index>(n) * n + n, nb);
  Vec rhs(sys.rows());
  Eigen::Index row = 0;
  for (int i = 0; i < n; ++i) {
    const Vec xe = gen.sub.multiply(larger.col(i), out.e);
    for (int j = 0; j < n; ++j) {
      sys.row(row) = blockTraces(gen.sub.multiply(xe, larger.col(j)));
      rhs(row++) = lambda * trace.value(d, d.multiply(d.basis(i), d.basis(j)));
    }
  }
  for (int i = 0; i < n; ++i) {
    sys.row(row) = blockTraces(larger.col(i));
    rhs(row++) = trace.value(d, d.basis(i));
  }
  const Vec s = sys.colPivHouseholderQr().solve(rhs);
  const double traceRes = relative_residual(Vec(sys * s), rhs);
  if (traceRes > tol) {
    std::ostringstream msg;
    msg << "extended trace inconsistent (max residual " << traceRes << ")";
    throw Error(msg.str());
  }
  out.extendedTrace = TraceState(s.real());

  Report& rep = out.report;
  rep = Report(tol);
  rep.add("embedding", "", embedRes);
  rep.add("extended_trace", "", traceRes);
  const auto& alg = out.algebra;
  rep.add("e_projection", "",
          std::max(relative_residual(alg.multiply(out.e, out.e), out.e), relative_residual(alg.adjoint(out.e), out.e)));
  ConditionalExpectation ex(sub, trace, tol);
  double jones = 0.0, markov = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec x = larger.col(i);
    const Vec exe = alg.multiply(alg.multiply(out.e, x), out.e);
    const Vec ee = alg.multiply(out.larger.map(ex(d.basis(i))), out.e);
    jones = std::max(jones, relative_residual(exe, ee));
    const cplx lhs = out.extendedTrace.value(alg, alg.multiply(x, out.e));
    const cplx rhsv = lambda * trace.value(d, d.basis(i));
    markov = std::max(markov, std::abs(lhs - rhsv));
  }
  rep.add("jones_relation", "", jones);
  rep.add("markov", "", markov);
  int predicted = 0;
  const Eigen::VectorXi sizes = lam.entries * Eigen::Map<const Eigen::VectorXi>(d.blocks().data(), d.num_blocks());
  for (Eigen::Index a = 0; a < sizes.size(); ++a) predicted += sizes(a) * sizes(a);
  rep.require("dimension", "", predicted == alg.dim(),
              "predicted " + std::to_string(predicted) + ", got " + std::to_string(alg.dim()));
  if (!rep.all_pass()) throw Error("basic construction failed: " + rep.failures());
  return out;
}

}  // namespace wkh
