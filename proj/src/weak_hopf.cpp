#include "wkh/weak_hopf.hpp"

#include <algorithm>
#include <cmath>

#include "wkh/decompose.hpp"

namespace wkh {

Mat legs(const Vec& v, int dim) {
  Mat x(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) x(j, k) = v(j * dim + k);
  return x;
}

Vec unlegs(const Mat& x) {
  const auto dim = x.rows();
  Vec v(dim * x.cols());
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index k = 0; k < x.cols(); ++k) v(j * x.cols() + k) = x(j, k);
  return v;
}

namespace {

std::vector<int> square_blocks(const MultiMatrixAlgebra& alg) {
  std::vector<int> out;
  for (int a : alg.blocks())
    for (int b : alg.blocks()) out.push_back(a * b);
  return out;
}

/// Tensors of a weak Hopf structure in an arbitrary basis.
struct Tensors {
  Mat delta;
  RowVec epsilon;
  Mat antipode;
  Mat involution;
};

Tensors transport(const Tensors& in, const Mat& t) {
  const Eigen::Index n = t.rows();
  const Mat ti = t.inverse();
  Tensors out;
  out.delta.resize(n * n, n);
  const Mat dt = in.delta * t;
  for (Eigen::Index i = 0; i < n; ++i)
    out.delta.col(i) = unlegs(ti * legs(dt.col(i), static_cast<int>(n)) * ti.transpose());
  out.epsilon = in.epsilon * t;
  out.antipode = ti * in.antipode * t;
  out.involution = ti * in.involution * t.conjugate();
  return out;
}

WeakHopfData assemble(const MultiMatrixAlgebra& alg, const Tensors& t) {
  WeakHopfData w;
  w.algebra = alg;
  w.delta = t.delta;
  w.epsilon = t.epsilon;
  w.antipode = t.antipode;
  const Mat adj = alg.adjoint_matrix();
  if (relative_residual(t.involution, adj) > 1e-11) w.involution = t.involution;
  return w;
}

Tensors tensors_of(const WeakHopfData& w) { return {w.delta, w.epsilon, w.antipode, w.star_matrix()}; }

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TensorSquare::TensorSquare(const MultiMatrixAlgebra& alg)
    : dim_(alg.dim()), square_(square_blocks(alg)), toSquare_(static_cast<std::size_t>(alg.dim() * alg.dim())) {
  const int nb = alg.num_blocks();
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      const int ma = alg.block_size(a), mb = alg.block_size(b);
      const int blk = a * nb + b;
      for (int p = 0; p < ma; ++p)
        for (int q = 0; q < ma; ++q)
          for (int r = 0; r < mb; ++r)
            for (int s = 0; s < mb; ++s)
              toSquare_[static_cast<std::size_t>(alg.index(a, p, q) * dim_ + alg.index(b, r, s))] =
                  square_.index(blk, p * mb + r, q * mb + s);
    }
}

Vec TensorSquare::multiply(const Vec& x, const Vec& y) const {
  const auto n = static_cast<Eigen::Index>(toSquare_.size());
  Vec xs(n), ys(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    xs(toSquare_[static_cast<std::size_t>(i)]) = x(i);
    ys(toSquare_[static_cast<std::size_t>(i)]) = y(i);
  }
  const Vec zs = square_.multiply(xs, ys);
  Vec z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = zs(toSquare_[static_cast<std::size_t>(i)]);
  return z;
}

Vec WeakHopfData::star(const Vec& x) const {
  if (involution) return *involution * x.conjugate();
  return algebra.adjoint(x);
}

Mat WeakHopfData::star_matrix() const { return involution ? *involution : algebra.adjoint_matrix(); }

Mat WeakHopfData::eps_t_matrix() const {
  const int n = dim();
  const Mat d = legs(coproduct(unit()), n);
  Mat el = Mat::Zero(n, n);  // ε(b_j b_i)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int p = algebra.unit_product(j, i);
      if (p >= 0) el(j, i) = epsilon(p);
    }
  return d.transpose() * el;
}

Mat WeakHopfData::eps_s_matrix() const {
  const int n = dim();
  const Mat d = legs(coproduct(unit()), n);
  Mat er = Mat::Zero(n, n);  // ε(b_i b_k) at (k, i)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      const int p = algebra.unit_product(i, k);
      if (p >= 0) er(k, i) = epsilon(p);
    }
  return d * er;
}

WeakHopfData WeakHopfData::transported(const Mat& t, const MultiMatrixAlgebra& newAlgebra) const {
  WeakHopfData out = assemble(newAlgebra, transport(tensors_of(*this), t));
  out.labels = labels;
  if (presentation.size() > 0) out.presentation = t.inverse() * presentation;
  return out;
}

std::pair<Vec, Vec> counital_maps(const WeakHopfData& w, const Vec& b) { return {w.eps_t(b), w.eps_s(b)}; }

double antipode_square_residual(const WeakHopfData& w) {
  return max_abs(w.antipode * w.antipode - Mat::Identity(w.dim(), w.dim()));
}

double antipode_star_residual(const WeakHopfData& w) {
  const Mat j = w.star_matrix();
  return max_abs(w.antipode * j - j * w.antipode.conjugate());
}

Report verify_axioms(const WeakHopfData& w, const Config& cfg) {
  Report r(cfg.tolerance);
  const int n = w.dim();
  const auto& alg = w.algebra;
  if (w.delta.rows() != n * n || w.delta.cols() != n || w.epsilon.size() != n || w.antipode.rows() != n ||
      w.antipode.cols() != n) {
    r.require("tensor shapes", "", false, "structure tensors do not match the algebra dimension");
    r.classification = "invalid";
    return r;
  }
  const Mat j = w.star_matrix();
  const Mat et = w.eps_t_matrix();
  const Mat es = w.eps_s_matrix();
  const Mat d1 = legs(w.coproduct(w.unit()), n);
  const TensorSquare sq(alg);
  const auto un = static_cast<std::size_t>(n);

  std::vector<Mat> x(un);
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = legs(w.delta.col(i), n);

  double coassoc = 0.0, counit = 0.0, deltaStar = 0.0, ax2r = 0.0, ax2pr = 0.0, antiCo = 0.0;
  for (int i = 0; i < n; ++i) {
    const Mat& xi = x[static_cast<std::size_t>(i)];
    const Mat left = w.delta * xi;                // (Δ⊗id)Δ(b_i): rows (j,k), cols l
    const Mat right = xi * w.delta.transpose();   // (id⊗Δ)Δ(b_i): rows j, cols (k,l)
    double c = 0.0;
    const double scale = std::max({1.0, max_abs(left), max_abs(right)});
    for (int row = 0; row < n * n; ++row)
      for (int l = 0; l < n; ++l) c = std::max(c, std::abs(left(row, l) - right(row / n, (row % n) * n + l)));
    coassoc = std::max(coassoc, c / scale);

    const Vec bi = alg.basis(i);
    counit = std::max({counit, relative_residual(Vec((w.epsilon * xi).transpose()), bi),
                       relative_residual(Vec(xi * w.epsilon.transpose()), bi)});
    const Mat xs = legs(w.coproduct(w.star(bi)), n);
    deltaStar = std::max(deltaStar, relative_residual(xs, Mat(j * xi.conjugate() * j.transpose())));
    const Mat lb = alg.left_mult(bi);
    ax2r = std::max(ax2r, relative_residual(Mat(xi * et.transpose()), Mat(alg.right_mult(bi) * d1)));
    ax2pr = std::max(ax2pr, relative_residual(Mat(es * xi), Mat(d1 * lb.transpose())));
    const Mat xsb = legs(w.coproduct(w.S(bi)), n);
    antiCo = std::max(antiCo, relative_residual(xsb, Mat(w.antipode * xi.transpose() * w.antipode.transpose())));
  }
  r.add("coassociativity", "", coassoc);
  r.add("counit", "", counit);

  Mat epsLeft = Mat::Zero(n, n), epsRight = Mat::Zero(n, n);  // ε(b_k b_c), ε(b_c b_k) at (k, c)
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c) {
      if (const int p = alg.unit_product(k, c); p >= 0) epsLeft(k, c) = w.epsilon(p);
      if (const int p = alg.unit_product(c, k); p >= 0) epsRight(k, c) = w.epsilon(p);
    }
  double mult = 0.0, ax2l = 0.0, ax2pl = 0.0, antiMult = 0.0, starMult = 0.0;
  sweep({un, un}, cfg.sweepBudget, cfg.seed, [&](const std::vector<std::size_t>& t) {
    const int a = static_cast<int>(t[0]), b = static_cast<int>(t[1]);
    const Vec ba = alg.basis(a), bb = alg.basis(b);
    const Vec prod = alg.multiply(ba, bb);
    mult = std::max(mult, relative_residual(w.coproduct(prod), sq.multiply(w.delta.col(a), w.delta.col(b))));
    // b ε^t(c) = ε(b_(1) c) b_(2)
    const Mat& xb = x[static_cast<std::size_t>(a)];
    const Vec elc = epsLeft.col(b), erc = epsRight.col(b);
    ax2l = std::max(ax2l, relative_residual(alg.multiply(ba, et.col(b)), Vec(xb.transpose() * elc)));
    // ε^s(c) b = b_(1) ε(c b_(2))
    ax2pl = std::max(ax2pl, relative_residual(alg.multiply(es.col(b), ba), Vec(xb * erc)));
    antiMult = std::max(antiMult, relative_residual(w.S(prod), alg.multiply(w.antipode.col(b), w.antipode.col(a))));
    starMult = std::max(starMult, relative_residual(w.star(prod), alg.multiply(w.star(bb), w.star(ba))));
  });
  r.add("delta multiplicative", "", mult);
  r.add("delta *-preserving", "", deltaStar);
  r.add("axiom (2): b eps^t(c) = eps(b1 c) b2", "", ax2l);
  r.add("axiom (2): b1 (x) eps^t(b2) = 1(1) b (x) 1(2)", "", ax2r);
  r.add("axiom (2'): eps^s(c) b = b1 eps(c b2)", "", ax2pl);
  r.add("axiom (2'): eps^s(b1) (x) b2 = 1(1) (x) b 1(2)", "", ax2pr);

  // b_(1) S(b_(2)) and S(b_(1)) b_(2) through the bilinear maps on basis pairs.
  Mat m3(n, n * n), m3p(n, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      m3.col(a * n + b) = alg.multiply(alg.basis(a), w.antipode.col(b));
      m3p.col(a * n + b) = alg.multiply(w.antipode.col(a), alg.basis(b));
    }
  r.add("axiom (3): b1 S(b2) = eps^t(b)", "", relative_residual(Mat(m3 * w.delta), et));
  r.add("axiom (3'): S(b1) b2 = eps^s(b)", "", relative_residual(Mat(m3p * w.delta), es));
  r.add("antipode anti-multiplicative", "", antiMult);
  r.add("antipode anti-comultiplicative", "", antiCo);
  r.add("involution involutive", "", relative_residual(Mat(j * j.conjugate()), Mat(Mat::Identity(n, n))));
  r.add("involution anti-multiplicative", "", starMult);
  const Mat sStar = w.antipode * j;  // x -> S(x*) = S J conj(x)
  r.add("(S o *)^2 = id", "", relative_residual(Mat(sStar * sStar.conjugate()), Mat(Mat::Identity(n, n))));

  const double s2 = antipode_square_residual(w), sc = antipode_star_residual(w);
  const bool core = r.all_pass();
  if (s2 <= cfg.tolerance && sc <= cfg.tolerance) {
    r.add("S^2 = id", "", s2);
    r.add("S o * = * o S", "", sc);
    r.classification = core ? "weak Kac" : "invalid";
  } else {
    char buf[160];
    std::snprintf(buf, sizeof buf, "S^2 residual %.5e, S*-commutation residual %.5e", s2, sc);
    r.info("weak Kac axioms", "", buf);
    r.classification = core ? "weak C*-Hopf" : "invalid";
  }
  return r;
}

int intersection_dimension(const Mat& a, const Mat& b, double relTol) {
  const int ra = numerical_rank(a, relTol), rb = numerical_rank(b, relTol);
  Mat both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return ra + rb - numerical_rank(both, relTol);
}

CartanPair cartan_subalgebras(const WeakHopfData& w, const Config& cfg) {
  const double rankTol = std::max(cfg.tolerance, 1e-11);
  const Mat et = w.eps_t_matrix();
  const Mat es = w.eps_s_matrix();
  CartanPair out;
  try {
    out.target = decompose_subalgebra(w.algebra, column_basis(et, rankTol), cfg);
    out.source = decompose_subalgebra(w.algebra, column_basis(es, rankTol), cfg);
  } catch (const Error& e) {
    throw Error(std::string("Cartan fixed set is not a subalgebra: ") + e.what());
  }
  Report& r = out.report;
  r = Report(cfg.tolerance);
  r.add("eps^t idempotent", "", relative_residual(Mat(et * et), et));
  r.add("eps^s idempotent", "", relative_residual(Mat(es * es), es));
  double comm = 0.0;
  for (Eigen::Index i = 0; i < out.target.images.cols(); ++i)
    for (Eigen::Index k = 0; k < out.source.images.cols(); ++k) {
      const Vec x = out.target.images.col(i), y = out.source.images.col(k);
      comm = std::max(comm, relative_residual(w.multiply(x, y), w.multiply(y, x)));
    }
  r.add("[B_t, B_s] = 0", "", comm);
  r.require("S(B_t) = B_s", "", same_span(w.antipode * out.target.images, out.source.images, rankTol));
  return out;
}

namespace {

/// Least-squares solve with a uniqueness check on the homogeneous part.
Vec unique_solution(const Mat& a, const Vec& rhs, double tol, const char* what) {
  if (numerical_rank(a, std::max(tol, 1e-11)) != a.cols())
    throw Error(std::string(what) + " system degenerate: solution is not unique");
  const Vec x = a.colPivHouseholderQr().solve(rhs);
  const double res = relative_residual(Vec(a * x), rhs);
  if (res > tol) {
    char buf[128];
    std::snprintf(buf, sizeof buf, " system degenerate: no solution (residual %.3e)", res);
    throw Error(std::string(what) + buf);
  }
  return x;
}

}  // namespace

Vec haar_projection(const WeakHopfData& w, const Config& cfg, Report* report) {
  const int n = w.dim();
  const Mat et = w.eps_t_matrix();
  Mat a(static_cast<Eigen::Index>(n) * n + 2 * n, n);
  Vec rhs = Vec::Zero(a.rows());
  for (int i = 0; i < n; ++i)
    a.block(static_cast<Eigen::Index>(i) * n, 0, n, n) =
        w.algebra.left_mult(w.algebra.basis(i)) - w.algebra.left_mult(et.col(i));
  a.block(static_cast<Eigen::Index>(n) * n, 0, n, n) = w.antipode - Mat::Identity(n, n);
  a.block(static_cast<Eigen::Index>(n) * n + n, 0, n, n) = et;
  rhs.tail(n) = w.unit();
  const Vec p = unique_solution(a, rhs, cfg.tolerance, "Haar projection");
  if (report) {
    report->add("Haar projection: x p = eps^t(x) p, S(p) = p, eps^t(p) = 1", "", relative_residual(Vec(a * p), rhs));
    report->add("Haar projection self-adjoint", "", relative_residual(w.star(p), p));
    report->add("Haar projection idempotent", "", relative_residual(w.multiply(p, p), p));
  }
  return p;
}

RowVec haar_functional(const WeakHopfData& w, const Config& cfg, Report* report) {
  const int n = w.dim();
  const Mat et = w.eps_t_matrix();
  const Mat id = Mat::Identity(n, n);
  Mat a(static_cast<Eigen::Index>(n) * n + 2 * n, n);
  Vec rhs = Vec::Zero(a.rows());
  for (int i = 0; i < n; ++i) {
    const Mat xi = legs(w.delta.col(i), n);
    a.block(static_cast<Eigen::Index>(i) * n, 0, n, n) = xi - et * xi;
  }
  a.block(static_cast<Eigen::Index>(n) * n, 0, n, n) = w.antipode.transpose() - id;
  a.block(static_cast<Eigen::Index>(n) * n + n, 0, n, n) = et.transpose();
  rhs.tail(n) = w.epsilon.transpose();
  const RowVec phi = unique_solution(a, rhs, cfg.tolerance, "Haar functional").transpose();
  if (report) {
    report->add("Haar functional: (id (x) phi) Delta = (eps^t (x) phi) Delta, phi S = phi, phi eps^t = eps", "",
                relative_residual(Vec(a * phi.transpose()), rhs));
    Mat gram(n, n);
    const Mat j = w.star_matrix();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) gram(r, c) = (phi * w.multiply(j.col(r), w.algebra.basis(c)))(0);
    const double herm = relative_residual(gram, Mat(gram.adjoint()));
    Eigen::SelfAdjointEigenSolver<Mat> es((gram + gram.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    const double minEig = es.eigenvalues().minCoeff();
    report->add("Haar functional positive", "", std::max(herm, std::max(0.0, -minEig)));
    double trac = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const Vec x = w.algebra.basis(r), y = w.algebra.basis(c);
        trac = std::max(trac, std::abs((phi * (w.multiply(x, y) - w.multiply(y, x)))(0)));
      }
    const bool kac = antipode_square_residual(w) <= cfg.tolerance && antipode_star_residual(w) <= cfg.tolerance;
    if (kac) {
      report->add("Haar functional tracial", "", trac);
    } else {
      char buf[96];
      std::snprintf(buf, sizeof buf, "max |phi(xy) - phi(yx)| = %.5e", trac);
      report->require("Haar functional not tracial", "", trac > cfg.tolerance, buf);
    }
  }
  return phi;
}

HaarData haar(const WeakHopfData& w, const Config& cfg) {
  HaarData h;
  h.report = Report(cfg.tolerance);
  h.projection = haar_projection(w, cfg, &h.report);
  h.functional = haar_functional(w, cfg, &h.report);
  return h;
}

WeakHopfData dual_algebra(const WeakHopfData& w, const Config& cfg, Mat* basisChange) {
  const int n = w.dim();
  StructureConstants sc;
  for (int j = 0; j < n; ++j) {
    Mat l(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) l(i, k) = w.delta(j * n + k, i);
    sc.left.push_back(std::move(l));
  }
  sc.unit = w.epsilon.transpose();
  Tensors dual;
  dual.delta = Mat::Zero(static_cast<Eigen::Index>(n) * n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (const int p = w.algebra.unit_product(a, b); p >= 0) dual.delta(a * n + b, p) = 1.0;
  dual.epsilon = w.unit().transpose();
  dual.antipode = w.antipode.transpose();
  dual.involution = (w.star_matrix() * w.antipode.conjugate()).adjoint();
  sc.involution = dual.involution;
  const AbstractDecomposition dec = decompose_abstract(sc, cfg);
  if (basisChange) *basisChange = dec.basisChange;
  return assemble(dec.algebra, transport(dual, dec.basisChange));
}

double isomorphism_residual(const WeakHopfData& from, const WeakHopfData& to, const Mat& phi) {
  const int n = from.dim();
  if (to.dim() != n || phi.rows() != n || phi.cols() != n) return std::numeric_limits<double>::infinity();
  if (numerical_rank(phi, 1e-11) != n) return std::numeric_limits<double>::infinity();
  double res = relative_residual(Vec(phi * from.unit()), to.unit());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      res = std::max(res, relative_residual(Vec(phi * from.multiply(from.algebra.basis(a), from.algebra.basis(b))),
                                            to.multiply(phi.col(a), phi.col(b))));
  for (int i = 0; i < n; ++i)
    res = std::max(res, relative_residual(Mat(phi * legs(from.delta.col(i), n) * phi.transpose()),
                                          legs(to.delta * phi.col(i), n)));
  res = std::max(res, relative_residual(Mat(to.epsilon * phi), Mat(from.epsilon)));
  res = std::max(res, relative_residual(Mat(phi * from.antipode), Mat(to.antipode * phi)));
  res = std::max(res, relative_residual(Mat(phi * from.star_matrix()), Mat(to.star_matrix() * phi.conjugate())));
  return res;
}

double double_dual_residual(const WeakHopfData& w, const Config& cfg) {
  Mat t1, t2;
  const WeakHopfData d1 = dual_algebra(w, cfg, &t1);
  const WeakHopfData d2 = dual_algebra(d1, cfg, &t2);
  // b_i evaluates the dual units u_k to t1(i, k).
  const Mat phi = t2.inverse() * t1.transpose();
  return isomorphism_residual(w, d2, phi);
}

Connectedness connectedness(const WeakHopfData& w, const Config& cfg) {
  const double rankTol = std::max(cfg.tolerance, 1e-11);
  auto centre = [](const MultiMatrixAlgebra& alg) {
    Mat z(alg.dim(), alg.num_blocks());
    for (int a = 0; a < alg.num_blocks(); ++a) z.col(a) = alg.block_unit(a);
    return z;
  };
  Connectedness c;
  const Mat et = w.eps_t_matrix();
  c.targetCenterDim = intersection_dimension(et, centre(w.algebra), rankTol);
  c.cartanIntersectionDim = intersection_dimension(et, w.eps_s_matrix(), rankTol);
  const WeakHopfData dual = dual_algebra(w, cfg);
  c.dualTargetCenterDim = intersection_dimension(dual.eps_t_matrix(), centre(dual.algebra), rankTol);
  c.connected = c.targetCenterDim == 1;
  c.dualConnected = c.dualTargetCenterDim == 1;
  c.biconnected = c.connected && c.dualConnected;
  if ((c.cartanIntersectionDim == 1) != c.dualConnected)
    throw Error("connectedness criteria disagree: dim(B_t ∩ B_s) = " + std::to_string(c.cartanIntersectionDim) +
                ", dim(B*_t ∩ Z(B*)) = " + std::to_string(c.dualTargetCenterDim));
  return c;
}

WeakHopfData pair_groupoid(int n) {
  if (n < 1) throw Error("pair groupoid needs n >= 1");
  WeakHopfData w;
  w.algebra = MultiMatrixAlgebra({n});
  const int d = w.algebra.dim();
  w.delta = Mat::Zero(static_cast<Eigen::Index>(d) * d, d);
  w.epsilon = RowVec::Ones(d);
  w.antipode = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int u = w.algebra.index(0, i, j);
      w.delta(u * d + u, u) = 1.0;
      w.antipode(w.algebra.index(0, j, i), u) = 1.0;
      w.labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  w.presentation = Mat::Identity(d, d);
  return w;
}

WeakHopfData group_algebra(const GroupTable& g, const Config& cfg) {
  const int n = g.order();
  StructureConstants sc;
  for (int a = 0; a < n; ++a) {
    Mat l = Mat::Zero(n, n);
    for (int b = 0; b < n; ++b) l(g.mul(a, b), b) = 1.0;
    sc.left.push_back(std::move(l));
  }
  sc.unit = Vec::Zero(n);
  sc.unit(g.identity()) = 1.0;
  Tensors t;
  t.delta = Mat::Zero(static_cast<Eigen::Index>(n) * n, n);
  t.epsilon = RowVec::Ones(n);
  t.antipode = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    t.delta(a * n + a, a) = 1.0;
    t.antipode(g.inverse(a), a) = 1.0;
  }
  t.involution = t.antipode;
  sc.involution = t.involution;
  const AbstractDecomposition dec = decompose_abstract(sc, cfg);
  WeakHopfData w = assemble(dec.algebra, transport(t, dec.basisChange));
  w.labels = g.labels();
  w.presentation = dec.basisChange.inverse();
  return w;
}

WeakHopfData function_algebra(const GroupTable& g) {
  const int n = g.order();
  WeakHopfData w;
  w.algebra = MultiMatrixAlgebra(std::vector<int>(static_cast<std::size_t>(n), 1));
  w.delta = Mat::Zero(static_cast<Eigen::Index>(n) * n, n);
  w.epsilon = RowVec::Zero(n);
  w.antipode = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) w.delta(a * n + b, g.mul(a, b)) = 1.0;
  w.epsilon(g.identity()) = 1.0;
  for (int a = 0; a < n; ++a) {
    w.antipode(g.inverse(a), a) = 1.0;
    w.labels.push_back("d" + g.labels()[static_cast<std::size_t>(a)]);
  }
  w.presentation = Mat::Identity(n, n);
  return w;
}

Mat pair_groupoid_intertwiner(const WeakHopfData& w, const Config& cfg) {
  if (w.algebra.num_blocks() != 1) throw Error("not isomorphic to a pair groupoid: algebra is not a full matrix algebra");
  const int n = w.algebra.block_size(0);
  const CartanPair cp = cartan_subalgebras(w, cfg);
  if (cp.target.sub.dim() != n || cp.target.sub.num_blocks() != n)
    throw Error("not isomorphic to a pair groupoid: target Cartan subalgebra is not maximal abelian");
  std::vector<Vec> q;
  for (int a = 0; a < n; ++a) q.push_back(cp.target.images.col(cp.target.sub.index(a, 0, 0)));
  Rng rng(cfg.seed ^ 0x9a11ULL);
  const Vec x = rng.complex_vector(w.dim());
  Mat phi(w.dim(), w.dim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec y = w.multiply(w.multiply(q[static_cast<std::size_t>(i)], x), q[static_cast<std::size_t>(j)]);
      const cplx e = w.counit(y);
      if (std::abs(e) < 1e-8) throw Error("not isomorphic to a pair groupoid: vanishing counit on a corner");
      phi.col(i * n + j) = y / e;
    }
  return phi;
}

}  // namespace wkh
