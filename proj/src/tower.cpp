#include "wkh/tower.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "wkh/decompose.hpp"

namespace wkh {

namespace {

/// τ(x y) for ambient coefficient vectors.
cplx trace_product(const MultiMatrixAlgebra& alg, const RVec& w, const Vec& x, const Vec& y) {
  cplx s = 0.0;
  for (int i = 0; i < alg.dim(); ++i) s += w(i) * x(i) * y(alg.adjoint_index(i));
  return s;
}

Mat columns_of(const std::vector<Vec>& v, Eigen::Index rows) {
  Mat m(rows, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

/// Nonzero terms c * b_j ⊗ b_k of Δ(b_i).
using Terms = std::vector<std::tuple<int, int, cplx>>;

std::vector<Terms> sweedler(const WeakHopfData& w) {
  const int n = w.dim();
  std::vector<Terms> out(static_cast<std::size_t>(n));
  const double cut = 1e-14 * std::max(1.0, w.delta.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (const cplx c = w.delta(j * n + k, i); std::abs(c) > cut) out[static_cast<std::size_t>(i)].emplace_back(j, k, c);
  return out;
}

}  // namespace

void complete_tower(TowerData& t, const Config& cfg) {
  t.A = relative_commutant(t.subN, t.subM1, cfg);
  t.B = relative_commutant(t.subM, cfg);
  t.Bt = relative_commutant(t.subM, t.subM1, cfg);
  t.Bs = relative_commutant(t.subM1, cfg);
  t.d = t.Bt.sub.dim();
}

TowerData build_tower_from_group(const GroupTable& g, const Config& cfg) {
  const int n = g.order();
  if (n < 2) throw Error("tower needs a group of order at least 2");
  if (n > kMaxTowerGroupOrder)
    throw Error("group order " + std::to_string(n) + " exceeds the dense tower limit of " +
                std::to_string(kMaxTowerGroupOrder));
  const double lambda = 1.0 / n;
  // M2 = ⊕_j M_n on L2(M_n): block j acts on span{E_ij}, M1 = M_n sits diagonally,
  // M = diagonal matrices, e2 projects onto span{E_jj}, e1 = (1/n) all-ones in M1.
  TowerData t;
  t.ambient = MultiMatrixAlgebra(std::vector<int>(static_cast<std::size_t>(n), n));
  const MultiMatrixAlgebra m1({n});
  t.subM1 = {m1, t.ambient, Mat::Zero(t.ambient.dim(), m1.dim())};
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j) t.subM1.images(t.ambient.index(j, k, l), m1.index(0, k, l)) = 1.0;
  const MultiMatrixAlgebra m(std::vector<int>(static_cast<std::size_t>(n), 1));
  t.subM = {m, t.ambient, Mat::Zero(t.ambient.dim(), n)};
  for (int k = 0; k < n; ++k) t.subM.images.col(k) = t.subM1.images.col(m1.index(0, k, k));
  t.subN = SubalgebraEmbedding::scalars(t.ambient);
  t.e1 = t.subM1.map(Vec::Constant(m1.dim(), lambda));
  t.e2 = Vec::Zero(t.ambient.dim());
  for (int j = 0; j < n; ++j) t.e2(t.ambient.index(j, j, j)) = 1.0;
  t.tau = TraceState(RVec::Constant(n, lambda * lambda));
  t.lambda = lambda;
  t.source = "group of order " + std::to_string(n);
  complete_tower(t, cfg);
  return t;
}

cplx pairing_value(const TowerData& t, const Vec& x, const Vec& b) {
  const auto& alg = t.ambient;
  const Vec y = alg.multiply(alg.multiply(x, t.e2), alg.multiply(t.e1, b));
  return t.d / (t.lambda * t.lambda) * t.tau.value(alg, y);
}

PairingForm pairing(const TowerData& t, const Config& cfg) {
  (void)cfg;
  const auto& alg = t.ambient;
  const RVec w = t.tau.coefficient_weights(alg);
  const Vec e2e1 = alg.multiply(t.e2, t.e1);
  const double c = t.d / (t.lambda * t.lambda);
  PairingForm f;
  f.gram.resize(t.A.images.cols(), t.B.images.cols());
  for (Eigen::Index i = 0; i < t.A.images.cols(); ++i) {
    const Vec y = alg.multiply(t.A.images.col(i), e2e1);
    for (Eigen::Index k = 0; k < t.B.images.cols(); ++k) f.gram(i, k) = c * trace_product(alg, w, y, t.B.images.col(k));
  }
  if (f.gram.rows() != f.gram.cols()) throw Error("degenerate pairing: dim A != dim B");
  f.conditionNumber = condition_number(f.gram);
  if (!(f.conditionNumber < 1e8)) throw Error("degenerate pairing (condition number above 1e8)");
  return f;
}

Report verify_tower_premises(const TowerData& t, const Config& cfg) {
  const double tol = cfg.tolerance;
  const double rankTol = std::max(tol, 1e-11);
  const auto& alg = t.ambient;
  Report r(tol);
  auto mul = [&](const Vec& x, const Vec& y) { return alg.multiply(x, y); };
  auto tau = [&](const Vec& x) { return t.tau.value(alg, x); };
  const Vec one = alg.unit();

  r.add("trace normalized", "", std::abs(tau(one) - 1.0));
  r.add("e1 projection", "",
        std::max(relative_residual(mul(t.e1, t.e1), t.e1), relative_residual(alg.adjoint(t.e1), t.e1)));
  r.add("e2 projection", "",
        std::max(relative_residual(mul(t.e2, t.e2), t.e2), relative_residual(alg.adjoint(t.e2), t.e2)));
  r.add("e1 in N' ∩ M1", "", t.A.distance(t.e1));
  r.add("e2 in M' ∩ M2", "", t.B.distance(t.e2));

  const ConditionalExpectation eN(t.subN, t.tau, tol), eM(t.subM, t.tau, tol), eM1(t.subM1, t.tau, tol),
      eMp(t.B, t.tau, tol);
  double markov1 = 0.0, jones1 = 0.0, markov2 = 0.0, jones2 = 0.0;
  for (Eigen::Index i = 0; i < t.subM.images.cols(); ++i) {
    const Vec x = t.subM.images.col(i);
    markov1 = std::max(markov1, std::abs(tau(mul(x, t.e1)) - t.lambda * tau(x)));
    jones1 = std::max(jones1, relative_residual(mul(mul(t.e1, x), t.e1), mul(eN(x), t.e1)));
  }
  for (Eigen::Index i = 0; i < t.subM1.images.cols(); ++i) {
    const Vec x = t.subM1.images.col(i);
    markov2 = std::max(markov2, std::abs(tau(mul(x, t.e2)) - t.lambda * tau(x)));
    jones2 = std::max(jones2, relative_residual(mul(mul(t.e2, x), t.e2), mul(eM(x), t.e2)));
  }
  r.add("Markov: tau(x e1) = lambda tau(x), x in M", "", markov1);
  r.add("Jones: e1 x e1 = E_N(x) e1, x in M", "", jones1);
  r.add("Markov: tau(x e2) = lambda tau(x), x in M1", "", markov2);
  r.add("Jones: e2 x e2 = E_M(x) e2, x in M1", "", jones2);

  const SubalgebraEmbedding nm2 = relative_commutant(t.subN, cfg);
  double square = 0.0, lemma2 = 0.0, lemma1 = 0.0;
  for (Eigen::Index i = 0; i < nm2.images.cols(); ++i) {
    const Vec x = nm2.images.col(i);
    square = std::max(square, relative_residual(eM1(eMp(x)), eMp(eM1(x))));
    const Vec xe2 = mul(x, t.e2), xe1 = mul(x, t.e1);
    lemma2 = std::max(lemma2, relative_residual(xe2, Vec(mul(eM1(xe2), t.e2) / t.lambda)));
    lemma1 = std::max(lemma1, relative_residual(xe1, Vec(mul(eMp(xe1), t.e1) / t.lambda)));
  }
  r.add("commuting square: E_M1 E_M' = E_M' E_M1 on N' ∩ M2", "Sec 3", square);
  r.add("x e2 = lambda^-1 E_M1(x e2) e2 on N' ∩ M2", "Lemma 3.1", lemma2);
  r.add("x e1 = lambda^-1 E_M'(x e1) e1 on N' ∩ M2", "Lemma 3.1", lemma1);

  std::vector<Vec> ab;
  for (Eigen::Index i = 0; i < t.A.images.cols(); ++i)
    for (Eigen::Index k = 0; k < t.B.images.cols(); ++k) ab.push_back(mul(t.A.images.col(i), t.B.images.col(k)));
  const Mat abm = columns_of(ab, alg.dim());
  const int abRank = numerical_rank(abm, rankTol);
  r.require("N' ∩ M2 = span(A B)", "Sec 3", abRank == nm2.sub.dim() && same_span(abm, nm2.images, rankTol),
            "rank " + std::to_string(abRank) + " vs dim " + std::to_string(nm2.sub.dim()));

  std::vector<Vec> me1m, m1e2m1;
  for (Eigen::Index i = 0; i < t.subM.images.cols(); ++i)
    for (Eigen::Index k = 0; k < t.subM.images.cols(); ++k)
      me1m.push_back(mul(mul(t.subM.images.col(i), t.e1), t.subM.images.col(k)));
  for (Eigen::Index i = 0; i < t.subM1.images.cols(); ++i)
    for (Eigen::Index k = 0; k < t.subM1.images.cols(); ++k)
      m1e2m1.push_back(mul(mul(t.subM1.images.col(i), t.e2), t.subM1.images.col(k)));
  r.require("M1 = span(M e1 M)", "Remark 4.4", same_span(columns_of(me1m, alg.dim()), t.subM1.images, rankTol));
  r.require("M2 = span(M1 e2 M1)", "Remark 4.4",
            numerical_rank(columns_of(m1e2m1, alg.dim()), rankTol) == alg.dim());

  try {
    SubalgebraEmbedding mInM1{t.subM.sub, t.subM1.sub, Mat(t.subM1.sub.dim(), t.subM.sub.dim())};
    for (int i = 0; i < t.subM.sub.dim(); ++i) mInM1.images.col(i) = t.subM1.coordinates(t.subM.images.col(i));
    const MarkovTrace mt = markov_trace(inclusion_matrix(mInM1, tol), tol);
    r.add("lambda^-1 = Perron-Frobenius eigenvalue of M ⊂ M1", "", std::abs(mt.lambdaInverse - 1.0 / t.lambda) /
                                                                       std::max(1.0, mt.lambdaInverse));
  } catch (const Error& e) {
    r.require("lambda^-1 = Perron-Frobenius eigenvalue of M ⊂ M1", "", false, e.what());
  }
  return r;
}

namespace {

/// Embedding of a subalgebra of the ambient into B, expressed in B coordinates.
SubalgebraEmbedding inside_B(const TowerData& t, const SubalgebraEmbedding& s) {
  SubalgebraEmbedding e{s.sub, t.B.sub, Mat(t.B.sub.dim(), s.sub.dim())};
  for (int i = 0; i < s.sub.dim(); ++i) e.images.col(i) = t.B.coordinates(s.images.col(i));
  return e;
}

}  // namespace

ReconstructedStructure reconstruct(const TowerData& t, const Config& cfg) {
  const double tol = cfg.tolerance;
  ReconstructedStructure r;
  r.form = pairing(t, cfg);
  const Mat& g = r.form.gram;
  const int n = static_cast<int>(g.rows());
  const MultiMatrixAlgebra& algA = t.A.sub;
  const MultiMatrixAlgebra& algB = t.B.sub;
  const Mat c = g.inverse();
  const Mat dA = c.transpose();

  WeakHopfData& b = r.onB;
  b.algebra = algB;
  b.delta.resize(static_cast<Eigen::Index>(n) * n, n);
  for (int k = 0; k < n; ++k) {
    Mat p = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (const int q = algA.unit_product(i, j); q >= 0) p(i, j) = g(q, k);
    b.delta.col(k) = unlegs(c * p * c.transpose());
  }
  b.epsilon = algA.unit().transpose() * g;
  Mat rel(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) rel(i, k) = std::conj(g(algA.adjoint_index(i), algB.adjoint_index(k)));
  b.antipode = c * rel;

  WeakHopfData& a = r.onA;
  a.algebra = algA;
  a.delta.resize(static_cast<Eigen::Index>(n) * n, n);
  for (int i = 0; i < n; ++i) {
    Mat q = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        if (const int p = algB.unit_product(k, l); p >= 0) q(k, l) = g(i, p);
    a.delta.col(i) = unlegs(dA * q * dA.transpose());
  }
  a.epsilon = (g * algB.unit()).transpose();
  a.antipode = dA * rel.transpose();

  const Mat x1 = legs(b.coproduct(b.unit()), n);
  r.H = Vec::Zero(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (x1(j, k) != cplx(0.0)) r.H += x1(j, k) * algB.multiply(b.S(algB.basis(j)), algB.basis(k));
  r.btInB = inside_B(t, t.Bt);
  r.bsInB = inside_B(t, t.Bs);
  const Vec idx = watatani_index(t.Bt.sub, restrict_trace(t.Bt, t.tau));
  r.Hindex = r.btInB.map(idx) / static_cast<double>(t.d);

  const auto& amb = t.ambient;
  const ConditionalExpectation eM1(t.subM1, t.tau, tol), eMp(t.B, t.tau, tol);
  const Mat et = b.eps_t_matrix();
  double counit = 0.0, epsT = 0.0, anti = 0.0;
  const Vec e1e2 = amb.multiply(t.e1, t.e2);
  for (int k = 0; k < n; ++k) {
    const Vec bk = t.B.images.col(k);
    const Vec be2 = amb.multiply(bk, t.e2);
    counit = std::max(counit, std::abs(b.epsilon(k) - t.d / t.lambda * t.tau.value(amb, be2)));
    epsT = std::max(epsT, relative_residual(Vec(t.B.map(et.col(k))), Vec(eM1(be2) / t.lambda)));
    const Vec inner = eM1(amb.multiply(bk, e1e2));
    const Vec s = eMp(amb.multiply(e1e2, inner)) / std::pow(t.lambda, 3);
    anti = std::max(anti, relative_residual(Vec(t.B.map(b.antipode.col(k))), s));
  }
  Report& x = r.crossChecks;
  x = Report(tol);
  x.add("eps_B(b) = lambda^-1 d tau(b e2)", "Def 3.3", counit);
  x.add("eps^t(b) = lambda^-1 E_M1(b e2)", "Prop 4.2", epsT);
  x.add("S_B(b) = lambda^-3 E_M'(e1 e2 E_M1(b e1 e2))", "Prop 4.5(i)", anti);
  x.add("H = S_B(1_(1)) 1_(2) = d^-1 Index tau|B_t", "Cor 4.7", relative_residual(r.H, r.Hindex));
  x.add("tau(H) = 1", "Cor 4.7", std::abs(t.tau.value(amb, t.B.map(r.H)) - 1.0));
  x.require("range eps^t = B_t", "Prop 4.2", same_span(et, r.btInB.images, std::max(tol, 1e-11)));
  if (!x.all_pass()) throw Error("reconstruction cross-check failed: " + x.failures());
  return r;
}

namespace {

/// Smallest eigenvalue of the Hermitian part of a tensor X in B ⊗ B, block pair by block pair.
double tensor_min_eigenvalue(const MultiMatrixAlgebra& alg, const Mat& x) {
  double lo = 0.0;
  bool first = true;
  for (int a = 0; a < alg.num_blocks(); ++a)
    for (int b = 0; b < alg.num_blocks(); ++b) {
      const int ma = alg.block_size(a), mb = alg.block_size(b);
      Mat blk(ma * mb, ma * mb);
      for (int k = 0; k < ma; ++k)
        for (int kk = 0; kk < mb; ++kk)
          for (int l = 0; l < ma; ++l)
            for (int ll = 0; ll < mb; ++ll)
              blk(k * mb + kk, l * mb + ll) = x(alg.index(a, k, l), alg.index(b, kk, ll));
      const Mat h = (blk + blk.adjoint()) * 0.5;
      const double m = Eigen::SelfAdjointEigenSolver<Mat>(h).eigenvalues().minCoeff();
      lo = first ? m : std::min(lo, m);
      first = false;
    }
  return lo;
}

/// Residual of span(columns of x) ⊂ span(basis).
double column_containment(const Mat& basis, const Mat& x) {
  const Mat q = column_basis(basis, 1e-11);
  double r = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) r = std::max(r, distance_to_span(q, x.col(i)));
  return r;
}

}  // namespace

DualBases dual_bases(const TowerData& t, const ReconstructedStructure& r, const Config& cfg) {
  const double tol = cfg.tolerance;
  const auto& amb = t.ambient;
  const MultiMatrixAlgebra& algA = t.A.sub;
  const MultiMatrixAlgebra& algB = t.B.sub;
  const int n = algA.dim();
  const Mat c = r.form.gram.inverse();
  DualBases out;
  out.report = Report(tol);
  for (int i = 0; i < n; ++i) {
    out.sUnits.push_back(algA.basis(i));
    out.vUnits.push_back(c.col(i));
  }
  const TraceState trA = restrict_trace(t.A, t.tau);
  for (int a = 0; a < algA.num_blocks(); ++a) out.blockTraces.push_back(trA.weight(a));

  const ConditionalExpectation eM1(t.subM1, t.tau, tol), eMp(t.B, t.tau, tol);
  auto vAmb = [&](int i) { return Vec(t.B.map(out.vUnits[static_cast<std::size_t>(i)])); };
  const double scale = 1.0 / (t.d / (t.lambda * t.lambda));
  const Vec e1e2 = amb.multiply(t.e1, t.e2), e2e1 = amb.multiply(t.e2, t.e1);

  double duality = relative_residual(Mat(r.form.gram * c), Mat(Mat::Identity(n, n)));
  double comatrix = 0.0, counit = 0.0, l1 = 0.0, l2 = 0.0, l4 = 0.0;
  for (int a = 0; a < algA.num_blocks(); ++a) {
    const int m = algA.block_size(a);
    const double f = scale / out.blockTraces[static_cast<std::size_t>(a)];
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const int jk = algA.index(a, j, k), kj = algA.index(a, k, j);
        Mat x = Mat::Zero(n, n);
        for (int l = 0; l < m; ++l)
          x += c.col(algA.index(a, j, l)) * c.col(algA.index(a, l, k)).transpose();
        comatrix = std::max(comatrix, relative_residual(legs(r.onB.coproduct(c.col(jk)), n), x));
        counit = std::max(counit, std::abs(r.onB.counit(c.col(jk)) - (j == k ? 1.0 : 0.0)));
        const Vec v = vAmb(jk);
        l1 = std::max(l1, relative_residual(eM1(amb.multiply(e2e1, v)), Vec(f * t.A.images.col(kj))));
        l2 = std::max(l2, relative_residual(eM1(amb.multiply(v, e1e2)),
                                            Vec(f * t.A.map(r.onA.S(algA.basis(kj))))));
        l4 = std::max(l4, relative_residual(r.onB.S(c.col(jk)), Vec(algB.adjoint(c.col(kj)))));
      }
  }
  double l3 = 0.0;
  for (int b = 0; b < algA.num_blocks(); ++b)
    for (int p = 0; p < algA.block_size(b); ++p)
      for (int q = 0; q < algA.block_size(b); ++q) {
        const Vec sa = t.A.map(r.onA.S(algA.basis(algA.index(b, p, q))));
        for (int a = 0; a < algA.num_blocks(); ++a)
          for (int i = 0; i < algA.block_size(a); ++i)
            for (int j = 0; j < algA.block_size(a); ++j) {
              const Vec lhs = eMp(amb.multiply(amb.multiply(sa, vAmb(algA.index(a, i, j))), t.e1)) / t.lambda;
              const Vec rhs = (a == b && i == p) ? vAmb(algA.index(a, q, j)) : Vec(Vec::Zero(amb.dim()));
              l3 = std::max(l3, relative_residual(lhs, rhs));
            }
      }
  Report& rep = out.report;
  rep.add("<s_pq, v_jk> = delta", "Lemma 4.9", duality);
  rep.add("Delta_B(v_jk) = sum_l v_jl (x) v_lk", "Lemma 4.9", comatrix);
  rep.add("eps_B(v_jk) = delta_jk", "Lemma 4.9", counit);
  rep.add("E_M1(e2 e1 v_jk) = d^-1 lambda^2 |alpha|^-1 s_kj", "Lemma 4.9(i)", l1);
  rep.add("E_M1(v_jk e1 e2) = d^-1 lambda^2 |alpha|^-1 S_A(s_kj)", "Lemma 4.9(ii)", l2);
  rep.add("lambda^-1 E_M'(S_A(s_pq) v_ij e1) = delta delta v_qj", "Lemma 4.9(iii)", l3);
  rep.add("S_B(v_jk) = (v_kj)*", "Lemma 4.9(iv)", l4);
  return out;
}

Report identity_suite(const TowerData& t, const ReconstructedStructure& r, const Config& cfg) {
  const double tol = cfg.tolerance;
  const auto& amb = t.ambient;
  const MultiMatrixAlgebra& algA = t.A.sub;
  const MultiMatrixAlgebra& algB = t.B.sub;
  const WeakHopfData& wb = r.onB;
  const int n = algB.dim();
  const Mat& g = r.form.gram;
  const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const double lam = t.lambda;
  const std::vector<Terms> sw = sweedler(wb);
  const Mat et = wb.eps_t_matrix();
  const ConditionalExpectation eM1(t.subM1, t.tau, tol), eMp(t.B, t.tau, tol);
  auto mul = [&](const Vec& x, const Vec& y) { return amb.multiply(x, y); };
  auto bAmb = [&](const Vec& x) { return Vec(t.B.map(x)); };
  const Vec hinv = algB.inverse(r.H);
  const Vec hinvAmb = bAmb(hinv);
  const Mat& m1 = t.subM1.images;
  const int nm1 = static_cast<int>(m1.cols());
  const auto sz = [](int v) { return static_cast<std::size_t>(v); };
  Report rep(tol);

  // E_M1(b_j x e2) for every x in M1 and b_j in B.
  std::vector<std::vector<Vec>> ex(sz(nm1), std::vector<Vec>(sz(n)));
  for (int x = 0; x < nm1; ++x) {
    const Vec xe2 = mul(m1.col(x), t.e2);
    for (int j = 0; j < n; ++j) ex[sz(x)][sz(j)] = eM1(mul(t.B.images.col(j), xe2));
  }

  double v = 0.0;
  sweep({sz(algA.dim()), sz(n), sz(n)}, cfg.sweepBudget, cfg.seed, [&](const std::vector<std::size_t>& ix) {
    const int i = static_cast<int>(ix[0]), j = static_cast<int>(ix[1]), k = static_cast<int>(ix[2]);
    const int p = algB.unit_product(j, k);
    const cplx lhs = p >= 0 ? g(i, p) : cplx(0.0);
    const Vec x = eM1(mul(t.B.images.col(k), mul(t.A.images.col(i), t.e2)));
    v = std::max(v, std::abs(lhs - pairing_value(t, x, t.B.images.col(j)) / lam) / gscale);
  });
  rep.add("<a, b c> = lambda^-1 <E_M1(c a e2), b>", "Lemma 4.1", v);

  v = 0.0;
  const Mat get = g * et;
  for (int i = 0; i < algA.dim(); ++i)
    for (int k = 0; k < n; ++k) {
      const Vec y = mul(mul(mul(t.A.images.col(i), t.e1), t.B.images.col(k)), t.e2);
      v = std::max(v, std::abs(get(i, k) - t.d / (lam * lam) * t.tau.value(amb, y)) / gscale);
    }
  rep.add("<a, eps^t(b)> = d lambda^-2 tau(a e1 b e2)", "Prop 4.2", v);

  v = 0.0;
  const Mat x1 = legs(wb.coproduct(wb.unit()), n);
  for (int j = 0; j < n; ++j) {
    Mat lhs = Mat::Zero(n, n);
    for (const auto& [p, q, c] : sw[sz(j)]) lhs += c * algB.basis(p) * et.col(q).transpose();
    v = std::max(v, relative_residual(lhs, Mat(algB.right_mult(algB.basis(j)) * x1)));
    for (int k = 0; k < n; ++k) {
      Vec rhs = Vec::Zero(n);
      for (const auto& [p, q, c] : sw[sz(j)])
        if (const int pk = algB.unit_product(p, k); pk >= 0) rhs += c * wb.epsilon(pk) * algB.basis(q);
      v = std::max(v, relative_residual(algB.multiply(algB.basis(j), et.col(k)), rhs));
    }
  }
  rep.add("b eps^t(c) = eps(b1 c) b2 and b1 (x) eps^t(b2) = 1(1) b (x) 1(2)", "Prop 4.3", v);

  v = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec sb = bAmb(wb.S(algB.basis(k)));
    for (int x = 0; x < nm1; ++x)
      v = std::max(v, relative_residual(ex[sz(x)][sz(k)], eM1(mul(mul(t.e2, m1.col(x)), sb))));
  }
  for (int i = 0; i < algA.dim(); ++i) {
    const Vec sa = t.A.map(r.onA.S(algA.basis(i)));
    for (int k = 0; k < n; ++k) {
      const Vec y = t.B.images.col(k);
      v = std::max(v, relative_residual(eMp(mul(mul(sa, y), t.e1)), eMp(mul(mul(t.e1, y), t.A.images.col(i)))));
    }
  }
  rep.add("E_M1(b x e2) = E_M1(e2 x S_B(b)) and E_M'(S_A(a) y e1) = E_M'(e1 y a)", "Remark 4.4", v);

  const Mat sBs = wb.antipode * r.bsInB.images;
  rep.add("S_B(B_s) = B_t", "Prop 4.5(ii)",
          std::max(column_containment(r.btInB.images, sBs), column_containment(sBs, r.btInB.images)));

  v = relative_residual(Mat(wb.antipode * wb.antipode), Mat(Mat::Identity(n, n)));
  for (int k = 0; k < n; ++k) {
    const Vec bk = algB.basis(k);
    v = std::max(v, relative_residual(Vec(algB.adjoint(wb.S(bk))), wb.S(algB.adjoint(bk))));
  }
  rep.add("S_B^2 = id and S_B(b)* = S_B(b*)", "Prop 4.5(iii)", v);

  v = 0.0;
  for (int j = 0; j < n; ++j) {
    const Mat xs = legs(wb.coproduct(wb.S(algB.basis(j))), n);
    v = std::max(v, relative_residual(xs, Mat(wb.antipode * legs(wb.coproduct(algB.basis(j)), n).transpose() *
                                                wb.antipode.transpose())));
    for (int k = 0; k < n; ++k)
      v = std::max(v, relative_residual(wb.S(algB.multiply(algB.basis(j), algB.basis(k))),
                                        algB.multiply(wb.S(algB.basis(k)), wb.S(algB.basis(j)))));
  }
  rep.add("S_B(bc) = S_B(c) S_B(b) and Delta(S_B b) = flip (S_B (x) S_B) Delta(b)", "Prop 4.5(iv)", v);

  {
    const TraceState trT = restrict_trace(t.Bt, t.tau);
    const MultiMatrixAlgebra& algT = t.Bt.sub;
    Mat formula = Mat::Zero(n, n);
    for (int a = 0; a < algT.num_blocks(); ++a)
      for (int k = 0; k < algT.block_size(a); ++k)
        for (int l = 0; l < algT.block_size(a); ++l)
          formula += wb.antipode * r.btInB.images.col(algT.index(a, k, l)) *
                     r.btInB.images.col(algT.index(a, l, k)).transpose() / (t.d * trT.weight(a));
    v = relative_residual(x1, formula);
    v = std::max(v, column_containment(r.bsInB.images, x1));
    v = std::max(v, column_containment(r.btInB.images, Mat(x1.transpose())));
    v = std::max(v, std::max(0.0, -tensor_min_eigenvalue(algB, x1)));
  }
  rep.add("Delta_B(1) = sum (d tau_alpha)^-1 S_B(f_kl) (x) f_lk, positive in B_s (x) B_t", "Prop 4.6", v);

  v = 0.0;
  for (int j = 0; j < n; ++j) {
    Vec lhs = Vec::Zero(n);
    for (const auto& [p, q, c] : sw[sz(j)]) lhs += c * algB.multiply(et.col(p), algB.basis(q));
    v = std::max(v, relative_residual(lhs, algB.multiply(r.H, algB.basis(j))));
  }
  rep.add("eps^t(b1) b2 = H b", "Prop 4.8", v);

  v = 0.0;
  {
    const Mat jm = algB.adjoint_matrix();
    for (int j = 0; j < n; ++j) {
      const Mat xb = legs(wb.coproduct(algB.basis(j)), n);
      const Mat xstar = legs(wb.coproduct(algB.adjoint(algB.basis(j))), n);
      v = std::max(v, relative_residual(xstar, Mat(jm * xb.conjugate() * jm.transpose())));
    }
  }
  rep.add("Delta_B(b*) = Delta_B(b)^(* (x) *)", "Cor 4.10", v);

  v = 0.0;
  {
    const Mat c = g.inverse();
    const Vec e1e2 = mul(t.e1, t.e2);
    for (int a = 0; a < algA.num_blocks(); ++a) {
      const int m = algA.block_size(a);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          Vec rhs = Vec::Zero(amb.dim());
          for (int k = 0; k < m; ++k) {
            const Vec vik = bAmb(c.col(algA.index(a, i, k)));
            rhs += mul(mul(eM1(mul(vik, e1e2)), hinvAmb), bAmb(c.col(algA.index(a, k, j))));
          }
          v = std::max(v, relative_residual(mul(bAmb(c.col(algA.index(a, i, j))), t.e1), Vec(rhs / lam)));
        }
    }
  }
  rep.add("v_ij e1 = lambda^-1 sum_k E_M1(v_ik e1 e2) H^-1 v_kj", "Prop 4.11", v);

  v = 0.0;
  for (int x = 0; x < nm1; ++x)
    for (int j = 0; j < n; ++j) {
      Vec rhs = Vec::Zero(amb.dim());
      for (const auto& [p, q, c] : sw[sz(j)]) rhs += c * mul(mul(ex[sz(x)][sz(p)], hinvAmb), t.B.images.col(q));
      v = std::max(v, relative_residual(mul(t.B.images.col(j), m1.col(x)), Vec(rhs / lam)));
    }
  rep.add("b x = lambda^-1 E_M1(b1 x e2) H^-1 b2", "Cor 4.12", v);

  v = 0.0;
  sweep({sz(n), sz(nm1), sz(nm1)}, cfg.sweepBudget, cfg.seed + 1, [&](const std::vector<std::size_t>& ix) {
    const std::size_t j = ix[0], x = ix[1], y = ix[2];
    Vec rhs = Vec::Zero(amb.dim());
    for (const auto& [p, q, c] : sw[j]) rhs += c * mul(mul(ex[x][sz(p)], hinvAmb), ex[y][sz(q)]);
    const Vec lhs = eM1(mul(mul(t.B.images.col(static_cast<Eigen::Index>(j)), mul(m1.col(static_cast<Eigen::Index>(x)),
                                                                            m1.col(static_cast<Eigen::Index>(y)))),
                            t.e2));
    v = std::max(v, relative_residual(lhs, Vec(rhs / lam)));
  });
  rep.add("E_M1(b x y e2) = lambda^-1 E_M1(b1 x e2) H^-1 E_M1(b2 y e2)", "Prop 4.13", v);

  v = 0.0;
  {
    const TensorSquare sq(algB);
    const Mat rh = algB.right_mult(hinv);
    for (int j = 0; j < n; ++j) {
      const Vec dj = unlegs(Mat(legs(wb.coproduct(algB.basis(j)), n) * rh.transpose()));
      for (int k = 0; k < n; ++k) {
        const Vec lhs = wb.coproduct(algB.multiply(algB.basis(j), algB.basis(k)));
        v = std::max(v, relative_residual(lhs, sq.multiply(dj, wb.coproduct(algB.basis(k)))));
      }
    }
  }
  rep.add("Delta_B(b c) = Delta_B(b) (1 (x) H^-1) Delta_B(c)", "Prop 4.14", v);

  v = 0.0;
  for (int j = 0; j < n; ++j) {
    Vec lhs = Vec::Zero(n);
    for (const auto& [p, q, c] : sw[sz(j)])
      lhs += c * algB.multiply(algB.basis(p), wb.S(algB.multiply(algB.basis(q), hinv)));
    v = std::max(v, relative_residual(lhs, Vec(et.col(j))));
  }
  rep.add("b1 S_B(b2 H^-1) = eps^t(b)", "Prop 4.15", v);

  v = 0.0;
  for (Eigen::Index zi = 0; zi < r.btInB.images.cols(); ++zi) {
    const Vec z = r.btInB.images.col(zi);
    const Mat rz = algB.right_mult(z), rsz = algB.right_mult(wb.S(z));
    for (int j = 0; j < n; ++j) {
      const Vec bj = algB.basis(j);
      const Mat xb = legs(wb.coproduct(bj), n);
      v = std::max(v, relative_residual(Vec(et * algB.multiply(z, bj)), algB.multiply(z, et.col(j))));
      v = std::max(v, relative_residual(Mat(rz * xb), legs(wb.coproduct(algB.multiply(bj, z)), n)));
      v = std::max(v, relative_residual(Mat(rsz * xb), Mat(xb * rz.transpose())));
    }
  }
  rep.add("eps^t(z b) = z eps^t(b), b1 z (x) b2 = Delta(b z), b1 S_B(z) (x) b2 = b1 (x) b2 z", "Lemma 5.2", v);

  v = 0.0;
  for (int k = 0; k < n; ++k)
    v = std::max(v, std::abs(t.tau.value(amb, bAmb(wb.S(algB.basis(k)))) - t.tau.value(amb, t.B.images.col(k))));
  for (int i = 0; i < algA.dim(); ++i)
    v = std::max(v, std::abs(t.tau.value(amb, t.A.map(r.onA.S(algA.basis(i)))) - t.tau.value(amb, t.A.images.col(i))));
  rep.add("tau o S_B = tau and tau o S_A = tau", "Remark 4.4", v);
  return rep;
}

namespace {

bool square_free(long v) {
  for (long p = 2; p * p <= v; ++p)
    if (v % (p * p) == 0) return false;
  return true;
}

bool prime(long v) {
  if (v < 2) return false;
  for (long p = 2; p * p <= v; ++p)
    if (v % p == 0) return false;
  return true;
}

}  // namespace

Report classify(const TowerData& t, const ReconstructedStructure& r, const Config& cfg) {
  const double tol = cfg.tolerance;
  const MultiMatrixAlgebra& algB = t.B.sub;
  Report rep(tol);
  const double hres = relative_residual(r.H, algB.unit());
  const bool kac = hres <= tol;
  const Report axioms = verify_axioms(r.onB, cfg);
  const bool axiomsKac = axioms.classification == "weak Kac";
  if (kac && !axiomsKac) throw Error("invalid tower: H = 1 but the weak Kac axioms fail: " + axioms.failures());
  if (kac)
    rep.add("H = 1", "Thm 4.17", hres);
  else
    rep.info("H = 1", "Thm 4.17", "H != 1 (residual " + sci(hres) + ")");
  rep.require("H = 1 <=> weak Kac", "Thm 4.17", kac == axiomsKac, "axioms: " + axioms.classification);
  rep.merge(axioms, "axioms");

  if (kac) {
    const Vec e2 = t.B.coordinates(t.e2);
    Report haarRep(tol);
    try {
      const Vec p = haar_projection(r.onB, cfg, &haarRep);
      rep.add("Haar projection = e2", "Thm 4.17", relative_residual(p, e2));
      const RowVec phi = haar_functional(r.onB, cfg, &haarRep);
      RowVec dtau(algB.dim());
      for (int k = 0; k < algB.dim(); ++k) dtau(k) = static_cast<double>(t.d) * t.tau.value(t.ambient, t.B.images.col(k));
      rep.add("Haar trace = d tau", "Thm 4.17", relative_residual(Vec(phi.transpose()), Vec(dtau.transpose())));
    } catch (const Error& e) {
      rep.require("Haar projection = e2", "Thm 4.17", false, e.what());
    }
  }

  {
    const InclusionMatrix inc = inclusion_matrix(r.btInB, tol);
    const Eigen::MatrixXd lam = inc.entries.cast<double>();
    const RVec tv = restrict_trace(t.Bt, t.tau).weights();
    const RVec lhs = lam * lam.transpose() * tv;
    const RVec rhs = tv / t.lambda;
    const double res = (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if (kac)
      rep.add("Lambda Lambda^t tau = lambda^-1 tau for B_t ⊂ B", "Thm 4.17", res);
    else
      rep.info("Lambda Lambda^t tau = lambda^-1 tau for B_t ⊂ B", "Thm 4.17", "residual " + sci(res));
  }

  const double li = 1.0 / t.lambda;
  const long rounded = std::lround(li);
  const bool integral = std::abs(li - static_cast<double>(rounded)) <= 1e-8 * std::max(1.0, li);
  std::string note = "lambda^-1 = " + std::to_string(li);
  if (integral)
    note = "lambda^-1 = " + std::to_string(rounded) + (square_free(rounded) ? ", square-free" : ", not square-free") +
           (prime(rounded) ? ", prime" : ", not prime");
  if (kac) rep.require("lambda^-1 integral", "Thm 4.17", integral, note);
  rep.info("index arithmetic", "Cor 4.19", note);

  rep.classification = kac ? "weak Kac" : "invalid";
  if (!kac) rep.info("classification", "Sec 5", "H != 1: deform to obtain a weak C*-Hopf algebra");
  return rep;
}

double pair_groupoid_residuals(const TowerData& t, const ReconstructedStructure& r, const Config& cfg,
                               double* aResidual, double* bResidual) {
  const MultiMatrixAlgebra& algA = t.A.sub;
  if (algA.num_blocks() != 1) throw Error("A is not a full matrix algebra");
  const int m = algA.block_size(0);
  const WeakHopfData pg = pair_groupoid(m);
  const Mat phiA = pair_groupoid_intertwiner(r.onA, cfg);
  const double ra = isomorphism_residual(pg, r.onA, phiA);
  Mat td;
  const WeakHopfData pgDual = dual_algebra(pg, cfg, &td);
  // b -> (E -> <phiA(E), b>) in the dual basis of pg, then in dual matrix units.
  const Mat psi = td.inverse() * phiA.transpose() * r.form.gram;
  const double rb = isomorphism_residual(r.onB, pgDual, psi);
  if (aResidual) *aResidual = ra;
  if (bResidual) *bResidual = rb;
  return std::max(ra, rb);
}

}  // namespace wkh
