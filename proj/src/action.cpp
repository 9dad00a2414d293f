#include "wkh/action.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "wkh/decompose.hpp"

namespace wkh {

namespace {

using Terms = std::vector<std::tuple<int, int, cplx>>;

std::vector<Terms> sweedler_terms(const WeakHopfData& w) {
  const int n = w.dim();
  std::vector<Terms> out(static_cast<std::size_t>(n));
  const double cut = 1e-14 * std::max(1.0, w.delta.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (const cplx c = w.delta(j * n + k, i); std::abs(c) > cut) out[static_cast<std::size_t>(i)].emplace_back(j, k, c);
  return out;
}

Eigen::Index rank_of(const Mat& m, double tol) { return m.cols() - null_space(m, tol).cols(); }

}  // namespace

Mat ActionData::operator_of(const Vec& b) const {
  Mat m = Mat::Zero(carrier.dim(), carrier.dim());
  for (Eigen::Index i = 0; i < b.size(); ++i)
    if (b(i) != cplx(0.0)) m += b(i) * tensor[static_cast<std::size_t>(i)];
  return m;
}

Report verify_action(const ActionData& a, const Config& cfg) {
  const double tol = cfg.tolerance;
  const WeakHopfData& w = a.hopf;
  const MultiMatrixAlgebra& m = a.carrier;
  const int n = w.dim(), dm = m.dim();
  const auto un = static_cast<std::size_t>(n), um = static_cast<std::size_t>(dm);
  Report rep(tol);
  if (a.tensor.size() != un) {
    rep.require("action tensor shape", "", false, "one operator per basis element expected");
    return rep;
  }
  const Mat id = Mat::Identity(dm, dm);
  rep.add("1 ▷ x = x", "Sec 2", relative_residual(a.operator_of(w.unit()), id));
  double module = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      module = std::max(module, relative_residual(a.operator_of(w.multiply(w.algebra.basis(i), w.algebra.basis(j))),
                                                  Mat(a.tensor[static_cast<std::size_t>(i)] * a.tensor[static_cast<std::size_t>(j)])));
  rep.add("(b c) ▷ x = b ▷ (c ▷ x)", "Sec 2", module);

  const std::vector<Terms> sw = sweedler_terms(w);
  double ax1 = 0.0;
  sweep({un, um, um}, cfg.sweepBudget, cfg.seed, [&](const std::vector<std::size_t>& ix) {
    const Vec x = m.basis(static_cast<int>(ix[1])), y = m.basis(static_cast<int>(ix[2]));
    Vec rhs = Vec::Zero(dm);
    for (const auto& [p, q, c] : sw[ix[0]])
      rhs += c * m.multiply(a.tensor[static_cast<std::size_t>(p)] * x, a.tensor[static_cast<std::size_t>(q)] * y);
    ax1 = std::max(ax1, relative_residual(Vec(a.tensor[ix[0]] * m.multiply(x, y)), rhs));
  });
  rep.add("b ▷ x y = (b1 ▷ x)(b2 ▷ y)", "Sec 2 axiom (1)", ax1);

  double ax2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Mat sb = a.operator_of(w.star(w.S(w.algebra.basis(i))));
    for (int k = 0; k < dm; ++k) {
      const Vec x = m.basis(k);
      ax2 = std::max(ax2, relative_residual(m.adjoint(a.tensor[static_cast<std::size_t>(i)] * x), Vec(sb * m.adjoint(x))));
    }
  }
  rep.add("(b ▷ x)* = S(b)* ▷ x*", "Sec 2 axiom (2)", ax2);

  const Mat et = w.eps_t_matrix();
  const Vec one = m.unit();
  Mat k1(dm, n), ke(dm, n);
  for (int i = 0; i < n; ++i) {
    k1.col(i) = a.tensor[static_cast<std::size_t>(i)] * one;
    ke.col(i) = a.operator_of(et.col(i)) * one;
  }
  rep.add("b ▷ 1 = eps^t(b) ▷ 1", "Sec 2 axiom (3)", relative_residual(k1, ke));
  const double rankTol = std::max(tol, 1e-11);
  const Mat n1 = null_space(k1, rankTol), n2 = null_space(et, rankTol);
  rep.require("b ▷ 1 = 0 iff eps^t(b) = 0", "Sec 2 axiom (3)",
              n1.cols() == n2.cols() && (n1.cols() == 0 || same_span(n1, n2, rankTol)),
              "kernel dimensions " + std::to_string(n1.cols()) + " and " + std::to_string(n2.cols()));
  return rep;
}

ActionData trivial_action(const WeakHopfData& w, const MultiMatrixAlgebra& carrier) {
  ActionData a;
  a.hopf = w;
  a.carrier = carrier;
  for (int i = 0; i < w.dim(); ++i) a.tensor.push_back(w.epsilon(i) * Mat::Identity(carrier.dim(), carrier.dim()));
  return a;
}

ActionData canonical_action(const TowerData& t, const DeformedStructure& d, const Config& cfg) {
  const ConditionalExpectation eM1(t.subM1, t.tau, cfg.tolerance);
  ActionData a;
  a.hopf = d.hopf;
  a.carrier = t.subM1.sub;
  const int dm = a.carrier.dim();
  for (Eigen::Index i = 0; i < t.B.images.cols(); ++i) {
    Mat op(dm, dm);
    for (int k = 0; k < dm; ++k) {
      const Vec bxe2 = t.ambient.multiply(t.ambient.multiply(t.B.images.col(i), t.subM1.images.col(k)), t.e2);
      op.col(k) = eM1.sub_coordinates(bxe2) / t.lambda;
    }
    a.tensor.push_back(op);
  }
  return a;
}

Report canonical_action_checks(const TowerData& t, const DeformedStructure&, const ActionData& a, const Config& cfg) {
  const double tol = cfg.tolerance;
  const auto& amb = t.ambient;
  const MultiMatrixAlgebra& m1 = a.carrier;
  const WeakHopfData& w = a.hopf;
  const int n = w.dim(), dm = m1.dim();
  Report rep(tol);
  const std::vector<Terms> sw = sweedler_terms(w);
  double cor = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < dm; ++k) {
      const Vec x = m1.basis(k);
      Vec rhs = Vec::Zero(amb.dim());
      for (const auto& [p, q, c] : sw[static_cast<std::size_t>(i)])
        rhs += c * amb.multiply(t.subM1.map(a.tensor[static_cast<std::size_t>(p)] * x), t.B.images.col(q));
      cor = std::max(cor, relative_residual(amb.multiply(t.B.images.col(i), t.subM1.map(x)), rhs));
    }
  rep.add("b x = (b~1 ▷ x) b~2", "Prop 6.3", cor);

  const ConditionalExpectation eM(t.subM, t.tau, tol);
  const Mat e2op = a.operator_of(t.B.coordinates(t.e2));
  double e2res = 0.0, zres = 0.0;
  for (int k = 0; k < dm; ++k) {
    const Vec x = t.subM1.images.col(k);
    e2res = std::max(e2res, relative_residual(t.subM1.map(e2op * m1.basis(k)), eM(x)));
  }
  for (Eigen::Index zi = 0; zi < t.Bt.images.cols(); ++zi) {
    const Vec z = t.Bt.images.col(zi);
    const Mat zop = a.operator_of(t.B.coordinates(z));
    for (int k = 0; k < dm; ++k)
      zres = std::max(zres, relative_residual(t.subM1.map(zop * m1.basis(k)), amb.multiply(z, t.subM1.images.col(k))));
  }
  rep.add("e2 ▷ x = E_M(x)", "Prop 6.1", e2res);
  rep.add("z ▷ x = z x, z in B_t", "Prop 6.1", zres);
  return rep;
}

SubalgebraEmbedding fixed_points(const ActionData& a, const Config& cfg) {
  const int n = a.hopf.dim(), dm = a.carrier.dim();
  const Mat et = a.hopf.eps_t_matrix();
  Mat eq(static_cast<Eigen::Index>(n) * dm, dm);
  for (int i = 0; i < n; ++i)
    eq.block(static_cast<Eigen::Index>(i) * dm, 0, dm, dm) = a.tensor[static_cast<std::size_t>(i)] - a.operator_of(et.col(i));
  const Mat ns = null_space(eq, std::max(cfg.tolerance, 1e-11));
  try {
    return decompose_subalgebra(a.carrier, ns, cfg);
  } catch (const Error& e) {
    throw Error(std::string("fixed set is not a subalgebra: ") + e.what());
  }
}

CrossedProduct::CrossedProduct(ActionData action, const Config& cfg)
    : action_(std::move(action)), report_(cfg.tolerance) {
  const double tol = cfg.tolerance;
  const WeakHopfData& w = action_.hopf;
  const MultiMatrixAlgebra& m = action_.carrier;
  const MultiMatrixAlgebra& b = w.algebra;
  dimM_ = m.dim();
  dimB_ = b.dim();
  const CartanPair cartan = cartan_subalgebras(w, cfg);
  bs_ = cartan.source.images;
  const SubalgebraEmbedding& bt = cartan.target;
  const MultiMatrixAlgebra& tAlg = bt.sub;
  const Vec one = m.unit();

  // φ(z) = z ▷ 1 on B_t and the separability idempotent sum_α m_α^-1 f_kl ⊗ f_lk.
  std::vector<Vec> phi;
  for (int i = 0; i < tAlg.dim(); ++i) phi.push_back(action_.act(bt.images.col(i), one));
  double hom = relative_residual(Vec(action_.act(bt.map(tAlg.unit()), one)), one);
  for (int i = 0; i < tAlg.dim(); ++i)
    for (int j = 0; j < tAlg.dim(); ++j) {
      const int p = tAlg.unit_product(i, j);
      const Vec lhs = p >= 0 ? phi[static_cast<std::size_t>(p)] : Vec(Vec::Zero(dimM_));
      hom = std::max(hom, relative_residual(lhs, m.multiply(phi[static_cast<std::size_t>(i)], phi[static_cast<std::size_t>(j)])));
    }
  report_.add("z -> z ▷ 1 is a unital homomorphism on B_t", "Sec 2", hom);
  for (int a = 0; a < tAlg.num_blocks(); ++a)
    for (int k = 0; k < tAlg.block_size(a); ++k)
      for (int l = 0; l < tAlg.block_size(a); ++l) {
        sepLeft_.push_back(m.right_mult(phi[static_cast<std::size_t>(tAlg.index(a, k, l))]) / tAlg.block_size(a));
        sepRight_.push_back(b.left_mult(bt.images.col(tAlg.index(a, l, k))));
      }

  // P preserves the sectors (carrier block, row) x (B block, column).
  sectorOf_.assign(static_cast<std::size_t>(dimM_ * dimB_), -1);
  for (int a = 0; a < m.num_blocks(); ++a)
    for (int r = 0; r < m.block_size(a); ++r)
      for (int be = 0; be < b.num_blocks(); ++be)
        for (int v = 0; v < b.block_size(be); ++v) {
          Sector sec;
          for (int s = 0; s < m.block_size(a); ++s)
            for (int u = 0; u < b.block_size(be); ++u) sec.index.push_back(m.index(a, r, s) * dimB_ + b.index(be, u, v));
          const auto sz = static_cast<Eigen::Index>(sec.index.size());
          Mat ps(sz, sz);
          for (Eigen::Index c = 0; c < sz; ++c) {
            Vec e = Vec::Zero(dimM_ * dimB_);
            e(sec.index[static_cast<std::size_t>(c)]) = 1.0;
            const Vec pe = project(e);
            for (Eigen::Index r2 = 0; r2 < sz; ++r2) ps(r2, c) = pe(sec.index[static_cast<std::size_t>(r2)]);
          }
          Eigen::ColPivHouseholderQR<Mat> qr(ps);
          qr.setThreshold(std::max(tol, 1e-11));
          const Eigen::Index rank = qr.rank();
          if (rank == 0) continue;
          Mat chosen(sz, rank);
          for (Eigen::Index j = 0; j < rank; ++j) {
            const Eigen::Index col = qr.colsPermutation().indices()(j);
            chosen.col(j) = ps.col(col);
            sec.classes.push_back(static_cast<int>(basis_.size()));
            basis_.push_back(sec.index[static_cast<std::size_t>(col)]);
          }
          sec.solve = chosen.completeOrthogonalDecomposition().pseudoInverse();
          const int id = static_cast<int>(sectors_.size());
          for (int p : sec.index) sectorOf_[static_cast<std::size_t>(p)] = id;
          sectors_.push_back(std::move(sec));
        }
  terms_ = sweedler_terms(w);
  self_check(cfg);
}

std::vector<std::pair<int, int>> CrossedProduct::basis_tensors() const {
  std::vector<std::pair<int, int>> out;
  for (int p : basis_) out.emplace_back(p / dimB_, p % dimB_);
  return out;
}

Vec CrossedProduct::elementary(int i, int k) const {
  Vec v = Vec::Zero(dimM_ * dimB_);
  v(i * dimB_ + k) = 1.0;
  return v;
}

Vec CrossedProduct::tensor(const Vec& x, const Vec& b) const {
  Vec v(dimM_ * dimB_);
  for (int i = 0; i < dimM_; ++i) v.segment(static_cast<Eigen::Index>(i) * dimB_, dimB_) = x(i) * b;
  return v;
}

Vec CrossedProduct::project(const Vec& rep) const {
  const Mat v = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(rep.data(), dimM_, dimB_);
  Mat out = Mat::Zero(dimM_, dimB_);
  for (std::size_t t = 0; t < sepLeft_.size(); ++t) out += sepLeft_[t] * v * sepRight_[t].transpose();
  Vec flat(dimM_ * dimB_);
  for (int i = 0; i < dimM_; ++i) flat.segment(static_cast<Eigen::Index>(i) * dimB_, dimB_) = out.row(i).transpose();
  return flat;
}

Vec CrossedProduct::classes(const Vec& rep) const {
  const Vec p = project(rep);
  Vec c = Vec::Zero(dim());
  for (const Sector& s : sectors_) {
    Vec local(static_cast<Eigen::Index>(s.index.size()));
    for (std::size_t i = 0; i < s.index.size(); ++i) local(static_cast<Eigen::Index>(i)) = p(s.index[i]);
    const Vec coeff = s.solve * local;
    for (std::size_t j = 0; j < s.classes.size(); ++j) c(s.classes[j]) = coeff(static_cast<Eigen::Index>(j));
  }
  return c;
}

Vec CrossedProduct::lift(const Vec& c) const {
  Vec v = Vec::Zero(dimM_ * dimB_);
  for (int j = 0; j < dim(); ++j) v(basis_[static_cast<std::size_t>(j)]) += c(j);
  return v;
}

Vec CrossedProduct::multiply_rep(const Vec& v, const Vec& w) const {
  const MultiMatrixAlgebra& m = action_.carrier;
  const MultiMatrixAlgebra& b = action_.hopf.algebra;
  Vec out = Vec::Zero(dimM_ * dimB_);
  for (int p = 0; p < dimM_ * dimB_; ++p) {
    if (v(p) == cplx(0.0)) continue;
    const int i = p / dimB_, k = p % dimB_;
    const Vec xi = m.basis(i);
    for (int r = 0; r < dimM_ * dimB_; ++r) {
      if (w(r) == cplx(0.0)) continue;
      const int j = r / dimB_, l = r % dimB_;
      for (const auto& [s, q, c] : terms_[static_cast<std::size_t>(k)]) {
        const int bl = b.unit_product(q, l);
        if (bl < 0) continue;
        const Vec left = m.multiply(xi, action_.tensor[static_cast<std::size_t>(s)].col(j));
        const cplx coef = v(p) * w(r) * c;
        for (int a = 0; a < dimM_; ++a)
          if (left(a) != cplx(0.0)) out(static_cast<Eigen::Index>(a) * dimB_ + bl) += coef * left(a);
      }
    }
  }
  return out;
}

Vec CrossedProduct::star_rep(const Vec& v) const {
  const WeakHopfData& w = action_.hopf;
  const MultiMatrixAlgebra& m = action_.carrier;
  Vec out = Vec::Zero(dimM_ * dimB_);
  for (int p = 0; p < dimM_ * dimB_; ++p) {
    if (v(p) == cplx(0.0)) continue;
    const int i = p / dimB_, k = p % dimB_;
    const Vec xs = m.adjoint(m.basis(i));
    for (const auto& [s, q, c] : terms_[static_cast<std::size_t>(k)]) {
      const Vec left = action_.act(w.star(w.algebra.basis(s)), xs);
      out += std::conj(v(p) * c) * tensor(left, w.star(w.algebra.basis(q)));
    }
  }
  return out;
}

void CrossedProduct::self_check(const Config& cfg) {
  const WeakHopfData& w = action_.hopf;
  const MultiMatrixAlgebra& m = action_.carrier;
  const int q = dim();
  const std::size_t samples = std::max<std::size_t>(20, cfg.sweepBudget / 200);
  const std::string note = std::to_string(samples) + " seeded samples";
  Rng rng(cfg.seed + 7);
  auto pick = [&](int n) { return static_cast<int>(rng.index(static_cast<std::size_t>(n))); };
  auto basis_class = [&](int j) {
    Vec e = Vec::Zero(q);
    e(j) = 1.0;
    return e;
  };

  double idem = 0.0, rel = 0.0;
  const Mat bt = cartan_subalgebras(w, cfg).target.images;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec e = elementary(pick(dimM_), pick(dimB_));
    const Vec pe = project(e);
    idem = std::max(idem, relative_residual(project(pe), pe));
    const Vec x = m.basis(pick(dimM_)), b = w.algebra.basis(pick(dimB_));
    const Vec z = bt.col(pick(static_cast<int>(bt.cols())));
    const Vec r = tensor(m.multiply(x, action_.act(z, m.unit())), b) - tensor(x, w.multiply(z, b));
    rel = std::max(rel, classes(r).norm() / std::max(1.0, r.norm()));
  }
  report_.add("P^2 = P", "Sec 6", idem, note);
  const bool relOk = report_.add("[x (z ▷ 1) ⊗ b] = [x ⊗ z b], z in B_t", "Sec 6", rel, note);

  const Vec one = unit();
  double unitRes = 0.0;
  for (int j = 0; j < q; ++j) {
    const Vec e = basis_class(j);
    unitRes = std::max({unitRes, relative_residual(multiply(one, e), e), relative_residual(multiply(e, one), e)});
  }
  report_.add("[1 ⊗ 1] is a unit", "Sec 6", unitRes);

  double indep = 0.0, assoc = 0.0, inv = 0.0, anti = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = m.basis(pick(dimM_)), b = w.algebra.basis(pick(dimB_));
    const Vec z = bt.col(pick(static_cast<int>(bt.cols())));
    const Vec r = tensor(m.multiply(x, action_.act(z, m.unit())), b) - tensor(x, w.multiply(z, b));
    const Vec other = lift(basis_class(pick(q)));
    indep = std::max({indep, classes(multiply_rep(r, other)).norm(), classes(multiply_rep(other, r)).norm()});
    const Vec c1 = basis_class(pick(q)), c2 = basis_class(pick(q)), c3 = basis_class(pick(q));
    assoc = std::max(assoc, relative_residual(multiply(multiply(c1, c2), c3), multiply(c1, multiply(c2, c3))));
    inv = std::max(inv, relative_residual(star(star(c1)), c1));
    anti = std::max(anti, relative_residual(star(multiply(c1, c2)), multiply(star(c2), star(c1))));
  }
  const bool indepOk = report_.add("product independent of representatives", "Sec 6", indep, note);
  report_.add("associativity", "Sec 6", assoc, note);
  report_.add("c** = c", "Sec 6", inv, note);
  report_.add("(c1 c2)* = c2* c1*", "Sec 6", anti, note);

  double mHom = 0.0, bHom = 0.0, comm = 0.0;
  const Vec oneB = w.unit(), oneM = m.unit();
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = m.basis(pick(dimM_)), y = m.basis(pick(dimM_));
    const Vec bx = classes(tensor(x, oneB)), by = classes(tensor(y, oneB));
    mHom = std::max({mHom, relative_residual(multiply(bx, by), classes(tensor(m.multiply(x, y), oneB))),
                     relative_residual(star(bx), classes(tensor(m.adjoint(x), oneB)))});
    const Vec z1 = bs_.col(pick(static_cast<int>(bs_.cols()))), z2 = bs_.col(pick(static_cast<int>(bs_.cols())));
    const Vec c1 = classes(tensor(oneM, z1)), c2 = classes(tensor(oneM, z2));
    bHom = std::max(bHom, relative_residual(multiply(c1, c2), classes(tensor(oneM, w.multiply(z1, z2)))));
    const Vec xz = classes(tensor(x, z1));
    comm = std::max(comm, relative_residual(multiply(bx, c1), xz));
  }
  report_.add("x -> [x ⊗ 1] is a *-homomorphism", "Sec 6", mHom, note);
  report_.add("z -> [1 ⊗ z] is a homomorphism on B_s", "Sec 6", bHom, note);
  report_.add("[x ⊗ 1][1 ⊗ z] = [x ⊗ z]", "Sec 6", comm, note);
  report_.info("dimension", "Sec 6", std::to_string(q) + " = " + std::to_string(dimM_) + " x " + std::to_string(dimB_) +
                                         " / B_t");
  if (!relOk || !indepOk) throw Error("crossed product not well defined: " + report_.failures());
}

Report minimality(const CrossedProduct& c, const Config& cfg) {
  const double tol = cfg.tolerance, rankTol = std::max(tol, 1e-11);
  const ActionData& a = c.action();
  const MultiMatrixAlgebra& m = a.carrier;
  const int q = c.dim();
  Report rep(tol);
  Rng rng(cfg.seed + 11);
  const Vec oneB = a.hopf.unit();
  Mat eq(2 * static_cast<Eigen::Index>(q), q);
  for (int g = 0; g < 2; ++g) {
    const Vec x = rng.complex_vector(m.dim());
    const Vec h = x + m.adjoint(x);
    const Vec hr = c.lift(c.classes(c.tensor(h, oneB)));
    for (int j = 0; j < q; ++j) {
      Vec e = Vec::Zero(q);
      e(j) = 1.0;
      const Vec er = c.lift(e);
      eq.block(static_cast<Eigen::Index>(g) * q, j, q, 1) = c.classes(c.multiply_rep(hr, er)) - c.classes(c.multiply_rep(er, hr));
    }
  }
  const Mat comm = null_space(eq, rankTol);
  const Mat& bs = c.source_basis();
  Mat img(q, bs.cols());
  for (Eigen::Index k = 0; k < bs.cols(); ++k) img.col(k) = c.classes(c.tensor(m.unit(), bs.col(k)));
  const Eigen::Index bsRank = rank_of(img, rankTol);
  double inside = 0.0;
  if (img.cols() > 0) inside = (eq * img).norm() / std::max(1.0, eq.norm() * img.norm());
  rep.add("B_s ⊂ M' ∩ M ⋊ B", "Sec 2", inside);
  rep.require("M' ∩ M ⋊ B = B_s", "Remark 6.4(i)",
              comm.cols() == bsRank && (bsRank == 0 || same_span(comm, img, rankTol)),
              "commutant dimension " + std::to_string(comm.cols()) + ", dim B_s " + std::to_string(bsRank) +
                  ", 2 seeded Hermitian generators of M");
  return rep;
}

ThetaMap theta_iso(const TowerData& t, const DeformedStructure& d, const CrossedProduct& c, const Config& cfg) {
  const double tol = cfg.tolerance, rankTol = std::max(tol, 1e-11);
  const auto& amb = t.ambient;
  const MultiMatrixAlgebra& algB = d.hopf.algebra;
  const int q = c.dim(), dimB = algB.dim(), rd = c.representative_dim();
  const Vec sh = t.B.map(algB.positive_power(d.sTildeH, 0.5, tol));
  const Vec shInv = t.B.map(algB.positive_power(d.sTildeH, -0.5, tol));
  Mat elem(amb.dim(), rd);
  for (int p = 0; p < rd; ++p)
    elem.col(p) = amb.multiply(amb.multiply(t.subM1.images.col(p / dimB), sh),
                               amb.multiply(t.B.images.col(p % dimB), shInv));
  auto theta_rep = [&](const Vec& v) { return Vec(elem * v); };

  ThetaMap out{Mat(amb.dim(), q), Report(tol)};
  for (int j = 0; j < q; ++j) {
    Vec e = Vec::Zero(q);
    e(j) = 1.0;
    out.images.col(j) = theta_rep(c.lift(e));
  }
  const Eigen::Index r = rank_of(out.images, rankTol);
  const bool bij = out.report.require("theta bijective", "Prop 6.3", r == q && q == amb.dim(),
                                      "rank " + std::to_string(r) + ", dim M ⋊ B " + std::to_string(q) + ", dim M2 " +
                                          std::to_string(amb.dim()));
  if (!bij) throw Error("theta not bijective: " + out.report.failures());

  const std::size_t samples = std::max<std::size_t>(20, cfg.sweepBudget / 200);
  const std::string note = std::to_string(samples) + " seeded samples";
  Rng rng(cfg.seed + 13);
  const Mat bt = t.Bt.images;
  double wd = 0.0, mult = 0.0, st = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = c.action().carrier.basis(static_cast<int>(rng.index(static_cast<std::size_t>(c.action().carrier.dim()))));
    const Vec b = algB.basis(static_cast<int>(rng.index(static_cast<std::size_t>(dimB))));
    const Vec z = t.B.coordinates(bt.col(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(bt.cols())))));
    const Vec rel = c.tensor(c.action().carrier.multiply(x, c.action().act(z, c.action().carrier.unit())), b) -
                    c.tensor(x, algB.multiply(z, b));
    wd = std::max(wd, theta_rep(rel).norm() / std::max(1.0, rel.norm()));
    Vec e1 = Vec::Zero(q), e2 = Vec::Zero(q);
    e1(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(q)))) = 1.0;
    e2(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(q)))) = 1.0;
    const Vec r1 = c.lift(e1), r2 = c.lift(e2);
    mult = std::max(mult, relative_residual(theta_rep(c.multiply_rep(r1, r2)), amb.multiply(theta_rep(r1), theta_rep(r2))));
    st = std::max(st, relative_residual(theta_rep(c.star_rep(r1)), amb.adjoint(theta_rep(r1))));
  }
  out.report.add("theta vanishes on relators", "Prop 6.3", wd, note);
  const bool multOk = out.report.add("theta multiplicative", "Prop 6.3", mult, note);
  out.report.add("theta *-preserving", "Prop 6.3", st, note);
  out.report.add("theta(1) = 1", "Prop 6.3", relative_residual(Vec(out.images * c.unit()), amb.unit()));
  if (!multOk) throw Error("theta not multiplicative: " + out.report.failures());
  return out;
}

}  // namespace wkh
