#pragma once

#include <tuple>
#include <vector>

#include "wkh/deform.hpp"
#include "wkh/tower.hpp"
#include "wkh/weak_hopf.hpp"

namespace wkh {

/// Left action b ▷ x of a weak Hopf algebra on a multimatrix algebra;
/// tensor[i] is the matrix of x -> b_i ▷ x on carrier coordinates.
struct ActionData {
  WeakHopfData hopf;
  MultiMatrixAlgebra carrier;
  std::vector<Mat> tensor;

  Mat operator_of(const Vec& b) const;
  Vec act(const Vec& b, const Vec& x) const { return operator_of(b) * x; }
};

/// Module law, axioms b ▷ xy = (b1 ▷ x)(b2 ▷ y), (b ▷ x)* = S(b)* ▷ x*,
/// b ▷ 1 = eps^t(b) ▷ 1 and the kernel condition.
Report verify_action(const ActionData& a, const Config& cfg = {});

/// b ▷ x = ε(b) x.
ActionData trivial_action(const WeakHopfData& w, const MultiMatrixAlgebra& carrier);

/// b ▷ x = λ^-1 E_M1(b x e2) on M1, with the deformed structure acting.
ActionData canonical_action(const TowerData& t, const DeformedStructure& d, const Config& cfg = {});

/// b x = (b~1 ▷ x) b~2, 1 ▷ x = x, e2 ▷ x = E_M(x), z ▷ x = z x for z in B_t.
Report canonical_action_checks(const TowerData& t, const DeformedStructure& d, const ActionData& a,
                               const Config& cfg = {});

/// M^B = {x : b ▷ x = eps^t(b) ▷ x for all b}, embedded into the carrier.
SubalgebraEmbedding fixed_points(const ActionData& a, const Config& cfg = {});

/// M ⋊ B = M ⊗_{B_t} B. Representatives live in M ⊗ B with coefficient
/// index i * dim B + k for x_i ⊗ b_k; classes are coordinates over `basis`.
class CrossedProduct {
 public:
  CrossedProduct(ActionData action, const Config& cfg = {});

  const ActionData& action() const { return action_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int representative_dim() const { return dimM_ * dimB_; }
  /// Elementary tensors x_i ⊗ b_k, as pairs (i, k), whose classes form the basis.
  std::vector<std::pair<int, int>> basis_tensors() const;

  Vec elementary(int i, int k) const;
  Vec tensor(const Vec& x, const Vec& b) const;
  /// Class coordinates of a representative.
  Vec classes(const Vec& rep) const;
  /// Representative of class coordinates.
  Vec lift(const Vec& c) const;
  Vec multiply_rep(const Vec& v, const Vec& w) const;
  Vec star_rep(const Vec& v) const;
  Vec multiply(const Vec& c1, const Vec& c2) const { return classes(multiply_rep(lift(c1), lift(c2))); }
  Vec star(const Vec& c) const { return classes(star_rep(lift(c))); }
  Vec unit() const { return classes(tensor(action_.carrier.unit(), action_.hopf.unit())); }

  /// Source Cartan subalgebra of the acting algebra (B coordinates).
  const Mat& source_basis() const { return bs_; }
  const Report& report() const { return report_; }

 private:
  Vec project(const Vec& rep) const;
  void self_check(const Config& cfg);
  struct Sector {
    std::vector<int> index;  ///< representative coordinates in the sector
    Mat solve;               ///< projected sector vector -> basis coefficients
    std::vector<int> classes;  ///< global class numbers
  };
  ActionData action_;
  int dimM_ = 0, dimB_ = 0;
  std::vector<std::vector<std::tuple<int, int, cplx>>> terms_;
  std::vector<Mat> sepLeft_, sepRight_;  ///< P = sum R_left ⊗ L_right (carrier, B)
  std::vector<Sector> sectors_;
  std::vector<int> sectorOf_;
  std::vector<int> basis_;
  Mat bs_;
  Report report_{1e-9};
};

/// Commutant of the image of M in M ⋊ B compared with the image of B_s.
Report minimality(const CrossedProduct& c, const Config& cfg = {});

struct ThetaMap {
  Mat images;  ///< column j = θ of basis class j, ambient coordinates
  Report report{1e-9};
};

/// θ([x ⊗ b]) = x S~(H)^{1/2} b S~(H)^{-1/2}. Throws "theta not bijective"
/// on rank deficiency and "theta not multiplicative" on product residuals.
ThetaMap theta_iso(const TowerData& t, const DeformedStructure& d, const CrossedProduct& c, const Config& cfg = {});

}  // namespace wkh
