#pragma once

#include <string>

#include "wkh/fd_algebra.hpp"
#include "wkh/groups.hpp"
#include "wkh/weak_hopf.hpp"

namespace wkh {

/// Finite tower N ⊂ M ⊂ M1 ⊂ M2 with every algebra embedded in the top level M2.
struct TowerData {
  MultiMatrixAlgebra ambient;  ///< M2
  SubalgebraEmbedding subN, subM, subM1;
  Vec e1, e2;
  TraceState tau;
  double lambda = 0.0;
  /// Derived by complete_tower().
  SubalgebraEmbedding A;   ///< N' ∩ M1
  SubalgebraEmbedding B;   ///< M' ∩ M2
  SubalgebraEmbedding Bt;  ///< M' ∩ M1
  SubalgebraEmbedding Bs;  ///< M1' ∩ M2
  int d = 0;               ///< dim(M' ∩ M1)
  std::string source;
};

/// Computes A, B, B_t, B_s and d from the chain.
void complete_tower(TowerData& t, const Config& cfg = {});

/// Largest group order accepted by build_tower_from_group.
constexpr int kMaxTowerGroupOrder = 6;

/// Tower ℂ ⊂ ℂ^G ⊂ M1 ⊂ M2 with uniform Markov trace and λ = 1/|G|.
TowerData build_tower_from_group(const GroupTable& g, const Config& cfg = {});

/// Jones/Markov identities, commuting square, Lemma 3.1 relations and spanning conditions.
Report verify_tower_premises(const TowerData& t, const Config& cfg = {});

struct PairingForm {
  Mat gram;  ///< gram(i, k) = <a_i, b_k> over the matrix units of A and B
  double conditionNumber = 0.0;
};

/// <x, b> = d λ^-2 τ(x e2 e1 b) for ambient elements.
cplx pairing_value(const TowerData& t, const Vec& x, const Vec& b);

PairingForm pairing(const TowerData& t, const Config& cfg = {});

struct ReconstructedStructure {
  WeakHopfData onB;  ///< in the matrix-unit basis of t.B.sub
  WeakHopfData onA;  ///< in the matrix-unit basis of t.A.sub
  PairingForm form;
  Vec H;             ///< S_B(1_(1)) 1_(2), B coordinates
  Vec Hindex;        ///< d^-1 Index τ|B_t, B coordinates
  /// B_t and B_s as subalgebras of the algebra of B.
  SubalgebraEmbedding btInB;
  SubalgebraEmbedding bsInB;
  Report crossChecks{1e-9};
};

/// Throws Error("reconstruction cross-check failed: ...") when a cross-check fails.
ReconstructedStructure reconstruct(const TowerData& t, const Config& cfg = {});

struct DualBases {
  std::vector<Vec> sUnits;  ///< matrix units of A (A coordinates)
  std::vector<Vec> vUnits;  ///< dual comatrix units of B (B coordinates)
  std::vector<double> blockTraces;  ///< |α| per block of A
  Report report{1e-9};
};

DualBases dual_bases(const TowerData& t, const ReconstructedStructure& r, const Config& cfg = {});

/// One row per identity of the reconstruction suite, each tagged with its source result.
Report identity_suite(const TowerData& t, const ReconstructedStructure& r, const Config& cfg = {});

/// Weak Kac dichotomy, Haar data e2 / dτ, Markov relation of B_t ⊂ B and arithmetic of λ^-1.
Report classify(const TowerData& t, const ReconstructedStructure& r, const Config& cfg = {});

/// Explicit isomorphisms A ≅ pair_groupoid(n) and B ≅ dual(pair_groupoid(n)),
/// for towers whose A is a full matrix algebra. Returns the larger residual.
double pair_groupoid_residuals(const TowerData& t, const ReconstructedStructure& r, const Config& cfg,
                               double* aResidual = nullptr, double* bResidual = nullptr);

}  // namespace wkh
