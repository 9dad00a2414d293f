#pragma once

#include <optional>

#include "wkh/tower.hpp"
#include "wkh/weak_hopf.hpp"

namespace wkh {

/// (B, Δ_B, ε_B, S_B, *) together with the canonical element H. The weak Hopf
/// fields of `data` hold the undeformed maps; they need not satisfy the weak
/// Hopf axioms when H != 1.
struct UndeformedStructure {
  WeakHopfData data;
  Vec H;
  bool fromTower = false;
};

/// Coalgebra, twisted multiplicativity, *-compatibility, counital relations,
/// antipode relations and H positive invertible central in B_t. For tower
/// input additionally τ(H) = 1 (an info row otherwise).
Report cor416_bundle(const UndeformedStructure& u, const Config& cfg = {}, const TraceState* towerTrace = nullptr,
                     const SubalgebraEmbedding* towerB = nullptr);

/// Max residual of Δ_B(bc) = Δ_B(b)Δ_B(c) over basis pairs.
double multiplicativity_residual(const WeakHopfData& w);

/// H = 1 dichotomy for an undeformed structure: not weak Kac when H != 1.
Report classify_structure(const UndeformedStructure& u, const Config& cfg = {});

struct DeformedStructure {
  WeakHopfData hopf;  ///< (B, Δ~, ε~, S~) with involution †
  Vec H;
  Vec sTildeH;  ///< S~(H)
  Vec G;        ///< S~(H)^-1 H
  std::optional<Vec> haarProjection;       ///< e2 H for tower input
  std::optional<RowVec> haarFunctional;    ///< b -> d τ(S~(H) H b) for tower input
  Report report{1e-9};
};

/// Throws Error("Cor 4.16 bundle violated: ...") before deforming and
/// Error("deformed structure fails the weak C*-Hopf axioms: ...") after.
DeformedStructure deform(const UndeformedStructure& u, const Config& cfg = {});

/// Deformation of a reconstructed tower structure including the Haar data checks.
DeformedStructure deform_tower(const TowerData& t, const ReconstructedStructure& r, const Config& cfg = {});

UndeformedStructure undeformed_from_tower(const ReconstructedStructure& r);

/// Formal inverse of deform: Δ_B = (1 ⊗ h)Δ~, ε_B = ε~(h^-1 ·), S_B = S~(h^-1 · h),
/// b* = S~(h) b† S~(h)^-1. Throws when h is not positive or not central in B_t.
UndeformedStructure undeform(const WeakHopfData& w, const Vec& h, const Config& cfg = {});

/// Smallest k in [1, maxPower] with G^k central in B, or 0 when none is.
int central_power_of_G(const DeformedStructure& d, int maxPower, double tol);

/// Largest residual between two weak Hopf structures on the same algebra
/// (Δ, ε, S and involution compared entrywise).
double structure_distance(const WeakHopfData& a, const WeakHopfData& b);

}  // namespace wkh
