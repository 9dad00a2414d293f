#pragma once

#include <string>

#include <json.hpp>

#include "wkh/action.hpp"
#include "wkh/deform.hpp"
#include "wkh/report.hpp"
#include "wkh/tower.hpp"
#include "wkh/weak_hopf.hpp"

namespace wkh {

using Json = nlohmann::json;

/// Value of the top-level "format" key of every document.
inline constexpr const char* kFormat = "wkbench/1";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed document: missing keys, wrong types or shapes.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Well-formed document whose content violates a structural invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// {"format", "kind", "meta", "payload"}.
struct WorkbenchObject {
  std::string kind;  ///< weak-hopf | element | tower | action | crossed-product | report
  Json payload;
  Json meta;
};

Json to_json(const WorkbenchObject& o);
/// Throws SchemaError on a missing or foreign "format" key or a malformed envelope.
WorkbenchObject object_from_json(const Json& j);
WorkbenchObject make_object(std::string kind, Json payload, const Config& cfg);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json& j);
/// Column-major list of columns, each a list of [re, im].
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& what);
Json vector_to_json(const Vec& v);
Vec vector_from_json(const Json& j, Eigen::Index size, const std::string& what);

/// Element as one square [re, im] matrix per block.
Json element_to_json(const MultiMatrixAlgebra& alg, const Vec& x);
/// Returns the algebra read from the block shapes together with the coefficients.
std::pair<MultiMatrixAlgebra, Vec> element_from_json(const Json& j);

/// {"blocks", "delta": [[i, j, k, re, im]...], "epsilon", "antipode", "involution", ...}.
Json weak_hopf_to_json(const WeakHopfData& w);
WeakHopfData weak_hopf_from_json(const Json& j);

/// Undeformed or reconstructed structure: weak Hopf fields plus "H".
Json structure_to_json(const WeakHopfData& w, const Vec& H);

Json embedding_to_json(const SubalgebraEmbedding& e);
SubalgebraEmbedding embedding_from_json(const Json& j, const MultiMatrixAlgebra& ambient, const std::string& what);

Json tower_to_json(const TowerData& t);
/// Throws InvariantError("e2 not a projection") and similar on broken towers.
TowerData tower_from_json(const Json& j, const Config& cfg = {});

Json action_to_json(const ActionData& a);
ActionData action_from_json(const Json& j);

/// θ identifies M ⋊ B with M2, so the blocks are those of M2; "basis" lists
/// the (i, k) of the elementary tensors x_i ⊗ b_k whose classes form the basis
/// and "theta" their images.
Json crossed_product_to_json(const CrossedProduct& c, const ThetaMap& theta, const MultiMatrixAlgebra& m2);

/// Keys sorted, residuals as 6-significant-digit strings.
Json report_to_json(const Report& r, const Config& cfg);
Report report_from_json(const Json& j);
/// Human-readable table with ✓ / ✗ per row.
std::string report_table(const Report& r);

}  // namespace wkh
