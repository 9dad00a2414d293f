#include "wkh/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace wkh {

namespace {

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(what + ": missing \"" + key + "\"");
  return j.at(key);
}

int int_from_json(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw SchemaError(what + ": integer expected");
  return j.get<int>();
}

double real_from_json(const Json& j, const std::string& what) {
  if (!j.is_number()) throw SchemaError(what + ": number expected");
  return j.get<double>();
}

std::vector<int> blocks_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw SchemaError(what + ": non-empty list of block sizes expected");
  std::vector<int> out;
  for (const Json& b : j) {
    const int n = int_from_json(b, what);
    if (n < 1) throw SchemaError(what + ": block sizes must be positive");
    out.push_back(n);
  }
  return out;
}

}  // namespace

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Vec vector_from_json(const Json& j, Eigen::Index size, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size)
    throw SchemaError(what + ": array of " + std::to_string(size) + " entries expected");
  Vec v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = complex_from_json(j[static_cast<std::size_t>(i)]);
  return v;
}

Json matrix_to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vector_to_json(m.col(c)));
  return out;
}

Mat matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != cols)
    throw SchemaError(what + ": " + std::to_string(cols) + " columns expected");
  Mat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) m.col(c) = vector_from_json(j[static_cast<std::size_t>(c)], rows, what);
  return m;
}

Json to_json(const WorkbenchObject& o) {
  return Json{{"format", kFormat}, {"kind", o.kind}, {"meta", o.meta}, {"payload", o.payload}};
}

WorkbenchObject object_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("document must be a JSON object");
  const Json& f = field(j, "format", "document");
  if (!f.is_string() || f.get<std::string>() != kFormat)
    throw SchemaError(std::string("unsupported format, expected \"") + kFormat + "\"");
  const Json& k = field(j, "kind", "document");
  if (!k.is_string()) throw SchemaError("document: \"kind\" must be a string");
  WorkbenchObject o;
  o.kind = k.get<std::string>();
  static const std::vector<std::string> kinds{"weak-hopf", "element", "tower", "action", "crossed-product", "report"};
  if (std::find(kinds.begin(), kinds.end(), o.kind) == kinds.end()) throw SchemaError("unknown kind \"" + o.kind + "\"");
  o.payload = field(j, "payload", "document");
  o.meta = j.value("meta", Json::object());
  return o;
}

WorkbenchObject make_object(std::string kind, Json payload, const Config& cfg) {
  WorkbenchObject o;
  o.kind = std::move(kind);
  o.payload = std::move(payload);
  o.meta = Json{{"seed", cfg.seed}, {"tolerance", cfg.tolerance}, {"version", kToolVersion}};
  return o;
}

Json element_to_json(const MultiMatrixAlgebra& alg, const Vec& x) {
  Json blocks = Json::array();
  for (const Mat& b : alg.unpack(x)) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r) rows.push_back(vector_to_json(b.row(r).transpose()));
    blocks.push_back(rows);
  }
  return Json{{"blocks", blocks}};
}

std::pair<MultiMatrixAlgebra, Vec> element_from_json(const Json& j) {
  const Json& blocks = field(j, "blocks", "element");
  if (!blocks.is_array() || blocks.empty()) throw SchemaError("element: non-empty list of blocks expected");
  std::vector<int> sizes;
  std::vector<Mat> mats;
  for (const Json& b : blocks) {
    if (!b.is_array() || b.empty()) throw SchemaError("element: block must be a non-empty list of rows");
    const auto n = static_cast<Eigen::Index>(b.size());
    Mat m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const Json& row = b[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
        throw SchemaError("element: non-square block coefficient array");
      m.row(r) = vector_from_json(row, n, "element").transpose();
    }
    sizes.push_back(static_cast<int>(n));
    mats.push_back(m);
  }
  MultiMatrixAlgebra alg(sizes);
  return {alg, alg.pack(mats)};
}

Json weak_hopf_to_json(const WeakHopfData& w) {
  const int n = w.dim();
  Json delta = Json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (const cplx c = w.delta(j * n + k, i); c != cplx(0.0)) delta.push_back(Json::array({i, j, k, c.real(), c.imag()}));
  Json out{{"blocks", w.algebra.blocks()},
           {"delta", delta},
           {"epsilon", vector_to_json(w.epsilon.transpose())},
           {"antipode", matrix_to_json(w.antipode)},
           {"involution", w.involution ? matrix_to_json(*w.involution) : Json("adjoint")}};
  if (!w.labels.empty()) out["labels"] = w.labels;
  if (w.presentation.size() > 0) out["presentation"] = matrix_to_json(w.presentation);
  return out;
}

WeakHopfData weak_hopf_from_json(const Json& j) {
  const std::string what = "weak-hopf";
  WeakHopfData w;
  w.algebra = MultiMatrixAlgebra(blocks_from_json(field(j, "blocks", what), what + " blocks"));
  const int n = w.dim();
  w.delta = Mat::Zero(static_cast<Eigen::Index>(n) * n, n);
  const Json& delta = field(j, "delta", what);
  if (!delta.is_array()) throw SchemaError(what + ": \"delta\" must be a list");
  for (const Json& e : delta) {
    if (!e.is_array() || e.size() != 5) throw SchemaError(what + ": delta entries are [i, j, k, re, im]");
    const int i = int_from_json(e[0], "delta"), a = int_from_json(e[1], "delta"), b = int_from_json(e[2], "delta");
    if (std::min({i, a, b}) < 0 || std::max({i, a, b}) >= n) throw SchemaError(what + ": delta index out of range");
    w.delta(a * n + b, i) += cplx(real_from_json(e[3], "delta"), real_from_json(e[4], "delta"));
  }
  w.epsilon = vector_from_json(field(j, "epsilon", what), n, what + " epsilon").transpose();
  w.antipode = matrix_from_json(field(j, "antipode", what), n, n, what + " antipode");
  const Json& inv = field(j, "involution", what);
  if (inv.is_string()) {
    if (inv.get<std::string>() != "adjoint") throw SchemaError(what + ": involution must be \"adjoint\" or a matrix");
  } else {
    w.involution = matrix_from_json(inv, n, n, what + " involution");
  }
  if (j.contains("presentation")) {
    const Json& p = j.at("presentation");
    w.presentation = matrix_from_json(p, n, p.is_array() ? static_cast<Eigen::Index>(p.size()) : 0, what + " presentation");
  }
  if (j.contains("labels")) {
    if (!j.at("labels").is_array()) throw SchemaError(what + ": labels must be a list");
    for (const Json& l : j.at("labels")) {
      if (!l.is_string()) throw SchemaError(what + ": labels must be strings");
      w.labels.push_back(l.get<std::string>());
    }
    if (static_cast<Eigen::Index>(w.labels.size()) != w.presentation.cols())
      throw SchemaError(what + ": one presentation column per label expected");
  }
  return w;
}

Json structure_to_json(const WeakHopfData& w, const Vec& H) {
  Json out = weak_hopf_to_json(w);
  out["H"] = vector_to_json(H);
  return out;
}

Json embedding_to_json(const SubalgebraEmbedding& e) {
  return Json{{"blocks", e.sub.blocks()}, {"images", matrix_to_json(e.images)}};
}

SubalgebraEmbedding embedding_from_json(const Json& j, const MultiMatrixAlgebra& ambient, const std::string& what) {
  SubalgebraEmbedding e;
  e.ambient = ambient;
  e.sub = MultiMatrixAlgebra(blocks_from_json(field(j, "blocks", what), what + " blocks"));
  e.images = matrix_from_json(field(j, "images", what), ambient.dim(), e.sub.dim(), what + " images");
  return e;
}

Json tower_to_json(const TowerData& t) {
  return Json{{"ambient", t.ambient.blocks()},
              {"N", embedding_to_json(t.subN)},
              {"M", embedding_to_json(t.subM)},
              {"M1", embedding_to_json(t.subM1)},
              {"e1", vector_to_json(t.e1)},
              {"e2", vector_to_json(t.e2)},
              {"tau", std::vector<double>(t.tau.weights().data(), t.tau.weights().data() + t.tau.weights().size())},
              {"lambda", t.lambda},
              {"source", t.source}};
}

TowerData tower_from_json(const Json& j, const Config& cfg) {
  const std::string what = "tower";
  const double tol = cfg.tolerance;
  TowerData t;
  t.ambient = MultiMatrixAlgebra(blocks_from_json(field(j, "ambient", what), "tower ambient"));
  t.subN = embedding_from_json(field(j, "N", what), t.ambient, "tower N");
  t.subM = embedding_from_json(field(j, "M", what), t.ambient, "tower M");
  t.subM1 = embedding_from_json(field(j, "M1", what), t.ambient, "tower M1");
  t.e1 = vector_from_json(field(j, "e1", what), t.ambient.dim(), "tower e1");
  t.e2 = vector_from_json(field(j, "e2", what), t.ambient.dim(), "tower e2");
  const Json& tau = field(j, "tau", what);
  if (!tau.is_array() || static_cast<int>(tau.size()) != t.ambient.num_blocks())
    throw SchemaError("tower tau: one weight per ambient block expected");
  RVec weights(t.ambient.num_blocks());
  for (int a = 0; a < t.ambient.num_blocks(); ++a) weights(a) = real_from_json(tau[static_cast<std::size_t>(a)], "tower tau");
  t.tau = TraceState(weights);
  t.lambda = real_from_json(field(j, "lambda", what), "tower lambda");
  t.source = j.value("source", std::string());

  const auto& alg = t.ambient;
  auto projection = [&](const Vec& e) {
    return std::max(relative_residual(alg.multiply(e, e), e), relative_residual(alg.adjoint(e), e)) <= tol;
  };
  if (!projection(t.e1)) throw InvariantError("e1 not a projection");
  if (!projection(t.e2)) throw InvariantError("e2 not a projection");
  if (weights.minCoeff() <= 0.0) throw InvariantError("trace not faithful");
  if (std::abs(t.tau.value(alg, alg.unit()) - 1.0) > tol) throw InvariantError("trace not normalized");
  if (!(t.lambda > 0.0 && t.lambda <= 1.0)) throw InvariantError("lambda outside (0, 1]");
  for (const auto* e : {&t.subN, &t.subM, &t.subM1}) {
    const Report r = e->verify(tol);
    if (!r.all_pass()) throw InvariantError("embedding is not a unital *-homomorphism: " + r.failures());
  }
  complete_tower(t, cfg);
  return t;
}

Json action_to_json(const ActionData& a) {
  Json tensor = Json::array();
  for (const Mat& m : a.tensor) tensor.push_back(matrix_to_json(m));
  return Json{{"hopf", weak_hopf_to_json(a.hopf)}, {"carrier", a.carrier.blocks()}, {"tensor", tensor}};
}

ActionData action_from_json(const Json& j) {
  ActionData a;
  a.hopf = weak_hopf_from_json(field(j, "hopf", "action"));
  a.carrier = MultiMatrixAlgebra(blocks_from_json(field(j, "carrier", "action"), "action carrier"));
  const Json& tensor = field(j, "tensor", "action");
  if (!tensor.is_array() || static_cast<int>(tensor.size()) != a.hopf.dim())
    throw SchemaError("action: one operator per basis element expected");
  for (const Json& m : tensor) a.tensor.push_back(matrix_from_json(m, a.carrier.dim(), a.carrier.dim(), "action tensor"));
  return a;
}

Json crossed_product_to_json(const CrossedProduct& c, const ThetaMap& theta, const MultiMatrixAlgebra& m2) {
  Json basis = Json::array();
  for (const auto& [i, k] : c.basis_tensors()) basis.push_back(Json::array({i, k}));
  return Json{{"action", action_to_json(c.action())},
              {"basis", basis},
              {"blocks", m2.blocks()},
              {"dim", c.dim()},
              {"theta", matrix_to_json(theta.images)}};
}

Json report_to_json(const Report& r, const Config& cfg) {
  Json checks = Json::array();
  for (const Check& c : r.checks())
    checks.push_back(Json{{"name", c.name}, {"note", c.note}, {"pass", c.pass}, {"residual", sci(c.residual)}, {"tag", c.tag}});
  return Json{{"checks", checks},
              {"classification", r.classification},
              {"environment", Json{{"seed", cfg.seed}, {"tolerance", sci(cfg.tolerance)}}},
              {"pass", r.all_pass()}};
}

Report report_from_json(const Json& j) {
  double tol = 1e-9;
  if (j.contains("environment") && j.at("environment").contains("tolerance")) {
    const Json& t = j.at("environment").at("tolerance");
    tol = t.is_string() ? std::stod(t.get<std::string>()) : real_from_json(t, "report tolerance");
  }
  Report r(tol);
  const Json& checks = field(j, "checks", "report");
  if (!checks.is_array()) throw SchemaError("report: \"checks\" must be a list");
  for (const Json& c : checks) {
    const Json& res = field(c, "residual", "report check");
    const double v = res.is_string() ? std::stod(res.get<std::string>()) : real_from_json(res, "report residual");
    r.add(field(c, "name", "report check").get<std::string>(), c.value("tag", std::string()), v, c.value("note", std::string()));
  }
  r.classification = j.value("classification", std::string());
  return r;
}

std::string report_table(const Report& r) {
  std::size_t nameWidth = 5, tagWidth = 3;
  for (const Check& c : r.checks()) {
    nameWidth = std::max(nameWidth, c.name.size());
    tagWidth = std::max(tagWidth, c.tag.size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
  std::ostringstream os;
  os << "   " << pad("check", nameWidth) << "  " << pad("tag", tagWidth) << "  residual\n";
  for (const Check& c : r.checks()) {
    os << (c.pass ? "✓  " : "✗  ") << pad(c.name, nameWidth) << "  " << pad(c.tag, tagWidth) << "  " << sci(c.residual);
    if (!c.note.empty()) os << "  " << c.note;
    os << '\n';
  }
  if (!r.classification.empty()) os << "classification: " << r.classification << '\n';
  os << (r.all_pass() ? "all checks pass" : "FAILED: " + r.failures()) << '\n';
  return os.str();
}

}  // namespace wkh
