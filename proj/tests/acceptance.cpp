#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "wkh/action.hpp"
#include "wkh/serialize.hpp"

using namespace wkh;

namespace {

constexpr double kTol = 1e-9;
constexpr double kExactTol = 1e-12;
constexpr double kNonMultiplicative = 1e-3;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
  void expect_le(double v, double bound, const std::string& what) {
    expect(v <= bound, what + " = " + sci(v));
  }
};

struct TowerCase {
  std::string name;
  int order = 0;
  TowerData tower;
  ReconstructedStructure structure;
  DeformedStructure deformed;
};

std::vector<std::pair<std::string, WeakHopfData>> generators() {
  std::vector<std::pair<std::string, WeakHopfData>> out;
  for (int n = 1; n <= 3; ++n) out.emplace_back("PG(" + std::to_string(n) + ")", pair_groupoid(n));
  for (int n = 2; n <= 5; ++n) out.emplace_back("Z/" + std::to_string(n), group_algebra(GroupTable::cyclic(n)));
  out.emplace_back("S3", group_algebra(GroupTable::symmetric(3)));
  out.emplace_back("F(Z/3)", function_algebra(GroupTable::cyclic(3)));
  out.emplace_back("F(S3)", function_algebra(GroupTable::symmetric(3)));
  return out;
}

std::vector<TowerCase> build_towers(const Config& cfg) {
  std::vector<TowerCase> out;
  const std::vector<std::pair<std::string, GroupTable>> groups = {{"Z/2", GroupTable::cyclic(2)},
                                                                  {"Z/3", GroupTable::cyclic(3)},
                                                                  {"Z/4", GroupTable::cyclic(4)},
                                                                  {"S3", GroupTable::symmetric(3)}};
  for (const auto& [name, g] : groups) {
    TowerCase c;
    c.name = name;
    c.order = g.order();
    c.tower = build_tower_from_group(g, cfg);
    c.structure = reconstruct(c.tower, cfg);
    c.deformed = deform_tower(c.tower, c.structure, cfg);
    out.push_back(std::move(c));
  }
  return out;
}

Vec diagonal_h(double a, double b) {
  Vec h = Vec::Zero(4);
  h(0) = a;
  h(3) = b;
  return h;
}

void generators_pass(Outcome& o, const Config& cfg) {
  for (const auto& [name, w] : generators()) {
    const Report r = verify_axioms(w, cfg);
    o.expect(r.all_pass(), name + ": " + r.failures());
  }
  for (int n = 1; n <= 3; ++n) {
    const WeakHopfData pg = pair_groupoid(n);
    const Report r = verify_axioms(pg, cfg);
    o.expect(r.classification == "weak Kac", "PG(" + std::to_string(n) + ") is " + r.classification);
    o.expect(antipode_square_residual(pg) == 0.0, "PG(" + std::to_string(n) + ") S^2 != id exactly");
  }
}

void haar_oracles(Outcome& o, const Config& cfg) {
  for (const GroupTable& g : {GroupTable::cyclic(2), GroupTable::cyclic(3), GroupTable::cyclic(4),
                              GroupTable::cyclic(5), GroupTable::symmetric(3)}) {
    const int n = g.order();
    const WeakHopfData w = group_algebra(g, cfg);
    const HaarData h = haar(w, cfg);
    o.expect(h.report.all_pass(), "group " + std::to_string(n) + ": " + h.report.failures());
    o.expect_le(relative_residual(h.projection, w.presentation * Vec::Constant(n, 1.0 / n)), kTol,
                "group projection");
    const RowVec onGroup = h.functional * w.presentation;
    for (int k = 0; k < n; ++k)
      o.expect_le(std::abs(onGroup(k) - (k == g.identity() ? 1.0 : 0.0)), kTol, "group functional");
  }
  for (int n = 1; n <= 3; ++n) {
    const WeakHopfData w = pair_groupoid(n);
    const HaarData h = haar(w, cfg);
    o.expect(h.report.all_pass(), "PG: " + h.report.failures());
    o.expect_le(relative_residual(h.projection, Vec(Vec::Constant(n * n, 1.0 / n))), kTol, "PG projection");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        o.expect_le(std::abs(h.functional(w.algebra.index(0, i, j)) - (i == j ? 1.0 : 0.0)), kTol, "PG functional");
  }
  for (const GroupTable& g : {GroupTable::cyclic(3), GroupTable::symmetric(3)}) {
    const int n = g.order();
    const WeakHopfData w = function_algebra(g);
    const HaarData h = haar(w, cfg);
    o.expect(h.report.all_pass(), "F(G): " + h.report.failures());
    for (int k = 0; k < n; ++k) {
      o.expect_le(std::abs(h.projection(k) - (k == g.identity() ? 1.0 : 0.0)), kTol, "F(G) projection");
      o.expect_le(std::abs(h.functional(k) - 1.0 / n), kTol, "F(G) functional");
    }
  }
}

void duality(Outcome& o, const Config& cfg) {
  for (const auto& [name, w] : generators()) o.expect_le(double_dual_residual(w, cfg), kExactTol, name + " double dual");
  for (int n = 2; n <= 5; ++n) {
    const WeakHopfData d = dual_algebra(group_algebra(GroupTable::cyclic(n), cfg), cfg);
    o.expect(d.dim() == n, "dim dual Z/" + std::to_string(n));
    o.expect(d.algebra.blocks() == std::vector<int>(static_cast<std::size_t>(n), 1),
             "dual Z/" + std::to_string(n) + " not commutative");
    o.expect(verify_axioms(d, cfg).all_pass(), "dual Z/" + std::to_string(n) + " axioms");
  }
}

void connectedness_check(Outcome& o, const Config& cfg) {
  for (int n = 2; n <= 5; ++n) {
    const Connectedness c = connectedness(group_algebra(GroupTable::cyclic(n), cfg), cfg);
    o.expect(c.biconnected && c.cartanIntersectionDim == 1, "Z/" + std::to_string(n) + " not biconnected");
  }
  for (int n = 2; n <= 3; ++n) {
    const Connectedness c = connectedness(pair_groupoid(n), cfg);
    o.expect(c.connected && !c.dualConnected && !c.biconnected, "PG(" + std::to_string(n) + ") connectedness");
  }
}

void tower_premises(Outcome& o, const std::vector<TowerCase>& towers, const Config& cfg) {
  for (const TowerCase& c : towers) {
    const Report r = verify_tower_premises(c.tower, cfg);
    o.expect(r.all_pass(), c.name + ": " + r.failures());
    o.expect(1.0 / c.tower.lambda == static_cast<double>(c.order), c.name + " lambda^-1 != |G|");
  }
}

void identities(Outcome& o, const std::vector<TowerCase>& towers, const Config& cfg) {
  for (const TowerCase& c : towers) {
    const Report ids = identity_suite(c.tower, c.structure, cfg);
    o.expect(ids.checks().size() == 17u, c.name + " identity rows = " + std::to_string(ids.checks().size()));
    o.expect(ids.all_pass(), c.name + ": " + ids.failures());
    for (const Check& k : ids.checks()) o.expect(!k.tag.empty(), c.name + " untagged " + k.name);
    const Report& x = c.structure.crossChecks;
    o.expect(x.all_pass(), c.name + " cross-checks: " + x.failures());
    const Check* epsT = x.find("eps^t(b) = lambda^-1 E_M1(b e2)");
    const Check* anti = x.find("S_B(b) = lambda^-3 E_M'(e1 e2 E_M1(b e1 e2))");
    o.expect(epsT && epsT->tag == "Prop 4.2" && epsT->pass, c.name + " eps^t cross-check");
    o.expect(anti && anti->tag == "Prop 4.5(i)" && anti->pass, c.name + " antipode cross-check");
    o.expect_le(relative_residual(c.structure.H, c.structure.onB.unit()), kTol, c.name + " |H - 1|");
    const Report cls = classify(c.tower, c.structure, cfg);
    o.expect(cls.classification == "weak Kac", c.name + " classified " + cls.classification);
    for (const char* row : {"Haar projection = e2", "Haar trace = d tau", "lambda^-1 integral"}) {
      const Check* k = cls.find(row);
      o.expect(k && k->pass, c.name + " " + row);
    }
    if (c.order == 2) {
      double a = 0.0, b = 0.0;
      pair_groupoid_residuals(c.tower, c.structure, cfg, &a, &b);
      o.expect_le(a, kTol, "Z/2 A ~ PG(2)");
      o.expect_le(b, kTol, "Z/2 B ~ PG(2)*");
    }
  }
}

void index_element(Outcome& o, const std::vector<TowerCase>& towers) {
  const MultiMatrixAlgebra bt({1, 1});
  const TraceState tau(RVec((RVec(2) << 1.0 / 3.0, 2.0 / 3.0).finished()));
  const Vec h = watatani_index(bt, tau) / 2.0;
  o.expect_le(std::abs(h(0) - 1.5), kExactTol, "H_1 = " + sci(h(0).real()));
  o.expect_le(std::abs(h(1) - 0.75), kExactTol, "H_2 = " + sci(h(1).real()));
  o.expect_le(std::abs(tau.value(bt, h) - 1.0), kExactTol, "tau(H)");
  for (const TowerCase& c : towers)
    o.expect_le(relative_residual(c.structure.H, c.structure.Hindex), kTol, c.name + " watatani H");
}

void deformation(Outcome& o, const std::vector<TowerCase>& towers, const Config& cfg) {
  const WeakHopfData pg = pair_groupoid(2);
  for (double a : {1.5, 2.0, 0.5}) {
    const std::string tag = "h = diag(" + sci(a) + ", " + sci(a / 2) + ")";
    const UndeformedStructure u = undeform(pg, diagonal_h(a, a / 2), cfg);
    const Report bundle = cor416_bundle(u, cfg);
    o.expect(bundle.all_pass(), tag + ": " + bundle.failures());
    o.expect(multiplicativity_residual(u.data) >= kNonMultiplicative, tag + " Delta multiplicative");
    const DeformedStructure d = deform(u, cfg);
    o.expect_le(structure_distance(d.hopf, pg), kTol, tag + " deform recovers PG(2)");
    o.expect(verify_axioms(d.hopf, cfg).all_pass(), tag + " deformed axioms");
    const Check* s2 = d.report.find("S~^2 = Ad G, G = S~(H)^-1 H");
    o.expect(s2 && s2->residual <= kTol, tag + " S~^2 = Ad G");
  }
  for (const TowerCase& c : towers) {
    const Check* p = c.deformed.report.find("Haar projection = e2 H");
    o.expect(p && p->pass && p->residual <= kTol, c.name + " Haar projection e2 H");
    o.expect(c.deformed.report.all_pass(), c.name + ": " + c.deformed.report.failures());
  }
}

void crossed_products(Outcome& o, const std::vector<TowerCase>& towers, const Config& cfg) {
  for (const TowerCase& c : towers) {
    const ActionData act = canonical_action(c.tower, c.deformed, cfg);
    const Report va = verify_action(act, cfg);
    o.expect(va.all_pass(), c.name + " action: " + va.failures());
    const Report ca = canonical_action_checks(c.tower, c.deformed, act, cfg);
    o.expect(ca.all_pass(), c.name + " canonical: " + ca.failures());
    const SubalgebraEmbedding fixed = fixed_points(act, cfg);
    const Mat mInM1 = c.tower.subM1.images.completeOrthogonalDecomposition().solve(c.tower.subM.images);
    o.expect(fixed.sub.dim() == c.tower.subM.sub.dim() && same_span(fixed.images, mInM1, 1e-10),
             c.name + " fixed points != M");
    const CrossedProduct cp(act, cfg);
    o.expect(cp.dim() == c.tower.ambient.dim(), c.name + " dim M x B = " + std::to_string(cp.dim()));
    o.expect(cp.report().all_pass(), c.name + " crossed product: " + cp.report().failures());
    const ThetaMap theta = theta_iso(c.tower, c.deformed, cp, cfg);
    o.expect(theta.report.all_pass(), c.name + " theta: " + theta.report.failures());
    const Report m = minimality(cp, cfg);
    o.expect(m.all_pass(), c.name + " minimality: " + m.failures());
  }
}

int run_cli(const std::string& exe, const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = "\"" + exe + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool file_contains(const std::filesystem::path& p, const std::string& needle) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str().find(needle) != std::string::npos;
}

void write_object(const std::filesystem::path& p, const std::string& kind, const Json& payload, const Config& cfg) {
  std::ofstream(p) << to_json(make_object(kind, payload, cfg)).dump(2) << "\n";
}

void negative_controls(Outcome& o, const std::vector<TowerCase>& towers, const Config& cfg, const std::string& exe) {
  WeakHopfData broken = pair_groupoid(2);
  broken.epsilon(0) = 2.0;
  const Report counit = verify_axioms(broken, cfg);
  const Check* k = counit.find("counit");
  o.expect(!counit.all_pass() && k && !k->pass && counit.classification == "invalid", "broken counit accepted");

  TowerData markov = towers.front().tower;
  markov.tau = TraceState(RVec((RVec(2) << 0.15, 0.35).finished()));
  const Report premises = verify_tower_premises(markov, cfg);
  k = premises.find("Markov: tau(x e2) = lambda tau(x), x in M1");
  o.expect(!premises.all_pass() && k && !k->pass, "non-Markov trace accepted");

  Json badE2 = tower_to_json(towers.front().tower);
  badE2["e2"][0] = Json::array({0.7, 0.0});
  bool named = false;
  try {
    tower_from_json(badE2, cfg);
  } catch (const InvariantError& e) {
    named = std::string(e.what()) == "e2 not a projection";
  }
  o.expect(named, "non-projection e2 accepted");

  if (exe.empty()) return;
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "wkh_acceptance";
  std::filesystem::create_directories(dir);
  write_object(dir / "counit.json", "weak-hopf", weak_hopf_to_json(broken), cfg);
  write_object(dir / "markov.json", "tower", tower_to_json(markov), cfg);
  write_object(dir / "e2.json", "tower", badE2, cfg);
  const auto out = dir / "out.txt";
  int code = run_cli(exe, "verify-wha \"" + (dir / "counit.json").string() + "\"", out);
  o.expect(code != 0 && file_contains(out, "counit"), "CLI broken counit exit " + std::to_string(code));
  code = run_cli(exe, "reconstruct \"" + (dir / "markov.json").string() + "\"", out);
  o.expect(code != 0 && file_contains(out, "Markov"), "CLI non-Markov exit " + std::to_string(code));
  code = run_cli(exe, "reconstruct \"" + (dir / "e2.json").string() + "\"", out);
  o.expect(code != 0 && file_contains(out, "e2 not a projection"), "CLI bad e2 exit " + std::to_string(code));
  std::filesystem::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  const Config cfg;
  int failed = 0;
  std::vector<TowerCase> towers;

  const auto criterion = [&](int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      body(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s  %2d  %s (%.1fs)%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.str().c_str());
    std::fflush(stdout);
  };

  criterion(1, "generators satisfy the axioms; PG is weak Kac with S^2 = id", [&](Outcome& o) { generators_pass(o, cfg); });
  criterion(2, "Haar projection and functional unique and match oracles", [&](Outcome& o) { haar_oracles(o, cfg); });
  criterion(3, "double dual; dual of C[Z/n] commutative of dim n", [&](Outcome& o) { duality(o, cfg); });
  criterion(4, "connectedness: C[Z/n] biconnected, PG connected only", [&](Outcome& o) { connectedness_check(o, cfg); });
  criterion(5, "group tower premises; lambda^-1 = |G|", [&](Outcome& o) {
    towers = build_towers(cfg);
    tower_premises(o, towers, cfg);
  });
  criterion(6, "identity suite, cross-checks, H = 1, weak Kac, Z/2 vs PG(2)", [&](Outcome& o) { identities(o, towers, cfg); });
  criterion(7, "index element H from Watatani index", [&](Outcome& o) { index_element(o, towers); });
  criterion(8, "undeform PG(2) and deform back", [&](Outcome& o) { deformation(o, towers, cfg); });
  criterion(9, "canonical action, crossed product, theta, minimality", [&](Outcome& o) { crossed_products(o, towers, cfg); });
  criterion(10, "negative controls rejected with named failures", [&](Outcome& o) { negative_controls(o, towers, cfg, exe); });

  std::printf("%s: %d of 10 criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
