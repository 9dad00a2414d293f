#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "wkh/action.hpp"
#include "wkh/deform.hpp"
#include "wkh/serialize.hpp"
#include "wkh/tower.hpp"

using namespace wkh;

namespace {

enum Exit { kOk = 0, kVerify = 1, kUsage = 2, kSchema = 3, kInvariant = 4 };

struct IoError : Error {
  using Error::Error;
};

struct Options {
  Config cfg;
  bool json = false;
  std::string output;
};

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

WorkbenchObject load(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("parse error: ") + e.what());
  }
  try {
    return object_from_json(j);
  } catch (const Json::exception& e) {
    throw SchemaError(e.what());
  }
}

WorkbenchObject load_kind(const std::string& path, const std::string& kind) {
  WorkbenchObject o = load(path);
  if (o.kind != kind) throw SchemaError(path + ": expected kind \"" + kind + "\", found \"" + o.kind + "\"");
  return o;
}

std::string dump(const WorkbenchObject& o) { return to_json(o).dump(2) + "\n"; }

void emit_object(const Options& opt, const std::string& kind, Json payload, bool toStdout) {
  if (!toStdout && opt.output.empty()) return;
  write_text(opt.output, dump(make_object(kind, std::move(payload), opt.cfg)));
}

int emit_report(const Options& opt, const Report& r) {
  const std::string text = opt.json ? dump(make_object("report", report_to_json(r, opt.cfg), opt.cfg)) : report_table(r);
  std::cout << text;
  return r.all_pass() ? kOk : kVerify;
}

GroupTable group_from_spec(const std::vector<std::string>& spec) {
  if (spec.size() != 2) throw CLI::ValidationError("GROUPSPEC", "expected `cyclic N`, `sym N` or `table FILE`");
  if (spec[0] == "table") {
    const Json j = Json::parse(read_text(spec[1]));
    const Json& t = j.at("table");
    const int n = static_cast<int>(t.size());
    std::vector<int> table;
    for (const Json& row : t) {
      if (!row.is_array() || static_cast<int>(row.size()) != n) throw SchemaError("group table must be square");
      for (const Json& v : row) table.push_back(v.get<int>());
    }
    return GroupTable(n, table, j.value("labels", std::vector<std::string>{}));
  }
  int n = 0;
  try {
    n = std::stoi(spec[1]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("GROUPSPEC", "group order must be an integer");
  }
  if (n < 1) throw CLI::ValidationError("GROUPSPEC", "group order must be positive");
  if (spec[0] == "cyclic") return GroupTable::cyclic(n);
  if (spec[0] == "sym") return GroupTable::symmetric(n);
  throw CLI::ValidationError("GROUPSPEC", "unknown group family " + spec[0]);
}

WeakHopfData generate(const std::vector<std::string>& args, const Config& cfg) {
  if (args.size() == 2 && args[0] == "pair-groupoid") {
    const int n = std::stoi(args[1]);
    if (n < 1) throw CLI::ValidationError("gen", "N must be positive");
    return pair_groupoid(n);
  }
  if (args.size() == 3 && args[0] == "group") return group_algebra(group_from_spec({args[1], args[2]}), cfg);
  if (args.size() == 3 && args[0] == "function") return function_algebra(group_from_spec({args[1], args[2]}));
  throw CLI::ValidationError("gen", "expected `pair-groupoid N`, `group cyclic N`, `group sym N` or `function cyclic N`");
}

/// Weak Hopf fields and H of a structure payload (H defaults to 1).
std::pair<WeakHopfData, Vec> structure_from(const WorkbenchObject& o) {
  WeakHopfData w = weak_hopf_from_json(o.payload);
  Vec H = w.unit();
  if (o.payload.contains("H")) H = vector_from_json(o.payload.at("H"), w.dim(), "H");
  return {w, H};
}

Vec element_for(const std::string& path, const WeakHopfData& w) {
  const WorkbenchObject o = load_kind(path, "element");
  auto [alg, x] = element_from_json(o.payload);
  if (!(alg == w.algebra)) throw SchemaError("element blocks do not match the algebra");
  return x;
}

struct TowerPipeline {
  TowerData tower;
  Report report;
  std::optional<ReconstructedStructure> structure;
};

TowerPipeline reconstruct_pipeline(const TowerData& t, const Config& cfg) {
  TowerPipeline p{t, Report(cfg.tolerance), std::nullopt};
  const Report premises = verify_tower_premises(t, cfg);
  p.report.merge(premises, "premises");
  if (!premises.all_pass()) return p;
  try {
    p.structure = reconstruct(t, cfg);
  } catch (const Error& e) {
    p.report.require("reconstruction", "", false, e.what());
    return p;
  }
  p.report.merge(p.structure->crossChecks, "cross-check");
  p.report.merge(dual_bases(t, *p.structure, cfg).report, "dual bases");
  p.report.merge(identity_suite(t, *p.structure, cfg), "identities");
  const Report cls = classify(t, *p.structure, cfg);
  p.report.merge(cls, "classify");
  p.report.classification = cls.classification;
  return p;
}

int run_report(const Options& opt, const WorkbenchObject& o) {
  if (o.kind == "report") return emit_report(opt, report_from_json(o.payload));
  if (o.kind == "weak-hopf") return emit_report(opt, verify_axioms(weak_hopf_from_json(o.payload), opt.cfg));
  if (o.kind == "tower") return emit_report(opt, verify_tower_premises(tower_from_json(o.payload, opt.cfg), opt.cfg));
  if (o.kind == "action") return emit_report(opt, verify_action(action_from_json(o.payload), opt.cfg));
  throw SchemaError("no report for kind \"" + o.kind + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for finite-dimensional weak Kac and weak C*-Hopf algebras"};
  app.fallthrough();
  app.require_subcommand(1);
  Options opt;
  app.add_option("--tolerance", opt.cfg.tolerance, "Residual tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.cfg.seed, "Seed for sampled sweeps")->capture_default_str();
  app.add_flag("--json", opt.json, "Emit reports as JSON");
  app.add_option("-o,--output", opt.output, "Write the produced object to FILE (- for stdout)");

  std::vector<std::string> genArgs, groupSpec;
  std::string file, hFile;
  auto* gen = app.add_subcommand("gen", "Generate a weak Hopf algebra");
  gen->add_option("what", genArgs, "pair-groupoid N | group cyclic N | group sym N | function cyclic N")->required();
  auto* verify = app.add_subcommand("verify-wha", "Verify the weak Hopf axioms");
  verify->add_option("FILE", file)->required();
  auto* dual = app.add_subcommand("dual", "Dual weak Hopf algebra");
  dual->add_option("FILE", file)->required();
  auto* tower = app.add_subcommand("tower", "Build a finite tower");
  auto* fromGroup = tower->add_subcommand("from-group", "Tower of a finite group");
  fromGroup->add_option("GROUPSPEC", groupSpec, "cyclic N | sym N | table FILE")->required();
  tower->require_subcommand(1);
  auto* recon = app.add_subcommand("reconstruct", "Reconstruct B from a tower");
  recon->add_option("TOWERFILE", file)->required();
  auto* def = app.add_subcommand("deform", "Deform a structure by its H");
  def->add_option("FILE", file)->required();
  def->set_help_flag("--help", "Print this help message and exit");
  def->add_option("--h", hFile, "Element file overriding H");
  auto* undef = app.add_subcommand("undeform", "Undeform a weak Hopf algebra by h");
  undef->add_option("FILE", file)->required();
  undef->set_help_flag("--help", "Print this help message and exit");
  undef->add_option("--h", hFile, "Element file")->required();
  auto* cross = app.add_subcommand("crossed-product", "Canonical action and crossed product of a tower");
  cross->add_option("TOWERFILE", file)->required();
  auto* rep = app.add_subcommand("report", "Report for a stored object");
  rep->add_option("FILE", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const Config& cfg = opt.cfg;
  try {
    if (*gen) {
      emit_object(opt, "weak-hopf", weak_hopf_to_json(generate(genArgs, cfg)), true);
      return kOk;
    }
    if (*verify) {
      auto [w, H] = structure_from(load_kind(file, "weak-hopf"));
      return emit_report(opt, verify_axioms(w, cfg));
    }
    if (*dual) {
      auto [w, H] = structure_from(load_kind(file, "weak-hopf"));
      const Report r = verify_axioms(w, cfg);
      if (!r.all_pass()) {
        std::cerr << "input fails the weak Hopf axioms: " << r.failures() << '\n';
        return kVerify;
      }
      emit_object(opt, "weak-hopf", weak_hopf_to_json(dual_algebra(w, cfg)), true);
      return kOk;
    }
    if (*fromGroup) {
      emit_object(opt, "tower", tower_to_json(build_tower_from_group(group_from_spec(groupSpec), cfg)), true);
      return kOk;
    }
    if (*recon) {
      const TowerPipeline p = reconstruct_pipeline(tower_from_json(load_kind(file, "tower").payload, cfg), cfg);
      if (p.structure) emit_object(opt, "weak-hopf", structure_to_json(p.structure->onB, p.structure->H), false);
      return emit_report(opt, p.report);
    }
    if (*def) {
      const WorkbenchObject o = load(file);
      if (o.kind == "tower") {
        const TowerPipeline p = reconstruct_pipeline(tower_from_json(o.payload, cfg), cfg);
        if (!p.structure) return emit_report(opt, p.report);
        const DeformedStructure d = deform_tower(p.tower, *p.structure, cfg);
        emit_object(opt, "weak-hopf", weak_hopf_to_json(d.hopf), false);
        return emit_report(opt, d.report);
      }
      if (o.kind != "weak-hopf") throw SchemaError("deform expects a weak-hopf or tower object");
      auto [w, H] = structure_from(o);
      if (!hFile.empty()) H = element_for(hFile, w);
      const DeformedStructure d = deform(UndeformedStructure{w, H, false}, cfg);
      emit_object(opt, "weak-hopf", weak_hopf_to_json(d.hopf), false);
      return emit_report(opt, d.report);
    }
    if (*undef) {
      auto [w, H] = structure_from(load_kind(file, "weak-hopf"));
      const UndeformedStructure u = undeform(w, element_for(hFile, w), cfg);
      Report r = cor416_bundle(u, cfg);
      const Report cls = classify_structure(u, cfg);
      r.merge(cls, "classify");
      r.classification = cls.classification;
      emit_object(opt, "weak-hopf", structure_to_json(u.data, u.H), false);
      return emit_report(opt, r);
    }
    if (*cross) {
      const TowerPipeline p = reconstruct_pipeline(tower_from_json(load_kind(file, "tower").payload, cfg), cfg);
      if (!p.structure) return emit_report(opt, p.report);
      const TowerData& t = p.tower;
      const DeformedStructure d = deform_tower(t, *p.structure, cfg);
      const ActionData a = canonical_action(t, d, cfg);
      Report r(cfg.tolerance);
      r.merge(verify_action(a, cfg), "action");
      r.merge(canonical_action_checks(t, d, a, cfg), "canonical");
      const SubalgebraEmbedding fixed = fixed_points(a, cfg);
      const Mat mInM1 = t.subM1.images.completeOrthogonalDecomposition().solve(t.subM.images);
      r.require("fixed points = M", "Prop 6.2",
                fixed.sub.dim() == t.subM.sub.dim() && same_span(fixed.images, mInM1, std::max(cfg.tolerance, 1e-11)),
                "dim " + std::to_string(fixed.sub.dim()));
      const CrossedProduct c(a, cfg);
      r.merge(c.report(), "crossed product");
      r.merge(minimality(c, cfg), "minimality");
      const ThetaMap theta = theta_iso(t, d, c, cfg);
      r.merge(theta.report, "theta");
      emit_object(opt, "crossed-product", crossed_product_to_json(c, theta, t.ambient), false);
      return emit_report(opt, r);
    }
    if (*rep) return run_report(opt, load(file));
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const Json::exception& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return kInvariant;
  } catch (const Error& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return kVerify;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
