#include <map>
#include <set>

#include <gtest/gtest.h>

#include "wkh/tower.hpp"

using namespace wkh;

namespace {

struct Built {
  TowerData tower;
  ReconstructedStructure structure;
};

const Built& built(int order) {
  static std::map<int, Built> cache;
  auto it = cache.find(order);
  if (it == cache.end()) {
    TowerData t = build_tower_from_group(GroupTable::cyclic(order));
    ReconstructedStructure r = reconstruct(t);
    it = cache.emplace(order, Built{std::move(t), std::move(r)}).first;
  }
  return it->second;
}

TowerData tower_by_basic_construction(int n) {
  const Config cfg;
  const MultiMatrixAlgebra m(std::vector<int>(static_cast<std::size_t>(n), 1));
  const double lambda = 1.0 / n;
  const JonesExtension j1 =
      basic_construction(SubalgebraEmbedding::scalars(m), TraceState(RVec::Constant(n, lambda)), lambda, cfg);
  const JonesExtension j2 = basic_construction(j1.larger, j1.extendedTrace, lambda, cfg);
  TowerData t;
  t.ambient = j2.algebra;
  t.subM1 = j2.larger;
  t.subM = j1.larger.then(j2.larger);
  t.subN = SubalgebraEmbedding::scalars(m).then(t.subM);
  t.e1 = j2.larger.map(j1.e);
  t.e2 = j2.e;
  t.tau = j2.extendedTrace;
  t.lambda = lambda;
  complete_tower(t, cfg);
  return t;
}

}  // namespace

TEST(GroupTower, PremisesAndIndex) {
  for (int n = 2; n <= 4; ++n) {
    const TowerData& t = built(n).tower;
    const Report r = verify_tower_premises(t);
    EXPECT_TRUE(r.all_pass()) << n << ": " << r.failures();
    EXPECT_EQ(1.0 / t.lambda, static_cast<double>(n));
    EXPECT_EQ(t.ambient.dim(), n * n * n);
  }
}

TEST(GroupTower, OrderLimits) {
  EXPECT_THROW(build_tower_from_group(GroupTable::cyclic(1)), Error);
  EXPECT_THROW(build_tower_from_group(GroupTable::cyclic(kMaxTowerGroupOrder + 1)), Error);
}

TEST(GroupTower, MatchesBasicConstruction) {
  for (int n = 2; n <= 3; ++n) {
    const TowerData generic = tower_by_basic_construction(n);
    const TowerData& closed = built(n).tower;
    std::vector<int> a = generic.ambient.blocks(), b = closed.ambient.blocks();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
    EXPECT_EQ(generic.d, closed.d);
    EXPECT_EQ(generic.B.sub.dim(), closed.B.sub.dim());
    EXPECT_TRUE(verify_tower_premises(generic).all_pass());
    const ReconstructedStructure r = reconstruct(generic);
    const Report cls = classify(generic, r);
    EXPECT_EQ(cls.classification, "weak Kac") << cls.failures();
  }
}

TEST(Pairing, NondegenerateAndCrossChecked) {
  const Built& b = built(3);
  EXPECT_LT(b.structure.form.conditionNumber, 1e8);
  EXPECT_TRUE(b.structure.crossChecks.all_pass()) << b.structure.crossChecks.failures();
  EXPECT_TRUE(b.structure.crossChecks.find("eps^t(b) = lambda^-1 E_M1(b e2)") != nullptr);
  EXPECT_TRUE(b.structure.crossChecks.find("S_B(b) = lambda^-3 E_M'(e1 e2 E_M1(b e1 e2))") != nullptr);
}

TEST(Reconstruction, StructuresAreWeakKac) {
  for (int n = 2; n <= 4; ++n) {
    const ReconstructedStructure& r = built(n).structure;
    EXPECT_TRUE(verify_axioms(r.onB).all_pass()) << n;
    EXPECT_TRUE(verify_axioms(r.onA).all_pass()) << n;
    EXPECT_LE(relative_residual(r.H, r.onB.unit()), 1e-9);
    EXPECT_LE(relative_residual(r.H, r.Hindex), 1e-9);
  }
}

TEST(Reconstruction, DualBases) {
  const Built& b = built(3);
  const DualBases d = dual_bases(b.tower, b.structure);
  EXPECT_TRUE(d.report.all_pass()) << d.report.failures();
  EXPECT_EQ(static_cast<int>(d.vUnits.size()), b.structure.onB.dim());
}

TEST(Reconstruction, IdentitySuiteTagsEachIdentityOnce) {
  const Built& b = built(3);
  const Report r = identity_suite(b.tower, b.structure);
  EXPECT_EQ(r.checks().size(), 17u);
  EXPECT_TRUE(r.all_pass()) << r.failures();
  std::set<std::string> names;
  for (const Check& c : r.checks()) {
    EXPECT_FALSE(c.tag.empty()) << c.name;
    EXPECT_TRUE(names.insert(c.name).second) << c.name;
  }
  for (const char* tag : {"Lemma 4.1", "Prop 4.2", "Prop 4.3", "Remark 4.4", "Prop 4.5(ii)", "Prop 4.5(iii)",
                          "Prop 4.5(iv)", "Prop 4.6", "Prop 4.8", "Cor 4.10", "Prop 4.11", "Cor 4.12", "Prop 4.13",
                          "Prop 4.14", "Prop 4.15", "Lemma 5.2"}) {
    bool found = false;
    for (const Check& c : r.checks()) found = found || c.tag == tag;
    EXPECT_TRUE(found) << tag;
  }
}

TEST(Classification, WeakKacWithHaarData) {
  for (int n = 2; n <= 4; ++n) {
    const Report r = classify(built(n).tower, built(n).structure);
    EXPECT_EQ(r.classification, "weak Kac");
    EXPECT_TRUE(r.all_pass()) << r.failures();
    EXPECT_TRUE(r.find("Haar projection = e2")->pass);
    EXPECT_TRUE(r.find("Haar trace = d tau")->pass);
  }
  const Report r2 = classify(built(2).tower, built(2).structure);
  EXPECT_NE(r2.find("lambda^-1 integral")->note.find("prime"), std::string::npos);
  const Report r4 = classify(built(4).tower, built(4).structure);
  EXPECT_NE(r4.find("lambda^-1 integral")->note.find("not square-free"), std::string::npos);
}

TEST(Classification, CyclicTwoIsPairGroupoidDual) {
  double a = 0.0, b = 0.0;
  EXPECT_LE(pair_groupoid_residuals(built(2).tower, built(2).structure, Config{}, &a, &b), 1e-9);
  EXPECT_LE(a, 1e-9);
  EXPECT_LE(b, 1e-9);
}

TEST(NegativeControl, NonMarkovTrace) {
  TowerData t = built(2).tower;
  RVec w = t.tau.weights();
  ASSERT_EQ(w.size(), 2);
  w << 0.15, 0.35;
  t.tau = TraceState(w);
  const Report r = verify_tower_premises(t);
  EXPECT_FALSE(r.all_pass());
  EXPECT_FALSE(r.find("Markov: tau(x e2) = lambda tau(x), x in M1")->pass);
}

TEST(NegativeControl, NonProjectionE2) {
  TowerData t = built(2).tower;
  t.e2 *= 0.7;
  const Report r = verify_tower_premises(t);
  EXPECT_FALSE(r.find("e2 projection")->pass);
}
