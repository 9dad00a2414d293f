#include <gtest/gtest.h>

#include "wkh/serialize.hpp"

using namespace wkh;

TEST(Serialize, WeakHopfRoundTripIsBitExact) {
  for (const WeakHopfData& w : {pair_groupoid(2), group_algebra(GroupTable::symmetric(3)),
                                dual_algebra(group_algebra(GroupTable::cyclic(3)))}) {
    const Json j = weak_hopf_to_json(w);
    const WeakHopfData back = weak_hopf_from_json(Json::parse(j.dump()));
    EXPECT_EQ(weak_hopf_to_json(back).dump(), j.dump());
    EXPECT_EQ(structure_distance(back, w), 0.0);
    EXPECT_EQ(back.labels, w.labels);
  }
}

TEST(Serialize, EnvelopeCarriesFormatAndSortedKeys) {
  const WorkbenchObject o = make_object("weak-hopf", weak_hopf_to_json(pair_groupoid(1)), Config{});
  const std::string text = to_json(o).dump();
  EXPECT_EQ(text.rfind("{\"format\":\"wkbench/1\",\"kind\":\"weak-hopf\",\"meta\":", 0), 0u);
  const WorkbenchObject back = object_from_json(Json::parse(text));
  EXPECT_EQ(back.kind, "weak-hopf");
  EXPECT_EQ(to_json(back).dump(), text);
}

TEST(Serialize, EnvelopeErrors) {
  EXPECT_THROW(object_from_json(Json{{"kind", "weak-hopf"}, {"payload", Json::object()}}), SchemaError);
  EXPECT_THROW(object_from_json(Json{{"format", "other/1"}, {"kind", "weak-hopf"}, {"payload", Json::object()}}),
               SchemaError);
  EXPECT_THROW(object_from_json(Json{{"format", kFormat}, {"kind", "widget"}, {"payload", Json::object()}}), SchemaError);
}

TEST(Serialize, ElementBlocks) {
  const MultiMatrixAlgebra alg({2, 1});
  Rng rng(2);
  const Vec x = rng.complex_vector(alg.dim());
  const auto [back, y] = element_from_json(Json::parse(element_to_json(alg, x).dump()));
  EXPECT_TRUE(back == alg);
  EXPECT_EQ((y - x).cwiseAbs().maxCoeff(), 0.0);
  const Json bad = Json::parse(R"({"blocks": [[[[1, 0], [0, 0]], [[0, 0]]]]})");
  EXPECT_THROW(element_from_json(bad), SchemaError);
}

TEST(Serialize, MalformedWeakHopf) {
  Json j = weak_hopf_to_json(pair_groupoid(2));
  j["antipode"].erase(0);
  EXPECT_THROW(weak_hopf_from_json(j), SchemaError);
  j = weak_hopf_to_json(pair_groupoid(2));
  j["delta"][0][1] = 17;
  EXPECT_THROW(weak_hopf_from_json(j), SchemaError);
  j = weak_hopf_to_json(pair_groupoid(2));
  j.erase("epsilon");
  EXPECT_THROW(weak_hopf_from_json(j), SchemaError);
}

TEST(Serialize, TowerRoundTripAndInvariants) {
  const TowerData t = build_tower_from_group(GroupTable::cyclic(2));
  const Json j = tower_to_json(t);
  const TowerData back = tower_from_json(Json::parse(j.dump()));
  EXPECT_EQ(tower_to_json(back).dump(), j.dump());
  EXPECT_EQ(back.d, t.d);
  EXPECT_TRUE(verify_tower_premises(back).all_pass());

  Json broken = j;
  broken["e2"][0] = Json::array({0.7, 0.0});
  try {
    tower_from_json(broken);
    FAIL() << "broken e2 accepted";
  } catch (const InvariantError& e) {
    EXPECT_STREQ(e.what(), "e2 not a projection");
  }
  broken = j;
  broken["tau"] = Json::array({0.5, 0.5});
  EXPECT_THROW(tower_from_json(broken), InvariantError);
}

TEST(Serialize, ActionRoundTrip) {
  const WeakHopfData w = function_algebra(GroupTable::cyclic(2));
  const ActionData a = trivial_action(w, MultiMatrixAlgebra({1, 2}));
  const Json j = action_to_json(a);
  EXPECT_EQ(action_to_json(action_from_json(Json::parse(j.dump()))).dump(), j.dump());
}

TEST(Report, JsonIsDeterministicAndFormatted) {
  Report r(1e-9);
  r.add("tiny", "Prop 4.14", 1.234567891e-12);
  r.add("big", "Lemma 4.1", 0.5);
  r.classification = "invalid";
  const Json j = report_to_json(r, Config{});
  EXPECT_EQ(j.dump(), report_to_json(r, Config{}).dump());
  EXPECT_EQ(j["checks"][0]["residual"], "1.23457e-12");
  EXPECT_EQ(j["checks"][1]["tag"], "Lemma 4.1");
  EXPECT_EQ(j["checks"][1]["pass"], false);
  EXPECT_EQ(j["classification"], "invalid");
  const Report back = report_from_json(j);
  EXPECT_EQ(report_to_json(back, Config{}).dump(), j.dump());
}

TEST(Report, TableMarksRows) {
  Report r(1e-9);
  r.add("good", "Prop 4.2", 0.0);
  r.add("bad", "Prop 4.14", 1.0);
  const std::string table = report_table(r);
  EXPECT_NE(table.find("✓  good"), std::string::npos);
  EXPECT_NE(table.find("✗  bad "), std::string::npos);
  EXPECT_NE(table.find("Prop 4.14"), std::string::npos);
  EXPECT_NE(table.find("1.00000e+00"), std::string::npos);
}
