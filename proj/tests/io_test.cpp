#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

using namespace mpnet;
using mpnet::testing::eps;

namespace {

const char* kTandem = R"({
  "nodes": 2, "arcs": [[1, 2]], "r": ["inf", 1], "s": ["inf", 3],
  "blocking": "communication",
  "service": {"seeded": {"seed": 7, "max": 5, "min": 2}},
  "steps": 12
})";

TEST(Parse, Tandem) {
  const auto file = parse_network(std::string(kTandem));
  EXPECT_EQ(file.spec.node_count, 2u);
  EXPECT_EQ(file.spec.arcs, (std::set<Arc>{{0, 1}}));
  EXPECT_EQ(file.spec.initial, (std::vector<Count>{kInfinite, 1}));
  EXPECT_EQ(file.spec.capacity, (std::vector<Count>{kInfinite, 3}));
  EXPECT_EQ(file.spec.blocking, Blocking::Communication);
  EXPECT_EQ(file.steps, 12u);
  EXPECT_FALSE(file.service.is_table());
  EXPECT_EQ(file.service.raw(1, 4), ServiceTimeSource::seeded(7, 5, 2).raw(1, 4));
}

TEST(Parse, TableAndNoSteps) {
  const auto file = parse_network(std::string(
      R"({"nodes": 1, "arcs": [], "r": ["inf"], "s": ["inf"], "blocking": "none", "service": {"table": [[3, 4]]}})"));
  EXPECT_TRUE(file.service.is_table());
  EXPECT_EQ(file.service(0, 2), TimeValue{4});
  EXPECT_FALSE(file.steps.has_value());
}

TEST(Parse, Errors) {
  const std::string base_service = R"("service": {"seeded": {"seed": 1, "max": 9}})";
  auto doc = [&](const std::string& body) { return "{" + body + "}"; };
  const std::vector<std::string> bad = {
      "{not json",
      "[1, 2]",
      doc(R"("arcs": [], "r": [], "s": [], "blocking": "none", )" + base_service),
      doc(R"("nodes": 2, "arcs": [[0, 1]], "r": ["inf", 0], "s": ["inf", "inf"], "blocking": "none", )" +
          base_service),
      doc(R"("nodes": 2, "arcs": [[1, 2]], "r": ["inf", -1], "s": ["inf", "inf"], "blocking": "none", )" +
          base_service),
      doc(R"("nodes": 2, "arcs": [[1, 2]], "r": ["inf", 0], "s": ["inf", "big"], "blocking": "none", )" +
          base_service),
      doc(R"("nodes": 2, "arcs": [[1, 2]], "r": ["inf", 0], "s": ["inf", "inf"], "blocking": "kanban", )" +
          base_service),
      doc(R"("nodes": 2, "arcs": [[1, 2]], "r": ["inf", 0], "s": ["inf", "inf"], "blocking": "none"})"),
      doc(R"("nodes": 1, "arcs": [], "r": ["inf"], "s": ["inf"], "blocking": "none", "service": {"table": [[0]]})"),
      doc(R"("nodes": 1, "arcs": [], "r": ["inf"], "s": ["inf"], "blocking": "none", "service": {}})"),
      doc(R"("nodes": 1, "arcs": [], "r": ["inf"], "s": ["inf"], "blocking": "none", "steps": -3, )" + base_service),
  };
  for (const auto& text : bad) EXPECT_THROW(parse_network(text), InputError) << text;
  EXPECT_THROW(load_network("/nonexistent/spec.json"), InputError);
}

TEST(Parse, ParsedSpecMayStillBeInvalid) {
  const auto file = parse_network(std::string(
      R"({"nodes": 2, "arcs": [[1, 2]], "r": ["inf", 0], "s": ["inf", 2], "blocking": "none",
          "service": {"seeded": {"seed": 1, "max": 9}}})"));
  EXPECT_THROW(validate(file.spec), ValidationError);
}

TEST(Export, JsonScalars) {
  EXPECT_EQ(to_json(eps), "eps");
  EXPECT_EQ(to_json(TimeValue{-3}), -3);
  EXPECT_EQ(time_value_from_json(to_json(eps)), eps);
  EXPECT_EQ(time_value_from_json(to_json(TimeValue{8})), TimeValue{8});
  EXPECT_THROW(time_value_from_json(nlohmann::json(1.5)), InputError);
  EXPECT_EQ(to_json(TimeMatrix{{1, eps}, {eps, 2}}).dump(), R"([[1,"eps"],["eps",2]])");
}

Trajectory small_trajectory(bool trace) {
  const auto spec = mpnet::testing::make_spec(2, {{1, 2}}, {kInfinite, 0}, {kInfinite, kInfinite}, Blocking::None);
  return run(spec, mpnet::testing::constant_table({1, 2}, 2), 2, Method::Explicit, trace);
}

TEST(Export, Csv) {
  std::ostringstream os;
  write_csv(os, small_trajectory(false));
  EXPECT_EQ(os.str(), "k,d_1,d_2\n0,0,0\n1,1,3\n2,2,5\n");
}

TEST(Export, CsvWithTrace) {
  std::ostringstream os;
  write_csv(os, small_trajectory(true));
  EXPECT_EQ(os.str(),
            "k,d_1,d_2,a_1,a_2,b_1,b_2,c_1,c_2\n"
            "0,0,0,eps,eps,eps,eps,eps,eps\n"
            "1,1,3,eps,1,0,1,1,3\n"
            "2,2,5,eps,2,1,3,2,5\n");
}

TEST(Export, Json) {
  const auto j = trajectory_json(small_trajectory(false));
  EXPECT_EQ(j.dump(), R"({"d":[[0,0],[1,3],[2,5]],"n":2,"steps":2})");
  EXPECT_TRUE(trajectory_json(small_trajectory(true)).contains("b"));
}

TEST(Export, Matrices) {
  const auto spec = mpnet::testing::make_spec(2, {{1, 2}}, {kInfinite, 0}, {kInfinite, kInfinite}, Blocking::None);
  const auto j = matrices_json(spec, mpnet::testing::constant_table({1, 2}, 2), 2);
  EXPECT_EQ(j["M"], 0);
  EXPECT_EQ(j["p"], 1);
  EXPECT_EQ(j["solvable"], true);
  ASSERT_EQ(j["steps"].size(), 2u);
  EXPECT_EQ(j["steps"][0]["T"][0].dump(), R"([[1,"eps"],[3,2]])");
  EXPECT_EQ(j["steps"][0]["T_hat"], j["steps"][0]["T"][0]);
  EXPECT_EQ(j["G"][0].dump(), R"([["eps",0],["eps","eps"]])");

  const auto cyclic = matrices_json(mpnet::testing::six_node_spec(0, 0, 0), ServiceTimeSource::seeded(1, 9), 2);
  EXPECT_EQ(cyclic["solvable"], false);
  EXPECT_FALSE(cyclic.contains("steps"));
}

}  // namespace
