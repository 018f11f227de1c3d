#include <gtest/gtest.h>

#include <filesystem>

#include "test_support.hpp"

using namespace ltlrec;
using ltlrec::testing::load_test_scenario;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ltlrec_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> problems_of(const std::string& file) {
  try {
    load_test_scenario(file);
  } catch (const ValidationError& e) {
    return e.problems();
  }
  return {};
}

}  // namespace

TEST(Scenario, RobotScenarioShape) {
  const Scenario sc = load_scenario(ltlrec::testing::scenario_path("robots4.json"));
  EXPECT_EQ(sc.plant.nu(), 16);
  EXPECT_EQ(sc.plant.m(), 8);
  EXPECT_EQ(sc.plant.p(), 8);
  ASSERT_EQ(sc.regions.size(), 3u);
  EXPECT_NEAR(sc.regions[0].jump_radius, 0.9 * 0.1 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(sc.regions[1].jump_radius, 0.29);
  EXPECT_DOUBLE_EQ(sc.regions[2].jump_radius, 0.19);
  EXPECT_EQ(sc.initial.chi, (AutomatonState{0, 2}));
  EXPECT_EQ(grid_states(sc).size(), 81u);
  EXPECT_EQ(grid_policies(sc).size(), 5u);
  EXPECT_TRUE(validate_scenario(sc).all_passed());
}

TEST(Scenario, UnknownRegionObservationRejected) {
  const auto problems = problems_of("bad_obs.json");
  ASSERT_FALSE(problems.empty());
  bool mentions = false;
  for (const auto& p : problems) mentions = mentions || p.find('9') != std::string::npos;
  EXPECT_TRUE(mentions);
}

TEST(Scenario, ProblemsAreAggregated) { EXPECT_GE(problems_of("many_errors.json").size(), 4u); }

TEST(Scenario, UnstableGainFailsValidation) {
  const Scenario sc = load_test_scenario("unstable_gain.json");
  const auto report = validate_scenario(sc);
  EXPECT_FALSE(report.all_passed());
  EXPECT_THROW(build_system(sc), Error);
}

TEST(Scenario, SyntaxErrorReportsLine) {
  const auto dir = scratch_dir("syntax");
  write_text(dir / "broken.json", "{\n  \"name\": \"x\",\n  \"plant\": ,\n}\n");
  try {
    load_scenario(dir / "broken.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Scenario, MissingFileIsIoError) {
  try {
    load_scenario("/nonexistent/nowhere.json");
    FAIL() << "expected Io";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Scenario, TemplateLoads) {
  const auto dir = scratch_dir("template");
  write_text(dir / "task.ba", "states 2\ninitial 0\naccepting 1\nobs 2\ntrans 0 1 1\ntrans 1 2 0\n");
  write_text(dir / "example.json", scenario_template().dump(2));
  const Scenario sc = load_scenario(dir / "example.json");
  EXPECT_TRUE(validate_scenario(sc).all_passed());
  EXPECT_NO_THROW(simulate(build_system(sc), initial_state(sc), BranchPolicy{}, {50.0, 4}));
}

TEST(Numbers, ShortestRoundTrip) {
  for (double v : {0.1, -3.5, 1e-300, 123456789.123456789, std::nextafter(1.0, 2.0)})
    EXPECT_EQ(parse_double(format_double(v)), v);
}

TEST(Trace, CsvRoundTripIsExact) {
  const Scenario sc = load_test_scenario("toy.json");
  const HybridSystem sys = build_system(sc);
  const HybridArc arc = simulate(sys, initial_state(sc), BranchPolicy{}, {100.0, 4});
  const std::string csv = trace_csv(arc, 2);
  const HybridArc back = read_trace_csv(csv);
  ASSERT_EQ(back.segments.size(), arc.segments.size());
  ASSERT_EQ(back.jumps.size(), arc.jumps.size());
  for (std::size_t k = 0; k < arc.segments.size(); ++k) {
    ASSERT_EQ(back.segments[k].samples.size(), arc.segments[k].samples.size());
    for (std::size_t i = 0; i < arc.segments[k].samples.size(); ++i) {
      EXPECT_EQ(back.segments[k].samples[i].t, arc.segments[k].samples[i].t);
      EXPECT_EQ(back.segments[k].samples[i].x.chi, arc.segments[k].samples[i].x.chi);
      EXPECT_EQ(back.segments[k].samples[i].x.zeta, arc.segments[k].samples[i].x.zeta);
    }
  }
  for (std::size_t k = 0; k < arc.jumps.size(); ++k) {
    EXPECT_EQ(back.jumps[k].t, arc.jumps[k].t);
    EXPECT_EQ(back.jumps[k].chosen, arc.jumps[k].chosen);
  }
  EXPECT_EQ(trace_csv(back, 2), csv);
}

TEST(Trace, SeededRerunsAreByteIdentical) {
  const Scenario sc = load_scenario(ltlrec::testing::scenario_path("robots4.json"));
  auto once = [&] {
    const HybridSystem sys = build_system(sc);
    const auto k = certificate_constants(sys);
    const auto arc = simulate(sys, initial_state(sc), BranchPolicy::parse("random:3"), {200.0, 10});
    return trace_csv(arc, 16, [&](const HybridState& x) { return v_h(sys, k, x); });
  };
  EXPECT_EQ(once(), once());
}

TEST(Trace, MalformedRowsRejected) {
  EXPECT_THROW(read_trace_csv(""), Error);
  try {
    read_trace_csv("t,j,s,o,xi1,xihat1,V_H\n0,0,0,1,0,0,0\n0.1,0,0,1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Table, TaskAutomatonLines) {
  const auto lines = constrained_table_lines(ConstrainedAutomaton(ltlrec::testing::fig2()));
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "(s0,o2),(s2,o2),(s6,o2) -> {s4} -> {(s4,o3)}");
  EXPECT_EQ(lines[3], "(s5,o1) -> {s3,s6} -> {(s3,o3),(s6,o2)}");
}

TEST(Plot, SvgDrawsEveryRegionShape) {
  const Scenario sc = load_scenario(ltlrec::testing::scenario_path("robots4.json"));
  const HybridSystem sys = build_system(sc);
  const auto arc = simulate(sys, initial_state(sc), BranchPolicy::parse("scripted:6"), {200.0, 6});
  const std::string svg = svg_plot(sys, {arc});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("<polygon"), std::string::npos);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
  EXPECT_NE(svg.find("<rect x="), std::string::npos);
  EXPECT_NE(svg.find("<path"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Json, ReportSerialises) {
  const Scenario sc = load_test_scenario("toy.json");
  const HybridSystem sys = build_system(sc);
  const Json loop = to_json(sys.loop());
  EXPECT_TRUE(loop.contains("P"));
  const Json arc = to_json(simulate(sys, initial_state(sc), BranchPolicy{}, {100.0, 2}));
  EXPECT_FALSE(arc.dump().empty());
}
