#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "unrest/errors.hpp"
#include "unrest/scenario_io.hpp"

using namespace unrest;
using unrest::testing::uniform;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string error_of(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

Track random_track(std::mt19937_64& rng, double lo, double hi) {
  const int n = std::uniform_int_distribution<int>(1, 4)(rng);
  std::vector<Breakpoint> points;
  double t = uniform(rng, 0, 0.5);
  for (int k = 0; k < n; ++k) {
    points.push_back({t, uniform(rng, lo, hi)});
    t += uniform(rng, 1e-3, 0.5);
  }
  return Track(points);
}

ScenarioSpec random_spec(std::mt19937_64& rng, int id) {
  ScenarioSpec s{
      "random-" + std::to_string(id),
      id % 2 ? "drawn \"at\" random\n" : "",
      Fraction(uniform(rng, 0, 1)),
      uniform(rng, 0.1, 3),
      Schedule(random_track(rng, 0.01, 0.99), random_track(rng, 0.01, 0.99),
               random_track(rng, 0.1, 10), random_track(rng, 0.1, 100)),
      {},
      SolverConfig{uniform(rng, 1e-5, 1e-3), uniform(rng, 1e-12, 1e-8), uniform(rng, 0, 0.1)},
  };
  double t = 0;
  const int shocks = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int k = 0; k < shocks; ++k) {
    t += uniform(rng, 0.01, 1);
    s.shocks.push_back({t, uniform(rng, 1e-4, 1)});
  }
  return s;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("unrest-io-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Scenario, BuiltinsRoundTrip) {
  for (const auto& spec : builtin_scenarios()) {
    const std::string text = serialize_scenario(spec);
    EXPECT_EQ(parse_scenario(text), spec) << spec.name;
    EXPECT_EQ(serialize_scenario(parse_scenario(text)), text) << spec.name;
  }
}

TEST(Scenario, RandomSpecsRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const ScenarioSpec spec = random_spec(rng, i);
    ASSERT_EQ(parse_scenario(serialize_scenario(spec)), spec) << serialize_scenario(spec);
  }
}

TEST(Scenario, ConstantTrackAwayFromZeroRoundTrips) {
  ScenarioSpec spec{"late", "", Fraction(0.0), 1.0,
                    Schedule(Track({{0.5, 0.9}}), Track::constant(0.2), Track::constant(1),
                             Track::constant(1)),
                    {}, {}};
  EXPECT_EQ(parse_scenario(serialize_scenario(spec)), spec);
}

TEST(Scenario, MinimalDocumentUsesDefaults) {
  const ScenarioSpec s = parse_scenario(
      R"({"name": "x", "t_end": 1, "params": {"alpha": 0.5, "beta": 0.3, "c1": 1, "c2": 2}})");
  EXPECT_EQ(s.r0.value(), 0.0);
  EXPECT_TRUE(s.shocks.empty());
  EXPECT_EQ(s.solver, SolverConfig{});
  EXPECT_TRUE(s.schedule.is_constant());
}

TEST(Scenario, BetaOutOfRangeNamesConstraint) {
  const std::string msg = error_of(
      R"({"name": "x", "t_end": 1, "params": {"alpha": 0.5, "beta": 1.5, "c1": 1, "c2": 2}})");
  EXPECT_NE(msg.find("beta must lie in (0,1)"), std::string::npos) << msg;
  EXPECT_NE(msg.find("params"), std::string::npos) << msg;
  EXPECT_THROW(parse_scenario(R"({"name": "x", "t_end": 1,
      "params": {"alpha": 1.2, "beta": 0.5, "c1": 1, "c2": 2}})"),
               ValidationError);
}

TEST(Scenario, UnknownFieldsRejected) {
  EXPECT_EQ(error_of(R"({"name": "x", "t_end": 1, "colour": 3,
      "params": {"alpha": 0.5, "beta": 0.3, "c1": 1, "c2": 2}})"),
            "unknown field 'colour'");
  EXPECT_EQ(error_of(R"({"name": "x", "t_end": 1,
      "params": {"alpha": 0.5, "beta": 0.3, "c1": 1, "c2": 2, "c3": 1}})"),
            "unknown field 'params.c3'");
}

TEST(Scenario, StructuralErrors) {
  EXPECT_THROW(parse_scenario(R"({"name": "x", "t_end": 1})"), ValidationError);
  EXPECT_THROW(parse_scenario(R"({"name": "x", "t_end": 1,
      "params": {"alpha": 0.5, "beta": 0.3, "c1": 1, "c2": 2},
      "schedule": {"alpha": 0.5, "beta": 0.3, "c1": 1, "c2": 2}})"),
               ValidationError);
  EXPECT_THROW(parse_scenario(R"({"name": "x", "t_end": 0,
      "params": {"alpha": 0.5, "beta": 0.3, "c1": 1, "c2": 2}})"),
               ValidationError);
  const std::string msg = error_of(R"({"name": "x", "t_end": 1,
      "params": {"alpha": 0.5, "beta": 0.3, "c1": 1, "c2": 2},
      "shocks": [{"time": 0.1, "delta_r": -0.2}]})");
  EXPECT_EQ(msg.rfind("shocks[0]", 0), 0u) << msg;
  EXPECT_THROW(parse_scenario("[1, 2]"), ValidationError);
}

TEST(Scenario, MalformedTextReportsPosition) {
  const std::string text = "{\n  \"name\": \"x\",\n  \"t_end\": ,\n}";
  try {
    parse_scenario(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), text.find(',', text.find("t_end")) + 1);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Scenario, LoadReportsUnreadableFile) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), IoError);
}

TEST(Builtins, CatalogueContents) {
  const auto all = builtin_scenarios();
  EXPECT_GE(all.size(), 10u);
  for (const auto& s : all) {
    EXPECT_TRUE(find_builtin(s.name).has_value());
    EXPECT_FALSE(s.description.empty()) << s.name;
  }
  EXPECT_FALSE(find_builtin("atlantis").has_value());

  const auto c480 = find_builtin("tunisia-c1-4.80");
  ASSERT_TRUE(c480);
  EXPECT_EQ(c480->shocks, (std::vector<Shock>{{1.0 / 30, 0.041}, {20.0 / 30, 0.01}}));
  EXPECT_EQ(c480->schedule.c1()(0.0), 4.80);

  const auto t230 = find_builtin("tunisia-c1-2.30");
  ASSERT_TRUE(t230);
  EXPECT_EQ(t230->schedule.c1()(0.0), kDefaultEnthusiasm);

  for (const char* name : {"tunisia-alpha-0.96-beta-0.05", "tunisia-alpha-0.96-beta-0.06",
                           "tunisia-alpha-0.98-beta-0.05", "tunisia-alpha-0.98-beta-0.06"}) {
    const auto s = find_builtin(name);
    ASSERT_TRUE(s) << name;
    EXPECT_EQ(s->shocks, (std::vector<Shock>{{1.0 / 30, 0.021}, {20.0 / 30, 0.021}}));
    EXPECT_EQ(s->schedule.c1()(0.0), kDefaultEnthusiasm);
    EXPECT_EQ(s->schedule.c2()(0.0), kDefaultPolicingEfficiency);
  }
}

TEST(Builtins, EgyptIsTheScheduleWithOneShock) {
  const auto egypt = find_builtin("egypt");
  ASSERT_TRUE(egypt);
  EXPECT_EQ(egypt->schedule, egypt_schedule());
  EXPECT_EQ(egypt->shocks, (std::vector<Shock>{{11.0 / 30, 0.05}}));
  EXPECT_EQ(egypt->r0.value(), 0.0);
  EXPECT_GE(egypt->t_end, 1.0);
}

TEST(Csv, EmptyTrajectoryIsHeaderOnly) {
  std::ostringstream out;
  const std::size_t n = write_trajectory_csv(Trajectory{}, out);
  EXPECT_EQ(out.str(), "t,r,alpha,beta,c1,c2,v,p,region\n");
  EXPECT_EQ(n, out.str().size());
}

TEST(Csv, ThreeSamplesAndEvents) {
  const ModelParams p(0.3, 0.3, 1, 1);
  const Region region = classify_region(p);
  Trajectory tr;
  for (double t : {0.0, 0.5, 1.0}) tr.samples.push_back({t, 0.25, p, 0, 0, region});
  tr.events.push_back({0.5, EventKind::RegionChange, "II->II"});
  std::ostringstream out;
  write_trajectory_csv(tr, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[1], "0.000000000000,0.250000000000,0.3,0.3,1,1,0,0,II");
  EXPECT_EQ(lines[3], "1.000000000000,0.250000000000,0.3,0.3,1,1,0,0,II");
  EXPECT_EQ(lines[4], "#event,0.500000000000,region_change,II->II");
}

TEST(Csv, ShockInstantsAppearTwice) {
  const std::vector<Shock> shocks{{0.5, 0.1}};
  const Trajectory tr = simulate(Fraction(0.2), ModelParams(0.3, 0.3, 1, 1), shocks, 1.0,
                                 SolverConfig{1e-3, 1e-10, 1.0});
  ASSERT_EQ(tr.samples.size(), 4u);  // 0, 0.5 pre, 0.5 post, 1
  std::ostringstream out;
  write_trajectory_csv(tr, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 1 + tr.samples.size() + tr.events.size());
  EXPECT_EQ(lines[1], "0.000000000000,0.200000000000,0.3,0.3,1,1,0,1,II");
  EXPECT_EQ(lines[2].substr(0, 14), lines[3].substr(0, 14));
  EXPECT_EQ(lines.back().rfind("#event,0.500000000000,shock,dr=0.1 ", 0), 0u) << lines.back();
}

TEST(Csv, EgyptFirstRow) {
  auto egypt = *find_builtin("egypt");
  egypt.solver.sample_interval = 1.0 / 300;
  std::ostringstream out;
  write_trajectory_csv(run_scenario(egypt), out);
  const auto lines = lines_of(out.str());
  EXPECT_EQ(lines[1], "0.000000000000,0.000000000000,0.96,0.06,2.3,69.1,0,1,III0");
}

TEST(Csv, Deterministic) {
  const auto spec = *find_builtin("tunisia-c1-4.02");
  std::ostringstream a, b;
  write_trajectory_csv(run_scenario(spec), a);
  write_trajectory_csv(run_scenario(spec), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Csv, FileDestination) {
  TempDir dir;
  const Trajectory tr = run_scenario(*find_builtin("tunisia-c1-3.26"));
  const std::size_t n = write_trajectory_csv(tr, dir.path / "out.csv");
  EXPECT_EQ(fs::file_size(dir.path / "out.csv"), n);
  EXPECT_THROW(write_trajectory_csv(tr, dir.path), IoError);
  EXPECT_THROW(write_trajectory_csv(tr, dir.path / "missing" / "out.csv"), IoError);
}

TEST(Csv, RegionGrid) {
  const RegionGrid g = sweep_regions({0.1, 0.9, 2}, {0.1, 0.9, 3}, 1, 1);
  std::ostringstream out;
  write_region_grid_csv(g, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "alpha,beta,region");
  EXPECT_EQ(lines[1].substr(lines[1].rfind(',') + 1), "II");
}

TEST(Json, TrajectoryAndGridAreWellFormed) {
  const Trajectory tr = run_scenario(*find_builtin("tunisia-c1-4.80"));
  const std::string j = trajectory_to_json(tr);
  EXPECT_EQ(j.front(), '{');
  EXPECT_NE(j.find("\"samples\""), std::string::npos);
  EXPECT_NE(j.find("threshold_crossing"), std::string::npos);
  const std::string g = region_grid_to_json(sweep_regions({0.1, 0.9, 3}, {0.1, 0.9, 3}, 1, 1));
  EXPECT_NE(g.find("\"cells\""), std::string::npos);
}

TEST(Svg, ContainsPlot) {
  const Trajectory tr = run_scenario(*find_builtin("egypt"));
  std::ostringstream out;
  const std::size_t n = write_trajectory_svg(tr, out, "egypt & co");
  const std::string s = out.str();
  EXPECT_EQ(n, s.size());
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("<polyline"), std::string::npos);
  EXPECT_NE(s.find("egypt &amp; co"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);

  std::ostringstream grid;
  write_region_grid_svg(sweep_regions({0.1, 0.9, 4}, {0.1, 0.9, 4}, 1, 1), grid);
  EXPECT_NE(grid.str().find("<rect"), std::string::npos);
}
