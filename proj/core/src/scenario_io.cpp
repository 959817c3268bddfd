#include "unrest/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "unrest/errors.hpp"

namespace unrest {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ValidationError(field + ": " + message);
}

void reject_unknown(const Json& object, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& item : object.items()) {
    bool found = false;
    for (auto k : known) found = found || item.key() == k;
    if (!found) {
      throw ValidationError("unknown field '" + (where.empty() ? "" : where + ".") + item.key() +
                            "'");
    }
  }
}

const Json& require_object(const Json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "must be an object");
  return j;
}

double number_at(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "must be a number");
  return j.get<double>();
}

double required_number(const Json& object, const char* key, const std::string& field) {
  if (!object.contains(key)) fail(field, "missing");
  return number_at(object.at(key), field);
}

// Re-raises a ValidationError from a constructor with the field path in
// front.
template <class F>
auto with_field(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    throw ValidationError(field + ": " + e.what());
  }
}

Track parse_track(const Json& j, const std::string& field) {
  if (j.is_number()) return Track::constant(j.get<double>());
  if (!j.is_array()) fail(field, "must be a number or a list of [time, value] pairs");
  std::vector<Breakpoint> points;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = field + "[" + std::to_string(i) + "]";
    const Json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2) fail(at, "must be a [time, value] pair");
    points.push_back({number_at(pair[0], at + ".time"), number_at(pair[1], at + ".value")});
  }
  return with_field(field, [&] { return Track(std::move(points)); });
}

Schedule parse_schedule(const Json& j) {
  require_object(j, "schedule");
  reject_unknown(j, "schedule", {"alpha", "beta", "c1", "c2"});
  for (const char* key : {"alpha", "beta", "c1", "c2"}) {
    if (!j.contains(key)) fail(std::string("schedule.") + key, "missing");
  }
  Track alpha = parse_track(j.at("alpha"), "schedule.alpha");
  Track beta = parse_track(j.at("beta"), "schedule.beta");
  Track c1 = parse_track(j.at("c1"), "schedule.c1");
  Track c2 = parse_track(j.at("c2"), "schedule.c2");
  return with_field("schedule", [&] {
    return Schedule(std::move(alpha), std::move(beta), std::move(c1), std::move(c2));
  });
}

ModelParams parse_params(const Json& j) {
  require_object(j, "params");
  reject_unknown(j, "params", {"alpha", "beta", "c1", "c2"});
  const double alpha = required_number(j, "alpha", "params.alpha");
  const double beta = required_number(j, "beta", "params.beta");
  const double c1 = required_number(j, "c1", "params.c1");
  const double c2 = required_number(j, "c2", "params.c2");
  return with_field("params", [&] { return ModelParams(alpha, beta, c1, c2); });
}

std::vector<Shock> parse_shocks(const Json& j) {
  if (!j.is_array()) fail("shocks", "must be a list");
  std::vector<Shock> shocks;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = "shocks[" + std::to_string(i) + "]";
    require_object(j[i], at);
    reject_unknown(j[i], at, {"time", "delta_r"});
    Shock s{required_number(j[i], "time", at + ".time"),
            required_number(j[i], "delta_r", at + ".delta_r")};
    if (!(s.time >= 0.0)) fail(at + ".time", "must be >= 0");
    with_field(at, [&] { validate_shock(s); return 0; });
    shocks.push_back(s);
  }
  return normalize_shocks(shocks);
}

SolverConfig parse_solver(const Json& j) {
  require_object(j, "solver");
  reject_unknown(j, "solver", {"step", "crossing_tolerance", "sample_interval"});
  SolverConfig config;
  if (j.contains("step")) config.step = number_at(j.at("step"), "solver.step");
  if (j.contains("crossing_tolerance")) {
    config.crossing_tolerance =
        number_at(j.at("crossing_tolerance"), "solver.crossing_tolerance");
  }
  if (j.contains("sample_interval")) {
    config.sample_interval = number_at(j.at("sample_interval"), "solver.sample_interval");
  }
  with_field("solver", [&] { config.validate(); return 0; });
  return config;
}

// A lone breakpoint at t = 0 is what a bare number parses to.
bool is_plain_constant(const Track& track) {
  const auto points = track.breakpoints();
  return points.size() == 1 && points.front().time == 0.0;
}

Json track_to_json(const Track& track) {
  const auto points = track.breakpoints();
  if (is_plain_constant(track)) return points.front().value;
  Json out = Json::array();
  for (const auto& b : points) out.push_back(Json::array({b.time, b.value}));
  return out;
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("scenario ") + e.what(), e.byte);
  }
  if (!root.is_object()) throw ValidationError("scenario: top level must be an object");
  reject_unknown(root, "",
                 {"name", "description", "r0", "t_end", "params", "schedule", "shocks", "solver"});

  if (!root.contains("name") || !root.at("name").is_string()) {
    fail("name", "required string");
  }
  std::string description;
  if (root.contains("description")) {
    if (!root.at("description").is_string()) fail("description", "must be a string");
    description = root.at("description").get<std::string>();
  }
  const double r0 = root.contains("r0") ? number_at(root.at("r0"), "r0") : 0.0;
  const double t_end = required_number(root, "t_end", "t_end");
  if (!(t_end > 0.0)) fail("t_end", "must be > 0");

  const bool has_params = root.contains("params");
  const bool has_schedule = root.contains("schedule");
  if (has_params == has_schedule) {
    throw ValidationError("scenario: exactly one of 'params' or 'schedule' is required");
  }
  Schedule schedule = has_params ? Schedule::constant(parse_params(root.at("params")))
                                 : parse_schedule(root.at("schedule"));

  return ScenarioSpec{
      root.at("name").get<std::string>(),
      std::move(description),
      with_field("r0", [&] { return Fraction(r0); }),
      t_end,
      std::move(schedule),
      root.contains("shocks") ? parse_shocks(root.at("shocks")) : std::vector<Shock>{},
      root.contains("solver") ? parse_solver(root.at("solver")) : SolverConfig{},
  };
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  Json root;
  root["name"] = spec.name;
  if (!spec.description.empty()) root["description"] = spec.description;
  root["r0"] = spec.r0.value();
  root["t_end"] = spec.t_end;
  const Schedule& s = spec.schedule;
  const bool shorthand = is_plain_constant(s.alpha()) && is_plain_constant(s.beta()) &&
                         is_plain_constant(s.c1()) && is_plain_constant(s.c2());
  if (shorthand) {
    root["params"] = {{"alpha", s.alpha()(0.0)},
                      {"beta", s.beta()(0.0)},
                      {"c1", s.c1()(0.0)},
                      {"c2", s.c2()(0.0)}};
  } else {
    root["schedule"] = {{"alpha", track_to_json(s.alpha())},
                        {"beta", track_to_json(s.beta())},
                        {"c1", track_to_json(s.c1())},
                        {"c2", track_to_json(s.c2())}};
  }
  Json shocks = Json::array();
  for (const auto& shock : spec.shocks) {
    shocks.push_back({{"time", shock.time}, {"delta_r", shock.delta_r}});
  }
  root["shocks"] = std::move(shocks);
  root["solver"] = {{"step", spec.solver.step},
                    {"crossing_tolerance", spec.solver.crossing_tolerance},
                    {"sample_interval", spec.solver.sample_interval}};
  return root.dump(2) + "\n";
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

namespace {

constexpr double kDay = 1.0 / 30.0;

ScenarioSpec constant_scenario(std::string name, std::string description, ModelParams params,
                               std::vector<Shock> shocks, double t_end) {
  return ScenarioSpec{std::move(name),         std::move(description), Fraction(0.0), t_end,
                      Schedule::constant(params), normalize_shocks(shocks), SolverConfig{}};
}

}  // namespace

std::vector<ScenarioSpec> builtin_scenarios() {
  std::vector<ScenarioSpec> out;

  for (double alpha : {0.96, 0.98}) {
    for (double beta : {0.05, 0.06}) {
      char name[64];
      std::snprintf(name, sizeof name, "tunisia-alpha-%.2f-beta-%.2f", alpha, beta);
      out.push_back(constant_scenario(
          name,
          "Tunisia, fixed parameters with visibility " + std::string(alpha == 0.96 ? "0.96" : "0.98") +
              ": shocks of 0.021 on Dec 17 and Jan 5; c1 = ln 10, c2 = 30 ln 10",
          ModelParams(alpha, beta, kDefaultEnthusiasm, kDefaultPolicingEfficiency),
          {{kDay, 0.021}, {20 * kDay, 0.021}}, 2.0));
    }
  }

  struct Enthusiasm {
    const char* label;
    double c1;
  };
  for (auto [label, c1] : {Enthusiasm{"2.30", kDefaultEnthusiasm}, Enthusiasm{"3.26", 3.26},
                           Enthusiasm{"4.02", 4.02}, Enthusiasm{"4.80", 4.80}}) {
    out.push_back(constant_scenario(
        std::string("tunisia-c1-") + label,
        std::string("Tunisia, rising enthusiasm c1 = ") + label +
            " (alpha 0.96, beta 0.06): shocks of 0.041 on Dec 17 and 0.01 on Jan 5",
        ModelParams(0.96, 0.06, c1, kDefaultPolicingEfficiency),
        {{kDay, 0.041}, {20 * kDay, 0.01}}, 2.0));
  }

  ScenarioSpec egypt{"egypt",
                     "Egypt, time-varying parameters from Jan 14 (t=0): Day of Protest shock 0.05 "
                     "on Jan 25, Internet shutdown Jan 28 - Feb 1, army sides with protesters "
                     "Feb 1-2",
                     Fraction(0.0),
                     1.5,
                     egypt_schedule(),
                     {{11 * kDay, 0.05}},
                     SolverConfig{}};
  egypt.solver.sample_interval = 1.0 / 300.0;
  out.push_back(std::move(egypt));

  // c* = c1 / (c1 + c2) rises through (1 - alpha, beta) = (0.03, 0.10) and
  // leaves it near t = 1.29, after which the unrest grows into revolution.
  out.push_back(ScenarioSpec{
      "china-rising-c1",
      "Illustrative meta-stable police state: low-level unrest tracks a rising c* "
      "until it exceeds the policing capacity",
      Fraction(0.0),
      2.0,
      Schedule(Track::constant(0.97), Track::constant(0.10),
               Track({{0.25, 2.5}, {1.75, 10.0}}), Track::constant(kDefaultPolicingEfficiency)),
      {{0.1, 0.05}},
      SolverConfig{}});
  return out;
}

std::optional<ScenarioSpec> find_builtin(std::string_view name) {
  for (auto& spec : builtin_scenarios()) {
    if (spec.name == name) return std::move(spec);
  }
  return std::nullopt;
}

Trajectory run_scenario(const ScenarioSpec& spec) {
  return simulate(spec.r0, spec.schedule, spec.shocks, spec.t_end, spec.solver);
}

namespace {

std::string fixed12(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

std::string sig12(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::size_t emit(std::ostream& out, const std::string& text) {
  out << text;
  if (!out) throw IoError("write failed");
  return text.size();
}

}  // namespace

std::size_t write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  std::string text = "t,r,alpha,beta,c1,c2,v,p,region\n";
  for (const auto& s : trajectory.samples) {
    text += fixed12(s.t) + ',' + fixed12(s.r) + ',' + sig12(s.params.alpha()) + ',' +
            sig12(s.params.beta()) + ',' + sig12(s.params.c1()) + ',' + sig12(s.params.c2()) +
            ',' + std::to_string(s.v) + ',' + std::to_string(s.p) + ',' +
            std::string(to_string(s.region.label)) + '\n';
  }
  for (const auto& e : trajectory.events) {
    text += "#event," + fixed12(e.t) + ',' + std::string(to_string(e.kind)) + ',' + e.detail +
            '\n';
  }
  return emit(out, text);
}

std::size_t write_trajectory_csv(const Trajectory& trajectory,
                                 const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + destination.string());
  return write_trajectory_csv(trajectory, out);
}

std::size_t write_region_grid_csv(const RegionGrid& grid, std::ostream& out) {
  std::string text = "alpha,beta,region\n";
  for (std::size_t i = 0; i < grid.alpha_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.beta_axis.size(); ++j) {
      text += sig12(grid.alpha_axis[i]) + ',' + sig12(grid.beta_axis[j]) + ',' +
              std::string(to_string(grid.at(i, j))) + '\n';
    }
  }
  return emit(out, text);
}

std::string trajectory_to_json(const Trajectory& trajectory) {
  Json samples = Json::array();
  for (const auto& s : trajectory.samples) {
    samples.push_back({{"t", s.t},
                       {"r", s.r},
                       {"alpha", s.params.alpha()},
                       {"beta", s.params.beta()},
                       {"c1", s.params.c1()},
                       {"c2", s.params.c2()},
                       {"v", s.v},
                       {"p", s.p},
                       {"region", to_string(s.region.label)}});
  }
  Json events = Json::array();
  for (const auto& e : trajectory.events) {
    events.push_back({{"t", e.t}, {"kind", to_string(e.kind)}, {"detail", e.detail}});
  }
  Json root;
  root["samples"] = std::move(samples);
  root["events"] = std::move(events);
  return root.dump() + "\n";
}

std::string region_grid_to_json(const RegionGrid& grid) {
  Json cells = Json::array();
  for (auto label : grid.cells) cells.push_back(to_string(label));
  Json root;
  root["c1"] = grid.c1;
  root["c2"] = grid.c2;
  root["alpha_axis"] = grid.alpha_axis;
  root["beta_axis"] = grid.beta_axis;
  root["cells"] = std::move(cells);
  return root.dump() + "\n";
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 40.0;

std::string fmt3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_open() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt3(kWidth) + "\" height=\"" +
         fmt3(kHeight) + "\" viewBox=\"0 0 " + fmt3(kWidth) + ' ' + fmt3(kHeight) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::size_t write_trajectory_svg(const Trajectory& trajectory, std::ostream& out,
                                 std::string_view title) {
  const double t_max = trajectory.samples.empty() ? 1.0 : trajectory.samples.back().t;
  const double span = t_max > 0.0 ? t_max : 1.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](double t) { return kLeft + t / span * plot_w; };
  auto y_of = [&](double r) { return kTop + (1.0 - r) * plot_h; };

  std::string text = svg_open();
  if (!title.empty()) {
    text += "<text x=\"" + fmt3(kLeft) + "\" y=\"20\" font-size=\"14\">" + escape_xml(title) +
            "</text>\n";
  }
  // Axes and ticks.
  text += "<g stroke=\"black\" fill=\"none\">\n<line x1=\"" + fmt3(kLeft) + "\" y1=\"" +
          fmt3(y_of(0.0)) + "\" x2=\"" + fmt3(x_of(span)) + "\" y2=\"" + fmt3(y_of(0.0)) +
          "\"/>\n<line x1=\"" + fmt3(kLeft) + "\" y1=\"" + fmt3(y_of(0.0)) + "\" x2=\"" +
          fmt3(kLeft) + "\" y2=\"" + fmt3(y_of(1.0)) + "\"/>\n</g>\n";
  text += "<g font-size=\"11\">\n";
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    text += "<text x=\"" + fmt3(kLeft - 35.0) + "\" y=\"" + fmt3(y_of(r) + 4.0) + "\">" +
            sig12(r) + "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double t = span * k / 4.0;
    text += "<text x=\"" + fmt3(x_of(t) - 10.0) + "\" y=\"" + fmt3(kHeight - kBottom + 16.0) +
            "\">" + fmt3(t) + "</text>\n";
  }
  text += "<text x=\"" + fmt3(kWidth / 2.0) + "\" y=\"" + fmt3(kHeight - 6.0) +
          "\">t (months)</text>\n</g>\n";

  for (const auto& e : trajectory.events) {
    if (e.kind == EventKind::Shock) {
      text += "<line x1=\"" + fmt3(x_of(e.t)) + "\" y1=\"" + fmt3(y_of(1.0)) + "\" x2=\"" +
              fmt3(x_of(e.t)) + "\" y2=\"" + fmt3(y_of(0.0)) +
              "\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\"/>\n";
    }
  }

  text += "<polyline fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
    const auto& s = trajectory.samples[i];
    if (i) text += ' ';
    text += fmt3(x_of(s.t)) + ',' + fmt3(y_of(s.r));
  }
  text += "\"/>\n";

  for (const auto& e : trajectory.events) {
    if (e.kind == EventKind::ThresholdCrossing) {
      text += "<circle cx=\"" + fmt3(x_of(e.t)) + "\" cy=\"" + fmt3(y_of(trajectory.value_at(e.t))) +
              "\" r=\"2.5\" fill=\"#27ae60\"/>\n";
    }
  }
  text += "</svg>\n";
  return emit(out, text);
}

std::size_t write_region_grid_svg(const RegionGrid& grid, std::ostream& out) {
  auto color = [](RegionLabel label) -> const char* {
    switch (label) {
      case RegionLabel::I: return "#000000";
      case RegionLabel::II: return "#bdc3c7";
      case RegionLabel::III0: return "#2c3e50";
      case RegionLabel::IIIe: return "#e67e22";
      case RegionLabel::III1: return "#c0392b";
    }
    return "#ffffff";
  };
  const double plot = kHeight - kTop - kBottom;
  const double cw = plot / static_cast<double>(grid.alpha_axis.size());
  const double ch = plot / static_cast<double>(grid.beta_axis.size());

  std::string text = svg_open();
  // alpha along x, beta along y (upwards).
  for (std::size_t i = 0; i < grid.alpha_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.beta_axis.size(); ++j) {
      text += "<rect x=\"" + fmt3(kLeft + cw * i) + "\" y=\"" +
              fmt3(kTop + plot - ch * static_cast<double>(j + 1)) + "\" width=\"" + fmt3(cw) +
              "\" height=\"" + fmt3(ch) + "\" fill=\"" + color(grid.at(i, j)) + "\"/>\n";
    }
  }
  text += "<g font-size=\"12\">\n<text x=\"" + fmt3(kLeft + plot / 2.0) + "\" y=\"" +
          fmt3(kHeight - 10.0) + "\">alpha</text>\n<text x=\"10\" y=\"" +
          fmt3(kTop + plot / 2.0) + "\">beta</text>\n";
  double y = kTop + 10.0;
  for (auto label : {RegionLabel::II, RegionLabel::III0, RegionLabel::IIIe, RegionLabel::III1,
                     RegionLabel::I}) {
    text += "<rect x=\"" + fmt3(kLeft + plot + 30.0) + "\" y=\"" + fmt3(y - 10.0) +
            "\" width=\"12\" height=\"12\" fill=\"" + color(label) + "\"/>\n<text x=\"" +
            fmt3(kLeft + plot + 48.0) + "\" y=\"" + fmt3(y) + "\">" +
            std::string(to_string(label)) + "</text>\n";
    y += 20.0;
  }
  text += "</g>\n</svg>\n";
  return emit(out, text);
}

}  // namespace unrest
