#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "unrest/errors.hpp"
#include "unrest/integrator.hpp"
#include "unrest/scenario_io.hpp"

namespace unrest::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "unrest 0.1.0";

std::string g12(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Classify: return "classify";
    case Command::Equilibria: return "equilibria";
    case Command::Simulate: return "simulate";
    case Command::Sweep: return "sweep";
    case Command::ScenarioList: return "scenario-list";
    case Command::ScenarioRun: return "scenario-run";
    case Command::Escape: return "escape";
  }
  return "?";
}

std::string_view extension(Format f) {
  switch (f) {
    case Format::Text: return "txt";
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Svg: return "svg";
  }
  return "txt";
}

std::string interval_text(const Interval& in) {
  return std::string(in.lo_closed ? "[" : "(") + g12(in.lo) + ", " + g12(in.hi) +
         (in.hi_closed ? "]" : ")");
}

Json interval_json(const Interval& in) {
  return {{"lo", in.lo}, {"hi", in.hi}, {"lo_closed", in.lo_closed}, {"hi_closed", in.hi_closed}};
}

Json equilibrium_json(const Equilibrium& e) {
  Json j{{"value", e.value.value()}, {"stability", to_string(e.stability)}};
  j["basin"] = e.basin ? interval_json(*e.basin) : Json(nullptr);
  return j;
}

Json boundary_json(const Region& region) {
  Json tags = Json::array();
  for (auto tag : {BoundaryTag::AlphaPlusBetaEqOne, BoundaryTag::CstarEqVisibilityThreshold,
                   BoundaryTag::CstarEqBeta}) {
    if (region.on(tag)) tags.push_back(to_string(tag));
  }
  return tags;
}

std::string boundary_text(const Region& region) {
  std::string text;
  for (const auto& tag : boundary_json(region)) {
    text += (text.empty() ? "" : ",") + tag.get<std::string>();
  }
  return text;
}

std::string scenario_catalogue() {
  std::string text = "Built-in scenarios (scenario-run NAME):\n";
  for (const auto& spec : builtin_scenarios()) {
    text += "  " + spec.name + "\n      " + spec.description + "\n";
  }
  return text;
}

// Renders the invocation's payload; returns the bytes for the sink.
std::string render(const Invocation& inv) {
  std::ostringstream out;
  switch (inv.command) {
    case Command::Classify: {
      const ModelParams params(inv.alpha, inv.beta, inv.c1, inv.c2);
      const Region region = classify_region(params, inv.tol);
      const double cs = c_star(params.c1(), params.c2());
      if (inv.format == Format::Json) {
        Json j{{"region", to_string(region.label)},
               {"boundary", boundary_json(region)},
               {"c_star", cs},
               {"visibility_threshold", params.visibility_threshold()},
               {"beta", params.beta()}};
        out << j.dump(2) << '\n';
      } else {
        out << to_string(region.label) << '\n' << "c* = " << g12(cs) << '\n';
        if (region.boundary) out << "boundary: " << boundary_text(region) << '\n';
      }
      break;
    }
    case Command::Equilibria: {
      const EquilibriumSet set = equilibria(ModelParams(inv.alpha, inv.beta, inv.c1, inv.c2), inv.tol);
      if (inv.format == Format::Json) {
        Json list = Json::array();
        for (const auto& e : set.equilibria) list.push_back(equilibrium_json(e));
        Json j{{"region", to_string(set.region.label)},
               {"boundary", boundary_json(set.region)},
               {"equilibria", std::move(list)}};
        out << j.dump(2) << '\n';
      } else {
        out << "region " << to_string(set.region.label) << '\n';
        for (const auto& e : set.equilibria) {
          if (e.stability == Stability::ContinuumStable) {
            out << "continuum " << interval_text(*e.basin) << "  " << to_string(e.stability)
                << '\n';
            continue;
          }
          out << g12(e.value.value()) << "  " << to_string(e.stability);
          if (e.basin) out << "  basin " << interval_text(*e.basin);
          out << '\n';
        }
      }
      break;
    }
    case Command::Escape: {
      const ModelParams params(inv.alpha, inv.beta, inv.c1, inv.c2);
      double from = 0.0;
      if (inv.from == "cstar") {
        from = c_star(params.c1(), params.c2());
      } else if (inv.from != "0") {
        throw ValidationError("--from must be 0 or cstar");
      }
      const EscapeReport report = escape_shock(params, Fraction(from));
      if (inv.format == Format::Json) {
        Json j{{"from", report.from.value()},
               {"minimal_shock", report.minimal_shock},
               {"attainment", to_string(report.attainment)},
               {"destination", equilibrium_json(report.destination)}};
        out << j.dump(2) << '\n';
      } else {
        out << "from " << g12(report.from.value()) << '\n'
            << "minimal shock " << g12(report.minimal_shock) << " ("
            << to_string(report.attainment) << ")\n"
            << "destination " << g12(report.destination.value.value()) << ' '
            << to_string(report.destination.stability) << '\n';
      }
      break;
    }
    case Command::Sweep: {
      const RegionGrid grid =
          sweep_regions(inv.alpha_range, inv.beta_range, inv.c1, inv.c2, inv.threads);
      if (inv.format == Format::Json) {
        out << region_grid_to_json(grid);
      } else if (inv.format == Format::Svg) {
        write_region_grid_svg(grid, out);
      } else {
        write_region_grid_csv(grid, out);
      }
      break;
    }
    case Command::ScenarioList: {
      if (inv.export_dir) {
        std::filesystem::create_directories(*inv.export_dir);
        for (const auto& spec : builtin_scenarios()) {
          const auto path = std::filesystem::path(*inv.export_dir) / (spec.name + ".json");
          std::ofstream file(path, std::ios::binary | std::ios::trunc);
          if (!(file << serialize_scenario(spec))) throw IoError("cannot write " + path.string());
        }
      }
      for (const auto& spec : builtin_scenarios()) {
        out << spec.name << "  " << spec.description << '\n';
      }
      break;
    }
    case Command::Simulate:
    case Command::ScenarioRun: {
      ScenarioSpec spec = [&] {
        if (inv.command == Command::Simulate) return load_scenario(inv.scenario);
        auto found = find_builtin(inv.scenario);
        if (!found) {
          throw ValidationError("unknown scenario '" + inv.scenario + "'\n" +
                                scenario_catalogue());
        }
        return std::move(*found);
      }();
      if (inv.step) spec.solver.step = *inv.step;
      if (inv.sample_interval) spec.solver.sample_interval = *inv.sample_interval;
      const Trajectory trajectory = run_scenario(spec);
      if (inv.format == Format::Json) {
        out << trajectory_to_json(trajectory);
      } else if (inv.format == Format::Svg) {
        write_trajectory_svg(trajectory, out, spec.name);
      } else {
        write_trajectory_csv(trajectory, out);
      }
      break;
    }
  }
  return out.str();
}

void check_format(const Invocation& inv) {
  const bool tabular = inv.command == Command::Simulate || inv.command == Command::ScenarioRun ||
                       inv.command == Command::Sweep;
  const bool ok = tabular ? inv.format != Format::Text
                          : (inv.format == Format::Text || (inv.format == Format::Json &&
                                                            inv.command != Command::ScenarioList));
  if (!ok) {
    throw ValidationError("--format " + std::string(extension(inv.format)) +
                          " is not supported by " + std::string(command_name(inv.command)));
  }
}

}  // namespace

AxisRange parse_range(const std::string& text) {
  std::istringstream in(text);
  AxisRange range;
  char sep1 = 0;
  char sep2 = 0;
  long count = 0;
  if (!(in >> range.lo >> sep1 >> range.hi >> sep2 >> count) || sep1 != ':' || sep2 != ':' ||
      !(in >> std::ws).eof()) {
    throw ValidationError("range '" + text + "' must look like start:end:count");
  }
  if (count < 2) throw ValidationError("range '" + text + "': count must be >= 2");
  range.count = static_cast<std::size_t>(count);
  (void)range.centers();  // validates bounds
  return range;
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    check_format(inv);
    if (inv.verbose) err << kVersion << '\n';
    const std::string payload = render(inv);

    std::optional<std::filesystem::path> target;
    if (inv.output) {
      target = *inv.output;
    } else if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      const std::string stem = inv.command == Command::ScenarioRun
                                   ? inv.scenario
                                   : std::string(command_name(inv.command));
      target = std::filesystem::path(dir) / (stem + "." + std::string(extension(inv.format)));
    }
    if (!target) {
      out << payload;
      out.flush();
      return kExitOk;
    }
    std::ofstream file(*target, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write " + target->string());
    file << payload;
    if (!file) throw IoError("write failed: " + target->string());
    if (inv.verbose) err << "wrote " << payload.size() << " bytes to " << target->string() << '\n';
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate and analyse the one-compartment protest/revolution model\n"
               "  dr/dt = c1 v(r;alpha) (1-r) - c2 p(r;beta) r,  v = [r > 1-alpha], p = [r < beta]"};
  app.name("unrest");
  app.require_subcommand(1, 1);
  app.footer(
      "Default rates: c1 = ln 10 ~ 2.302585 (90% of the population joins within one month "
      "when visible and unpoliced), c2 = 30 ln 10 ~ 69.0776 (90% of protesters cleared within "
      "one day under full policing).\n"
      "Exit codes: 0 success, 1 validation error, 2 I/O error.\n"
      "Without --output, data goes to stdout unless $" +
      std::string(kOutputDirEnv) + " names a directory to write into.\n\n" + scenario_catalogue());

  Invocation inv;
  std::string format = "default";
  std::string output;
  std::string alpha_range;
  std::string beta_range;

  const std::map<std::string, Format> formats{
      {"text", Format::Text}, {"csv", Format::Csv}, {"json", Format::Json}, {"svg", Format::Svg}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", output, "Write data to this file instead of stdout");
    sub->add_option("--format", format, "Output format: text, csv, json or svg")
        ->check(CLI::IsMember({"text", "csv", "json", "svg"}));
    sub->add_flag("-v,--verbose", inv.verbose, "Print version and progress to stderr");
  };
  auto add_params = [&](CLI::App* sub, bool need_alpha_beta) {
    auto* a = sub->add_option("--alpha", inv.alpha, "Visibility, in (0,1)");
    auto* b = sub->add_option("--beta", inv.beta, "Policing capacity, in (0,1)");
    if (need_alpha_beta) {
      a->required();
      b->required();
    }
    sub->add_option("--c1", inv.c1, "Enthusiasm rate per month (default ln 10)");
    sub->add_option("--c2", inv.c2, "Policing efficiency per month (default 30 ln 10)");
  };

  auto* classify = app.add_subcommand("classify", "Print the region label and c*");
  add_params(classify, true);
  classify->add_option("--tol", inv.tol, "Classification tolerance (default 1e-12)");
  add_common(classify);

  auto* eq = app.add_subcommand("equilibria", "Print equilibria with stability and basins");
  add_params(eq, true);
  eq->add_option("--tol", inv.tol, "Classification tolerance (default 1e-12)");
  add_common(eq);

  auto* sim = app.add_subcommand("simulate", "Run a scenario file and write its trajectory");
  sim->add_option("--scenario", inv.scenario, "Scenario JSON file")->required();
  sim->add_option("--step", inv.step, "Override solver step (months)");
  sim->add_option("--sample-interval", inv.sample_interval, "Override sample interval (months)");
  add_common(sim);

  auto* sweep = app.add_subcommand("sweep", "Classify a grid of (alpha, beta) cell centres");
  sweep->add_option("--alpha", alpha_range, "start:end:count")->required();
  sweep->add_option("--beta", beta_range, "start:end:count")->required();
  sweep->add_option("--c1", inv.c1, "Enthusiasm rate per month (default ln 10)");
  sweep->add_option("--c2", inv.c2, "Policing efficiency per month (default 30 ln 10)");
  sweep->add_option("--threads", inv.threads, "Worker threads (0 = hardware)");
  add_common(sweep);

  auto* list = app.add_subcommand("scenario-list", "List built-in scenarios");
  list->add_option("--export", inv.export_dir, "Also write each built-in as DIR/<name>.json");
  add_common(list);

  auto* run_builtin = app.add_subcommand("scenario-run", "Run a built-in scenario");
  run_builtin->add_option("name", inv.scenario, "Built-in scenario name")->required();
  run_builtin->add_option("--step", inv.step, "Override solver step (months)");
  run_builtin->add_option("--sample-interval", inv.sample_interval,
                          "Override sample interval (months)");
  add_common(run_builtin);

  auto* escape = app.add_subcommand("escape", "Minimal shock leaving a stable equilibrium");
  add_params(escape, true);
  escape->add_option("--from", inv.from, "0 or cstar")->check(CLI::IsMember({"0", "cstar"}));
  add_common(escape);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const std::pair<CLI::App*, Command> table[] = {
      {classify, Command::Classify},   {eq, Command::Equilibria},
      {sim, Command::Simulate},        {sweep, Command::Sweep},
      {list, Command::ScenarioList},   {run_builtin, Command::ScenarioRun},
      {escape, Command::Escape}};
  for (const auto& [sub, command] : table) {
    if (sub->parsed()) inv.command = command;
  }
  const bool tabular = inv.command == Command::Simulate || inv.command == Command::ScenarioRun ||
                       inv.command == Command::Sweep;
  inv.format = format == "default" ? (tabular ? Format::Csv : Format::Text) : formats.at(format);
  if (!output.empty()) inv.output = output;

  try {
    if (inv.command == Command::Sweep) {
      inv.alpha_range = parse_range(alpha_range);
      inv.beta_range = parse_range(beta_range);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return run(inv, out, err);
}

}  // namespace unrest::cli
