#include "bergerflow/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "bergerflow/acceptance.hpp"
#include "bergerflow/dynamics.hpp"
#include "bergerflow/integrate.hpp"
#include "bergerflow/phase.hpp"

namespace bergerflow {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FlowFlags {
  std::string flow = "collapse";
  double a = 2.0;
  std::optional<double> kappa;
  double epsilon = 1.0;
};

void add_flow_flags(CLI::App* cmd, FlowFlags& flags) {
  cmd->add_option("--flow", flags.flow, "collapse or normalized")
      ->check(CLI::IsMember({"collapse", "normalized"}))
      ->capture_default_str();
  cmd->add_option("--a", flags.a, "Berger sphere parameter, 2 or -2")->capture_default_str();
  cmd->add_option("--kappa", flags.kappa,
                  "Killing number: +-1 for collapse, +-0.5 for normalized (default +1 / +0.5)");
  cmd->add_option("--epsilon", flags.epsilon, "initial fiber scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

FlowParams build_params(const FlowFlags& flags, std::ostream& err) {
  const bool collapse = flags.flow == "collapse";
  const double expected = collapse ? 1.0 : 0.5;
  const double kappa = flags.kappa.value_or(expected);
  if (std::abs(kappa) != expected) {
    err << "warning: --kappa " << kappa << " does not match the " << flags.flow
        << " flow, which expects |kappa| = " << expected << "\n";
  }
  if (std::abs(flags.a) != 2.0) throw UsageError("--a must be 2 or -2");
  try {
    return collapse ? FlowParams::collapse(flags.a, kappa, flags.epsilon)
                    : FlowParams::normalized(flags.a, kappa, flags.epsilon);
  } catch (const InvalidParameter& e) {
    throw UsageError(std::string("--kappa: ") + e.what());
  }
}

struct IntegratorFlags {
  double t_end = 10.0;
  std::optional<double> rtol, atol, collapse_tol, equilib_tol;
  std::optional<long> max_steps;
  int stride = 1;
  bool run_through_equilibria = false;
};

void add_integrator_flags(CLI::App* cmd, IntegratorFlags& flags) {
  cmd->add_option("--t-end", flags.t_end, "final time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--rtol", flags.rtol, "relative tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--atol", flags.atol, "absolute tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--collapse-tol", flags.collapse_tol, "collapse detection scale")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--equilib-tol", flags.equilib_tol, "equilibrium detection threshold")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-steps", flags.max_steps, "step budget")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-equilibrium-stop", flags.run_through_equilibria,
                "keep integrating after the field vanishes");
}

IntegratorConfig build_config(const IntegratorFlags& flags) {
  IntegratorConfig cfg;
  if (flags.rtol) cfg.rtol = *flags.rtol;
  if (flags.atol) cfg.atol = *flags.atol;
  if (flags.collapse_tol) cfg.collapse_tol = *flags.collapse_tol;
  if (flags.equilib_tol) cfg.equilib_tol = *flags.equilib_tol;
  if (flags.max_steps) cfg.max_steps = *flags.max_steps;
  cfg.output_stride = flags.stride;
  cfg.stop_on_equilibrium = !flags.run_through_equilibria;
  try {
    cfg.validate();
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& flag) {
  std::istringstream in(text);
  double first = 0.0;
  double second = 0.0;
  char comma = 0;
  if (!(in >> first >> comma >> second) || comma != ',' || !(in >> std::ws).eof()) {
    throw UsageError(flag + ": expected two comma-separated numbers, got '" + text + "'");
  }
  return {first, second};
}

std::vector<Point> parse_seeds(const std::string& text) {
  std::vector<Point> seeds;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto [x, y] = parse_pair(item, "--seeds");
    if (!(x > 0.0) || !(y > 0.0)) {
      throw UsageError("--seeds: seed " + item + " is not in the open first quadrant");
    }
    seeds.push_back({x, y});
  }
  return seeds;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,alpha,beta,volume,energy,f,g,dalpha,dbeta\n";
  for (const auto& sample : traj.samples) {
    const auto& s = sample.state;
    const auto& g = sample.scalars;
    const Point d = vector_field(traj.params, {s.alpha, s.beta});
    os << s.t << ',' << s.alpha << ',' << s.beta << ',' << g.volume << ',' << g.energy << ','
       << g.f << ',' << g.g << ',' << d.x << ',' << d.y << '\n';
  }
  os << "# termination=" << to_string(traj.termination.tag) << " t=" << traj.termination.t_event
     << '\n';
}

bool integration_failed(const Trajectory& traj) {
  return traj.termination.tag == EventTag::StepUnderflow;
}

int cmd_simulate(const FlowFlags& flow, const IntegratorFlags& integ, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  const auto params = build_params(flow, err);
  const auto cfg = build_config(integ);
  const auto traj = integrate(params, cfg, integ.t_end);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw UsageError("--out: cannot open " + out_path);
  }
  std::ostream& os = out_path.empty() ? out : file;
  os.precision(17);
  write_trajectory_csv(os, traj);
  if (integration_failed(traj)) {
    err << "integration failed: step size underflow at t=" << traj.termination.t_event << "\n";
    return kExitIntegration;
  }
  return kExitOk;
}

struct PortraitFlags {
  std::string grid = "20,20";
  std::string x_range = "0.05,1.5";
  std::string y_range = "0.05,1.5";
  std::string seeds = "1,1;0.66666666666666663,1";
};

int cmd_portrait(const FlowFlags& flow, const IntegratorFlags& integ, const PortraitFlags& portrait,
                 std::ostream& out, std::ostream& err) {
  const auto params = build_params(flow, err);
  const auto cfg = build_config(integ);
  const auto [nx_d, ny_d] = parse_pair(portrait.grid, "--grid");
  if (nx_d < 1 || ny_d < 1 || nx_d != std::floor(nx_d) || ny_d != std::floor(ny_d)) {
    throw UsageError("--grid: expected two positive integers");
  }
  const auto x_range = parse_pair(portrait.x_range, "--x-range");
  const auto y_range = parse_pair(portrait.y_range, "--y-range");
  const auto seeds = parse_seeds(portrait.seeds);

  std::vector<PortraitSample> grid;
  try {
    grid = sample_portrait(params, x_range, y_range, static_cast<int>(nx_d),
                           static_cast<int>(ny_d));
  } catch (const DomainError& e) {
    throw UsageError(std::string("--x-range/--y-range: ") + e.what());
  }

  out.precision(17);
  out << "x,y,ux,uy,mag\n";
  for (const auto& s : grid) {
    out << s.point.x << ',' << s.point.y << ',' << s.direction.x << ',' << s.direction.y << ','
        << s.magnitude << '\n';
  }
  bool failed = false;
  for (const auto& seed : seeds) {
    const auto traj = integrate_from(params, cfg, seed, integ.t_end);
    out << "\n# seed=" << seed.x << ',' << seed.y << '\n';
    write_trajectory_csv(out, traj);
    failed = failed || integration_failed(traj);
  }
  if (failed) {
    err << "integration failed for at least one seed\n";
    return kExitIntegration;
  }
  return kExitOk;
}

int cmd_equilibria(const FlowFlags& flow, std::ostream& out, std::ostream& err) {
  const auto params = build_params(flow, err);
  if (params.kind == FlowKind::Collapse) {
    err << "the collapse flow has no isolated equilibria: every point (0,k), k > 0, of the "
           "boundary line is a degenerate fixed point\n";
    return kExitUsage;
  }
  auto list = nlohmann::json::array();
  for (const auto& e : equilibria(params)) {
    list.push_back({{"epsilon_star", *e.epsilon_star},
                    {"point", {e.location->x, e.location->y}},
                    {"stability", std::string(to_string(e.stability))}});
  }
  out << list.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const SuiteOptions& options, std::ostream& out, std::ostream& err) {
  const auto cfg = suite_config(options);
  const auto results = run_acceptance(options);
  if (results.empty()) {
    err << "--filter: no checks match '" << options.filter << "'\n";
    return kExitUsage;
  }
  bool all_passed = true;
  auto checks = nlohmann::json::array();
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    checks.push_back({{"name", r.name},
                      {"criterion", r.criterion},
                      {"passed", r.passed},
                      {"measured", r.measured},
                      {"threshold", r.threshold},
                      {"detail", r.detail}});
  }
  nlohmann::json report = {
      {"status", all_passed ? "pass" : "fail"},
      {"config",
       {{"rtol", cfg.rtol},
        {"atol", cfg.atol},
        {"tolerance", options.threshold_cap ? nlohmann::json(*options.threshold_cap) : nullptr},
        {"filter", options.filter}}},
      {"checks", checks}};
  out << report.dump(2) << '\n';
  return all_passed ? kExitOk : kExitVerification;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spinor flow on Berger spheres: simulate, plot, locate equilibria, verify"};
  app.name("bergerflow");
  app.require_subcommand(1);

  FlowFlags flow;
  IntegratorFlags integ;
  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory and print CSV");
  add_flow_flags(simulate, flow);
  add_integrator_flags(simulate, integ);
  simulate->add_option("--stride", integ.stride, "record every n-th accepted step")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_path, "output file (default standard output)");

  PortraitFlags portrait;
  IntegratorFlags seed_integ;
  seed_integ.t_end = 100.0;
  auto* portrait_cmd =
      app.add_subcommand("portrait", "sample the vector field and integrate seed curves");
  add_flow_flags(portrait_cmd, flow);
  add_integrator_flags(portrait_cmd, seed_integ);
  portrait_cmd->add_option("--grid", portrait.grid, "nx,ny")->capture_default_str();
  portrait_cmd->add_option("--x-range", portrait.x_range, "lo,hi")->capture_default_str();
  portrait_cmd->add_option("--y-range", portrait.y_range, "lo,hi")->capture_default_str();
  portrait_cmd->add_option("--seeds", portrait.seeds, "x1,y1;x2,y2;... (empty for none)")
      ->capture_default_str();

  auto* equilibria_cmd = app.add_subcommand("equilibria", "list critical points as JSON");
  add_flow_flags(equilibria_cmd, flow);

  SuiteOptions suite;
  bool serial = false;
  auto* verify = app.add_subcommand("verify", "run the acceptance checks and print a JSON report");
  verify->add_option("--filter", suite.filter, "run only checks whose name contains this");
  verify->add_option("--rtol", suite.rtol, "override the relative tolerance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--atol", suite.atol, "override the absolute tolerance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tolerance", suite.threshold_cap, "cap every error threshold at this value")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--serial", serial, "run checks one at a time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(flow, integ, out_path, out, err);
    if (*portrait_cmd) return cmd_portrait(flow, seed_integ, portrait, out, err);
    if (*equilibria_cmd) return cmd_equilibria(flow, out, err);
    suite.parallel = !serial;
    return cmd_verify(suite, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StepBudgetExhausted& e) {
    err << "integration failed: " << e.what() << "\n";
    return kExitIntegration;
  } catch (const DomainError& e) {
    err << "integration failed: " << e.what() << "\n";
    return kExitIntegration;
  }
}

}  // namespace bergerflow
