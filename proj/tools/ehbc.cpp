#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "ehbc/errors.hpp"
#include "ehbc/flowright.hpp"
#include "ehbc/generate.hpp"
#include "ehbc/io.hpp"
#include "ehbc/verify.hpp"

namespace {

using namespace ehbc;

constexpr int kOk = 0;
constexpr int kIoError = 1;
constexpr int kInfeasible = 2;
constexpr int kCheckFailed = 3;

TimeUnit parse_unit(const std::string& s) {
  return (s == "h" || s == "hours") ? TimeUnit::Hours : TimeUnit::Seconds;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct SolveArgs {
  std::string instance;
  std::string output;
  std::string time_unit = "s";
  std::string init = "greedy";
  double tolerance = 1e-9;
  double settle = SolveOptions{}.settle_rel;
  std::size_t max_iters = 0;
};

int run_solve(const SolveArgs& a) {
  const ProblemInstance inst = instance_from_json(read_json_file(a.instance), parse_unit(a.time_unit));
  SolveOptions opts;
  opts.stop_eps = a.tolerance;
  opts.settle_rel = a.settle;
  opts.max_iters = a.max_iters;
  opts.init = a.init == "deferred" ? InitStrategy::Deferred : InitStrategy::Greedy;
  SolveResult res;
  try {
    res = solve(inst, opts);
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << " (deficit " << e.deficit() << " J)\n";
    return kInfeasible;
  }
  const std::string text = dump(schedule_to_json(res.schedule, &res.diagnostics));
  const bool to_stdout = a.output.empty() || a.output == "-";
  write_text_file(to_stdout ? "-" : a.output, text);

  std::ostream& log = to_stdout ? std::cerr : std::cout;
  const double t = res.schedule.completion_time;
  log << "T = " << t << " s (" << t / 3600.0 << " h)\n"
      << "iterations = " << res.diagnostics.iterations << " ("
      << to_string(res.diagnostics.stop_reason) << ")\n"
      << "unused harvests (1-based):";
  for (std::size_t i : res.schedule.unused_harvests) {
    log << ' ' << i + 1;
  }
  log << '\n';
  if (res.diagnostics.stop_reason == StopReason::MaxIters) {
    std::cerr << "warning: iteration limit reached before convergence\n";
  }
  return kOk;
}

struct CheckArgs {
  std::string schedule;
  std::string instance;
  std::string output = "-";
  std::string time_unit = "s";
  double rate_tol = StructureTolerances{}.rate_rel;
};

int run_check(const CheckArgs& a) {
  const Schedule s = schedule_from_json(read_json_file(a.schedule));
  const ProblemInstance inst = instance_from_json(read_json_file(a.instance), parse_unit(a.time_unit));
  StructureTolerances tol;
  tol.rate_rel = a.rate_tol;
  const VerificationReport report = check_structure(s, inst, tol);
  write_text_file(a.output, dump(report_to_json(report)));
  return report.all_pass() ? kOk : kCheckFailed;
}

int run_gen(const GenOptions& g, const std::string& output) {
  try {
    write_text_file(output, dump(instance_to_json(generate_instance(g))));
  } catch (const Infeasible& e) {
    std::cerr << "gen: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

int run_oracle(const std::string& path, const std::string& unit, double step) {
  const ProblemInstance inst = instance_from_json(read_json_file(path), parse_unit(unit));
  if (!check_feasible(inst).feasible) {
    std::cerr << "infeasible: deficit " << check_feasible(inst).deficit << " J\n";
    return kInfeasible;
  }
  OracleOptions opts;
  opts.grid_step = step;
  const double t = oracle_tmin(inst, opts);
  std::printf("%.12g\n", t);
  return kOk;
}

int run_export(const std::string& path, const std::string& format, const std::string& output) {
  if (format != "csv") {
    std::cerr << "export: unsupported format " << format << '\n';
    return kIoError;
  }
  const Schedule s = schedule_from_json(read_json_file(path));
  std::ostringstream os;
  write_csv(os, s);
  write_text_file(output, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum completion time schedules for an energy-harvesting broadcast link"};
  app.require_subcommand(1);
  const std::vector<std::string> units{"s", "h", "hours"};

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and write the schedule JSON");
  solve_cmd->add_option("instance", solve_args.instance, "Instance JSON")->required();
  solve_cmd->add_option("--tolerance", solve_args.tolerance, "Stop when T drops by less than this times the mean epoch");
  solve_cmd->add_option("--settle", solve_args.settle,
                        "Also sweep until no power or rate moves by more than this (0: off)");
  solve_cmd->add_option("--max-iters", solve_args.max_iters, "Sweep limit (0: 50 n^2)");
  solve_cmd->add_option("--time-unit", solve_args.time_unit, "Unit of harvest times in the file")
      ->check(CLI::IsMember(units));
  solve_cmd->add_option("--init", solve_args.init, "Starting schedule")
      ->check(CLI::IsMember({"greedy", "deferred"}));
  solve_cmd->add_option("--output,-o", solve_args.output, "Schedule JSON path (default stdout)");

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Check a schedule's optimality structure");
  check_cmd->add_option("schedule", check_args.schedule, "Schedule JSON")->required();
  check_cmd->add_option("instance", check_args.instance, "Instance JSON")->required();
  check_cmd->add_option("--time-unit", check_args.time_unit)->check(CLI::IsMember(units));
  check_cmd->add_option("--rate-tol", check_args.rate_tol, "Rate slack relative to the peak rate");
  check_cmd->add_option("--output,-o", check_args.output, "Report path (default stdout)");

  GenOptions gen_opts;
  std::string gen_output = "-";
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random feasible instance");
  gen_cmd->add_option("--seed", gen_opts.seed);
  gen_cmd->add_option("--harvests,-n", gen_opts.harvests)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--energy-min", gen_opts.energy_min);
  gen_cmd->add_option("--energy-max", gen_opts.energy_max);
  gen_cmd->add_option("--epoch-min", gen_opts.epoch_min);
  gen_cmd->add_option("--epoch-max", gen_opts.epoch_max);
  gen_cmd->add_option("--ratio-min", gen_opts.ratio_min);
  gen_cmd->add_option("--ratio-max", gen_opts.ratio_max);
  gen_cmd->add_option("--load-min", gen_opts.load_min);
  gen_cmd->add_option("--load-max", gen_opts.load_max);
  gen_cmd->add_option("--retries", gen_opts.max_retries);
  gen_cmd->add_flag("!--fixed-channel", gen_opts.random_channel, "Use s1=1, s2=0.5, sigma2=1");
  gen_cmd->add_option("--output,-o", gen_output);

  std::string oracle_path;
  std::string oracle_unit = "s";
  double oracle_step = OracleOptions{}.grid_step;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force completion time (at most 3 harvests)");
  oracle_cmd->add_option("instance", oracle_path)->required();
  oracle_cmd->add_option("--time-unit", oracle_unit)->check(CLI::IsMember(units));
  oracle_cmd->add_option("--grid-step", oracle_step)->check(CLI::PositiveNumber);

  std::string export_path;
  std::string export_format = "csv";
  std::string export_output = "-";
  auto* export_cmd = app.add_subcommand("export", "Export a schedule as a time series");
  export_cmd->add_option("schedule", export_path)->required();
  export_cmd->add_option("--format", export_format);
  export_cmd->add_option("--output,-o", export_output);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(solve_args);
    if (*check_cmd) return run_check(check_args);
    if (*gen_cmd) return run_gen(gen_opts, gen_output);
    if (*oracle_cmd) return run_oracle(oracle_path, oracle_unit, oracle_step);
    if (*export_cmd) return run_export(export_path, export_format, export_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kIoError;
}
