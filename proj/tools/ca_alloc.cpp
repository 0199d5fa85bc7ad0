// ca-alloc: command-line front end for the carrier-aggregation allocator.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "satca/alloc.hpp"
#include "satca/io.hpp"
#include "satca/linkbudget.hpp"
#include "satca/milp.hpp"
#include "satca/presets.hpp"
#include "satca/reports.hpp"

namespace {

using namespace satca;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTimeLimit = 4;

struct Overrides {
  std::string q;
  std::optional<double> mip_gap;
  std::optional<double> time_limit;
  std::optional<long> node_limit;

  void add_to(CLI::App* cmd, bool with_q) {
    if (with_q) cmd->add_option("--q", q, "swap budget Q (integer or 'unconstrained')");
    cmd->add_option("--mip-gap", mip_gap, "relative optimality gap");
    cmd->add_option("--time-limit", time_limit, "seconds per solve");
    cmd->add_option("--node-limit", node_limit, "branch-and-bound nodes per solve");
  }

  void apply(Scenario& s) const {
    if (!q.empty()) s.solver.swap_budget_q = parse_q(q);
    if (mip_gap) s.solver.mip_gap = *mip_gap;
    if (time_limit) s.solver.time_limit_s = *time_limit;
    if (node_limit) s.solver.node_limit = *node_limit;
  }

  static std::optional<int> parse_q(const std::string& v) {
    if (v == "unconstrained") return std::nullopt;
    std::size_t used = 0;
    int q = -1;
    try {
      q = std::stoi(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || q < 0) throw CLI::ValidationError("--q", "expected a count or 'unconstrained', got '" + v + "'");
    return q;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

Scenario load_valid(const std::string& path, const Overrides* o = nullptr) {
  Scenario s = read_scenario(path);
  if (o) o->apply(s);
  auto v = validate_scenario(s);
  if (!v.empty()) throw ValidationError(std::move(v));
  return s;
}

int exit_for(MilpStatus s) { return s == MilpStatus::kTimeLimit ? kExitTimeLimit : kExitInfeasible; }

void note_early_stop(const AllocationResult& r) {
  if (r.status == MilpStatus::kFeasible) {
    std::cerr << "warning: search stopped at a limit; relative gap " << r.gap << "\n";
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carrier-aggregation allocation for multibeam satellite systems"};
  app.require_subcommand(1);

  std::string input, output, preset, node_log;
  std::uint64_t seed = 1;
  bool timing = false;
  int jobs = 1;
  std::vector<std::string> q_list;
  Overrides overrides;

  auto* gen = app.add_subcommand("gen", "generate a scenario from a preset");
  gen->add_option("--preset", preset, "paper8, evolve2 or tiny")->required();
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("-o,--output", output, "scenario file (default stdout)");

  auto* rates = app.add_subcommand("rates", "export the rate matrix as CSV (bit/s)");
  rates->add_option("scenario", input)->required();
  rates->add_option("-o,--output", output);

  auto* solve = app.add_subcommand("solve", "carrier-aggregation allocation plus no-CA baseline");
  solve->add_option("scenario", input)->required();
  solve->add_option("-o,--output", output);
  solve->add_option("--node-log", node_log, "write one line per branch-and-bound node");
  overrides.add_to(solve, true);

  auto* baseline = app.add_subcommand("baseline", "no-CA proportional allocation");
  baseline->add_option("scenario", input)->required();
  baseline->add_option("-o,--output", output);

  auto* evolve_cmd = app.add_subcommand("evolve", "multi-epoch allocation over the scenario's demand profiles");
  evolve_cmd->add_option("scenario", input)->required();
  evolve_cmd->add_option("-o,--output", output);
  overrides.add_to(evolve_cmd, true);

  auto* sweep = app.add_subcommand("sweep-q", "evolve once per swap budget and tabulate");
  sweep->add_option("scenario", input)->required();
  sweep->add_option("--q", q_list, "comma-separated budgets")->delimiter(',')->required();
  sweep->add_option("-o,--output", output);
  sweep->add_option("--jobs", jobs, "evolutions run at once")->check(CLI::PositiveNumber);
  sweep->add_flag("--timing", timing, "add a wall_time_s column");
  overrides.add_to(sweep, false);

  auto* report = app.add_subcommand("report", "per-user CSV from a solve result");
  report->add_option("result", input)->required();
  report->add_option("-o,--output", output);

  auto* export_lp = app.add_subcommand("export-lp", "write the MILP in LP format");
  export_lp->add_option("scenario", input)->required();
  export_lp->add_option("-o,--output", output);
  overrides.add_to(export_lp, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      emit(output, dump(scenario_to_json(generate_scenario(parse_preset(preset), seed))));
    } else if (rates->parsed()) {
      const Scenario s = load_valid(input);
      emit(output, rates_csv(s, effective_rate_matrix(s)));
    } else if (solve->parsed()) {
      const Scenario s = load_valid(input, &overrides);
      std::ofstream log_file;
      if (!node_log.empty()) {
        log_file.open(node_log);
        if (!log_file) throw std::runtime_error("cannot write " + node_log);
      }
      SolveReport r;
      for (const auto& u : s.users) r.user_ids.push_back(u.id);
      r.demands_bps = s.demands();
      r.ca = allocate_ca(s, node_log.empty() ? nullptr : &log_file);
      r.baseline = allocate_baseline_no_ca(s);
      note_early_stop(r.ca);
      emit(output, dump(solve_report_to_json(r)));
    } else if (baseline->parsed()) {
      const Scenario s = load_valid(input);
      const auto r = allocate_baseline_no_ca(s);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      emit(output, dump(result_to_json(r)));
    } else if (evolve_cmd->parsed()) {
      const Scenario s = load_valid(input, &overrides);
      const auto trace = evolve(s, s.demand_profiles, s.solver.swap_budget_q);
      emit(output, dump(trace_to_json(trace)));
      if (trace.error) {
        std::cerr << "error: " << *trace.error << "\n";
        return kExitInfeasible;
      }
    } else if (sweep->parsed()) {
      const Scenario s = load_valid(input, &overrides);
      std::vector<std::optional<int>> qs;
      for (const auto& q : q_list) qs.push_back(Overrides::parse_q(q));
      const auto rows = sweep_q(s, qs, jobs);
      emit(output, sweep_csv(rows, timing));
      for (const auto& row : rows) {
        if (row.trace.error) {
          std::cerr << "error: " << *row.trace.error << "\n";
          return kExitInfeasible;
        }
      }
    } else if (report->parsed()) {
      emit(output, user_report_csv(solve_report_from_json(read_json_file(input))));
    } else if (export_lp->parsed()) {
      const Scenario s = load_valid(input, &overrides);
      std::ostringstream os;
      write_lp(os, build_milp(s, effective_rate_matrix(s)));
      emit(output, os.str());
    }
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const FormatError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const AllocationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.status());
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
