// Command-line driver: single runs, scheduler comparisons, parameter
// sweeps, and checking the heuristic against the exact optimizer on
// small instances.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ehfs/exact.hpp"
#include "ehfs/io.hpp"
#include "ehfs/sim.hpp"

namespace {

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string tok = csv.substr(pos, comma - pos);
    out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string> parse_names(const std::string& csv) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < csv.size()) {
    const size_t comma = csv.find(',', pos);
    out.push_back(csv.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void apply_out_dir(ehfs::RunConfig& cfg, const std::string& out_dir) {
  cfg.output.record_path = out_dir + "/record.json";
  cfg.output.series_path = out_dir + "/series.csv";
  cfg.output.summary_path = out_dir + "/summary.csv";
  cfg.flag_overrides.push_back("out");
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"super-frame data-collection scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path, scheduler, out_dir, instance_path;
  std::string schedulers_csv = "ehfs,fcfs,le,hp";
  std::string kappas_csv = "0.1,0.5,0.9";
  std::string axis_name, values_csv;
  long long seed = -1;

  CLI::App* cmd_run = app.add_subcommand("run", "execute one simulation run");
  cmd_run->add_option("--config", config_path, "JSON config file")->required();
  cmd_run->add_option("--scheduler", scheduler, "ehfs|fcfs|le|hp");
  cmd_run->add_option("--seed", seed, "override scenario seed");
  cmd_run->add_option("--out", out_dir, "output directory");

  CLI::App* cmd_compare =
      app.add_subcommand("compare", "cross schedulers and kappa values");
  cmd_compare->add_option("--config", config_path, "JSON config file")
      ->required();
  cmd_compare->add_option("--schedulers", schedulers_csv,
                          "comma-separated scheduler names");
  cmd_compare->add_option("--kappas", kappas_csv, "comma-separated kappas");
  cmd_compare->add_option("--seed", seed, "override scenario seed");
  cmd_compare->add_option("--out", out_dir, "output directory");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep one parameter");
  cmd_sweep->add_option("--config", config_path, "JSON config file")
      ->required();
  cmd_sweep->add_option("--axis", axis_name, "kappa|n|delta_d|delta_theta")
      ->required();
  cmd_sweep->add_option("--values", values_csv, "comma-separated values")
      ->required();
  cmd_sweep->add_option("--seed", seed, "override scenario seed");
  cmd_sweep->add_option("--out", out_dir, "output directory");

  CLI::App* cmd_oracle =
      app.add_subcommand("oracle", "exact optimum vs heuristic on an instance");
  cmd_oracle->add_option("--instance", instance_path, "instance text file")
      ->required();
  cmd_oracle->add_option("--scheduler", scheduler, "heuristic to evaluate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_oracle->parsed()) {
      const ehfs::ExactInstance inst = ehfs::load_instance(instance_path);
      const std::string heuristic = scheduler.empty() ? "ehfs" : scheduler;

      const auto t_exact = std::chrono::steady_clock::now();
      ehfs::ExactSolution sol;
      try {
        sol = ehfs::solve_exact(inst);
      } catch (const ehfs::BudgetExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 1;
      }
      const double exact_s = elapsed_s(t_exact);
      if (sol.status == ehfs::SolveStatus::Infeasible) {
        std::cout << "INFEASIBLE\n";
        return 2;
      }

      const auto t_heur = std::chrono::steady_clock::now();
      const ehfs::RunRecord record = ehfs::run_on_instance(inst, heuristic);
      const double heur_s = elapsed_s(t_heur);
      const ehfs::ExactAssignment heur_x =
          ehfs::assignment_from_record(inst, record);
      const double heur_value = ehfs::evaluate_objective(inst, heur_x);

      std::cout << "exact_objective=" << fmt(sol.objective)
                << " heuristic=" << heuristic
                << " heuristic_objective=" << fmt(heur_value)
                << " gap=" << fmt(ehfs::gap(heur_value, sol.objective))
                << " exact_runtime_s=" << fmt(exact_s)
                << " heuristic_runtime_s=" << fmt(heur_s) << "\n";
      return 0;
    }

    ehfs::RunConfig cfg = ehfs::load_config(config_path);
    if (!scheduler.empty()) {
      cfg.scheduler = scheduler;
      cfg.flag_overrides.push_back("scheduler");
    }
    if (seed >= 0) {
      cfg.scenario.rng_seed = static_cast<std::uint64_t>(seed);
      cfg.flag_overrides.push_back("seed");
    }
    if (!out_dir.empty()) apply_out_dir(cfg, out_dir);

    if (cmd_run->parsed()) {
      const ehfs::RunRecord record = ehfs::run_config(cfg);
      ehfs::emit_results(record, cfg);
      std::cout << "total_received=" << fmt(record.metrics.total_received)
                << " fair_nodes=" << record.metrics.fair_nodes
                << " dead_nodes=" << record.metrics.dead_nodes << "\n";
      return 0;
    }

    if (cmd_compare->parsed()) {
      const std::vector<ehfs::CompareRow> rows = ehfs::compare(
          cfg, parse_names(schedulers_csv), parse_doubles(kappas_csv));
      const std::string csv = ehfs::compare_summary_csv(rows);
      ehfs::write_file(cfg.output.summary_path, csv);
      std::cout << csv;
      return 0;
    }

    if (cmd_sweep->parsed()) {
      const std::vector<double> values = parse_doubles(values_csv);
      const std::vector<ehfs::RunRecord> records =
          ehfs::sweep(cfg, ehfs::sweep_axis_from_name(axis_name), values);
      const std::string csv = ehfs::sweep_summary_csv(values, records);
      ehfs::write_file(cfg.output.summary_path, csv);
      std::cout << csv;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
