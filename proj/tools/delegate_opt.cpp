// delegate-opt: command-line front end for the optimal-delegation solver.
//
//   delegate-opt optimize --config run.json --out result.json
//   delegate-opt solve --config run.json --t-low 0 --t-high 5
//   delegate-opt design --design 1 --dist 1,1 --out tables/
//   delegate-opt verify --out report/
//   delegate-opt paths --design 4 --out paths/
//   delegate-opt separating --config run.json --z-low 0 --points 31
//
// Exit status: 0 ok, 1 configuration error, 2 numerical failure, 3 golden mismatch.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dopt/harness.hpp"

namespace {

using namespace dopt;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitGolden = 3;

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + out_path);
  out << text;
}

std::string table_name(int design, const BetaShape& s) {
  if (design == 5) return "design5.csv";
  return "design" + std::to_string(design) + "_beta_" + format_number(s.alpha) + "_" +
         format_number(s.beta_shape) + ".csv";
}

struct TableRun {
  int design;
  BetaShape shape;
  std::vector<DesignRow> rows;
};

// Designs 1-4 run for the requested shape, or for all four; design 5 runs once.
std::vector<TableRun> run_tables(const std::vector<int>& designs, const std::string& dist,
                                 int threads) {
  std::vector<BetaShape> shapes = design_shapes();
  if (!dist.empty()) shapes = {parse_shape(dist)};
  std::vector<TableRun> runs;
  for (int design : designs) {
    const auto& list = design == 5 ? std::vector<BetaShape>{BetaShape{}} : shapes;
    for (const BetaShape& s : list) {
      std::fprintf(stderr, "design %d %s\n", design, table_name(design, s).c_str());
      runs.push_back({design, s, run_design(design_cases(design, s), OptimizerOptions{}, threads)});
    }
  }
  return runs;
}

std::vector<int> designs_from(int design) {
  if (design == 0) return {1, 2, 3, 4, 5};
  if (design < 1 || design > 5) throw ConfigError("--design must be between 1 and 5");
  return {design};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal delegation intervals for matching markets with signaling"};
  app.require_subcommand(1);

  std::string config_path, out_path, golden_path, dist;
  int design = 0;
  int threads = 1;
  int points = 31;
  double t_low = 0.0, t_high = 0.0, z_low = 0.0;

  auto* optimize_cmd = app.add_subcommand("optimize", "maximize surplus for one configuration");
  optimize_cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
  optimize_cmd->add_option("--out", out_path, "result file (JSON); stdout if omitted");

  auto* solve_cmd = app.add_subcommand("solve", "equilibrium induced by a reaction interval");
  solve_cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
  solve_cmd->add_option("--t-low", t_low, "lower end of the reaction interval")->required();
  solve_cmd->add_option("--t-high", t_high, "upper end of the reaction interval")->required();
  solve_cmd->add_option("--out", out_path, "result file (JSON); stdout if omitted");

  auto* design_cmd = app.add_subcommand("design", "run a numerical design and write its table");
  design_cmd->add_option("--design", design, "design number 1..5")->required();
  design_cmd->add_option("--dist", dist, "Beta shape 'alpha,beta' (default: all four)");
  design_cmd->add_option("--out", out_path, "output directory; stdout if omitted");
  design_cmd->add_option("--threads", threads, "rows optimized concurrently")->check(CLI::PositiveNumber);

  auto* verify_cmd = app.add_subcommand("verify", "compare designs against the golden tables");
  verify_cmd->add_option("--design", design, "design number 1..5 (default: all)");
  verify_cmd->add_option("--dist", dist, "Beta shape 'alpha,beta' (default: all four)");
  verify_cmd->add_option("--golden", golden_path, "golden CSV file or directory (default: built in)");
  verify_cmd->add_option("--out", out_path, "directory for tables and the deviation report");
  verify_cmd->add_option("--threads", threads, "rows optimized concurrently")->check(CLI::PositiveNumber);

  auto* paths_cmd = app.add_subcommand("paths", "write (sweep, t_h) and (sweep, z_h) plot data");
  paths_cmd->add_option("--design", design, "design number 1..4")->required();
  paths_cmd->add_option("--dist", dist, "Beta shape 'alpha,beta' (default: all four)");
  paths_cmd->add_option("--out", out_path, "output directory")->required();
  paths_cmd->add_option("--threads", threads, "rows optimized concurrently")->check(CLI::PositiveNumber);

  auto* sep_cmd = app.add_subcommand("separating", "dump the separating path on a grid");
  sep_cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
  sep_cmd->add_option("--z-low", z_low, "lowest matched type");
  sep_cmd->add_option("--points", points, "grid points")->check(CLI::Range(2, 1000000));
  sep_cmd->add_option("--out", out_path, "output CSV; stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*optimize_cmd) {
      const RunConfig cfg = load_config(config_path);
      const DelegationOutcome o = optimize(cfg.params, cfg.dist(), cfg.optimizer);
      write_text(out_path, outcome_json(o, cfg) + "\n");
    } else if (*solve_cmd) {
      const RunConfig cfg = load_config(config_path);
      const SenderDist d = cfg.dist();
      if (t_high < t_low) throw ConfigError("--t-high must not be below --t-low");
      const double z_l = invert_floor(cfg.params, d, t_low);
      const SeparatingPath path = make_path(cfg.params, d, z_l);
      const Thresholds th = invert_cap(cfg.params, d, path, std::max(t_high, path.t_l()));
      write_text(out_path, thresholds_json(th, pi_w(cfg.params, d, path, z_l, th.z_h)) + "\n");
    } else if (*design_cmd) {
      for (const auto& run : run_tables(designs_from(design), dist, threads)) {
        std::ostringstream csv;
        write_design_csv(csv, run.rows);
        if (out_path.empty()) {
          std::cout << csv.str();
        } else {
          std::filesystem::create_directories(out_path);
          write_text((std::filesystem::path(out_path) / table_name(run.design, run.shape)).string(),
                     csv.str());
        }
      }
    } else if (*verify_cmd) {
      const auto golden = golden_path.empty() ? embedded_golden() : load_golden(golden_path);
      std::vector<DesignRow> all;
      for (auto& run : run_tables(designs_from(design), dist, threads)) {
        if (!out_path.empty()) {
          std::filesystem::create_directories(out_path);
          std::ostringstream csv;
          write_design_csv(csv, run.rows);
          write_text((std::filesystem::path(out_path) / table_name(run.design, run.shape)).string(),
                     csv.str());
        }
        all.insert(all.end(), run.rows.begin(), run.rows.end());
      }
      int row_violations = 0;
      for (const auto& row : all)
        for (const auto& v : check_row(row)) {
          ++row_violations;
          std::fprintf(stderr, "row invariant: design %d q=%g k=%g a=%g zbar=%g: %s\n", row.design,
                       row.q, row.k, row.a, row.zbar, v.c_str());
        }
      const GoldenReport report = compare_golden(all, golden);
      std::ostringstream csv;
      write_golden_report(csv, report);
      if (out_path.empty())
        std::cout << csv.str();
      else
        write_text((std::filesystem::path(out_path) / "golden_report.csv").string(), csv.str());
      int informational = 0;
      for (const auto& c : report.cells) informational += c.enforced ? 0 : 1;
      std::fprintf(stderr,
                   "compared %d rows: %d enforced cell failures, %d informational t_h "
                   "deviations, %d row invariant violations\n",
                   report.compared_rows, report.enforced_failures, informational, row_violations);
      if (!report.ok() || row_violations > 0) return kExitGolden;
    } else if (*paths_cmd) {
      if (design < 1 || design > 4) throw ConfigError("paths: --design must be between 1 and 4");
      for (const auto& run : run_tables({design}, dist, threads))
        for (const auto& file : emit_paths(run.rows, out_path))
          std::fprintf(stderr, "wrote %s\n", file.string().c_str());
    } else if (*sep_cmd) {
      const RunConfig cfg = load_config(config_path);
      std::ostringstream csv;
      write_separating_dump(csv, cfg.params, cfg.dist(), z_low, points);
      write_text(out_path, csv.str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const ConsistencyError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}
