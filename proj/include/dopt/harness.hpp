#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dopt/optimizer.hpp"

namespace dopt {

/// Contents of a JSON run configuration:
///   {"A":1,"beta":0.5,"a":0.5,"k":1,"q":1,
///    "dist":{"alpha":1,"beta":1,"zbar":3},"optimizer":{"grid":61,"tol":1e-6}}
/// Missing keys take the baseline values. "optimizer" may also carry
/// "method" and "threads".
struct RunConfig {
  ModelParams params;
  double alpha = 1.0;
  double beta_shape = 1.0;
  double zbar = 3.0;
  OptimizerOptions optimizer;

  SenderDist dist() const { return SenderDist(alpha, beta_shape, zbar); }
};

RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

std::string outcome_json(const DelegationOutcome& outcome, const RunConfig& config);
std::string thresholds_json(const Thresholds& th, const SurplusBreakdown& surplus);

struct BetaShape {
  double alpha = 1.0;
  double beta_shape = 1.0;
};

/// The four shapes used throughout the designs: (1,1), (5,5), (3,5), (5,3).
const std::vector<BetaShape>& design_shapes();
/// Parses "alpha,beta".
BetaShape parse_shape(std::string_view text);

struct DesignCase {
  int design = 1;
  BetaShape shape;
  ModelParams params;
  double zbar = 3.0;
};

/// The sweep of a design in table order. Designs 1-4 take one shape; design 5
/// ignores the shape and covers Beta(3,5), Beta(5,5), Beta(5,3).
std::vector<DesignCase> design_cases(int design, const BetaShape& shape);

struct DesignRow {
  int design = 1;
  double alpha = 1.0;
  double beta_shape = 1.0;
  double q = 1.0;
  double k = 1.0;
  double a = 0.5;
  double zbar = 3.0;
  double xbar = 0.0;
  double t_l = 0.0;
  double t_h = 0.0;
  double z_l = 0.0;
  double z_h = 0.0;
  double x_h = 0.0;
  double s_h = 0.0;
  double pi_w = 0.0;
  double pi_s = 0.0;
  EquilibriumClass cls = EquilibriumClass::Pooling;
  double percentile_zh = 0.0;
  std::vector<std::string> warnings;
};

DesignRow run_case(const DesignCase& c, const OptimizerOptions& opts);

/// Optimizes every case; rows may run concurrently but come back in sweep order.
std::vector<DesignRow> run_design(const std::vector<DesignCase>& cases,
                                  const OptimizerOptions& opts, int threads = 1);

/// Row invariants that hold for every design in the tables (x = n(z),
/// no exclusion at the bottom). Returns human-readable violations.
std::vector<std::string> check_row(const DesignRow& row);

/// Locale-independent shortest-form decimal with at most 12 significant digits.
std::string format_number(double value);

void write_design_csv(std::ostream& out, const std::vector<DesignRow>& rows);

struct GoldenRow {
  int design = 1;
  double alpha = 1.0;
  double beta_shape = 1.0;
  double q = 1.0;
  double k = 1.0;
  double a = 0.5;
  double zbar = 3.0;
  double xbar = 0.0;
  double t_h = 0.0;
  double z_h = 0.0;
  double x_h = 0.0;
  double s_h = 0.0;
  int decimals = 2;  // rounding of the published cells
};

/// Parses one golden CSV (header design,alpha,beta_shape,q,k,a,zbar,xbar,t_h,z_h,x_h,s_h).
/// Throws ConfigError on a schema mismatch.
std::vector<GoldenRow> parse_golden_csv(std::string_view text, const std::string& source);
/// Reads a golden CSV file, or every *.csv in a directory (sorted by name).
std::vector<GoldenRow> load_golden(const std::filesystem::path& path);
/// The tables compiled into the binary.
const std::vector<GoldenRow>& embedded_golden();

struct GoldenTolerances {
  double two_decimals = 0.02;
  double three_decimals = 0.01;
  double enforced_t_h = 0.01;
};

struct CellDeviation {
  int design = 1;
  double alpha = 1.0;
  double beta_shape = 1.0;
  double q = 1.0;
  double k = 1.0;
  double a = 0.5;
  double zbar = 3.0;
  std::string column;
  double expected = 0.0;
  double actual = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool enforced = false;
  bool pass = true;
};

struct GoldenReport {
  // Cells that differ from the table beyond its rounding, plus every failure.
  std::vector<CellDeviation> cells;
  int compared_rows = 0;
  int enforced_failures = 0;
  bool ok() const { return enforced_failures == 0; }
};

/// z_h, x_h, s_h are enforced; t_h is reported only, except for the design 4
/// Beta(1,1), q = 1, a = 0 cell. Rows without a golden counterpart are skipped;
/// golden rows whose parameters appear twice throw ConfigError.
GoldenReport compare_golden(const std::vector<DesignRow>& rows,
                            const std::vector<GoldenRow>& golden,
                            const GoldenTolerances& tol = {});

void write_golden_report(std::ostream& out, const GoldenReport& report);

/// Writes (sweep variable, t_h) and (sweep variable, z_h) CSVs for every figure
/// panel of the table (one panel per design and shape, per a for design 4).
/// Design 5 has no figure and is skipped. Returns the files written.
std::vector<std::filesystem::path> emit_paths(const std::vector<DesignRow>& rows,
                                              const std::filesystem::path& dir);

/// Grid dump of the separating path: z, sigma(z), tau(sigma(z)), U(z), R(z).
void write_separating_dump(std::ostream& out, const ModelParams& p, const SenderDist& d,
                           double z_l, int points);

}  // namespace dopt
