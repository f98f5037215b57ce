#include "dopt/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace dopt {
namespace detail {
// Generated at configure time from data/golden/*.csv.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_golden_sources();
}  // namespace detail

namespace {

using nlohmann::json;

double number_field(const json& obj, const char* key, double fallback, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) {
    throw ConfigError(std::string("config: ") + where + key + " must be a number");
  }
  return it->get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const char* where) {
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return item.key() == k; });
    if (!ok) throw ConfigError(std::string("config: unknown key ") + where + item.key());
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Re-throws a solver error with the failing row's parameters in front.
[[noreturn]] void rethrow_annotated(const DesignCase& c) {
  std::ostringstream ctx;
  ctx << "design " << c.design << " Beta(" << c.shape.alpha << "," << c.shape.beta_shape
      << ") q=" << c.params.q << " k=" << c.params.k << " a=" << c.params.a << " zbar=" << c.zbar
      << ": ";
  try {
    throw;
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(ctx.str() + e.what());
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(ctx.str() + e.what());
  } catch (const DomainError& e) {
    throw DomainError(ctx.str() + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(ctx.str() + e.what());
  }
}

bool same(double x, double y) { return std::abs(x - y) <= 1e-6; }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

double parse_double(std::string_view s, const std::string& where) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(where + ": not a number '" + std::string(s) + "'");
  }
  return v;
}

int decimals_of(std::string_view s) {
  s = trim(s);
  const auto dot = s.find('.');
  return dot == std::string_view::npos ? 0 : static_cast<int>(s.size() - dot - 1);
}

constexpr std::string_view kGoldenHeader = "design,alpha,beta_shape,q,k,a,zbar,xbar,t_h,z_h,x_h,s_h";

bool enforced_t_h_cell(const GoldenRow& g) {
  return g.design == 4 && same(g.alpha, 1.0) && same(g.beta_shape, 1.0) && same(g.q, 1.0) &&
         same(g.a, 0.0);
}

std::string sweep_variable(int design) {
  switch (design) {
    case 1:
      return "zbar";
    case 2:
      return "k";
    default:
      return "q";
  }
}

double sweep_value(const DesignRow& r) {
  switch (r.design) {
    case 1:
      return r.zbar;
    case 2:
      return r.k;
    default:
      return r.q;
  }
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, {"A", "beta", "a", "k", "q", "dist", "optimizer"}, "");

  RunConfig c;
  c.params.A = number_field(j, "A", c.params.A, "");
  c.params.beta_cost = number_field(j, "beta", c.params.beta_cost, "");
  c.params.a = number_field(j, "a", c.params.a, "");
  c.params.k = number_field(j, "k", c.params.k, "");
  c.params.q = number_field(j, "q", c.params.q, "");
  c.params.validate();

  if (const auto it = j.find("dist"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("config: dist must be an object");
    reject_unknown(*it, {"alpha", "beta", "zbar"}, "dist.");
    c.alpha = number_field(*it, "alpha", c.alpha, "dist.");
    c.beta_shape = number_field(*it, "beta", c.beta_shape, "dist.");
    c.zbar = number_field(*it, "zbar", c.zbar, "dist.");
  }
  (void)c.dist();  // validates the shape parameters

  if (const auto it = j.find("optimizer"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("config: optimizer must be an object");
    reject_unknown(*it, {"grid", "tol", "method", "threads"}, "optimizer.");
    const double grid = number_field(*it, "grid", c.optimizer.grid, "optimizer.");
    if (grid != std::floor(grid) || grid < 3 || grid > 100000) {
      throw ConfigError("config: optimizer.grid must be an integer >= 3");
    }
    c.optimizer.grid = static_cast<int>(grid);
    c.optimizer.tol = number_field(*it, "tol", c.optimizer.tol, "optimizer.");
    if (!(c.optimizer.tol > 0.0)) throw ConfigError("config: optimizer.tol must be positive");
    const double threads = number_field(*it, "threads", c.optimizer.threads, "optimizer.");
    if (threads != std::floor(threads) || threads < 1 || threads > 1024) {
      throw ConfigError("config: optimizer.threads must be a positive integer");
    }
    c.optimizer.threads = static_cast<int>(threads);
    if (const auto m = it->find("method"); m != it->end()) {
      if (!m->is_string()) throw ConfigError("config: optimizer.method must be a string");
      c.optimizer.method = parse_refine_method(m->get<std::string>());
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string thresholds_json(const Thresholds& th, const SurplusBreakdown& surplus) {
  json j;
  j["thresholds"] = {{"z_l", th.z_l}, {"z_h", th.z_h}, {"s_l", th.s_l}, {"s_h", th.s_h},
                     {"t_l", th.t_l}, {"t_h", th.t_h}, {"x_h", th.x_h},
                     {"class", std::string(to_string(th.cls))}};
  j["surplus"] = {{"separating_part", surplus.separating_part},
                  {"pooling_part", surplus.pooling_part},
                  {"total", surplus.total},
                  {"z_l", surplus.z_l},
                  {"z_h", surplus.z_h}};
  return j.dump(2);
}

std::string outcome_json(const DelegationOutcome& o, const RunConfig& c) {
  json j = json::parse(thresholds_json(o.thresholds, o.surplus));
  j["interval"] = {o.t_low, o.t_high};
  j["pi_s"] = o.pi_s;
  j["percentile_zh"] = o.percentile_zh;
  const auto& dg = o.diagnostics;
  j["diagnostics"] = {{"grid", dg.grid},
                      {"grid_evaluations", dg.grid_evaluations},
                      {"refine_evaluations", dg.refine_evaluations},
                      {"method", dg.method},
                      {"grid_best", number_or_null(dg.grid_best)},
                      {"grid_best_z_l", dg.grid_best_z_l},
                      {"grid_best_z_h", dg.grid_best_z_h},
                      {"tie", dg.tie},
                      {"flat_objective", dg.flat_objective},
                      {"warnings", dg.warnings}};
  j["config"] = {{"A", c.params.A},
                 {"beta", c.params.beta_cost},
                 {"a", c.params.a},
                 {"k", c.params.k},
                 {"q", c.params.q},
                 {"dist", {{"alpha", c.alpha}, {"beta", c.beta_shape}, {"zbar", c.zbar}}},
                 {"optimizer", {{"grid", c.optimizer.grid}, {"tol", c.optimizer.tol}}}};
  return j.dump(2);
}

const std::vector<BetaShape>& design_shapes() {
  static const std::vector<BetaShape> shapes{{1, 1}, {5, 5}, {3, 5}, {5, 3}};
  return shapes;
}

BetaShape parse_shape(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("shape must look like 'alpha,beta'");
  BetaShape s{parse_double(parts[0], "shape"), parse_double(parts[1], "shape")};
  if (!(s.alpha > 0.0 && s.beta_shape > 0.0)) throw ConfigError("shape parameters must be positive");
  return s;
}

std::vector<DesignCase> design_cases(int design, const BetaShape& shape) {
  std::vector<DesignCase> cases;
  // Sweep values are built from integers so that 1.2 is the same double on every row.
  auto tenth = [](int n) { return n / 10.0; };
  DesignCase base;
  base.design = design;
  base.shape = shape;
  switch (design) {
    case 1:
      for (int i = 0; i <= 10; ++i) {
        DesignCase c = base;
        c.zbar = tenth(10 + 2 * i);
        cases.push_back(c);
      }
      break;
    case 2:
      for (int i = 0; i <= 10; ++i) {
        DesignCase c = base;
        c.params.k = tenth(10 + 2 * i);
        cases.push_back(c);
      }
      break;
    case 3:
      for (int i = 0; i <= 10; ++i) {
        DesignCase c = base;
        c.params.q = tenth(10 + i);
        cases.push_back(c);
      }
      break;
    case 4:
      for (int a : {0, 3, 6, 9})
        for (int i = 0; i <= 10; ++i) {
          DesignCase c = base;
          c.params.a = tenth(a);
          c.params.q = tenth(10 + i);
          cases.push_back(c);
        }
      break;
    case 5:
      for (BetaShape s : {BetaShape{3, 5}, BetaShape{5, 5}, BetaShape{5, 3}}) {
        DesignCase c = base;
        c.shape = s;
        cases.push_back(c);
      }
      break;
    default:
      throw ConfigError("design must be between 1 and 5");
  }
  return cases;
}

DesignRow run_case(const DesignCase& c, const OptimizerOptions& opts) {
  try {
    const SenderDist d(c.shape.alpha, c.shape.beta_shape, c.zbar);
    const DelegationOutcome o = optimize(c.params, d, opts);
    DesignRow r;
    r.design = c.design;
    r.alpha = c.shape.alpha;
    r.beta_shape = c.shape.beta_shape;
    r.q = c.params.q;
    r.k = c.params.k;
    r.a = c.params.a;
    r.zbar = c.zbar;
    r.xbar = match_n(c.params, c.zbar);
    r.t_l = o.t_low;
    r.t_h = o.t_high;
    r.z_l = o.thresholds.z_l;
    r.z_h = o.thresholds.z_h;
    r.x_h = o.thresholds.x_h;
    r.s_h = o.thresholds.s_h;
    r.pi_w = o.surplus.total;
    r.pi_s = o.pi_s;
    r.cls = o.thresholds.cls;
    r.percentile_zh = o.percentile_zh;
    r.warnings = o.diagnostics.warnings;
    return r;
  } catch (...) {
    rethrow_annotated(c);
  }
}

std::vector<DesignRow> run_design(const std::vector<DesignCase>& cases,
                                  const OptimizerOptions& opts, int threads) {
  std::vector<DesignRow> rows(cases.size());
  const int n = static_cast<int>(cases.size());
  const int workers = std::clamp(threads, 1, std::max(n, 1));
  std::vector<std::exception_ptr> errors(cases.size());
  auto work = [&](int w) {
    for (int i = w; i < n; i += workers) {
      try {
        rows[i] = run_case(cases[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  // The first failure in sweep order wins, whatever the thread timing.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::vector<std::string> check_row(const DesignRow& r) {
  std::vector<std::string> bad;
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y));
  };
  const ModelParams p{1.0, 0.5, r.a, r.k, r.q};
  if (!close(r.xbar, match_n(p, r.zbar))) bad.push_back("xbar != k zbar^q");
  if (!close(r.x_h, match_n(p, r.z_h))) bad.push_back("x_h != k z_h^q");
  if (r.z_l != 0.0) bad.push_back("z_l = " + format_number(r.z_l) + " is not 0");
  if (r.t_l != 0.0) bad.push_back("t_l = " + format_number(r.t_l) + " is not 0");
  if (r.t_h < r.t_l) bad.push_back("t_h below t_l");
  return bad;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

void write_design_csv(std::ostream& out, const std::vector<DesignRow>& rows) {
  out << "design,alpha,beta_shape,q,k,a,zbar,xbar,t_l,t_h,z_l,z_h,x_h,s_h,pi_w,pi_s,class,"
         "percentile_zh\n";
  for (const auto& r : rows) {
    out << r.design;
    for (double v : {r.alpha, r.beta_shape, r.q, r.k, r.a, r.zbar, r.xbar, r.t_l, r.t_h, r.z_l,
                     r.z_h, r.x_h, r.s_h, r.pi_w, r.pi_s})
      out << ',' << format_number(v);
    out << ',' << to_string(r.cls) << ',' << format_number(r.percentile_zh) << '\n';
  }
}

std::vector<GoldenRow> parse_golden_csv(std::string_view text, const std::string& source) {
  std::vector<GoldenRow> rows;
  const auto lines = split(text, '\n');
  bool header_seen = false;
  int line_no = 0;
  for (std::string_view raw : lines) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kGoldenHeader) {
        throw ConfigError(source + ": schema mismatch, expected header '" +
                          std::string(kGoldenHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const std::string where = source + ":" + std::to_string(line_no);
    const auto f = split(line, ',');
    if (f.size() != 12) throw ConfigError(where + ": expected 12 fields");
    GoldenRow g;
    const double design = parse_double(f[0], where);
    if (design != std::floor(design) || design < 1 || design > 5) {
      throw ConfigError(where + ": design must be 1..5");
    }
    g.design = static_cast<int>(design);
    double* targets[] = {&g.alpha, &g.beta_shape, &g.q, &g.k, &g.a, &g.zbar,
                         &g.xbar,  &g.t_h,        &g.z_h, &g.x_h, &g.s_h};
    for (std::size_t i = 0; i < 11; ++i) *targets[i] = parse_double(f[i + 1], where);
    g.decimals = std::max({decimals_of(f[9]), decimals_of(f[10]), decimals_of(f[11])});
    rows.push_back(g);
  }
  if (!header_seen) throw ConfigError(source + ": empty golden table");
  return rows;
}

std::vector<GoldenRow> load_golden(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<GoldenRow> rows;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw ConfigError("golden: cannot open " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const auto part = parse_golden_csv(buf.str(), file.filename().string());
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

const std::vector<GoldenRow>& embedded_golden() {
  static const std::vector<GoldenRow> rows = [] {
    std::vector<GoldenRow> all;
    for (const auto& [name, text] : detail::embedded_golden_sources()) {
      const auto part = parse_golden_csv(text, std::string(name));
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }();
  return rows;
}

GoldenReport compare_golden(const std::vector<DesignRow>& rows,
                            const std::vector<GoldenRow>& golden, const GoldenTolerances& tol) {
  auto matches = [](const DesignRow& r, const GoldenRow& g) {
    return r.design == g.design && same(r.alpha, g.alpha) && same(r.beta_shape, g.beta_shape) &&
           same(r.q, g.q) && same(r.k, g.k) && same(r.a, g.a) && same(r.zbar, g.zbar);
  };
  GoldenReport report;
  for (const auto& r : rows) {
    const GoldenRow* hit = nullptr;
    for (const auto& g : golden) {
      if (!matches(r, g)) continue;
      if (hit) throw ConfigError("golden: duplicate rows for one parameter set");
      hit = &g;
    }
    if (!hit) continue;
    ++report.compared_rows;
    const GoldenRow& g = *hit;
    const double rounding = 0.5 * std::pow(10.0, -g.decimals) + 1e-12;
    const double cell_tol = g.decimals >= 3 ? tol.three_decimals : tol.two_decimals;

    auto add = [&](const char* column, double expected, double actual, bool enforced,
                   double tolerance) {
      CellDeviation c;
      c.design = g.design;
      c.alpha = g.alpha;
      c.beta_shape = g.beta_shape;
      c.q = g.q;
      c.k = g.k;
      c.a = g.a;
      c.zbar = g.zbar;
      c.column = column;
      c.expected = expected;
      c.actual = actual;
      c.deviation = std::abs(actual - expected);
      c.enforced = enforced;
      c.tolerance = enforced ? tolerance : 0.0;
      c.pass = !enforced || c.deviation <= tolerance + 1e-12;
      if (!c.pass) ++report.enforced_failures;
      if (!c.pass || c.deviation > rounding) report.cells.push_back(c);
    };
    add("z_h", g.z_h, r.z_h, true, cell_tol);
    add("x_h", g.x_h, r.x_h, true, cell_tol);
    add("s_h", g.s_h, r.s_h, true, cell_tol);
    const bool th_enforced = enforced_t_h_cell(g);
    add("t_h", g.t_h, r.t_h, th_enforced, tol.enforced_t_h);
  }
  return report;
}

void write_golden_report(std::ostream& out, const GoldenReport& report) {
  out << "design,alpha,beta_shape,q,k,a,zbar,column,expected,actual,deviation,tolerance,status\n";
  for (const auto& c : report.cells) {
    const char* status = !c.enforced ? "info" : (c.pass ? "pass" : "FAIL");
    out << c.design;
    for (double v : {c.alpha, c.beta_shape, c.q, c.k, c.a, c.zbar}) out << ',' << format_number(v);
    out << ',' << c.column;
    for (double v : {c.expected, c.actual, c.deviation, c.tolerance})
      out << ',' << format_number(v);
    out << ',' << status << '\n';
  }
}

std::vector<std::filesystem::path> emit_paths(const std::vector<DesignRow>& rows,
                                              const std::filesystem::path& dir) {
  using Key = std::tuple<int, double, double, double>;
  std::map<Key, std::vector<const DesignRow*>> panels;
  for (const auto& r : rows) {
    if (r.design == 5) continue;
    panels[{r.design, r.alpha, r.beta_shape, r.design == 4 ? r.a : -1.0}].push_back(&r);
  }
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (auto& [key, members] : panels) {
    const auto& [design, alpha, beta_shape, a] = key;
    std::stable_sort(members.begin(), members.end(), [](const DesignRow* x, const DesignRow* y) {
      return sweep_value(*x) < sweep_value(*y);
    });
    std::string stem = "design" + std::to_string(design) + "_beta_" + format_number(alpha) + "_" +
                       format_number(beta_shape);
    if (design == 4) stem += "_a" + format_number(a);
    const std::string var = sweep_variable(design);
    for (const char* column : {"t_h", "z_h"}) {
      const auto file = dir / (stem + "_" + column + ".csv");
      std::ofstream out(file, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + file.string());
      out << var << ',' << column << '\n';
      for (const DesignRow* r : members) {
        const double v = std::string_view(column) == "t_h" ? r->t_h : r->z_h;
        out << format_number(sweep_value(*r)) << ',' << format_number(v) << '\n';
      }
      if (!out) throw std::runtime_error("write failed: " + file.string());
      written.push_back(file);
    }
  }
  return written;
}

void write_separating_dump(std::ostream& out, const ModelParams& p, const SenderDist& d,
                           double z_l, int points) {
  if (points < 2) throw ConfigError("separating dump needs at least 2 points");
  const SeparatingPath path = make_path(p, d, z_l);
  out << "z,sigma,tau,sender_rent,receiver_rent\n";
  for (int i = 0; i < points; ++i) {
    const double z = i == points - 1 ? d.zbar() : z_l + (d.zbar() - z_l) * i / (points - 1);
    const double s = path.sigma(z);
    out << format_number(z) << ',' << format_number(s) << ',' << format_number(path.tau(s)) << ','
        << format_number(path.sender_rent(z)) << ',' << format_number(path.receiver_rent(z))
        << '\n';
  }
}

}  // namespace dopt
