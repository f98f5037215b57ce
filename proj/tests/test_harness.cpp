#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dopt/harness.hpp"

using namespace dopt;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

DesignRow row_from(const GoldenRow& g) {
  DesignRow r;
  r.design = g.design;
  r.alpha = g.alpha;
  r.beta_shape = g.beta_shape;
  r.q = g.q;
  r.k = g.k;
  r.a = g.a;
  r.zbar = g.zbar;
  r.xbar = g.xbar;
  r.t_h = g.t_h;
  r.z_h = g.z_h;
  r.x_h = g.x_h;
  r.s_h = g.s_h;
  return r;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(
      R"({"A":1,"beta":0.5,"a":0.3,"k":2,"q":1.5,"dist":{"alpha":3,"beta":5,"zbar":2.5},)"
      R"("optimizer":{"grid":31,"tol":1e-7,"method":"nelder-mead","threads":2}})");
  CHECK(c.params.a == 0.3);
  CHECK(c.params.k == 2.0);
  CHECK(c.params.q == 1.5);
  CHECK(c.alpha == 3.0);
  CHECK(c.beta_shape == 5.0);
  CHECK(c.zbar == 2.5);
  CHECK(c.optimizer.grid == 31);
  CHECK(c.optimizer.tol == 1e-7);
  CHECK(c.optimizer.method == RefineMethod::NelderMead);
  CHECK(c.optimizer.threads == 2);

  const RunConfig defaults = parse_config("{}");
  CHECK(defaults.params.beta_cost == 0.5);
  CHECK(defaults.zbar == 3.0);
  CHECK(defaults.optimizer.grid == 61);

  for (const char* bad : {"{", "[]", R"({"a":1.2})", R"({"A":"one"})", R"({"gamma":1})",
                          R"({"dist":{"alpha":0}})", R"({"dist":{"zbar":-1}})",
                          R"({"optimizer":{"grid":2.5}})", R"({"optimizer":{"tol":0}})",
                          R"({"optimizer":{"method":"simplex"}})", R"({"dist":{"mu":1}})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("design sweeps") {
  CHECK(design_cases(1, {1, 1}).size() == 11);
  CHECK(design_cases(2, {5, 5}).size() == 11);
  CHECK(design_cases(3, {3, 5}).size() == 11);
  CHECK(design_cases(4, {5, 3}).size() == 44);
  CHECK(design_cases(5, {1, 1}).size() == 3);
  CHECK_THROWS_AS(design_cases(6, {1, 1}), ConfigError);
  const auto d1 = design_cases(1, {1, 1});
  CHECK(d1.front().zbar == 1.0);
  CHECK(d1[1].zbar == 1.2);
  CHECK(d1.back().zbar == 3.0);
  const auto d4 = design_cases(4, {1, 1});
  CHECK(d4[11].params.a == 0.3);
  CHECK(d4[11].params.q == 1.0);
  CHECK(d4[12].params.q == 1.1);
  CHECK(d4.back().params.a == 0.9);
  CHECK(d4.back().params.q == 2.0);
  const auto d5 = design_cases(5, {1, 1});
  CHECK(d5[0].shape.alpha == 3.0);
  CHECK(d5[2].shape.beta_shape == 3.0);
  CHECK(parse_shape("5,3").alpha == 5.0);
  CHECK_THROWS_AS(parse_shape("5"), ConfigError);
  CHECK_THROWS_AS(parse_shape("0,1"), ConfigError);
}

TEST_CASE("individual rows") {
  const auto d1 = design_cases(1, {1, 1});
  const DesignRow r = run_case(d1[5], OptimizerOptions{});
  CHECK(r.zbar == 2.0);
  CHECK(r.z_h == doctest::Approx(1.17).epsilon(0.02 / 1.17));
  CHECK(r.s_h == doctest::Approx(2.10).epsilon(0.02 / 2.10));
  CHECK(r.x_h == doctest::Approx(1.17).epsilon(0.02 / 1.17));
  CHECK(check_row(r).empty());

  const DesignRow q12 = run_case(design_cases(3, {1, 1})[2], OptimizerOptions{});
  CHECK(q12.z_h == doctest::Approx(1.89).epsilon(0.02 / 1.89));
  CHECK(q12.s_h == doctest::Approx(5.62).epsilon(0.03 / 5.62));
  CHECK(q12.xbar == doctest::Approx(3.74).epsilon(0.005 / 3.74));

  const DesignRow fsd = run_case(design_cases(5, {})[0], OptimizerOptions{});
  CHECK(fsd.z_h == doctest::Approx(1.620).epsilon(0.01 / 1.62));
  CHECK(fsd.s_h == doctest::Approx(3.367).epsilon(0.02 / 3.367));
  CHECK(fsd.x_h == doctest::Approx(1.620).epsilon(0.01 / 1.62));

  DesignRow broken = r;
  broken.x_h += 0.1;
  broken.z_l = 0.2;
  CHECK(check_row(broken).size() == 2);
}

TEST_CASE("number formatting is locale free and stable") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2e-9) == "2e-09");
  CHECK(format_number(12345678.0) == "12345678");
}

TEST_CASE("embedded golden tables") {
  const auto& g = embedded_golden();
  CHECK(g.size() == 4 * (11 + 11 + 11 + 44) + 3);
  int three_dp = 0;
  for (const auto& row : g) three_dp += row.decimals == 3 ? 1 : 0;
  CHECK(three_dp == 3);
  CHECK_THROWS_AS(parse_golden_csv("design,alpha\n1,2\n", "bad.csv"), ConfigError);
  CHECK_THROWS_AS(parse_golden_csv("design,alpha,beta_shape,q,k,a,zbar,xbar,t_h,z_h,x_h,s_h\n1,1,1\n", "short.csv"),
                  ConfigError);
}

TEST_CASE("golden comparison") {
  const auto& golden = embedded_golden();
  std::vector<DesignRow> rows;
  for (const auto& g : golden) rows.push_back(row_from(g));

  const GoldenReport same = compare_golden(rows, golden);
  CHECK(same.ok());
  CHECK(same.cells.empty());
  CHECK(same.compared_rows == static_cast<int>(golden.size()));

  std::vector<DesignRow> off = rows;
  off[3].z_h += 0.05;
  const GoldenReport bad = compare_golden(off, golden);
  CHECK_FALSE(bad.ok());
  CHECK(bad.enforced_failures == 1);
  REQUIRE(bad.cells.size() == 1);
  CHECK(bad.cells[0].column == "z_h");

  std::vector<DesignRow> caps = rows;
  caps[0].t_h *= 2.0;  // design 1 row with a = 0.5
  const GoldenReport info = compare_golden(caps, golden);
  CHECK(info.ok());
  REQUIRE(info.cells.size() == 1);
  CHECK_FALSE(info.cells[0].enforced);

  // The one cap that is enforced.
  std::vector<DesignRow> cell = rows;
  for (auto& r : cell)
    if (r.design == 4 && r.alpha == 1 && r.beta_shape == 1 && r.q == 1 && r.a == 0) r.t_h += 0.02;
  CHECK_FALSE(compare_golden(cell, golden).ok());

  std::ostringstream out;
  write_golden_report(out, bad);
  CHECK(out.str().find("FAIL") != std::string::npos);
}

TEST_CASE("plot paths and CSV output") {
  std::vector<DesignRow> rows;
  for (int i = 0; i < 3; ++i) {
    DesignRow r;
    r.design = 2;
    r.k = 3.0 - i;  // deliberately out of order
    r.t_h = 10.0 - i;
    r.z_h = 1.75;
    rows.push_back(r);
  }
  const auto dir = std::filesystem::temp_directory_path() / "dopt_paths_test";
  std::filesystem::remove_all(dir);
  const auto files = emit_paths(rows, dir);
  REQUIRE(files.size() == 2);
  CHECK(read_file(dir / "design2_beta_1_1_t_h.csv") == "k,t_h\n1,8\n2,9\n3,10\n");
  CHECK(read_file(dir / "design2_beta_1_1_z_h.csv") == "k,z_h\n1,1.75\n2,1.75\n3,1.75\n");
  std::filesystem::remove_all(dir);

  std::ostringstream a, b;
  write_design_csv(a, rows);
  write_design_csv(b, rows);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("design,alpha,beta_shape,q,k,a,zbar,xbar,t_l,t_h,z_l,z_h,x_h,s_h,pi_w,pi_s,class,percentile_zh\n", 0) == 0);
}

TEST_CASE("separating dump") {
  std::ostringstream out;
  write_separating_dump(out, ModelParams{}, SenderDist(1, 1, 3.0), 0.0, 4);
  CHECK(out.str() ==
        "z,sigma,tau,sender_rent,receiver_rent\n"
        "0,0,0,0,0\n"
        "1,1,0.666666666667,0.166666666667,0.333333333333\n"
        "2,4,5.33333333333,1.33333333333,2.66666666667\n"
        "3,9,18,4.5,9\n");
}
