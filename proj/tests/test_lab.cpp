// Copyright 2026 The pushforge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "builders.hpp"
#include "doctest.h"
#include "lab.hpp"
#include "report.hpp"

using namespace pushforge;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  fs::path p = fs::temp_directory_path() / ("pushforge_" + tag + "_" + std::to_string(stamp));
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_tent_config(unsigned jobs) {
  ExperimentConfig c;
  c.kind = "sweep-tent";
  c.N = {4, 12, 20, 36};
  c.L = {2};
  c.n = {1};
  c.d = {2};
  c.samples = {400};
  c.seed = 5;
  c.jobs = jobs;
  return c;
}

}  // namespace

TEST_CASE("fmt round trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    CHECK(std::stod(fmt(v)) == v);
  }
  CHECK(fmt(42) == "42");
}

TEST_CASE("csv quoting and round trip") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  Table t;
  t.columns = {"name", "value"};
  t.comments = {"seed=1"};
  t.add_row({"a,b", "1.5"});
  t.add_row({"q\"x", "2"});
  t.add_row({"multi\nline", "-3"});
  const std::string text = to_csv(t);
  CHECK(text.rfind("# seed=1\n", 0) == 0);
  const Table back = parse_csv(text);
  CHECK(back.columns == t.columns);
  CHECK(back.rows == t.rows);
  CHECK(back.comments == t.comments);
  CHECK(back.numeric_column("value") == std::vector<double>{1.5, 2, -3});
  CHECK_THROWS_AS(t.column("missing"), Error);
  CHECK(parse_csv("a,b\r\n1,2\r\n").rows.at(0).at(1) == "2");
  try {
    parse_csv("a,b\n1,\"open\n");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kFormat);
  }
  CHECK_THROWS_AS(t.add_row({"only one"}), Error);
}

TEST_CASE("svg plot") {
  const std::string svg = svg_loglog("title", "N", "W", {{"emd", {1, 10, 100}, {1, 0.1, 0.0}}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("emd") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("config parsing and defaults") {
  const ExperimentConfig c = config_from_json(
      R"({"experiment": "sweep-phi", "seed": 9, "grid": {"eps": [0.1, 0.01]},
          "tolerances": {"slack": 0.1}})");
  CHECK(c.kind == "sweep-phi");
  CHECK(c.seed == 9);
  CHECK(c.eps == std::vector<double>{0.1, 0.01});
  CHECK(c.tolerance("slack", 0.0) == 0.1);
  CHECK(c.tolerance("other", 0.5) == 0.5);
  const ExperimentConfig back = config_from_json(to_json(c));
  CHECK(back.eps == c.eps);
  CHECK(back.seed == c.seed);

  const ExperimentConfig d = with_defaults(config_from_json(R"({"experiment": "bounds"})"));
  CHECK(d.seed == kDefaultSeed);
  CHECK(!d.N.empty());
  CHECK_NOTHROW(d.validate());

  ExperimentConfig e = default_config("sweep-tent");
  e.N.clear();
  CHECK_THROWS_AS(e.validate(), Error);
  ExperimentConfig u;
  u.kind = "no-such";
  CHECK_THROWS_AS(u.validate(), Error);
  CHECK_THROWS_AS(config_from_json("[1, 2]"), Error);
  CHECK_THROWS_AS(config_from_json(R"({"grid": {"N": "x"}})"), Error);
  CHECK(describe_defaults().find("sweep-tent") != std::string::npos);
}

TEST_CASE("sweeps are deterministic across job counts") {
  const ExperimentOutput a = run_experiment(small_tent_config(1));
  const ExperimentOutput b = run_experiment(small_tent_config(2));
  CHECK(to_csv(a.table) == to_csv(b.table));
  CHECK(a.svg == b.svg);
  REQUIRE(a.table.rows.size() == 4);
  const std::size_t status = a.table.column("status");
  CHECK(a.table.rows[0][status] == "skipped:N≤dL");
  const std::size_t emd = a.table.column("emd");
  const std::size_t sandwich = a.table.column("sandwich");
  double prev = INFINITY;
  for (std::size_t i = 1; i < a.table.rows.size(); ++i) {
    CHECK(a.table.rows[i][status] == "ok");
    CHECK(a.table.rows[i][sandwich] == "pass");
    const double w = std::stod(a.table.rows[i][emd]);
    CHECK(w <= prev);
    prev = w;
  }
  ExperimentConfig other = small_tent_config(1);
  other.seed = 6;
  CHECK(to_csv(run_experiment(other).table) != to_csv(a.table));
}

TEST_CASE("bounds experiment table") {
  ExperimentConfig c;
  c.kind = "bounds";
  c.N = {4, 20};
  c.L = {2};
  c.n = {1};
  c.d = {2};
  const ExperimentOutput out = run_experiment(c);
  REQUIRE(out.table.rows.size() == 2);
  const auto upper = out.table.numeric_column("tent_upper");
  CHECK(upper[1] == doctest::Approx(std::sqrt(2.0) / 64.0));
}

TEST_CASE("experiment output is written once") {
  const fs::path dir = fresh_dir("write");
  ExperimentConfig c = small_tent_config(1);
  c.N = {12};
  c.out_dir = dir.string();
  const ExperimentOutput out = run_experiment(c);
  const auto files = write_experiment(c, out);
  CHECK(files.size() == 2);
  CHECK(fs::exists(dir / "sweep-tent.csv"));
  CHECK(fs::exists(dir / "sweep-tent.svg"));
  std::ifstream in(dir / "sweep-tent.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(parse_csv(ss.str()).rows == out.table.rows);
  try {
    write_experiment(c, out);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
  fs::remove_all(dir);
}

TEST_CASE("fault hook flips only the targeted criterion") {
  VerifyOptions opt;
  opt.check_timing = false;
  CHECK(run_criterion(1, opt).pass);
  CHECK(run_criterion(3, opt).pass);
  opt.fault_criterion = 1;
  CHECK_FALSE(run_criterion(1, opt).pass);
  CHECK(run_criterion(3, opt).pass);
  opt.fault_criterion = 3;
  CHECK(run_criterion(1, opt).pass);
  CHECK_FALSE(run_criterion(3, opt).pass);
  CHECK_THROWS_AS(run_criterion(11, opt), Error);
}

TEST_CASE("verify summaries") {
  VerifyOptions opt;
  opt.only = {1};
  const auto results = run_verify(opt);
  REQUIRE(results.size() == 1);
  const std::string line = format_line(results[0]);
  CHECK(line.rfind("criterion 1 [", 0) == 0);
  CHECK(line.find(results[0].pass ? "PASS" : "FAIL") != std::string::npos);
  const std::string summary = numeric_summary(results);
  CHECK(summary == numeric_summary(run_verify(opt)));
  CHECK(summary.find("s/") == std::string::npos);  // no timings
  CHECK(verify_json(results, opt).find("\"criteria\"") != std::string::npos);
}

TEST_CASE("perturb first weight") {
  const Network t = tent_map_net(2);
  const Network p = perturb_first_weight(t, 0.5);
  CHECK(p.layers()[0].weights[0] == t.layers()[0].weights[0] + 0.5);
  CHECK(p.eval1(0.25) != t.eval1(0.25));
}
