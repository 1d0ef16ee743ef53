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


#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "pushforge/pushforge.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  pf_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(pf_version()).size() > 0);
  CHECK(std::string(pf_status_name(PF_OK)) == "ok");
  CHECK(std::string(pf_status_name(PF_ERR_BUDGET)) == "budget exceeded");
}

TEST_CASE("network lifecycle") {
  pf_network* t = nullptr;
  REQUIRE(pf_build_tent(2, &t) == PF_OK);
  pf_network_info info{};
  REQUIRE(pf_network_info_get(t, &info) == PF_OK);
  CHECK(info.input_dim == 1);
  CHECK(info.output_dim == 1);
  CHECK(info.layers == 2);
  CHECK(info.relu_step == 0);
  double x = 0.25, y = 0;
  REQUIRE(pf_network_eval(t, &x, 1, &y, 1) == PF_OK);
  CHECK(y == doctest::Approx(0.5));

  pf_network* t4 = nullptr;
  REQUIRE(pf_compose(t, t, &t4) == PF_OK);
  x = 0.125;
  REQUIRE(pf_network_eval(t4, &x, 1, &y, 1) == PF_OK);
  CHECK(y == doctest::Approx(0.5));

  const pf_network* both[] = {t, t4};
  pf_network* p = nullptr;
  REQUIRE(pf_parallel(both, 2, &p) == PF_OK);
  double xs[2] = {0.25, 0.125}, ys[2] = {0, 0};
  REQUIRE(pf_network_eval(p, xs, 2, ys, 2) == PF_OK);
  CHECK(ys[0] == doctest::Approx(0.5));
  CHECK(ys[1] == doctest::Approx(0.5));

  char* json = nullptr;
  REQUIRE(pf_network_to_json(t4, &json) == PF_OK);
  pf_network* back = nullptr;
  REQUIRE(pf_network_from_json(json, &back) == PF_OK);
  pf_string_free(json);
  REQUIRE(pf_network_eval(back, &x, 1, &y, 1) == PF_OK);
  CHECK(y == doctest::Approx(0.5));

  pf_network_free(back);
  pf_network_free(p);
  pf_network_free(t4);
  pf_network_free(t);
  pf_network_free(nullptr);
}

TEST_CASE("errors map to status codes") {
  pf_network* t = nullptr;
  REQUIRE(pf_build_tent(2, &t) == PF_OK);
  double x[2] = {0.1, 0.2}, y = 0;
  CHECK(pf_network_eval(t, x, 2, &y, 1) == PF_ERR_INPUT);
  CHECK(std::strlen(pf_last_error()) > 0);
  CHECK(pf_build_tent(0, nullptr) == PF_ERR_INPUT);
  pf_network* bad = nullptr;
  CHECK(pf_network_from_json("{", &bad) == PF_ERR_FORMAT);
  CHECK(bad == nullptr);
  pf_network* sf = nullptr;
  CHECK(pf_build_space_filling(1, 2, 4, 2, &sf, nullptr) == PF_ERR_INPUT);
  CHECK(std::string(pf_last_error()).find("N > dL") != std::string::npos);
  pf_network_free(t);
}

TEST_CASE("space filling and box coupling") {
  pf_network* net = nullptr;
  char* plan = nullptr;
  REQUIRE(pf_build_space_filling(1, 2, 20, 2, &net, &plan) == PF_OK);
  CHECK(take(plan).find("\"k\": 16") != std::string::npos);
  int ok = 0;
  REQUIRE(pf_box_coupling_check(1, 2, 20, 2, net, 3, &ok) == PF_OK);
  CHECK(ok == 1);
  pf_network* bad = nullptr;
  REQUIRE(pf_perturb_first_weight(net, 0.5, &bad) == PF_OK);
  REQUIRE(pf_box_coupling_check(1, 2, 20, 2, bad, 3, &ok) == PF_OK);
  CHECK(ok == 0);
  pf_network_free(bad);
  pf_network_free(net);
}

TEST_CASE("cdf and transport through the C API") {
  pf_network* t = nullptr;
  REQUIRE(pf_build_tent(3, &t) == PF_OK);
  pf_cdf* F = nullptr;
  REQUIRE(pf_pushforward_cdf(t, 0.0, 1.0, &F) == PF_OK);
  double v = 0;
  REQUIRE(pf_cdf_eval(F, 0.4, &v) == PF_OK);
  CHECK(v == doctest::Approx(0.4));
  const double px[2] = {0.5, 1.5}, pv[2] = {0.0, 1.0};
  pf_cdf* G = nullptr;
  REQUIRE(pf_cdf_from_points(px, pv, 2, &G) == PF_OK);
  double w = 0;
  REQUIRE(pf_wasserstein_1d(F, G, &w) == PF_OK);
  CHECK(w == doctest::Approx(0.5));

  char* csv = nullptr;
  REQUIRE(pf_cdf_to_csv(G, "note", &csv) == PF_OK);
  const std::string text = take(csv);
  CHECK(text.rfind("# note\n", 0) == 0);
  pf_cdf* H = nullptr;
  REQUIRE(pf_cdf_from_csv(text.c_str(), &H) == PF_OK);
  const double *hx = nullptr, *hv = nullptr;
  std::size_t hn = 0;
  REQUIRE(pf_cdf_points(H, &hx, &hv, &hn) == PF_OK);
  REQUIRE(hn == 2);
  CHECK(hx[1] == 1.5);

  const double zero = 0.0;
  pf_cdf* P = nullptr;
  REQUIRE(pf_empirical_cdf(&zero, 1, &P) == PF_OK);
  REQUIRE(pf_wasserstein_1d_normal(P, &w) == PF_OK);
  CHECK(w == doctest::Approx(std::sqrt(2.0 / M_PI)));

  double* samples = nullptr;
  REQUIRE(pf_sample_pushforward(t, PF_SOURCE_UNIFORM_STRATIFIED, 1, 0, 100, 1, &samples) ==
          PF_OK);
  char* scsv = nullptr;
  REQUIRE(pf_samples_to_csv(samples, 100, 1, "", &scsv) == PF_OK);
  double* parsed = nullptr;
  std::size_t count = 0, dim = 0;
  REQUIRE(pf_samples_from_csv(scsv, &parsed, &count, &dim) == PF_OK);
  CHECK(count == 100);
  CHECK(dim == 1);
  CHECK(parsed[17] == samples[17]);
  pf_string_free(scsv);
  pf_array_free(parsed);
  pf_array_free(samples);

  const double a[2] = {0.0, 1.0}, b[2] = {1.0, 0.0};
  REQUIRE(pf_empirical_wasserstein(a, b, 2, 1, &w) == PF_OK);
  CHECK(w == doctest::Approx(0.0));

  pf_cdf_free(P);
  pf_cdf_free(H);
  pf_cdf_free(G);
  pf_cdf_free(F);
  pf_network_free(t);
}

TEST_CASE("regions and breakpoints") {
  pf_network* t = nullptr;
  REQUIRE(pf_build_tent(4, &t) == PF_OK);
  const double lo = 0.0, hi = 1.0;
  std::size_t count = 0;
  char* regions = nullptr;
  REQUIRE(pf_enumerate_regions(t, &lo, &hi, 1, &count, &regions) == PF_OK);
  CHECK(count == 4);
  pf_string_free(regions);
  double* bp = nullptr;
  REQUIRE(pf_breakpoints_1d(t, 0.0, 1.0, &bp, &count) == PF_OK);
  CHECK(count == 5);
  CHECK(bp[2] == doctest::Approx(0.5));
  pf_array_free(bp);
  pf_network_free(t);
}

TEST_CASE("builders with certificates") {
  pf_network* phi = nullptr;
  char* cert = nullptr;
  REQUIRE(pf_build_normal_cdf(0.01, &phi, &cert) == PF_OK);
  CHECK(take(cert).find("\"target_eps\"") != std::string::npos);
  double x = 1.0, y = 0;
  REQUIRE(pf_network_eval(phi, &x, 1, &y, 1) == PF_OK);
  CHECK(std::abs(y - 0.841344746068543) <= 0.01);

  pf_network* id = nullptr;
  REQUIRE(pf_build_clamp(-10.0, 10.0, &id) == PF_OK);
  pf_network* inv = nullptr;
  REQUIRE(pf_build_inverter(id, 0.0, 1.0, 3, 1.0, 0.0, &inv, nullptr) == PF_OK);
  x = 0.3;
  REQUIRE(pf_network_eval(inv, &x, 1, &y, 1) == PF_OK);
  CHECK(y == doctest::Approx(0.3125));
  pf_network_info info{};
  REQUIRE(pf_network_info_get(inv, &info) == PF_OK);
  CHECK(info.relu_step == 1);
  pf_network* relu = nullptr;
  REQUIRE(pf_replace_steps(inv, 1e-9, &relu) == PF_OK);
  REQUIRE(pf_network_info_get(relu, &info) == PF_OK);
  CHECK(info.step_units == 0);

  pf_network* g = nullptr;
  REQUIRE(pf_build_analytic("exp", -1.0, 1.0, 1e-3, 0.0, &g, nullptr) == PF_OK);
  x = 0.5;
  REQUIRE(pf_network_eval(g, &x, 1, &y, 1) == PF_OK);
  CHECK(std::abs(y - std::exp(0.5)) <= 1e-3);
  CHECK(pf_build_analytic("tan", -1.0, 1.0, 1e-3, 0.0, &g, nullptr) == PF_ERR_INPUT);

  pf_network_free(g);
  pf_network_free(relu);
  pf_network_free(inv);
  pf_network_free(id);
  pf_network_free(phi);
}

TEST_CASE("bounds through the C API") {
  double v = 0;
  REQUIRE(pf_tent_upper_bound(20, 2, 1, 2, &v) == PF_OK);
  CHECK(v == doctest::Approx(std::sqrt(2.0) / 64.0));
  CHECK(pf_tent_upper_bound(4, 2, 1, 2, &v) == PF_ERR_INPUT);
  REQUIRE(pf_affine_piece_bound(10, 0, 1, &v) == PF_OK);
  CHECK(v == 1.0);
  REQUIRE(pf_plane_distance_bound(1, 2, 1.0, M_PI, &v) == PF_OK);
  CHECK(v == doctest::Approx(M_PI / 8.0));
  char* report = nullptr;
  REQUIRE(pf_bound_report(4, 2, 1, 2, &report) == PF_OK);
  CHECK(take(report).find("skipped") != std::string::npos);
}

TEST_CASE("lab and verify through the C API") {
  char* defaults = nullptr;
  REQUIRE(pf_experiment_defaults(&defaults) == PF_OK);
  CHECK(take(defaults).find("berry-esseen") != std::string::npos);
  char *csv = nullptr, *svg = nullptr;
  REQUIRE(pf_run_experiment(R"({"experiment": "bounds", "grid": {"N": [20], "L": [2], "n": [1], "d": [2]}})",
                            1, 3, 1, nullptr, 0, &csv, &svg) == PF_OK);
  CHECK(take(csv).find("tent_upper") != std::string::npos);
  pf_string_free(svg);
  CHECK(pf_run_experiment("{", 0, 0, 0, nullptr, 0, &csv, &svg) == PF_ERR_FORMAT);

  pf_verify_options opt;
  pf_verify_options_init(&opt);
  const int only[] = {1};
  opt.only = only;
  opt.only_count = 1;
  int all = 0;
  char *report = nullptr, *lines = nullptr, *numeric = nullptr;
  REQUIRE(pf_verify(&opt, &all, &report, &lines, &numeric) == PF_OK);
  CHECK(all == 1);
  CHECK(take(lines).find("criterion 1") != std::string::npos);
  pf_string_free(report);
  pf_string_free(numeric);
}
