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


// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pushforge/pushforge.h"

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 20260101;

struct Failure {
  int code;
  std::string message;
};

int exit_code(pf_status s) { return s == PF_ERR_INPUT ? 2 : 3; }

void check(pf_status s, const std::string& what) {
  if (s != PF_OK) throw Failure{exit_code(s), what + ": " + pf_last_error()};
}

struct NetDeleter {
  void operator()(pf_network* n) const { pf_network_free(n); }
};
struct CdfDeleter {
  void operator()(pf_cdf* c) const { pf_cdf_free(c); }
};
using NetPtr = std::unique_ptr<pf_network, NetDeleter>;
using CdfPtr = std::unique_ptr<pf_cdf, CdfDeleter>;

std::string take(char* s) {
  std::string r = s ? s : "";
  pf_string_free(s);
  return r;
}

std::vector<double> take(double* a, std::size_t n) {
  std::vector<double> r(a, a + n);
  pf_array_free(a);
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure{3, "cannot read " + path};
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (fs::exists(path)) throw Failure{3, "refusing to overwrite existing file " + path.string()};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw Failure{3, "write failed for " + path.string()};
}

NetPtr load_net(const std::string& path) {
  pf_network* n = nullptr;
  check(pf_network_from_json(read_file(path).c_str(), &n), "loading " + path);
  return NetPtr(n);
}

pf_network_info info_of(const pf_network* n) {
  pf_network_info i{};
  check(pf_network_info_get(n, &i), "network info");
  return i;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw Failure{2, "not a number: '" + item + "'"};
    v.push_back(x);
  }
  return v;
}

struct Globals {
  std::string config;
  std::uint64_t seed = kDefaultSeed;
  bool seed_set = false;
  std::string out;
  unsigned jobs = 0;
};

// --- build -----------------------------------------------------------------

struct BuildArgs {
  std::string kind;
  int k = 2, n = 1, d = 2, nodes = 0, layers = 0, degree = 2, t = 8;
  double lo = 0, hi = 1, M = 1, eps = 0.01, a = 0, b = 1, alpha = 0.5, lipschitz = 1, f_eps = 0;
  std::string gadget = "exp", net;
};

void cmd_build(const BuildArgs& A, const Globals& g) {
  pf_network* raw = nullptr;
  char* cert = nullptr;
  char* plan = nullptr;
  const std::string& k = A.kind;
  pf_status s;
  if (k == "tent") s = pf_build_tent(A.k, &raw);
  else if (k == "space-filling") s = pf_build_space_filling(A.n, A.d, A.nodes, A.layers, &raw, &plan);
  else if (k == "clamp") s = pf_build_clamp(A.lo, A.hi, &raw);
  else if (k == "multiplier") s = pf_build_multiplier(A.M, A.eps, &raw);
  else if (k == "power-tower") s = pf_build_power_tower(A.degree, A.M, A.eps, &raw);
  else if (k == "sum-of-uniforms") s = pf_build_sum_of_uniforms(A.n, &raw);
  else if (k == "normal-cdf") s = pf_build_normal_cdf(A.eps, &raw, &cert);
  else if (k == "inverse-normal") s = pf_build_inverse_normal_cdf(A.eps, &raw, &cert);
  else if (k == "uniform-to-normal") s = pf_build_uniform_to_normal(A.eps, &raw, &cert);
  else if (k == "analytic") s = pf_build_analytic(A.gadget.c_str(), A.a, A.b, A.eps, A.alpha, &raw, &cert);
  else if (k == "box-muller") s = pf_build_box_muller(A.eps, &raw, &cert);
  else if (k == "inverter") {
    if (A.net.empty()) throw Failure{2, "build inverter needs --net <f.json>"};
    NetPtr f = load_net(A.net);
    s = pf_build_inverter(f.get(), A.a, A.b, A.t, A.lipschitz, A.f_eps, &raw, &cert);
  } else {
    throw Failure{2, "unknown builder '" + k + "'"};
  }
  check(s, "build " + k);
  NetPtr net(raw);
  const std::string cert_s = take(cert), plan_s = take(plan);
  char* js = nullptr;
  check(pf_network_to_json(net.get(), &js), "serialize");
  const std::string net_s = take(js);

  fs::path net_path, cert_path;
  const fs::path out = g.out.empty() ? fs::path(".") : fs::path(g.out);
  if (out.extension() == ".json") {
    net_path = out;
    cert_path = out.parent_path() / (out.stem().string() + ".cert.json");
  } else {
    net_path = out / (k + ".json");
    cert_path = out / (k + ".cert.json");
  }
  nlohmann::ordered_json meta;
  meta["builder"] = k;
  if (!cert_s.empty()) meta["certificate"] = nlohmann::json::parse(cert_s);
  if (!plan_s.empty()) meta["plan"] = nlohmann::json::parse(plan_s);
  const auto i = info_of(net.get());
  meta["nodes"] = i.nodes;
  meta["layers"] = i.layers;
  meta["flavor"] = i.relu_step ? "relu_step" : "relu_only";
  write_file(net_path, net_s + "\n");
  write_file(cert_path, meta.dump(2) + "\n");
  std::cout << "wrote " << net_path.string() << " and " << cert_path.string() << "\n"
            << meta.dump(2) << "\n";
}

// --- eval / regions / cdf / wasserstein / sample -----------------------------

void cmd_eval(const std::string& net_path, const std::vector<std::string>& xs, const std::string& grid) {
  NetPtr net = load_net(net_path);
  const auto i = info_of(net.get());
  std::vector<std::vector<double>> points;
  for (const auto& x : xs) points.push_back(parse_list(x));
  if (!grid.empty()) {
    const auto g = parse_list(grid);
    if (g.size() != 3 || g[2] < 1) throw Failure{2, "--grid expects a,b,count"};
    const int c = static_cast<int>(g[2]);
    for (int k = 0; k < c; ++k) points.push_back({c == 1 ? g[0] : g[0] + (g[1] - g[0]) * k / (c - 1)});
  }
  if (points.empty()) throw Failure{2, "eval needs --x or --grid"};
  std::vector<double> y(i.output_dim);
  for (const auto& p : points) {
    check(pf_network_eval(net.get(), p.data(), p.size(), y.data(), y.size()), "eval");
    for (std::size_t k = 0; k < p.size(); ++k) std::cout << (k ? "," : "") << p[k];
    std::cout << " ->";
    for (std::size_t k = 0; k < y.size(); ++k) std::cout << (k ? "," : " ") << y[k];
    std::cout << "\n";
  }
}

void cmd_regions(const std::string& net_path, const std::string& lo_s, const std::string& hi_s,
                 const Globals& g) {
  NetPtr net = load_net(net_path);
  const auto i = info_of(net.get());
  std::vector<double> lo = lo_s.empty() ? std::vector<double>(i.input_dim, 0.0) : parse_list(lo_s);
  std::vector<double> hi = hi_s.empty() ? std::vector<double>(i.input_dim, 1.0) : parse_list(hi_s);
  if (lo.size() != i.input_dim || hi.size() != i.input_dim) {
    throw Failure{2, "--lo/--hi need " + std::to_string(i.input_dim) + " values"};
  }
  std::size_t count = 0;
  char* js = nullptr;
  check(pf_enumerate_regions(net.get(), lo.data(), hi.data(), lo.size(), &count, &js), "regions");
  const std::string regions = take(js);
  std::cout << "regions: " << count << "\n";
  if (i.input_dim == 1) {
    double* bp = nullptr;
    std::size_t n = 0;
    check(pf_breakpoints_1d(net.get(), lo[0], hi[0], &bp, &n), "breakpoints");
    std::cout << "breakpoints:";
    for (double v : take(bp, n)) std::cout << " " << v;
    std::cout << "\n";
  }
  if (!g.out.empty()) {
    write_file(g.out, regions + "\n");
    std::cout << "wrote " << g.out << "\n";
  }
}

void cmd_cdf(const std::string& net_path, double a, double b, const Globals& g) {
  NetPtr net = load_net(net_path);
  pf_cdf* raw = nullptr;
  check(pf_pushforward_cdf(net.get(), a, b, &raw), "pushforward cdf");
  CdfPtr cdf(raw);
  char* csv = nullptr;
  const std::string comment = "pushforward of U[" + std::to_string(a) + "," + std::to_string(b) + "] net=" + net_path;
  check(pf_cdf_to_csv(cdf.get(), comment.c_str(), &csv), "cdf csv");
  const std::string text = take(csv);
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_file(g.out, text);
    std::cout << "wrote " << g.out << "\n";
  }
}

CdfPtr load_cdf(const std::string& path) {
  pf_cdf* c = nullptr;
  check(pf_cdf_from_csv(read_file(path).c_str(), &c), "loading " + path);
  return CdfPtr(c);
}

void cmd_wasserstein(const std::vector<std::string>& cdfs, const std::vector<std::string>& samples,
                     bool normal) {
  double w = 0.0;
  if (!samples.empty()) {
    if (samples.size() != 2) throw Failure{2, "--samples takes exactly two files"};
    double *pa = nullptr, *pb = nullptr;
    std::size_t na = 0, nb = 0, da = 0, db = 0;
    check(pf_samples_from_csv(read_file(samples[0]).c_str(), &pa, &na, &da), samples[0]);
    const auto A = take(pa, na * da);
    check(pf_samples_from_csv(read_file(samples[1]).c_str(), &pb, &nb, &db), samples[1]);
    const auto B = take(pb, nb * db);
    if (na != nb || da != db) throw Failure{2, "sample sets differ in size or dimension"};
    check(pf_empirical_wasserstein(A.data(), B.data(), na, da, &w), "emd");
  } else if (normal) {
    if (cdfs.size() != 1) throw Failure{2, "--normal compares exactly one --cdf"};
    check(pf_wasserstein_1d_normal(load_cdf(cdfs[0]).get(), &w), "wasserstein");
  } else {
    if (cdfs.size() != 2) throw Failure{2, "give two --cdf files, one --cdf with --normal, or two --samples"};
    check(pf_wasserstein_1d(load_cdf(cdfs[0]).get(), load_cdf(cdfs[1]).get(), &w), "wasserstein");
  }
  std::printf("%.17g\n", w);
}

void cmd_sample(const std::string& net_path, std::size_t count, const std::string& source,
                const Globals& g) {
  NetPtr net = load_net(net_path);
  int kind = PF_SOURCE_UNIFORM;
  if (source == "normal") kind = PF_SOURCE_NORMAL;
  else if (source == "stratified") kind = PF_SOURCE_UNIFORM_STRATIFIED;
  else if (source != "uniform") throw Failure{2, "--source must be uniform, stratified or normal"};
  const auto i = info_of(net.get());
  double* pts = nullptr;
  check(pf_sample_pushforward(net.get(), kind, g.seed, 0, count, std::max(1u, g.jobs), &pts), "sample");
  const auto v = take(pts, count * i.output_dim);
  char* csv = nullptr;
  const std::string comment = "seed=" + std::to_string(g.seed) + " source=" + source +
                              " count=" + std::to_string(count) + " net=" + net_path;
  check(pf_samples_to_csv(v.data(), count, i.output_dim, comment.c_str(), &csv), "csv");
  const std::string text = take(csv);
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_file(g.out, text);
    std::cout << "wrote " << g.out << "\n";
  }
}

// --- experiments ---------------------------------------------------------------

void cmd_experiment(const std::string& kind, const Globals& g) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!g.config.empty()) {
    try {
      cfg = nlohmann::json::parse(read_file(g.config));
    } catch (const nlohmann::json::exception& e) {
      throw Failure{3, g.config + ": " + e.what()};
    }
    const std::string k = cfg.value("experiment", kind);
    if (k != kind) throw Failure{2, "config is for '" + k + "', not '" + kind + "'"};
  }
  cfg["experiment"] = kind;
  const std::string out = g.out.empty() ? cfg.value("out", std::string("pushforge-out")) : g.out;
  const unsigned jobs = g.jobs ? g.jobs : cfg.value("jobs", 1u);
  char *csv = nullptr, *svg = nullptr;
  check(pf_run_experiment(cfg.dump().c_str(), g.seed_set, g.seed, jobs, out.c_str(), 1, &csv, &svg),
        kind);
  std::cout << take(csv);
  const bool has_svg = !take(svg).empty();
  std::cerr << "wrote " << (fs::path(out) / (kind + ".csv")).string()
            << (has_svg ? " and " + (fs::path(out) / (kind + ".svg")).string() : std::string()) << "\n";
}

void cmd_bounds_single(int N, int L, int n, int d) {
  char* js = nullptr;
  check(pf_bound_report(N, L, n, d, &js), "bounds");
  std::cout << take(js) << "\n";
}

int cmd_verify(const Globals& g, const std::vector<int>& only, int fault, bool no_timing, bool numeric_only) {
  pf_verify_options o;
  pf_verify_options_init(&o);
  o.seed = g.seed;
  o.jobs = g.jobs ? g.jobs : std::max(1u, std::thread::hardware_concurrency());
  o.fault_criterion = fault;
  o.check_timing = !no_timing;
  o.only = only.empty() ? nullptr : only.data();
  o.only_count = only.size();
  int pass = 0;
  char *report = nullptr, *lines = nullptr, *numeric = nullptr;
  check(pf_verify(&o, &pass, &report, &lines, &numeric), "verify");
  const std::string r = take(report), l = take(lines), n = take(numeric);
  if (numeric_only) {
    std::cout << n;
  } else {
    std::cout << l;
    if (g.out.empty()) {
      std::cout << r << "\n";
    } else {
      write_file(fs::path(g.out) / "verify.json", r + "\n");
      std::cout << "wrote " << (fs::path(g.out) / "verify.json").string() << "\n";
    }
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pushforge: explicit ReLU/Step generative networks and transport checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "experiment config file (JSON)");
  app.add_option("--seed", g.seed, "64-bit RNG seed (default 20260101)")
      ->each([&](const std::string&) { g.seed_set = true; });
  app.add_option("--out", g.out, "output directory or file");
  app.add_option("--jobs", g.jobs, "worker threads (default 1; verify: all cores)");
  app.footer(
      "Exit codes: 0 success, 1 verify criterion failed, 2 invalid input, 3 other error.\n"
      "PUSHFORGE_BUDGET caps region enumeration work (LP solves, default 2000000).");

  BuildArgs B;
  auto* build = app.add_subcommand("build", "construct a network and write it with its certificate");
  build->add_option("kind", B.kind,
                    "tent, space-filling, clamp, multiplier, power-tower, sum-of-uniforms, normal-cdf, "
                    "inverter, inverse-normal, uniform-to-normal, analytic, box-muller")
      ->required();
  build->add_option("--k", B.k, "tent pieces (default 2)");
  build->add_option("--n", B.n, "input dims / summands (default 1)");
  build->add_option("--d", B.d, "output dims (default 2)");
  build->add_option("--nodes", B.nodes, "space-filling node budget N");
  build->add_option("--layers", B.layers, "space-filling layer count L");
  build->add_option("--lo", B.lo, "clamp lower end (default 0)");
  build->add_option("--hi", B.hi, "clamp upper end (default 1)");
  build->add_option("--M", B.M, "multiplier / power-tower range (default 1)");
  build->add_option("--eps", B.eps, "target accuracy (default 0.01)");
  build->add_option("--degree", B.degree, "power-tower degree (default 2)");
  build->add_option("--a", B.a, "domain start (default 0)");
  build->add_option("--b", B.b, "domain end (default 1)");
  build->add_option("--alpha", B.alpha, "pow exponent (default 0.5)");
  build->add_option("--gadget", B.gadget, "analytic kind: exp, ln, cos, sin, pow (default exp)");
  build->add_option("--t", B.t, "inverter stages (default 8)");
  build->add_option("--lipschitz", B.lipschitz, "Lipschitz constant of the inverse (default 1)");
  build->add_option("--f-eps", B.f_eps, "sup error of the inverted net (default 0)");
  build->add_option("--net", B.net, "network file to invert");

  std::string net_path, lo_s, hi_s, grid, source = "uniform";
  std::vector<std::string> xs, cdfs, samples;
  double a = 0.0, b = 1.0;
  bool normal = false;
  std::size_t count = 2000;

  auto* eval = app.add_subcommand("eval", "evaluate a network");
  eval->add_option("--net", net_path, "network file")->required();
  eval->add_option("--x", xs, "input point, comma separated (repeatable)");
  eval->add_option("--grid", grid, "1-D grid a,b,count");

  auto* regions = app.add_subcommand("regions", "enumerate affine regions on a box");
  regions->add_option("--net", net_path, "network file")->required();
  regions->add_option("--lo", lo_s, "box lower corner (default 0)");
  regions->add_option("--hi", hi_s, "box upper corner (default 1)");

  auto* cdf = app.add_subcommand("cdf", "exact pushforward CDF of U[a,b] as CSV");
  cdf->add_option("--net", net_path, "univariate network file")->required();
  cdf->add_option("--a", a, "source start (default 0)");
  cdf->add_option("--b", b, "source end (default 1)");

  auto* wass = app.add_subcommand("wasserstein", "W1 between CDF files, vs the normal, or EMD of sample sets");
  wass->add_option("--cdf", cdfs, "CDF CSV (breakpoint,value)");
  wass->add_option("--samples", samples, "sample CSV (dim0,...)");
  wass->add_flag("--normal", normal, "compare the single --cdf against N(0,1)");

  auto* sample = app.add_subcommand("sample", "draw pushforward samples as CSV");
  sample->add_option("--net", net_path, "network file")->required();
  sample->add_option("--count", count, "number of draws (default 2000)");
  sample->add_option("--source", source, "uniform, stratified or normal (default uniform)");

  std::vector<CLI::App*> experiments;
  for (const char* k : {"sweep-tent", "sweep-phi", "sweep-inverse", "boxmuller-demo", "berry-esseen"}) {
    experiments.push_back(app.add_subcommand(k, std::string("run the ") + k + " experiment (CSV + SVG)"));
  }
  int bN = 0, bL = 0, bn = 1, bd = 2;
  auto* bounds = app.add_subcommand("bounds", "closed-form bounds: one report, or a sweep with --config");
  bounds->add_option("--N", bN, "nodes");
  bounds->add_option("--L", bL, "layers");
  bounds->add_option("--n", bn, "input dims (default 1)");
  bounds->add_option("--d", bd, "output dims (default 2)");

  std::vector<int> only;
  int fault = 0;
  bool no_timing = false, numeric_only = false;
  auto* verify = app.add_subcommand("verify", "run every acceptance criterion");
  verify->add_option("--only", only, "criterion ids to run");
  verify->add_option("--fault", fault, "test hook: perturb a weight used by this criterion");
  verify->add_flag("--no-timing", no_timing, "do not fail criteria on runtime limits");
  verify->add_flag("--numeric", numeric_only, "print only the numeric summary");

  std::string defaults;
  {
    char* d = nullptr;
    if (pf_experiment_defaults(&d) == PF_OK) defaults = take(d);
  }
  for (auto* e : experiments) e->footer(defaults);
  bounds->footer(defaults);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*build) cmd_build(B, g);
    else if (*eval) cmd_eval(net_path, xs, grid);
    else if (*regions) cmd_regions(net_path, lo_s, hi_s, g);
    else if (*cdf) cmd_cdf(net_path, a, b, g);
    else if (*wass) cmd_wasserstein(cdfs, samples, normal);
    else if (*sample) cmd_sample(net_path, count, source, g);
    else if (*bounds) {
      if (bN > 0 && bL > 0 && g.config.empty()) cmd_bounds_single(bN, bL, bn, bd);
      else cmd_experiment("bounds", g);
    } else if (*verify) {
      return cmd_verify(g, only, fault, no_timing, numeric_only);
    } else {
      for (auto* e : experiments) {
        if (*e) cmd_experiment(e->get_name(), g);
      }
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return 0;
}
