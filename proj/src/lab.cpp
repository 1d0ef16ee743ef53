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


#include "lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <thread>

#include "bounds.hpp"
#include "builders.hpp"
#include "json.hpp"
#include "lab_internal.hpp"
#include "normal.hpp"
#include "transport.hpp"

namespace pushforge {

using nlohmann::json;

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

namespace {

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds{"sweep-tent",     "sweep-phi",    "sweep-inverse",
                                              "boxmuller-demo", "berry-esseen", "bounds"};
  return kinds;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(std::find(known_kinds().begin(), known_kinds().end(), kind) != known_kinds().end(),
          "unknown experiment kind '" + kind + "'");
  auto nonempty = [&](const auto& v, const char* name) {
    require(!v.empty(), std::string("experiment grid '") + name + "' is empty");
  };
  if (kind == "sweep-tent" || kind == "bounds") {
    nonempty(N, "N");
    nonempty(L, "L");
    nonempty(n, "n");
    nonempty(d, "d");
  }
  if (kind == "sweep-tent") nonempty(samples, "samples");
  if (kind == "sweep-phi" || kind == "sweep-inverse" || kind == "boxmuller-demo") nonempty(eps, "eps");
  if (kind == "boxmuller-demo") nonempty(samples, "samples");
  if (kind == "berry-esseen") {
    nonempty(n, "n");
    nonempty(samples, "samples");
  }
  require(jobs >= 1, "jobs must be >= 1");
}

ExperimentConfig default_config(std::string_view kind) {
  ExperimentConfig c;
  c.kind = std::string(kind);
  if (kind == "sweep-tent") {
    c.N = {12, 20, 36, 68};
    c.L = {2, 3};
    c.n = {1};
    c.d = {2};
    c.samples = {2000};
  } else if (kind == "sweep-phi") {
    c.eps = {1e-1, 1e-2, 1e-3, 1e-4};
  } else if (kind == "sweep-inverse") {
    c.eps = {0.2, 0.1, 0.05};
  } else if (kind == "boxmuller-demo") {
    c.eps = {0.1};
    c.samples = {2000};
  } else if (kind == "berry-esseen") {
    c.n = {4, 16, 64};
    c.samples = {1000000};
  } else if (kind == "bounds") {
    c.N = {12, 20, 36, 68, 132};
    c.L = {2, 3, 4};
    c.n = {1};
    c.d = {2, 3};
  }
  return c;
}

ExperimentConfig with_defaults(ExperimentConfig cfg) {
  const ExperimentConfig def = default_config(cfg.kind);
  auto fill = [](auto& v, const auto& d) {
    if (v.empty()) v = d;
  };
  fill(cfg.N, def.N);
  fill(cfg.L, def.L);
  fill(cfg.n, def.n);
  fill(cfg.d, def.d);
  fill(cfg.k, def.k);
  fill(cfg.samples, def.samples);
  fill(cfg.eps, def.eps);
  return cfg;
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kFormat, "config: expected an object");
  ExperimentConfig c;
  try {
    c.kind = j.value("experiment", std::string());
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      auto ints = [&](const char* k, std::vector<int>& out) {
        if (g.contains(k)) out = g.at(k).get<std::vector<int>>();
      };
      ints("N", c.N);
      ints("L", c.L);
      ints("n", c.n);
      ints("d", c.d);
      ints("k", c.k);
      ints("samples", c.samples);
      if (g.contains("eps")) c.eps = g.at("eps").get<std::vector<double>>();
    }
    c.seed = j.value("seed", kDefaultSeed);
    c.out_dir = j.value("out", std::string());
    c.jobs = j.value("jobs", 1u);
    if (j.contains("tolerances")) {
      c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("config: ") + e.what());
  }
  return c;
}

std::string to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = c.kind;
  nlohmann::ordered_json g = nlohmann::ordered_json::object();
  auto put = [&](const char* k, const auto& v) {
    if (!v.empty()) g[k] = v;
  };
  put("N", c.N);
  put("L", c.L);
  put("n", c.n);
  put("d", c.d);
  put("k", c.k);
  put("samples", c.samples);
  put("eps", c.eps);
  j["grid"] = g;
  j["seed"] = c.seed;
  if (!c.out_dir.empty()) j["out"] = c.out_dir;
  j["jobs"] = c.jobs;
  if (!c.tolerances.empty()) j["tolerances"] = c.tolerances;
  return j.dump();
}

std::string describe_defaults() {
  std::string s = "Experiment defaults (grid keys in the config file's \"grid\" object):\n";
  for (const auto& k : known_kinds()) {
    ExperimentConfig c = default_config(k);
    c.jobs = 1;
    s += "  " + k + ": " + to_json(c) + "\n";
  }
  s += "  tolerances: slack (sweep-tent, default 0.03), emd_slack (boxmuller-demo, default 0.05)\n";
  return s;
}

Network perturb_first_weight(const Network& net, double delta) {
  std::vector<AffineLayer> layers(net.layers().begin(), net.layers().end());
  layers.front().weights.front() += delta;
  return Network(std::move(layers), net.flavor());
}

Network perturb_output_weight(const Network& net, double delta) {
  std::vector<AffineLayer> layers(net.layers().begin(), net.layers().end());
  layers.back().weights.front() += delta;
  return Network(std::move(layers), net.flavor());
}

namespace lab {

void parallel_indices(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < jobs; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

TentPoint tent_point(int N, int L, int n, int d, int samples, std::uint64_t seed,
                     std::uint64_t stream, double fault_delta) {
  TentPoint p;
  auto [net, plan] = space_filling_net(n, d, N, L);
  if (fault_delta != 0.0) net = perturb_first_weight(net, fault_delta);
  p.k = plan.k;
  p.nodes = net.node_count();
  p.layers = net.layer_count();
  p.box_ok = box_coupling_check(net, plan, 5);
  SourceDistribution src;
  src.dims = static_cast<std::size_t>(n);
  src.seed = seed;
  src.stream = 2 * stream;
  src.stratified = n <= 2;
  const auto A = sample_pushforward(net, src, static_cast<std::size_t>(samples));
  SourceDistribution ref;
  ref.dims = static_cast<std::size_t>(d);
  ref.seed = seed;
  ref.stream = 2 * stream + 1;
  ref.stratified = d <= 2;
  const auto B = EmpiricalDistribution::uniform_weights(
      static_cast<std::size_t>(d), draw_source(ref, static_cast<std::size_t>(samples)));
  p.emd = empirical_wasserstein(A, B);
  p.coupling_bound = std::sqrt(static_cast<double>(d)) / static_cast<double>(plan.k);
  p.tent_upper = tent_upper_bound(N, L, n, d);
  p.tent_upper_appendix = tent_upper_bound_appendix(N, L, n, d);
  p.net_lower = n < d ? network_lower_bound(N, L, n, d) : 0.0;
  return p;
}

std::vector<double> uniform_grid(double a, double b, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return g;
}

double phi_sup_error(const Network& net) {
  const auto grid = uniform_grid(-6.0, 6.0, 1201);
  return sup_error(net, [](std::span<const double> x) { return std::vector<double>{normal_cdf_ref(x[0])}; },
                   grid)
      .max_abs_error;
}

double phi_node_polynomial(double eps) {
  const double l = 1.0 + std::log(1.0 / eps);
  return 6.0 * l * l * l;
}

BoxMullerPoint boxmuller_point(double eps, int samples, std::uint64_t seed, std::uint64_t stream,
                               double fault_delta) {
  BoxMullerPoint p;
  Built b = box_muller_net(eps);
  if (fault_delta != 0.0) b.net = perturb_first_weight(b.net, fault_delta);
  p.nodes = b.net.node_count();
  p.zeta = b.cert.zeta;
  const double h = std::exp(-0.5), q = std::exp(-2.0);
  const double anchors[3][4] = {{h, 0.0, 1.0, 0.0}, {h, 0.25, 0.0, 1.0}, {q, 0.5, -2.0, 0.0}};
  for (int i = 0; i < 3; ++i) {
    const auto y = b.net.eval(std::vector<double>{anchors[i][0], anchors[i][1]});
    p.anchor_error[i] = std::max(std::abs(y[0] - anchors[i][2]), std::abs(y[1] - anchors[i][3]));
  }
  SourceDistribution src;
  src.dims = 2;
  src.seed = seed;
  src.stream = 2 * stream;
  src.stratified = true;
  const auto A = sample_pushforward(b.net, src, static_cast<std::size_t>(samples));
  // Reference: exact Box-Muller on an independent stratified draw.
  SourceDistribution ref = src;
  ref.stream = 2 * stream + 1;
  auto u = draw_source(ref, static_cast<std::size_t>(samples));
  for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
    const double r = std::sqrt(-2.0 * std::log(u[2 * i]));
    const double th = 2.0 * std::numbers::pi * u[2 * i + 1];
    u[2 * i] = r * std::cos(th);
    u[2 * i + 1] = r * std::sin(th);
  }
  p.emd = empirical_wasserstein(A, EmpiricalDistribution::uniform_weights(2, std::move(u)));
  return p;
}

BerryEsseenPoint berry_esseen_point(int n, std::size_t samples, std::uint64_t seed,
                                    std::uint64_t stream, unsigned jobs, double fault_delta) {
  Network net = sum_of_uniforms_net(n);
  if (fault_delta != 0.0) net = perturb_first_weight(net, fault_delta);
  SourceDistribution src;
  src.dims = static_cast<std::size_t>(n);
  src.seed = seed;
  src.stream = stream;
  const auto E = sample_pushforward(net, src, samples, jobs);
  BerryEsseenPoint p;
  long double s = 0.0L, s2 = 0.0L;
  for (double v : E.points) {
    s += v;
    s2 += static_cast<long double>(v) * v;
  }
  p.mean = static_cast<double>(s / samples);
  p.variance = static_cast<double>(s2 / samples) - p.mean * p.mean;
  p.w1 = wasserstein_1d_normal(empirical_cdf(E.points));
  p.c_fit = p.w1 * std::sqrt(static_cast<double>(n));
  return p;
}

}  // namespace lab

namespace {

// Results do not depend on the worker count or the output directory, so
// neither goes into the provenance comment.
std::string comment_line(const ExperimentConfig& cfg) {
  auto j = nlohmann::ordered_json::parse(to_json(cfg));
  j.erase("jobs");
  j.erase("out");
  return "seed=" + std::to_string(cfg.seed) + " config=" + j.dump();
}

ExperimentOutput sweep_tent(const ExperimentConfig& cfg) {
  struct Job {
    int N, L, n, d, samples;
  };
  std::vector<Job> jobs;
  for (int N : cfg.N)
    for (int L : cfg.L)
      for (int n : cfg.n)
        for (int d : cfg.d)
          for (int s : cfg.samples) jobs.push_back({N, L, n, d, s});
  const double slack = cfg.tolerance("slack", 0.03);
  std::vector<std::vector<std::string>> rows(jobs.size());
  std::vector<lab::TentPoint> points(jobs.size());
  lab::parallel_indices(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const Job& j = jobs[i];
    std::vector<std::string> row{fmt(j.N), fmt(j.L), fmt(j.n), fmt(j.d), fmt(j.samples),
                                 std::to_string(cfg.seed)};
    if (j.N <= j.d * j.L) {
      row.insert(row.end(), {"skipped:N≤dL", "", "", "", "", "", "", "", "", "", ""});
      rows[i] = std::move(row);
      return;
    }
    const auto p = lab::tent_point(j.N, j.L, j.n, j.d, j.samples, cfg.seed, i, 0.0);
    points[i] = p;
    const bool upper = p.emd <= p.coupling_bound + slack;
    const bool lower = p.net_lower <= p.emd + slack;
    row.insert(row.end(), {"ok", fmt(static_cast<long long>(p.k)), fmt(p.nodes), p.box_ok ? "1" : "0",
                           fmt(p.emd), fmt(p.coupling_bound), fmt(p.tent_upper),
                           fmt(p.tent_upper_appendix), fmt(p.net_lower),
                           (p.emd <= p.tent_upper + slack) ? "1" : "0",
                           (upper && lower && p.box_ok) ? "pass" : "fail"});
    rows[i] = std::move(row);
  });
  ExperimentOutput out;
  out.table.columns = {"N",        "L",     "n",      "d",   "samples",        "seed",
                       "status",   "k",     "nodes",  "box_coupling", "emd", "coupling_bound",
                       "tent_upper", "tent_upper_appendix", "net_lower", "within_tent_upper",
                       "sandwich"};
  out.table.comments = {comment_line(cfg), "slack=" + fmt(slack)};
  for (auto& r : rows) out.table.add_row(std::move(r));

  std::vector<PlotSeries> series;
  for (int L : cfg.L) {
    PlotSeries m{"emd L=" + std::to_string(L), {}, {}}, u{"tent_upper L=" + std::to_string(L), {}, {}},
        lo{"net_lower L=" + std::to_string(L), {}, {}};
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].L != L || jobs[i].N <= jobs[i].d * jobs[i].L) continue;
      m.x.push_back(jobs[i].N);
      m.y.push_back(points[i].emd);
      u.x.push_back(jobs[i].N);
      u.y.push_back(points[i].tent_upper);
      lo.x.push_back(jobs[i].N);
      lo.y.push_back(points[i].net_lower);
    }
    series.push_back(std::move(m));
    series.push_back(std::move(u));
    series.push_back(std::move(lo));
  }
  out.svg = svg_loglog("space-filling sandwich", "N", "Wasserstein", series);
  return out;
}

ExperimentOutput sweep_phi(const ExperimentConfig& cfg) {
  std::vector<std::vector<std::string>> rows(cfg.eps.size());
  std::vector<double> nodes(cfg.eps.size()), errs(cfg.eps.size());
  lab::parallel_indices(cfg.eps.size(), cfg.jobs, [&](std::size_t i) {
    const double eps = cfg.eps[i];
    const Built b = normal_cdf_net(eps);
    const double err = lab::phi_sup_error(b.net);
    nodes[i] = static_cast<double>(b.net.node_count());
    errs[i] = err;
    rows[i] = {fmt(eps),
               fmt(b.net.node_count()),
               fmt(b.net.layer_count()),
               fmt(err),
               fmt(b.cert.claimed_sup_error),
               fmt(lab::phi_node_polynomial(eps)),
               err <= eps ? "pass" : "fail"};
  });
  ExperimentOutput out;
  out.table.columns = {"eps", "nodes", "layers", "sup_error", "claimed_sup_error",
                       "node_polynomial", "status"};
  out.table.comments = {comment_line(cfg), "grid=[-6,6] step 0.01"};
  for (auto& r : rows) out.table.add_row(std::move(r));
  PlotSeries n{"nodes", {}, {}}, e{"sup_error", {}, {}}, t{"eps", {}, {}};
  for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
    const double x = std::log(1.0 / cfg.eps[i]);
    n.x.push_back(x);
    n.y.push_back(nodes[i]);
    e.x.push_back(x);
    e.y.push_back(errs[i]);
    t.x.push_back(x);
    t.y.push_back(cfg.eps[i]);
  }
  out.svg = svg_loglog("normal CDF network", "ln(1/eps)", "value", {n, e, t});
  return out;
}

ExperimentOutput sweep_inverse(const ExperimentConfig& cfg) {
  std::vector<std::vector<std::string>> rows(cfg.eps.size());
  std::vector<double> w(cfg.eps.size()), nodes(cfg.eps.size());
  lab::parallel_indices(cfg.eps.size(), cfg.jobs, [&](std::size_t i) {
    const double eps = cfg.eps[i];
    const Built b = uniform_to_normal_net(eps);
    const double w1 = wasserstein_1d_normal(pushforward_cdf_1d(b.net));
    const double med = b.net.eval1(0.5);
    w[i] = w1;
    nodes[i] = static_cast<double>(b.net.node_count());
    rows[i] = {fmt(eps),
               fmt(b.net.node_count()),
               fmt(b.net.layer_count()),
               fmt(b.cert.detail("t")),
               fmt(b.cert.detail("delta")),
               fmt(b.cert.zeta),
               fmt(w1),
               fmt(med),
               (w1 <= eps && std::abs(med) <= eps) ? "pass" : "fail"};
  });
  ExperimentOutput out;
  out.table.columns = {"eps", "nodes", "layers", "t", "delta", "zeta", "w1", "median", "status"};
  out.table.comments = {comment_line(cfg), "w1 = exact pushforward CDF vs analytic normal"};
  for (auto& r : rows) out.table.add_row(std::move(r));
  PlotSeries a{"w1", cfg.eps, w}, b{"eps", cfg.eps, cfg.eps};
  out.svg = svg_loglog("uniform to normal", "eps", "W1", {a, b});
  return out;
}

ExperimentOutput boxmuller_demo(const ExperimentConfig& cfg) {
  struct Job {
    double eps;
    int samples;
  };
  std::vector<Job> jobs;
  for (double e : cfg.eps)
    for (int s : cfg.samples) jobs.push_back({e, s});
  const double slack = cfg.tolerance("emd_slack", 0.05);
  std::vector<std::vector<std::string>> rows(jobs.size());
  lab::parallel_indices(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const auto p = lab::boxmuller_point(jobs[i].eps, jobs[i].samples, cfg.seed, i, 0.0);
    const bool ok = std::max({p.anchor_error[0], p.anchor_error[1], p.anchor_error[2]}) <= jobs[i].eps &&
                    p.emd <= jobs[i].eps + slack;
    rows[i] = {fmt(jobs[i].eps), fmt(jobs[i].samples), std::to_string(cfg.seed), fmt(p.nodes),
               fmt(p.zeta), fmt(p.anchor_error[0]), fmt(p.anchor_error[1]), fmt(p.anchor_error[2]),
               fmt(p.emd), ok ? "pass" : "fail"};
  });
  ExperimentOutput out;
  out.table.columns = {"eps",           "samples",       "seed", "nodes", "zeta", "anchor1_error",
                       "anchor2_error", "anchor3_error", "emd",  "status"};
  out.table.comments = {comment_line(cfg), "emd_slack=" + fmt(slack)};
  for (auto& r : rows) out.table.add_row(std::move(r));
  return out;
}

ExperimentOutput berry_esseen(const ExperimentConfig& cfg) {
  struct Job {
    int n, samples;
  };
  std::vector<Job> jobs;
  for (int n : cfg.n)
    for (int s : cfg.samples) jobs.push_back({n, s});
  std::vector<lab::BerryEsseenPoint> pts(jobs.size());
  // Each point already samples on all threads.
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    require(jobs[i].n >= 1 && jobs[i].samples >= 1, "berry-esseen: n and samples must be >= 1");
    pts[i] = lab::berry_esseen_point(jobs[i].n, static_cast<std::size_t>(jobs[i].samples), cfg.seed, i,
                                     cfg.jobs, 0.0);
  }
  ExperimentOutput out;
  out.table.columns = {"n", "samples", "seed", "w1", "c_fit", "mean", "variance"};
  out.table.comments = {comment_line(cfg), "w1 = empirical CDF vs analytic normal; c_fit = w1*sqrt(n)"};
  PlotSeries w{"w1", {}, {}}, c{"C/sqrt(n), C=median fit", {}, {}};
  std::vector<double> cs;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    out.table.add_row({fmt(jobs[i].n), fmt(jobs[i].samples), std::to_string(cfg.seed), fmt(pts[i].w1),
                       fmt(pts[i].c_fit), fmt(pts[i].mean), fmt(pts[i].variance)});
    w.x.push_back(jobs[i].n);
    w.y.push_back(pts[i].w1);
    cs.push_back(pts[i].c_fit);
  }
  if (!cs.empty()) {
    std::vector<double> sorted = cs;
    std::sort(sorted.begin(), sorted.end());
    const double C = sorted[sorted.size() / 2];
    for (const auto& j : jobs) {
      c.x.push_back(j.n);
      c.y.push_back(C / std::sqrt(static_cast<double>(j.n)));
    }
  }
  out.svg = svg_loglog("sum of uniforms vs normal", "n", "W1", {w, c});
  return out;
}

ExperimentOutput bounds_table(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.table.columns = {"N", "L", "n", "d", "l", "m_B", "N_A", "tent_upper", "tent_upper_appendix",
                       "piece_bound", "plane_lower", "gap_lower", "net_lower", "status"};
  out.table.comments = {comment_line(cfg)};
  std::vector<PlotSeries> series;
  for (int N : cfg.N)
    for (int L : cfg.L)
      for (int n : cfg.n)
        for (int d : cfg.d) {
          const BoundReport r = bound_report(unit_cube_params(N, L, n, d));
          out.table.add_row({fmt(N), fmt(L), fmt(n), fmt(d), fmt(r.params.l), fmt(r.params.m_B),
                             fmt(r.params.N_A), fmt(r.tent_upper), fmt(r.tent_upper_appendix),
                             fmt(r.piece_bound), fmt(r.plane_lower), fmt(r.gap_lower),
                             fmt(r.net_lower), r.status});
        }
  for (int L : cfg.L) {
    PlotSeries u{"tent_upper L=" + std::to_string(L), {}, {}}, lo{"net_lower L=" + std::to_string(L), {}, {}};
    for (int N : cfg.N) {
      const int n = cfg.n.front(), d = cfg.d.front();
      if (N <= d * L || n >= d) continue;
      u.x.push_back(N);
      u.y.push_back(tent_upper_bound(N, L, n, d));
      lo.x.push_back(N);
      lo.y.push_back(network_lower_bound(N, L, n, d));
    }
    series.push_back(std::move(u));
    series.push_back(std::move(lo));
  }
  out.svg = svg_loglog("closed-form bounds", "N", "Wasserstein bound", series);
  return out;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& in) {
  const ExperimentConfig cfg = with_defaults(in);
  cfg.validate();
  if (cfg.kind == "sweep-tent") return sweep_tent(cfg);
  if (cfg.kind == "sweep-phi") return sweep_phi(cfg);
  if (cfg.kind == "sweep-inverse") return sweep_inverse(cfg);
  if (cfg.kind == "boxmuller-demo") return boxmuller_demo(cfg);
  if (cfg.kind == "berry-esseen") return berry_esseen(cfg);
  return bounds_table(cfg);
}

std::vector<std::string> write_experiment(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
  std::vector<std::string> written;
  const std::string csv = (dir / (cfg.kind + ".csv")).string();
  const std::string svg = (dir / (cfg.kind + ".svg")).string();
  if (fs::exists(csv) || (!out.svg.empty() && fs::exists(svg))) {
    throw Error(ErrorKind::kIo, "output files for " + cfg.kind + " already exist in " + dir.string() +
                                    "; choose a fresh --out directory");
  }
  write_new_file(csv, to_csv(out.table));
  written.push_back(csv);
  if (!out.svg.empty()) {
    write_new_file(svg, out.svg);
    written.push_back(svg);
  }
  return written;
}

}  // namespace pushforge
