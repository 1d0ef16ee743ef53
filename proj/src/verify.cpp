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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "bounds.hpp"
#include "builders.hpp"
#include "json.hpp"
#include "lab.hpp"
#include "lab_internal.hpp"
#include "normal.hpp"
#include "regions.hpp"
#include "rng.hpp"
#include "transport.hpp"

namespace pushforge {

namespace {

constexpr double kFaultDelta = 0.5;

Measurement check(std::string name, double measured, std::string relation, double threshold) {
  Measurement m{std::move(name), measured, threshold, std::move(relation), false};
  if (m.relation == "<=") m.pass = measured <= threshold;
  else if (m.relation == "<") m.pass = measured < threshold;
  else if (m.relation == ">=") m.pass = measured >= threshold;
  else if (m.relation == ">") m.pass = measured > threshold;
  else m.pass = measured == threshold;
  return m;
}

double fault_for(const VerifyOptions& opt, int id) {
  return opt.fault_criterion == id ? kFaultDelta : 0.0;
}

double tent_closed_form(int k, double x) {
  const double kx = k * x;
  const double f = std::floor(kx);
  return static_cast<long long>(f) % 2 == 0 ? kx - f : 1.0 - kx + f;
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

void criterion_tent(CriterionResult& r, const VerifyOptions& opt) {
  double max_err = 0.0, max_bp_dev = 0.0;
  int count_mismatch = 0;
  const auto grid = lab::uniform_grid(0.0, 1.0, 10000);
  for (int k = 1; k <= 16; ++k) {
    Network net = tent_map_net(k);
    if (k == 4) net = perturb_first_weight(net, fault_for(opt, 1));
    Evaluator ev(net);
    for (double x : grid) {
      max_err = std::max(max_err, std::abs(ev(std::span<const double>(&x, 1))[0] - tent_closed_form(k, x)));
    }
    const auto bp = breakpoints_1d(net, 0.0, 1.0);
    if (bp.size() != static_cast<std::size_t>(k) + 1) {
      ++count_mismatch;
      continue;
    }
    for (int i = 0; i <= k; ++i) max_bp_dev = std::max(max_bp_dev, std::abs(bp[i] - static_cast<double>(i) / k));
  }
  r.measurements = {check("max_abs_error", max_err, "<=", 1e-12),
                    check("max_breakpoint_deviation", max_bp_dev, "<=", 1e-12),
                    check("breakpoint_count_mismatches", count_mismatch, "==", 0)};
}

void criterion_space_filling(CriterionResult& r, const VerifyOptions& opt) {
  const int Ns[] = {12, 20, 36, 68}, Ls[] = {2, 3};
  std::vector<std::pair<int, int>> grid;
  for (int N : Ns)
    for (int L : Ls) grid.emplace_back(N, L);
  std::vector<lab::TentPoint> pts(grid.size());
  lab::parallel_indices(grid.size(), opt.jobs, [&](std::size_t i) {
    pts[i] = lab::tent_point(grid[i].first, grid[i].second, 1, 2, 2000, opt.seed, 100 + i,
                             fault_for(opt, 2));
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::string tag = "N=" + std::to_string(grid[i].first) + ",L=" + std::to_string(grid[i].second);
    const auto& p = pts[i];
    r.measurements.push_back(check(tag + " box_coupling", p.box_ok ? 1 : 0, "==", 1));
    r.measurements.push_back(check(tag + " emd<=sqrt2/k+0.03", p.emd, "<=", p.coupling_bound + 0.03));
    r.measurements.push_back(check(tag + " emd>=net_lower", p.emd, ">=", p.net_lower));
  }
}

Network random_net(const CounterRng& rng, std::uint64_t& draw, int n0, int L) {
  auto gauss = [&] {
    double u[2];
    rng.uniforms(draw++, u);
    return std::sqrt(-2.0 * std::log(u[0])) * std::cos(2.0 * std::numbers::pi * u[1]);
  };
  auto uniform_int = [&](int lo, int hi) {
    return lo + static_cast<int>(rng.uniform(draw++) * (hi - lo + 1));
  };
  std::vector<AffineLayer> layers;
  std::size_t in = static_cast<std::size_t>(n0);
  for (int l = 0; l < L; ++l) {
    const bool last = l == L - 1;
    const std::size_t out = static_cast<std::size_t>(last ? uniform_int(1, 2) : uniform_int(1, 6));
    AffineLayer a(out, in, last ? Activation::kIdentity : Activation::kReLU);
    for (double& w : a.weights) w = gauss();
    for (double& b : a.bias) b = 0.5 * gauss();
    layers.push_back(std::move(a));
    in = out;
  }
  return Network(std::move(layers), Flavor::kReluOnly);
}

void criterion_regions(CriterionResult& r, const VerifyOptions& opt) {
  const CounterRng rng(opt.seed, 300);
  std::uint64_t draw = 0;
  std::vector<Network> nets;
  for (int i = 0; i < 200; ++i) {
    const int n0 = 1 + static_cast<int>(rng.uniform(draw++) * 2);
    const int L = 1 + static_cast<int>(rng.uniform(draw++) * 4);
    nets.push_back(random_net(rng, draw, n0, L));
  }
  std::vector<double> ratio(nets.size());
  lab::parallel_indices(nets.size(), opt.jobs, [&](std::size_t i) {
    const Network& net = nets[i];
    const std::size_t n0 = net.input_dim();
    Box box{std::vector<double>(n0, -1.0), std::vector<double>(n0, 1.0)};
    const double count = static_cast<double>(enumerate_regions(net, box).size());
    ratio[i] = count / affine_piece_bound(static_cast<int>(net.node_count()),
                                          static_cast<int>(net.layer_count()), static_cast<int>(n0));
  });
  int violations = 0;
  double worst = 0.0;
  for (double q : ratio) {
    violations += q > 1.0;
    worst = std::max(worst, q);
  }
  r.measurements.push_back(check("random nets over piece bound", violations, "==", 0));
  r.measurements.push_back(check("max count/bound ratio", worst, "<=", 1.0));

  int mismatches = 0;
  for (int k : {2, 3, 4, 5, 16}) {
    Network t = tent_map_net(k);
    if (k == 3) t = perturb_first_weight(t, fault_for(opt, 3));
    Network net = t;
    long long expect = k;
    for (int e = 1; expect <= 256; ++e) {
      const auto regions = enumerate_regions(net, Box::unit(1));
      if (static_cast<long long>(regions.size()) != expect) ++mismatches;
      net = compose(t, net);
      expect *= k;
    }
  }
  r.measurements.push_back(check("tent compositions with count != k^e", mismatches, "==", 0));
}

void criterion_phi(CriterionResult& r, const VerifyOptions& opt) {
  const double eps[] = {1e-1, 1e-2, 1e-3};
  std::vector<double> err(3), nodes(3), logs(3);
  lab::parallel_indices(3, opt.jobs, [&](std::size_t i) {
    Built b = normal_cdf_net(eps[i]);
    if (i == 1) b.net = perturb_first_weight(b.net, fault_for(opt, 4));
    err[i] = lab::phi_sup_error(b.net);
    nodes[i] = static_cast<double>(b.net.node_count());
  });
  for (int i = 0; i < 3; ++i) {
    logs[i] = std::log(1.0 / eps[i]);
    r.measurements.push_back(check("eps=" + fmt(eps[i]) + " sup_error", err[i], "<=", eps[i]));
    r.measurements.push_back(
        check("eps=" + fmt(eps[i]) + " nodes", nodes[i], "<=", lab::phi_node_polynomial(eps[i])));
  }
  r.measurements.push_back(check("log-log slope nodes vs ln(1/eps)", loglog_slope(logs, nodes), "<=", 3.0));
}

void criterion_uniform_normal(CriterionResult& r, const VerifyOptions& opt) {
  Built b = uniform_to_normal_net(0.05);
  b.net = perturb_output_weight(b.net, fault_for(opt, 5));
  const double w = wasserstein_1d_normal(pushforward_cdf_1d(b.net));
  r.measurements.push_back(check("W1(net#U, N(0,1))", w, "<=", 0.05));
}

void criterion_inverter(CriterionResult& r, const VerifyOptions& opt) {
  struct Case {
    std::string name;
    Network f;
    double a, b, f_eps, lip;
    std::function<double(double)> f_true, f_inv;
  };
  std::vector<Case> cases;
  cases.push_back({"identity", identity_network(1), 0.0, 1.0, 0.0, 1.0,
                   [](double x) { return x; }, [](double y) { return y; }});
  {
    Built phi = normal_cdf_net(1e-4);
    cases.push_back({"phi", phi.net, -2.0, 2.0, phi.cert.claimed_sup_error, 1.0 / normal_pdf(2.0),
                     normal_cdf_ref, normal_quantile_ref});
  }
  struct Job {
    std::size_t c;
    int t;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cases.size(); ++c)
    for (int t : {4, 8, 12}) jobs.push_back({c, t});
  std::vector<double> worst(jobs.size()), bound(jobs.size());
  std::vector<int> excluded(jobs.size());
  lab::parallel_indices(jobs.size(), opt.jobs, [&](std::size_t j) {
    const Case& c = cases[jobs[j].c];
    const int t = jobs[j].t;
    InverterOptions io;
    io.f_eps = c.f_eps;
    io.y_nonnegative = true;
    Built inv = binary_search_inverter(c.f, c.a, c.b, t, c.lip, io);
    inv.net = perturb_first_weight(inv.net, fault_for(opt, 6));
    const double step = (c.b - c.a) / std::ldexp(1.0, t);
    // Exclude only preimages within 1e-9 (b-a) of a stage midpoint, where the
    // exact comparison is a tie.
    const double radius = 1e-9 * (c.b - c.a);
    const double ya = c.f_true(c.a), yb = c.f_true(c.b);
    bound[j] = step + c.f_eps * c.lip;
    for (int i = 0; i < 1000; ++i) {
      const double y = ya + (yb - ya) * (i + 0.5) / 1000.0;
      const double x = c.f_inv(y);
      const double pos = (x - c.a) / step;
      if (std::abs(pos - std::round(pos)) * step < radius) {
        ++excluded[j];
        continue;
      }
      worst[j] = std::max(worst[j], std::abs(inv.net.eval1(y) - x));
    }
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    r.measurements.push_back(check(cases[jobs[j].c].name + " t=" + std::to_string(jobs[j].t) + " max_error",
                                   worst[j], "<=", bound[j]));
    r.measurements.push_back(check(cases[jobs[j].c].name + " t=" + std::to_string(jobs[j].t) + " excluded",
                                   excluded[j], "<=", 10));
  }
}

void criterion_box_muller(CriterionResult& r, const VerifyOptions& opt) {
  const auto p = lab::boxmuller_point(0.1, 2000, opt.seed, 700, fault_for(opt, 7));
  for (int i = 0; i < 3; ++i) {
    r.measurements.push_back(check("anchor " + std::to_string(i + 1) + " error", p.anchor_error[i], "<=", 0.1));
  }
  r.measurements.push_back(check("EMD vs reference normal", p.emd, "<=", 0.15));
}

void criterion_berry_esseen(CriterionResult& r, const VerifyOptions& opt) {
  const int ns[] = {4, 16, 64};
  std::vector<lab::BerryEsseenPoint> pts;
  for (int i = 0; i < 3; ++i) {
    pts.push_back(lab::berry_esseen_point(ns[i], 1000000, opt.seed, 800 + i, opt.jobs,
                                          ns[i] == 16 ? fault_for(opt, 8) : 0.0));
  }
  double cmin = INFINITY, cmax = 0.0;
  for (int i = 0; i < 3; ++i) {
    r.measurements.push_back(check("n=" + std::to_string(ns[i]) + " W1", pts[i].w1, ">", 0.0));
    cmin = std::min(cmin, pts[i].c_fit);
    cmax = std::max(cmax, pts[i].c_fit);
  }
  r.measurements.push_back(check("W1(n=16) < W1(n=4)", pts[1].w1, "<", pts[0].w1));
  r.measurements.push_back(check("W1(n=64) < W1(n=16)", pts[2].w1, "<", pts[1].w1));
  r.measurements.push_back(check("max C / min C", cmax / cmin, "<=", 2.0));
}

void criterion_pwl(CriterionResult& r, const VerifyOptions& opt) {
  const std::vector<double> pieces{2, 4, 8, 16, 32, 64};
  std::vector<double> err(pieces.size());
  lab::parallel_indices(pieces.size(), opt.jobs, [&](std::size_t i) {
    err[i] = pwl_phi_best_l1(static_cast<int>(pieces[i]), -2.0, 2.0);
  });
  double K = INFINITY;
  for (std::size_t i = 0; i < pieces.size(); ++i) K = std::min(K, err[i] * std::pow(pieces[i], 4));
  r.measurements.push_back(check("fitted K = min err*N_A^4", K, ">", 0.0));
  r.measurements.push_back(check("log-log slope", loglog_slope(pieces, err), "<=", -2.0));
}

const char* criterion_name(int id) {
  switch (id) {
    case 1: return "tent-map exactness";
    case 2: return "space-filling sandwich";
    case 3: return "region-count bound";
    case 4: return "normal CDF network";
    case 5: return "uniform to normal";
    case 6: return "binary-search inverter";
    case 7: return "Box-Muller";
    case 8: return "Berry-Esseen";
    case 9: return "N_A^-4 scaling";
    case 10: return "reproducibility";
  }
  return "unknown";
}

double time_limit(int id) {
  static const double limits[] = {0, 1, 120, 120, 30, 60, 60, 60, 60, 120, 600};
  return limits[id];
}

void finish(CriterionResult& r, const VerifyOptions& opt) {
  r.pass = !r.measurements.empty();
  for (const auto& m : r.measurements) r.pass = r.pass && m.pass;
  if (opt.check_timing) r.pass = r.pass && r.seconds < r.time_limit;
}

}  // namespace

CriterionResult run_criterion(int id, const VerifyOptions& opt) {
  require(id >= 1 && id <= 9, "run_criterion: id must be in 1..9 (10 runs through run_verify)");
  CriterionResult r;
  r.id = id;
  r.name = criterion_name(id);
  r.time_limit = time_limit(id);
  const auto t0 = std::chrono::steady_clock::now();
  switch (id) {
    case 1: criterion_tent(r, opt); break;
    case 2: criterion_space_filling(r, opt); break;
    case 3: criterion_regions(r, opt); break;
    case 4: criterion_phi(r, opt); break;
    case 5: criterion_uniform_normal(r, opt); break;
    case 6: criterion_inverter(r, opt); break;
    case 7: criterion_box_muller(r, opt); break;
    case 8: criterion_berry_esseen(r, opt); break;
    case 9: criterion_pwl(r, opt); break;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  finish(r, opt);
  return r;
}

std::vector<CriterionResult> run_verify(const VerifyOptions& opt) {
  auto selected = [&](int id) {
    return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end();
  };
  std::vector<int> base;
  for (int id = 1; id <= 9; ++id) {
    if (selected(id) || selected(10)) base.push_back(id);
  }
  std::vector<CriterionResult> first;
  for (int id : base) first.push_back(run_criterion(id, opt));
  std::vector<CriterionResult> out;
  for (auto& r : first) {
    if (selected(r.id)) out.push_back(r);
  }
  if (selected(10)) {
    CriterionResult r;
    r.id = 10;
    r.name = criterion_name(10);
    r.time_limit = time_limit(10);
    std::vector<CriterionResult> second;
    const auto t0 = std::chrono::steady_clock::now();
    for (int id : base) second.push_back(run_criterion(id, opt));
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& c : first) total += c.seconds;
    const bool same = numeric_summary(first) == numeric_summary(second);
    r.measurements.push_back(check("numeric output identical across two runs", same ? 1 : 0, "==", 1));
    r.seconds = total;
    finish(r, opt);
    out.push_back(r);
  }
  return out;
}

std::string numeric_summary(const std::vector<CriterionResult>& results) {
  std::string s;
  for (const auto& r : results) {
    s += "criterion " + std::to_string(r.id) + "\n";
    for (const auto& m : r.measurements) {
      s += "  " + m.name + " " + fmt(m.measured) + " " + m.relation + " " + fmt(m.threshold) + "\n";
    }
  }
  return s;
}

std::string verify_json(const std::vector<CriterionResult>& results, const VerifyOptions& opt) {
  nlohmann::ordered_json j;
  j["seed"] = opt.seed;
  j["fault_criterion"] = opt.fault_criterion;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["seconds"] = r.seconds;
    c["time_limit"] = r.time_limit;
    nlohmann::ordered_json ms = nlohmann::ordered_json::array();
    for (const auto& m : r.measurements) {
      ms.push_back({{"name", m.name},
                    {"measured", m.measured},
                    {"relation", m.relation},
                    {"threshold", m.threshold},
                    {"pass", m.pass}});
    }
    c["measurements"] = ms;
    arr.push_back(c);
    all = all && r.pass;
  }
  j["criteria"] = arr;
  j["all_pass"] = all;
  return j.dump(2);
}

std::string format_line(const CriterionResult& r) {
  std::string worst;
  for (const auto& m : r.measurements) {
    if (!m.pass) {
      worst = m.name + "=" + fmt(m.measured) + " (need " + m.relation + " " + fmt(m.threshold) + ")";
      break;
    }
  }
  if (worst.empty() && !r.measurements.empty()) {
    const auto& m = r.measurements.back();
    worst = m.name + "=" + fmt(m.measured) + " " + m.relation + " " + fmt(m.threshold);
  }
  char t[64];
  std::snprintf(t, sizeof t, "%.2fs/%.0fs", r.seconds, r.time_limit);
  return "criterion " + std::to_string(r.id) + " [" + r.name + "]: " + (r.pass ? "PASS" : "FAIL") +
         "  " + worst + "  " + t;
}

}  // namespace pushforge
