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
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "bounds.hpp"
#include "builders.hpp"
#include "json.hpp"
#include "lab.hpp"
#include "network.hpp"
#include "pushforge/pushforge.h"
#include "regions.hpp"
#include "report.hpp"
#include "transport.hpp"

struct pf_network {
  pushforge::Network net;
};

struct pf_cdf {
  pushforge::PiecewiseLinearCdf cdf;
};

namespace {

using namespace pushforge;

thread_local std::string g_last_error;

pf_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInput: return PF_ERR_INPUT;
    case ErrorKind::kNumeric: return PF_ERR_NUMERIC;
    case ErrorKind::kBudget: return PF_ERR_BUDGET;
    case ErrorKind::kFormat: return PF_ERR_FORMAT;
    case ErrorKind::kIo: return PF_ERR_IO;
  }
  return PF_ERR_INTERNAL;
}

template <class F>
pf_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return PF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PF_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail_input(std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

double* dup(const std::vector<double>& v) {
  double* p = static_cast<double*>(std::malloc(std::max<std::size_t>(1, v.size()) * sizeof(double)));
  if (!p) throw std::bad_alloc();
  if (!v.empty()) std::memcpy(p, v.data(), v.size() * sizeof(double));
  return p;
}

pf_network* wrap(Network n) { return new pf_network{std::move(n)}; }

void emit(const Built& b, pf_network** out, char** cert) {
  need(out, "out");
  if (cert) *cert = dup(cert_to_json(b.cert));
  *out = wrap(b.net);
}

std::string plan_json(const SpaceFillingPlan& p) {
  nlohmann::ordered_json j;
  j["n"] = p.n;
  j["d"] = p.d;
  j["N"] = p.N;
  j["L"] = p.L;
  j["outputs_per_input"] = p.outputs_per_input;
  j["run_length"] = p.run_length;
  j["chain_width"] = p.chain_width;
  j["chain_nodes"] = p.chain_nodes;
  j["carry_nodes"] = p.carry_nodes();
  j["k"] = p.k;
  return j.dump(2);
}

}  // namespace

extern "C" {

const char* pf_version(void) { return "1.0.0"; }

const char* pf_last_error(void) { return g_last_error.c_str(); }

const char* pf_status_name(pf_status s) {
  switch (s) {
    case PF_OK: return "ok";
    case PF_ERR_INPUT: return "input error";
    case PF_ERR_NUMERIC: return "numeric error";
    case PF_ERR_BUDGET: return "budget exceeded";
    case PF_ERR_FORMAT: return "format error";
    case PF_ERR_IO: return "io error";
    case PF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void pf_string_free(char* s) { std::free(s); }
void pf_array_free(double* a) { std::free(a); }

pf_status pf_network_from_json(const char* text, pf_network** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = wrap(network_from_json(text));
  });
}

pf_status pf_network_to_json(const pf_network* net, char** out) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    *out = dup(to_json(net->net));
  });
}

void pf_network_free(pf_network* net) { delete net; }

pf_status pf_network_info_get(const pf_network* net, pf_network_info* out) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    out->input_dim = net->net.input_dim();
    out->output_dim = net->net.output_dim();
    out->layers = net->net.layer_count();
    out->nodes = net->net.node_count();
    out->step_units = net->net.step_unit_count();
    out->relu_step = net->net.flavor() == Flavor::kReluStep;
  });
}

pf_status pf_network_eval(const pf_network* net, const double* x, size_t nx, double* y, size_t ny) {
  return guarded([&] {
    need(net, "net");
    need(x, "x");
    need(y, "y");
    require(ny >= net->net.output_dim(), "output buffer holds " + std::to_string(ny) +
                                             " values, network has " +
                                             std::to_string(net->net.output_dim()) + " outputs");
    const auto r = net->net.eval(std::span<const double>(x, nx));
    std::copy(r.begin(), r.end(), y);
  });
}

pf_status pf_compose(const pf_network* outer, const pf_network* inner, pf_network** out) {
  return guarded([&] {
    need(outer, "outer");
    need(inner, "inner");
    need(out, "out");
    *out = wrap(compose(outer->net, inner->net));
  });
}

pf_status pf_parallel(const pf_network* const* nets, size_t count, pf_network** out) {
  return guarded([&] {
    need(out, "out");
    require(count > 0 && nets, "parallel needs at least one network");
    std::vector<Network> v;
    for (size_t i = 0; i < count; ++i) {
      need(nets[i], "nets[i]");
      v.push_back(nets[i]->net);
    }
    *out = wrap(parallel(v));
  });
}

pf_status pf_replace_steps(const pf_network* net, double delta, pf_network** out) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    *out = wrap(replace_steps(net->net, delta));
  });
}

pf_status pf_perturb_first_weight(const pf_network* net, double delta, pf_network** out) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    *out = wrap(perturb_first_weight(net->net, delta));
  });
}

pf_status pf_build_tent(int k, pf_network** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap(tent_map_net(k));
  });
}

pf_status pf_build_space_filling(int n, int d, int N, int L, pf_network** out, char** plan) {
  return guarded([&] {
    need(out, "out");
    auto [net, p] = space_filling_net(n, d, N, L);
    if (plan) *plan = dup(plan_json(p));
    *out = wrap(std::move(net));
  });
}

pf_status pf_build_clamp(double lo, double hi, pf_network** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap(clamp_net(lo, hi));
  });
}

pf_status pf_build_multiplier(double M, double eps, pf_network** out) {
  return guarded([&] {
    need(out, "out");
    require(M >= 1.0 && eps > 0.0 && eps < 1.0, "multiplier needs M >= 1 and 0 < eps < 1");
    *out = wrap(multiplier_net(M, eps));
  });
}

pf_status pf_build_power_tower(int n, double M, double eps, pf_network** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap(power_tower_net(n, M, eps));
  });
}

pf_status pf_build_sum_of_uniforms(int n, pf_network** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap(sum_of_uniforms_net(n));
  });
}

pf_status pf_build_normal_cdf(double eps, pf_network** out, char** cert) {
  return guarded([&] { emit(normal_cdf_net(eps), out, cert); });
}

pf_status pf_build_inverter(const pf_network* f, double a, double b, int t, double lipschitz_inv,
                            double f_eps, pf_network** out, char** cert) {
  return guarded([&] {
    need(f, "f");
    InverterOptions o;
    o.f_eps = f_eps;
    emit(binary_search_inverter(f->net, a, b, t, lipschitz_inv, o), out, cert);
  });
}

pf_status pf_build_inverse_normal_cdf(double eps, pf_network** out, char** cert) {
  return guarded([&] { emit(inverse_normal_cdf_net(eps), out, cert); });
}

pf_status pf_build_uniform_to_normal(double eps, pf_network** out, char** cert) {
  return guarded([&] { emit(uniform_to_normal_net(eps), out, cert); });
}

pf_status pf_build_analytic(const char* kind, double a, double b, double eps, double alpha,
                            pf_network** out, char** cert) {
  return guarded([&] {
    need(kind, "kind");
    emit(analytic_gadget(gadget_kind_from_string(kind), a, b, eps, alpha), out, cert);
  });
}

pf_status pf_build_box_muller(double eps, pf_network** out, char** cert) {
  return guarded([&] { emit(box_muller_net(eps), out, cert); });
}

pf_status pf_enumerate_regions(const pf_network* net, const double* lo, const double* hi,
                               size_t dim, size_t* count, char** out) {
  return guarded([&] {
    need(net, "net");
    need(lo, "lo");
    need(hi, "hi");
    Box box{std::vector<double>(lo, lo + dim), std::vector<double>(hi, hi + dim)};
    const auto regions = enumerate_regions(net->net, box);
    if (count) *count = regions.size();
    if (out) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& r : regions) {
        nlohmann::ordered_json j;
        j["pattern"] = r.pattern;
        j["interior_point"] = r.interior_point;
        j["inradius"] = r.inradius;
        j["matrix"] = r.matrix;
        j["offset"] = r.offset;
        nlohmann::ordered_json cs = nlohmann::ordered_json::array();
        for (const auto& h : r.constraints) cs.push_back({{"a", h.a}, {"b", h.b}});
        j["constraints"] = cs;
        arr.push_back(j);
      }
      *out = dup(arr.dump(2));
    }
  });
}

pf_status pf_breakpoints_1d(const pf_network* net, double a, double b, double** out, size_t* count) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    need(count, "count");
    const auto bp = breakpoints_1d(net->net, a, b);
    *out = dup(bp);
    *count = bp.size();
  });
}

pf_status pf_pushforward_cdf(const pf_network* net, double a, double b, pf_cdf** out) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    *out = new pf_cdf{pushforward_cdf_1d(net->net, a, b)};
  });
}

pf_status pf_empirical_cdf(const double* samples, size_t count, pf_cdf** out) {
  return guarded([&] {
    need(samples, "samples");
    need(out, "out");
    *out = new pf_cdf{empirical_cdf(std::vector<double>(samples, samples + count))};
  });
}

pf_status pf_cdf_from_points(const double* x, const double* v, size_t count, pf_cdf** out) {
  return guarded([&] {
    need(x, "x");
    need(v, "v");
    need(out, "out");
    PiecewiseLinearCdf c{std::vector<double>(x, x + count), std::vector<double>(v, v + count)};
    c.validate();
    *out = new pf_cdf{std::move(c)};
  });
}

void pf_cdf_free(pf_cdf* cdf) { delete cdf; }

pf_status pf_cdf_points(const pf_cdf* cdf, const double** x, const double** v, size_t* count) {
  return guarded([&] {
    need(cdf, "cdf");
    if (x) *x = cdf->cdf.x.data();
    if (v) *v = cdf->cdf.v.data();
    if (count) *count = cdf->cdf.x.size();
  });
}

pf_status pf_cdf_eval(const pf_cdf* cdf, double t, double* out) {
  return guarded([&] {
    need(cdf, "cdf");
    need(out, "out");
    *out = cdf->cdf(t);
  });
}

pf_status pf_cdf_to_csv(const pf_cdf* cdf, const char* comment, char** out) {
  return guarded([&] {
    need(cdf, "cdf");
    need(out, "out");
    Table t;
    t.columns = {"breakpoint", "value"};
    if (comment && *comment) t.comments.push_back(comment);
    for (size_t i = 0; i < cdf->cdf.x.size(); ++i) t.add_row({fmt(cdf->cdf.x[i]), fmt(cdf->cdf.v[i])});
    *out = dup(to_csv(t));
  });
}

pf_status pf_cdf_from_csv(const char* text, pf_cdf** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    const Table t = parse_csv(text);
    PiecewiseLinearCdf c{t.numeric_column("breakpoint"), t.numeric_column("value")};
    for (size_t i = 0; i < c.x.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.v[i])) {
        throw Error(ErrorKind::kFormat, "cdf csv: non-numeric cell in row " + std::to_string(i + 1));
      }
    }
    c.validate();
    *out = new pf_cdf{std::move(c)};
  });
}

pf_status pf_wasserstein_1d(const pf_cdf* f, const pf_cdf* g, double* out) {
  return guarded([&] {
    need(f, "f");
    need(g, "g");
    need(out, "out");
    *out = wasserstein_1d(f->cdf, g->cdf);
  });
}

pf_status pf_wasserstein_1d_normal(const pf_cdf* f, double* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = wasserstein_1d_normal(f->cdf);
  });
}

pf_status pf_empirical_wasserstein(const double* a, const double* b, size_t count, size_t dim,
                                   double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    const auto A = EmpiricalDistribution::uniform_weights(dim, std::vector<double>(a, a + count * dim));
    const auto B = EmpiricalDistribution::uniform_weights(dim, std::vector<double>(b, b + count * dim));
    *out = empirical_wasserstein(A, B);
  });
}

pf_status pf_sample_pushforward(const pf_network* net, int source, uint64_t seed, uint64_t stream,
                                size_t count, unsigned jobs, double** out) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    require(source >= PF_SOURCE_UNIFORM && source <= PF_SOURCE_UNIFORM_STRATIFIED,
            "unknown source kind " + std::to_string(source));
    SourceDistribution s;
    s.kind = source == PF_SOURCE_NORMAL ? SourceKind::kStandardNormal : SourceKind::kUniformBox;
    s.stratified = source == PF_SOURCE_UNIFORM_STRATIFIED;
    s.dims = net->net.input_dim();
    s.seed = seed;
    s.stream = stream;
    *out = dup(sample_pushforward(net->net, s, count, jobs).points);
  });
}

pf_status pf_samples_to_csv(const double* points, size_t count, size_t dim, const char* comment,
                            char** out) {
  return guarded([&] {
    need(out, "out");
    require(dim > 0, "sample dim must be positive");
    require(points || count == 0, "points must not be null");
    Table t;
    for (size_t k = 0; k < dim; ++k) t.columns.push_back("dim" + std::to_string(k));
    if (comment && *comment) t.comments.push_back(comment);
    for (size_t i = 0; i < count; ++i) {
      std::vector<std::string> row;
      for (size_t k = 0; k < dim; ++k) row.push_back(fmt(points[i * dim + k]));
      t.add_row(std::move(row));
    }
    *out = dup(to_csv(t));
  });
}

pf_status pf_samples_from_csv(const char* text, double** points, size_t* count, size_t* dim) {
  return guarded([&] {
    need(text, "text");
    need(points, "points");
    need(count, "count");
    need(dim, "dim");
    const Table t = parse_csv(text);
    std::vector<double> v;
    for (size_t k = 0; k < t.columns.size(); ++k) {
      if (t.columns[k] != "dim" + std::to_string(k)) {
        throw Error(ErrorKind::kFormat, "sample csv: expected header dim0,...,dimk");
      }
    }
    for (const auto& r : t.rows) {
      for (const auto& cell : r) {
        char* end = nullptr;
        const double x = std::strtod(cell.c_str(), &end);
        if (cell.empty() || *end != '\0') throw Error(ErrorKind::kFormat, "sample csv: bad number '" + cell + "'");
        v.push_back(x);
      }
    }
    *points = dup(v);
    *count = t.rows.size();
    *dim = t.columns.size();
  });
}

pf_status pf_box_coupling_check(int n, int d, int N, int L, const pf_network* net, int grid_per_box,
                                int* ok) {
  return guarded([&] {
    need(net, "net");
    need(ok, "ok");
    *ok = box_coupling_check(net->net, plan_space_filling(n, d, N, L), grid_per_box);
  });
}

pf_status pf_tent_upper_bound(int N, int L, int n, int d, double* out) {
  return guarded([&] { need(out, "out"); *out = tent_upper_bound(N, L, n, d); });
}

pf_status pf_tent_upper_bound_appendix(int N, int L, int n, int d, double* out) {
  return guarded([&] { need(out, "out"); *out = tent_upper_bound_appendix(N, L, n, d); });
}

pf_status pf_affine_piece_bound(int N, int L, int n0, double* out) {
  return guarded([&] { need(out, "out"); *out = affine_piece_bound(N, L, n0); });
}

pf_status pf_plane_distance_bound(int n, int d, double l, double m_B, double* out) {
  return guarded([&] { need(out, "out"); *out = plane_distance_bound(n, d, l, m_B); });
}

pf_status pf_dimension_gap_bound(int n, int d, double l, double m_B, double N_A, double* out) {
  return guarded([&] { need(out, "out"); *out = dimension_gap_bound(n, d, l, m_B, N_A); });
}

pf_status pf_network_lower_bound(int N, int L, int n, int d, double* out) {
  return guarded([&] { need(out, "out"); *out = network_lower_bound(N, L, n, d); });
}

pf_status pf_pwl_phi_best_l1(int pieces, double a, double b, double* out) {
  return guarded([&] { need(out, "out"); *out = pwl_phi_best_l1(pieces, a, b); });
}

pf_status pf_bound_report(int N, int L, int n, int d, char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(to_json(bound_report(unit_cube_params(N, L, n, d))));
  });
}

pf_status pf_experiment_defaults(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(describe_defaults());
  });
}

pf_status pf_run_experiment(const char* config, int seed_set, uint64_t seed, unsigned jobs,
                            const char* out_dir, int write, char** csv, char** svg) {
  return guarded([&] {
    need(config, "config");
    ExperimentConfig cfg = config_from_json(config);
    if (seed_set) cfg.seed = seed;
    if (jobs > 0) cfg.jobs = jobs;
    if (out_dir) cfg.out_dir = out_dir;
    cfg = with_defaults(cfg);
    const ExperimentOutput res = run_experiment(cfg);
    if (write) write_experiment(cfg, res);
    if (csv) *csv = dup(to_csv(res.table));
    if (svg) *svg = dup(res.svg);
  });
}

void pf_verify_options_init(pf_verify_options* opt) {
  if (!opt) return;
  opt->seed = kDefaultSeed;
  opt->jobs = 1;
  opt->fault_criterion = 0;
  opt->check_timing = 1;
  opt->only = nullptr;
  opt->only_count = 0;
}

pf_status pf_verify(const pf_verify_options* opt, int* all_pass, char** report, char** lines,
                    char** numeric) {
  return guarded([&] {
    need(opt, "opt");
    VerifyOptions o;
    o.seed = opt->seed;
    o.jobs = std::max(1u, opt->jobs);
    o.fault_criterion = opt->fault_criterion;
    o.check_timing = opt->check_timing != 0;
    if (opt->only) o.only.assign(opt->only, opt->only + opt->only_count);
    for (int id : o.only) require(id >= 1 && id <= kCriterionCount, "unknown criterion " + std::to_string(id));
    const auto results = run_verify(o);
    bool pass = true;
    std::string text;
    for (const auto& r : results) {
      pass = pass && r.pass;
      text += format_line(r) + "\n";
    }
    if (all_pass) *all_pass = pass;
    if (report) *report = dup(verify_json(results, o));
    if (lines) *lines = dup(text);
    if (numeric) *numeric = dup(numeric_summary(results));
  });
}

}  // extern "C"
