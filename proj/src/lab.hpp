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


#ifndef PUSHFORGE_LAB_HPP_
#define PUSHFORGE_LAB_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "network.hpp"
#include "report.hpp"

namespace pushforge {

inline constexpr std::uint64_t kDefaultSeed = 20260101;

// Experiment kinds: sweep-tent, sweep-phi, sweep-inverse, boxmuller-demo,
// berry-esseen, bounds.
struct ExperimentConfig {
  std::string kind;
  std::vector<int> N, L, n, d, k, samples;
  std::vector<double> eps;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
  unsigned jobs = 1;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& key, double fallback) const;
  void validate() const;
};

// Fills every empty grid of `kind` with its documented default.
ExperimentConfig default_config(std::string_view kind);
ExperimentConfig with_defaults(ExperimentConfig cfg);
ExperimentConfig config_from_json(std::string_view text);
std::string to_json(const ExperimentConfig& cfg);
std::string describe_defaults();

struct ExperimentOutput {
  Table table;
  std::string svg;
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Writes <out>/<kind>.csv and <out>/<kind>.svg; never replaces files.
std::vector<std::string> write_experiment(const ExperimentConfig& cfg,
                                          const ExperimentOutput& out);

// --- verify ------------------------------------------------------------------

struct Measurement {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "==", "<"
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<Measurement> measurements;
  double seconds = 0.0;
  double time_limit = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
  std::vector<int> only;    // empty = all
  int fault_criterion = 0;  // test hook: perturb one weight of that criterion's net
  bool check_timing = true;
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const VerifyOptions& opt);
// Runs criteria 1..9, then (if selected) criterion 10, which reruns 1..9
// and compares numeric output byte for byte.
std::vector<CriterionResult> run_verify(const VerifyOptions& opt);

// Numbers only (no timings); criterion 10 compares these.
std::string numeric_summary(const std::vector<CriterionResult>& results);
std::string verify_json(const std::vector<CriterionResult>& results, const VerifyOptions& opt);
std::string format_line(const CriterionResult& r);

// Adds `delta` to the first weight of the first layer.
Network perturb_first_weight(const Network& net, double delta);
// Adds `delta` to the first weight of the output layer. Used where an input
// weight sits in front of a long clamped chain that absorbs the change.
Network perturb_output_weight(const Network& net, double delta);

}  // namespace pushforge

#endif  // PUSHFORGE_LAB_HPP_
