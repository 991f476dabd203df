// Copyright 2026 The Authors.
//
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

// Experiment harness behind the tcsc_bench CLI: one run, seed sets, sweeps
// and their JSON / CSV reports.

#ifndef TCSC_BENCH_HPP_
#define TCSC_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcsc/assign_single.hpp"
#include "tcsc/core.hpp"

namespace tcsc {

enum class Mode { kSingleApprox, kSingleApproxStar, kMsqmSerial, kMsqmGroup, kMsqmTask, kMmqm };

std::string_view ModeName(Mode mode);
std::optional<Mode> ParseMode(std::string_view name);
bool IsSingleMode(Mode mode);

struct BenchConfig {
  Mode mode = Mode::kSingleApproxStar;
  int m = 500;
  int tasks = 300;
  int workers = 2000;
  double budget = 100.0;
  double arena = 1000.0;
  RunConfig run;
  std::string data;  // dataset path; empty means generate from run.seed
};

struct RunMetrics {
  Mode mode = Mode::kSingleApproxStar;
  std::uint64_t seed = 0;
  double quality = 0.0;  // q, q_sum or q_min depending on the mode
  double q_sum = 0.0;
  double q_min = 0.0;
  double spent = 0.0;
  std::optional<double> pruning_ratio;  // tree modes only
  std::int64_t conflict_count = 0;
  int iterations = 0;
  std::int64_t evaluations = 0;
  bool used_singleton = false;
  int groups = 1;
  double avg_task_cost = 0.0;  // cost of executing every slot at rank-1 prices
  double budget_ratio = 0.0;   // budget / avg_task_cost
  std::string digest;          // multi-task committed set
  PhaseTimings timings;
};

// Generates (or loads) the instance for config.run.seed, validates it and
// runs the mode. Throws kValidationFailure, kUnreadableDataset, kInvalidConfig.
RunMetrics RunOnce(const BenchConfig& config);
RunMetrics RunOnInstance(const BenchConfig& config, const Instance& instance);

enum class SweepAxis { kNone, kM, kTasks, kBudget, kK, kTs, kCores, kDist };

std::optional<SweepAxis> ParseSweepAxis(std::string_view name);
std::string_view SweepAxisName(SweepAxis axis);
// Returns the config with the axis set to `value`. Throws kBadFlag.
BenchConfig ApplyAxis(BenchConfig config, SweepAxis axis, const std::string& value);

struct SweepRow {
  std::string value;  // axis value, empty without an axis
  RunMetrics metrics;
};

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one run
};

struct SweepAggregate {
  std::string value;
  int runs = 0;
  Stat quality, spent, pruning_ratio, conflict_count, iterations, total_seconds;
};

struct SweepReport {
  BenchConfig base;
  SweepAxis axis = SweepAxis::kNone;
  std::vector<std::string> values;
  std::vector<std::uint64_t> seeds;
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
};

// Runs every (value, seed) pair; seeds are base.run.seed .. +n_seeds-1.
SweepReport Sweep(const BenchConfig& base, SweepAxis axis, const std::vector<std::string>& values,
                  int n_seeds);

std::string ReportJson(const SweepReport& report);
std::string ReportCsv(const SweepReport& report);

}  // namespace tcsc

#endif  // TCSC_BENCH_HPP_
