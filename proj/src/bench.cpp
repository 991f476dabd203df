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

#include "tcsc/bench.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "tcsc/assign_multi.hpp"
#include "tcsc/datagen.hpp"
#include "tcsc/io.hpp"
#include "tcsc/worker_pool.hpp"

namespace tcsc {

namespace {

using nlohmann::json;

constexpr std::pair<Mode, std::string_view> kModes[] = {
    {Mode::kSingleApprox, "single-approx"}, {Mode::kSingleApproxStar, "single-approx-star"},
    {Mode::kMsqmSerial, "msqm-serial"},     {Mode::kMsqmGroup, "msqm-group"},
    {Mode::kMsqmTask, "msqm-task"},         {Mode::kMmqm, "mmqm"},
};

constexpr std::pair<SweepAxis, std::string_view> kAxes[] = {
    {SweepAxis::kNone, "none"},   {SweepAxis::kM, "m"},   {SweepAxis::kTasks, "tasks"},
    {SweepAxis::kBudget, "budget"}, {SweepAxis::kK, "k"}, {SweepAxis::kTs, "ts"},
    {SweepAxis::kCores, "cores"}, {SweepAxis::kDist, "dist"},
};

[[noreturn]] void BadFlag(const std::string& what) { throw TcscError(ErrorCode::kBadFlag, what); }

long long ParseInt(const std::string& s, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) BadFlag(std::string("bad ") + what + " value '" + s + "'");
  return v;
}

double ParseDouble(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) BadFlag(std::string("bad ") + what + " value '" + s + "'");
  return v;
}

double TaskCost(const WorkerPool& pool, const TaskSpec& task) {
  const SlotQuotes q = QuoteTask(pool, task);
  double sum = 0.0;
  for (Slot j = 1; j <= task.m; ++j) {
    if (std::isfinite(q.cost[j])) sum += q.cost[j];
  }
  return sum;
}

Stat Summarize(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

json ConfigJson(const BenchConfig& c) {
  return {{"mode", ModeName(c.mode)},
          {"m", c.m},
          {"tasks", c.tasks},
          {"workers", c.workers},
          {"budget", c.budget},
          {"arena", c.arena},
          {"k", c.run.k},
          {"ts", c.run.split_threshold},
          {"cores", c.run.cores},
          {"dist", DistributionName(c.run.distribution)},
          {"seed", c.run.seed},
          {"data", c.data}};
}

json MetricsJson(const SweepRow& row) {
  const RunMetrics& r = row.metrics;
  json j = {{"value", row.value},
            {"mode", ModeName(r.mode)},
            {"seed", r.seed},
            {"quality", r.quality},
            {"q_sum", r.q_sum},
            {"q_min", r.q_min},
            {"spent", r.spent},
            {"pruning_ratio", nullptr},
            {"conflict_count", r.conflict_count},
            {"iterations", r.iterations},
            {"evaluations", r.evaluations},
            {"used_singleton", r.used_singleton},
            {"groups", r.groups},
            {"avg_task_cost", r.avg_task_cost},
            {"budget_ratio", r.budget_ratio},
            {"digest", r.digest},
            {"knn_interp", r.timings.knn_interp},
            {"heuristic_eval", r.timings.heuristic_eval},
            {"tree_build", r.timings.tree_build},
            {"tree_update", r.timings.tree_update},
            {"total", r.timings.total}};
  if (r.pruning_ratio) j["pruning_ratio"] = *r.pruning_ratio;
  return j;
}

json StatJson(const Stat& s) { return {{"mean", s.mean}, {"stddev", s.stddev}}; }

std::string Num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string_view ModeName(Mode mode) {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "unknown";
}

std::optional<Mode> ParseMode(std::string_view name) {
  for (const auto& [m, n] : kModes) {
    if (n == name) return m;
  }
  return std::nullopt;
}

bool IsSingleMode(Mode mode) {
  return mode == Mode::kSingleApprox || mode == Mode::kSingleApproxStar;
}

std::optional<SweepAxis> ParseSweepAxis(std::string_view name) {
  for (const auto& [a, n] : kAxes) {
    if (n == name) return a;
  }
  return std::nullopt;
}

std::string_view SweepAxisName(SweepAxis axis) {
  for (const auto& [a, name] : kAxes) {
    if (a == axis) return name;
  }
  return "unknown";
}

BenchConfig ApplyAxis(BenchConfig c, SweepAxis axis, const std::string& value) {
  switch (axis) {
    case SweepAxis::kNone: break;
    case SweepAxis::kM: c.m = static_cast<int>(ParseInt(value, "m")); break;
    case SweepAxis::kTasks: c.tasks = static_cast<int>(ParseInt(value, "tasks")); break;
    case SweepAxis::kBudget: c.budget = ParseDouble(value, "budget"); break;
    case SweepAxis::kK: c.run.k = static_cast<int>(ParseInt(value, "k")); break;
    case SweepAxis::kTs: c.run.split_threshold = static_cast<int>(ParseInt(value, "ts")); break;
    case SweepAxis::kCores: c.run.cores = static_cast<int>(ParseInt(value, "cores")); break;
    case SweepAxis::kDist: {
      const auto d = ParseDistribution(value);
      if (!d) BadFlag("unknown distribution '" + value + "'");
      c.run.distribution = *d;
      break;
    }
  }
  return c;
}

RunMetrics RunOnInstance(const BenchConfig& config, const Instance& instance) {
  if (!std::isfinite(config.budget) || config.budget < 0.0) {
    throw TcscError(ErrorCode::kValidationFailure, "budget must be finite and >= 0");
  }
  const Instance valid = ValidatedInstance(instance.tasks, instance.workers, config.run);
  const int m = valid.tasks.front().m;
  const WorkerPool pool(valid.workers, m);

  RunMetrics out;
  out.mode = config.mode;
  out.seed = config.run.seed;

  std::vector<TaskSpec> used = valid.tasks;
  if (IsSingleMode(config.mode)) used.resize(1);
  for (const TaskSpec& t : used) out.avg_task_cost += TaskCost(pool, t);
  out.avg_task_cost /= static_cast<double>(used.size());
  out.budget_ratio = out.avg_task_cost > 0.0 ? config.budget / out.avg_task_cost
                                             : std::numeric_limits<double>::infinity();

  if (IsSingleMode(config.mode)) {
    const SingleRunResult r = config.mode == Mode::kSingleApprox
                                  ? Approx(used.front(), pool, config.budget, config.run)
                                  : ApproxStar(used.front(), pool, config.budget, config.run);
    out.quality = out.q_sum = out.q_min = r.quality;
    out.spent = r.spent;
    if (r.pruning_ratio >= 0.0) out.pruning_ratio = r.pruning_ratio;
    out.iterations = r.iterations;
    out.evaluations = r.evaluations;
    out.used_singleton = r.used_singleton;
    out.timings = r.timings;
    MultiRunResult as_multi;
    as_multi.states = {r.final_state};
    out.digest = CommittedDigest(as_multi);
    return out;
  }

  MultiRunResult r;
  switch (config.mode) {
    case Mode::kMsqmSerial: r = MsqmSerial(used, pool, config.budget, config.run); break;
    case Mode::kMsqmGroup: r = MsqmParallelGroup(used, pool, config.budget, config.run); break;
    case Mode::kMsqmTask: r = MsqmParallelTask(used, pool, config.budget, config.run); break;
    default: r = Mmqm(used, pool, config.budget, config.run); break;
  }
  out.q_sum = r.q_sum;
  out.q_min = r.q_min;
  out.quality = config.mode == Mode::kMmqm ? r.q_min : r.q_sum;
  out.spent = r.spent;
  out.conflict_count = r.conflict_count;
  out.iterations = r.iterations;
  out.evaluations = r.evaluations;
  out.used_singleton = r.used_singleton;
  out.groups = r.groups;
  out.timings = r.timings;
  out.digest = CommittedDigest(r);
  return out;
}

RunMetrics RunOnce(const BenchConfig& config) {
  if (!config.data.empty()) return RunOnInstance(config, LoadDataset(config.data));
  GenSpec spec;
  spec.n_tasks = IsSingleMode(config.mode) ? 1 : config.tasks;
  spec.n_workers = config.workers;
  spec.m = config.m;
  spec.distribution = config.run.distribution;
  spec.arena = config.arena;
  spec.seed = config.run.seed;
  Instance instance;
  try {
    instance = GenInstance(spec);
  } catch (const TcscError& e) {
    throw TcscError(ErrorCode::kValidationFailure, e.what());
  }
  return RunOnInstance(config, instance);
}

SweepReport Sweep(const BenchConfig& base, SweepAxis axis, const std::vector<std::string>& values,
                  int n_seeds) {
  if (n_seeds < 1) BadFlag("--seeds must be >= 1");
  SweepReport report;
  report.base = base;
  report.axis = axis;
  report.values = axis == SweepAxis::kNone ? std::vector<std::string>{""} : values;
  if (report.values.empty()) BadFlag("sweep needs at least one value");
  for (int s = 0; s < n_seeds; ++s) report.seeds.push_back(base.run.seed + s);

  for (const std::string& value : report.values) {
    const BenchConfig c = ApplyAxis(base, axis, value);
    std::vector<double> q, spent, prune, conf, it, total;
    for (std::uint64_t seed : report.seeds) {
      BenchConfig run = c;
      run.run.seed = seed;
      SweepRow row{value, RunOnce(run)};
      q.push_back(row.metrics.quality);
      spent.push_back(row.metrics.spent);
      if (row.metrics.pruning_ratio) prune.push_back(*row.metrics.pruning_ratio);
      conf.push_back(static_cast<double>(row.metrics.conflict_count));
      it.push_back(row.metrics.iterations);
      total.push_back(row.metrics.timings.total);
      report.rows.push_back(std::move(row));
    }
    report.aggregates.push_back(SweepAggregate{value, n_seeds, Summarize(q), Summarize(spent),
                                               Summarize(prune), Summarize(conf), Summarize(it),
                                               Summarize(total)});
  }
  return report;
}

std::string ReportJson(const SweepReport& report) {
  json doc;
  doc["version"] = 1;
  doc["config"] = ConfigJson(report.base);
  doc["axis"] = SweepAxisName(report.axis);
  doc["values"] = report.values;
  doc["seeds"] = report.seeds;
  json runs = json::array();
  for (const SweepRow& row : report.rows) runs.push_back(MetricsJson(row));
  doc["runs"] = std::move(runs);
  json aggs = json::array();
  for (const SweepAggregate& a : report.aggregates) {
    aggs.push_back({{"value", a.value},
                    {"runs", a.runs},
                    {"quality", StatJson(a.quality)},
                    {"spent", StatJson(a.spent)},
                    {"pruning_ratio", StatJson(a.pruning_ratio)},
                    {"conflict_count", StatJson(a.conflict_count)},
                    {"iterations", StatJson(a.iterations)},
                    {"total", StatJson(a.total_seconds)}});
  }
  doc["aggregates"] = std::move(aggs);
  return doc.dump(2);
}

std::string ReportCsv(const SweepReport& report) {
  std::ostringstream os;
  os << "kind,value,mode,seed,quality,q_sum,q_min,spent,pruning_ratio,conflict_count,iterations,"
        "evaluations,used_singleton,groups,avg_task_cost,budget_ratio,digest,knn_interp,"
        "heuristic_eval,tree_build,tree_update,total\n";
  for (const SweepRow& row : report.rows) {
    const RunMetrics& r = row.metrics;
    os << "run," << row.value << ',' << ModeName(r.mode) << ',' << r.seed << ',' << Num(r.quality)
       << ',' << Num(r.q_sum) << ',' << Num(r.q_min) << ',' << Num(r.spent) << ','
       << (r.pruning_ratio ? Num(*r.pruning_ratio) : "") << ',' << r.conflict_count << ','
       << r.iterations << ',' << r.evaluations << ',' << (r.used_singleton ? 1 : 0) << ','
       << r.groups << ',' << Num(r.avg_task_cost) << ',' << Num(r.budget_ratio) << ','
       << r.digest << ',' << Num(r.timings.knn_interp) << ',' << Num(r.timings.heuristic_eval)
       << ',' << Num(r.timings.tree_build) << ',' << Num(r.timings.tree_update) << ','
       << Num(r.timings.total) << '\n';
  }
  // Aggregate rows carry means in the metric columns.
  for (const SweepAggregate& a : report.aggregates) {
    os << "mean," << a.value << ',' << ModeName(report.base.mode) << ",," << Num(a.quality.mean)
       << ",,," << Num(a.spent.mean) << ',' << Num(a.pruning_ratio.mean) << ','
       << Num(a.conflict_count.mean) << ',' << Num(a.iterations.mean) << ",,,,,,,,,,,"
       << Num(a.total_seconds.mean) << '\n';
    os << "stddev," << a.value << ',' << ModeName(report.base.mode) << ",,"
       << Num(a.quality.stddev) << ",,," << Num(a.spent.stddev) << ','
       << Num(a.pruning_ratio.stddev) << ',' << Num(a.conflict_count.stddev) << ','
       << Num(a.iterations.stddev) << ",,,,,,,,,,," << Num(a.total_seconds.stddev) << '\n';
  }
  return os.str();
}

}  // namespace tcsc
