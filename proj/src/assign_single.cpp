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

#include "tcsc/assign_single.hpp"

#include <chrono>
#include <limits>
#include <optional>

#include "tcsc/voronoi_tree.hpp"

namespace tcsc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void CheckConfig(const TaskSpec& task, const RunConfig& config) {
  if (config.k < 1 || config.k > kMaxK || config.split_threshold < 1 || task.m < 1) {
    throw TcscError(ErrorCode::kValidationFailure, "invalid k, t_s or m");
  }
}

struct Pick {
  Slot slot = 0;
  double gain = 0.0;
  Priority key;
};

// Builds the result once the greedy loop has finished.
SingleRunResult Finish(const TaskSpec& task, const WorkerPool& pool, const RunConfig& config,
                       const SlotQuotes& quotes, TaskState greedy,
                       const std::optional<Pick>& single) {
  const ReliabilityTable table(pool.workers());
  SingleRunResult out;
  out.final_state = std::move(greedy);
  out.quality = TaskQuality(out.final_state, config.k, config.quality_mode, &table);
  if (single) {
    TaskState alt(task);
    alt.execute(single->slot, quotes.worker[single->slot], quotes.cost[single->slot]);
    const double q = TaskQuality(alt, config.k, config.quality_mode, &table);
    if (q > out.quality) {
      out.final_state = std::move(alt);
      out.quality = q;
      out.used_singleton = true;
    }
  }
  out.spent = out.final_state.spent();
  return out;
}

}  // namespace

PhaseTimings& PhaseTimings::operator+=(const PhaseTimings& o) {
  knn_interp += o.knn_interp;
  heuristic_eval += o.heuristic_eval;
  tree_build += o.tree_build;
  tree_update += o.tree_update;
  total += o.total;
  return *this;
}

SlotQuotes QuoteTask(const WorkerPool& pool, const TaskSpec& task) {
  const std::size_t n = static_cast<std::size_t>(task.m) + 1;
  SlotQuotes q{std::vector<double>(n, kInf), std::vector<double>(n, 1.0),
               std::vector<WorkerId>(n, 0)};
  for (Slot j = 1; j <= task.m; ++j) {
    if (auto quote = pool.kth_nearest_available(task.location, j, 1)) {
      q.cost[j] = quote->cost;
      q.reliability[j] = quote->reliability;
      q.worker[j] = quote->worker;
    }
  }
  return q;
}

SingleRunResult Approx(const TaskSpec& task, const WorkerPool& pool, double budget_total,
                       const RunConfig& config) {
  const auto start = Clock::now();
  CheckConfig(task, config);
  Budget budget(budget_total);
  const SlotQuotes quotes = QuoteTask(pool, task);
  TaskModel model(task.m, config.k, config.quality_mode);
  TaskState state(task);
  PhaseTimings timings;
  std::int64_t evaluations = 0;

  // Scans every feasible unexecuted slot, evaluating its gain over all m slots.
  auto argmax = [&](double remaining, bool unit) {
    std::optional<Pick> best;
    const auto t0 = Clock::now();
    for (Slot e = 1; e <= task.m; ++e) {
      if (model.slot(e).executed || quotes.cost[e] > remaining) continue;
      const double g = model.gain_full(e, quotes.reliability[e]);
      ++evaluations;
      const Priority key = HeuristicKey(g, unit ? 1.0 : quotes.cost[e]);
      if (!best || best->key < key) best = Pick{e, g, key};
    }
    timings.heuristic_eval += Since(t0);
    return best;
  };

  const std::optional<Pick> single = argmax(budget.total(), true);
  std::vector<Slot> sequence;
  while (true) {
    const std::optional<Pick> pick = argmax(budget.remaining(), false);
    if (!pick) break;
    const double cost = quotes.cost[pick->slot];
    const auto t0 = Clock::now();
    model.execute(pick->slot, quotes.reliability[pick->slot]);
    timings.knn_interp += Since(t0);
    state.execute(pick->slot, quotes.worker[pick->slot], cost);
    budget.spend(cost);
    sequence.push_back(pick->slot);
  }

  SingleRunResult out = Finish(task, pool, config, quotes, std::move(state), single);
  out.sequence = std::move(sequence);
  out.iterations = static_cast<int>(out.sequence.size());
  out.evaluations = evaluations;
  out.candidates = evaluations;
  timings.total = Since(start);
  out.timings = timings;
  return out;
}

SingleRunResult ApproxStar(const TaskSpec& task, const WorkerPool& pool, double budget_total,
                           const RunConfig& config) {
  const auto start = Clock::now();
  CheckConfig(task, config);
  Budget budget(budget_total);
  const SlotQuotes quotes = QuoteTask(pool, task);
  PhaseTimings timings;
  std::int64_t candidates = 0;
  std::int64_t evaluations = 0;

  auto count_feasible = [&](const TaskModel& model, double remaining) {
    std::int64_t n = 0;
    for (Slot e = 1; e <= task.m; ++e) {
      n += !model.slot(e).executed && quotes.cost[e] <= remaining ? 1 : 0;
    }
    return n;
  };

  // Best feasible single slot: the same search under unit costs.
  std::optional<Pick> single;
  {
    TaskModel empty(task.m, config.k, config.quality_mode);
    std::vector<double> unit(quotes.cost.size(), kInf);
    for (Slot e = 1; e <= task.m; ++e) {
      if (quotes.cost[e] <= budget.total()) unit[e] = 1.0;
    }
    auto t0 = Clock::now();
    VoronoiTree tree(empty, config.split_threshold, std::move(unit), quotes.reliability);
    timings.tree_build += Since(t0);
    candidates += count_feasible(empty, budget.total());
    t0 = Clock::now();
    if (auto r = tree.best_slot(1.0)) single = Pick{r->slot, r->gain, r->key};
    timings.heuristic_eval += Since(t0);
    evaluations += tree.evaluations();
  }

  TaskModel model(task.m, config.k, config.quality_mode);
  auto t0 = Clock::now();
  VoronoiTree tree(model, config.split_threshold, quotes.cost, quotes.reliability);
  timings.tree_build += Since(t0);
  TaskState state(task);
  std::vector<Slot> sequence;
  while (true) {
    candidates += count_feasible(model, budget.remaining());
    t0 = Clock::now();
    const std::optional<BestSlotResult> pick = tree.best_slot(budget.remaining());
    timings.heuristic_eval += Since(t0);
    if (!pick) break;
    t0 = Clock::now();
    tree.execute(pick->slot);
    timings.tree_update += Since(t0);
    state.execute(pick->slot, quotes.worker[pick->slot], pick->cost);
    budget.spend(pick->cost);
    sequence.push_back(pick->slot);
  }
  evaluations += tree.evaluations();

  SingleRunResult out = Finish(task, pool, config, quotes, std::move(state), single);
  out.sequence = std::move(sequence);
  out.iterations = static_cast<int>(out.sequence.size());
  out.evaluations = evaluations;
  out.candidates = candidates;
  out.pruning_ratio =
      candidates > 0 ? 1.0 - static_cast<double>(evaluations) / static_cast<double>(candidates)
                     : 0.0;
  timings.total = Since(start);
  out.timings = timings;
  return out;
}

OptimumResult BruteForceOptimum(const TaskSpec& task, const WorkerPool& pool,
                                double budget, const RunConfig& config, int max_m) {
  if (max_m > 20 || task.m > max_m) {
    throw TcscError(ErrorCode::kInstanceTooLarge,
                    "m=" + std::to_string(task.m) + " exceeds " + std::to_string(max_m));
  }
  CheckConfig(task, config);
  const SlotQuotes quotes = QuoteTask(pool, task);
  const bool reliable = config.quality_mode == QualityMode::kReliability;
  OptimumResult best;
  const std::uint32_t limit = 1u << task.m;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    double cost = 0.0;
    std::vector<Slot> subset;
    for (Slot j = 1; j <= task.m; ++j) {
      if (mask & (1u << (j - 1))) {
        cost += quotes.cost[j];
        subset.push_back(j);
      }
    }
    if (!(cost <= budget)) continue;
    std::vector<double> lambda;
    if (reliable) {
      lambda.assign(quotes.reliability.begin(), quotes.reliability.end());
    }
    const double q = TaskQuality(ExecutedTimeline(task.m, subset), config.k, lambda);
    if (mask == 0 || q > best.quality) best = OptimumResult{subset, q, cost};
  }
  return best;
}

}  // namespace tcsc
