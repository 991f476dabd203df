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

// Budgeted single-task quality maximization.
//
// Both solvers run the same cost-effective greedy: keep executing the
// feasible slot with the largest Delta q / cost (zero-cost slots first, by
// Delta q) until nothing fits, then compare against the best feasible
// single slot and keep whichever has higher quality.
//
// Approx evaluates every candidate over all m slots; ApproxStar retrieves the
// argmax through the Voronoi tree. Both evaluate gains through the same code
// path, so they pick identical slots.

#ifndef TCSC_ASSIGN_SINGLE_HPP_
#define TCSC_ASSIGN_SINGLE_HPP_

#include <cstdint>
#include <vector>

#include "tcsc/core.hpp"
#include "tcsc/task_model.hpp"
#include "tcsc/worker_pool.hpp"

namespace tcsc {

struct PhaseTimings {
  double knn_interp = 0.0;
  double heuristic_eval = 0.0;
  double tree_build = 0.0;
  double tree_update = 0.0;
  double total = 0.0;

  PhaseTimings& operator+=(const PhaseTimings& o);
};

// Rank-1 quote of every slot for one task (slot-indexed, size m+1).
struct SlotQuotes {
  std::vector<double> cost;         // +inf where no worker is available
  std::vector<double> reliability;  // 1.0 where no worker is available
  std::vector<WorkerId> worker;
};

SlotQuotes QuoteTask(const WorkerPool& pool, const TaskSpec& task);

struct SingleRunResult {
  TaskState final_state;
  double quality = 0.0;
  double spent = 0.0;
  int iterations = 0;
  std::vector<Slot> sequence;     // greedy execution order
  bool used_singleton = false;    // final state is the best single slot
  double pruning_ratio = -1.0;    // tree solver only
  std::int64_t evaluations = 0;   // exact gain evaluations
  std::int64_t candidates = 0;    // feasible unexecuted slots, summed per step
  PhaseTimings timings;
};

// Throws kValidationFailure for a bad config, kInvalidConfig for a bad budget.
SingleRunResult Approx(const TaskSpec& task, const WorkerPool& pool, double budget,
                       const RunConfig& config);
SingleRunResult ApproxStar(const TaskSpec& task, const WorkerPool& pool, double budget,
                           const RunConfig& config);

struct OptimumResult {
  std::vector<Slot> subset;
  double quality = 0.0;
  double cost = 0.0;
};

// Exhaustive optimum over executed-slot subsets priced at rank-1 cost.
// Throws kInstanceTooLarge when m > max_m or max_m > 20.
OptimumResult BruteForceOptimum(const TaskSpec& task, const WorkerPool& pool,
                                double budget, const RunConfig& config, int max_m = 14);

}  // namespace tcsc

#endif  // TCSC_ASSIGN_SINGLE_HPP_
