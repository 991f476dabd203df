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

// Multi-task assignment under one shared budget and a shared worker pool.
//
// MsqmSerial maximizes the quality sum greedily: every step executes the
// (task, slot) pair with the largest Delta q / cost across all tasks, taking
// the rank-1 eligible worker. A worker committed at slot t re-prices every
// other task that quoted it at t.
//
// MsqmParallelTask splits the same loop into a coordinator (pool, budget,
// heartbeat / conflicting / logging tables) and per-task executors that
// recompute their task's best slot concurrently. Grants go to the global
// maximum only once every executor has reported, so the committed set is the
// serial one. MsqmParallelGroup partitions tasks with the independence graph
// and runs the groups concurrently on disjoint sub-pools. Mmqm raises the
// minimum quality by repeatedly serving the currently worst task.

#ifndef TCSC_ASSIGN_MULTI_HPP_
#define TCSC_ASSIGN_MULTI_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tcsc/assign_single.hpp"
#include "tcsc/core.hpp"
#include "tcsc/worker_pool.hpp"

namespace tcsc {

struct Assignment {
  TaskId task = 0;
  Slot slot = 0;
  WorkerId worker = 0;
  double cost = 0.0;
  double heuristic = 0.0;
  bool free = false;  // zero-cost class
  std::int64_t step = 0;
};

struct HeartbeatRow {
  double value = std::numeric_limits<double>::infinity();
  bool free = false;
  std::int64_t iteration = 0;
};

class HeartbeatTable {
 public:
  void reset(const std::vector<TaskId>& tasks);
  void report(TaskId task, double value, bool free);
  const HeartbeatRow& row(TaskId task) const { return rows_.at(task); }
  const std::map<TaskId, HeartbeatRow>& rows() const { return rows_; }

 private:
  std::map<TaskId, HeartbeatRow> rows_;
};

struct ConflictRecord {
  std::set<TaskId> task_set;
  Slot slot = 0;
  int kth_rank = 1;
};

class ConflictingTable {
 public:
  // A grant at `slot` to one of `contenders` (all quoting the same worker).
  // Merges into the slot's record or opens one, then advances kth_rank.
  void grant(Slot slot, const std::set<TaskId>& contenders);
  const std::vector<ConflictRecord>& records() const { return records_; }

 private:
  std::vector<ConflictRecord> records_;
};

class LoggingTable {
 public:
  void append(Assignment a);
  const std::vector<Assignment>& entries() const { return entries_; }

 private:
  std::vector<Assignment> entries_;
};

struct MultiRunResult {
  std::vector<TaskState> states;  // same order as the input tasks
  double q_sum = 0.0;
  double q_min = 0.0;
  double spent = 0.0;
  int iterations = 0;
  std::int64_t conflict_count = 0;
  std::vector<Assignment> log;
  bool used_singleton = false;
  int groups = 1;
  std::int64_t evaluations = 0;
  PhaseTimings timings;

  // Only filled by MsqmParallelTask.
  HeartbeatTable heartbeats;
  ConflictingTable conflicts;
  bool replay_matches = true;
};

// Sorted (task, slot, worker) triples of a run.
std::vector<std::tuple<TaskId, Slot, WorkerId>> CommittedSet(const MultiRunResult& r);
// FNV-1a over the committed set, as 16 hex digits.
std::string CommittedDigest(const MultiRunResult& r);

struct IndependenceGraph {
  std::vector<TaskId> nodes;
  std::vector<std::pair<TaskId, TaskId>> edges;  // (smaller, larger) ids
  std::vector<std::vector<TaskId>> groups;       // connected components
  std::map<TaskId, int> rank;                    // degree + 1
  // (slot, worker) pairs inside each task's final bound.
  std::map<TaskId, std::vector<std::pair<Slot, WorkerId>>> bounds;
};

// Eligible workers at every slot within the rank-th nearest distance of the
// task (ties included).
std::vector<std::pair<Slot, WorkerId>> RankBound(const WorkerPool& pool,
                                                 const TaskSpec& task, int rank);

IndependenceGraph BuildIndependenceGraph(const std::vector<TaskSpec>& tasks,
                                         const WorkerPool& pool);

enum class Scheduler { kSimulated, kThreads };

struct ParallelOptions {
  Scheduler scheduler = Scheduler::kThreads;
  std::chrono::milliseconds heartbeat_timeout{60000};
  // Called by an executor before each job; lets tests inject delays.
  std::function<void(TaskId)> on_job;
};

MultiRunResult MsqmSerial(const std::vector<TaskSpec>& tasks, const WorkerPool& pool,
                          double budget, const RunConfig& config);
MultiRunResult MsqmParallelGroup(const std::vector<TaskSpec>& tasks, const WorkerPool& pool,
                                 double budget, const RunConfig& config);
// config.cores == 1 falls back to MsqmSerial. Throws kCoordinatorTimeout.
MultiRunResult MsqmParallelTask(const std::vector<TaskSpec>& tasks, const WorkerPool& pool,
                                double budget, const RunConfig& config,
                                const ParallelOptions& options = {});
MultiRunResult Mmqm(const std::vector<TaskSpec>& tasks, const WorkerPool& pool,
                    double budget, const RunConfig& config);

}  // namespace tcsc

#endif  // TCSC_ASSIGN_MULTI_HPP_
