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

// Shared domain vocabulary: tasks, workers, assignments, budgets and the run
// configuration. Slot indices are 1-based throughout (slot 1 .. slot m).

#ifndef TCSC_CORE_HPP_
#define TCSC_CORE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tcsc {

using Slot = std::int32_t;
using TaskId = std::uint32_t;
using WorkerId = std::uint32_t;

// Largest supported interpolation order; kNN scratch space is stack-allocated.
inline constexpr int kMaxK = 64;

enum class ErrorCode {
  kEmptyWorkerSet,
  kSlotCountMismatch,
  kInvalidReliability,
  kInvalidConfig,
  kInvalidTask,
  kInvalidWorker,
  kOutOfRangeSlot,
  kMissingReliability,
  kEmptyTaskSet,
  kDuplicateSlot,
  kSlotAlreadyExecuted,
  kNoUnexecutedSlot,
  kSlotOccupied,
  kNotCommitted,
  kInstanceTooLarge,
  kCoordinatorTimeout,
  kBadFlag,
  kUnreadableDataset,
  kValidationFailure,
};

std::string_view ErrorName(ErrorCode code);

class TcscError : public std::runtime_error {
 public:
  TcscError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorName(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double Distance(const Point& a, const Point& b);

struct TaskSpec {
  TaskId id = 0;
  Point location;
  int m = 1;
};

// Per-slot availability and position of one worker. Index j-1 holds slot j.
struct WorkerSchedule {
  WorkerId id = 0;
  std::vector<bool> availability;
  std::vector<Point> positions;  // meaningful only where available
  double reliability = 1.0;

  bool available(Slot slot) const {
    return slot >= 1 && slot <= static_cast<Slot>(availability.size()) &&
           availability[slot - 1];
  }
  const Point& position(Slot slot) const { return positions[slot - 1]; }
  int active_slots() const;
};

struct LedgerEntry {
  WorkerId worker = 0;
  double cost = 0.0;
};

// Slot -> (worker, cost). At most one worker per slot by construction.
class AssignmentLedger {
 public:
  void add(Slot slot, WorkerId worker, double cost);
  bool contains(Slot slot) const { return entries_.count(slot) != 0; }
  const std::map<Slot, LedgerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double total_cost() const;

 private:
  std::map<Slot, LedgerEntry> entries_;
};

// A task plus its executed slots. Mutated only through execute().
class TaskState {
 public:
  TaskState() = default;
  explicit TaskState(TaskSpec spec) : spec_(spec) {}

  const TaskSpec& spec() const { return spec_; }
  int m() const { return spec_.m; }
  const std::set<Slot>& executed() const { return executed_; }
  const AssignmentLedger& ledger() const { return ledger_; }
  double spent() const { return spent_; }
  bool is_executed(Slot slot) const { return executed_.count(slot) != 0; }

  // Records an execution. Throws kOutOfRangeSlot, kDuplicateSlot or
  // kInvalidConfig (negative cost).
  void execute(Slot slot, WorkerId worker, double cost);

 private:
  TaskSpec spec_;
  std::set<Slot> executed_;
  AssignmentLedger ledger_;
  double spent_ = 0.0;
};

class Budget {
 public:
  explicit Budget(double total);
  double total() const { return total_; }
  double remaining() const { return remaining_; }
  double spent() const { return total_ - remaining_; }
  bool fits(double cost) const { return cost <= remaining_; }
  void spend(double cost);

 private:
  double total_;
  double remaining_;
};

enum class Distribution { kUniform, kGaussian, kZipfian };
enum class QualityMode { kPlain, kReliability };

std::string_view DistributionName(Distribution d);
std::optional<Distribution> ParseDistribution(std::string_view name);

struct RunConfig {
  int k = 3;
  int split_threshold = 4;  // t_s
  std::uint64_t seed = 0;
  int cores = 1;
  Distribution distribution = Distribution::kUniform;
  QualityMode quality_mode = QualityMode::kPlain;
};

struct Instance {
  std::vector<TaskSpec> tasks;
  std::vector<WorkerSchedule> workers;
};

struct Violation {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Checks every core invariant. The first task's m is the reference slot
// count; all tasks must share it.
ValidationReport ValidateInstance(const std::vector<TaskSpec>& tasks,
                                  const std::vector<WorkerSchedule>& workers,
                                  const RunConfig& config);

// Throws TcscError(kValidationFailure) carrying the report summary.
Instance ValidatedInstance(std::vector<TaskSpec> tasks,
                           std::vector<WorkerSchedule> workers,
                           const RunConfig& config);

}  // namespace tcsc

#endif  // TCSC_CORE_HPP_
