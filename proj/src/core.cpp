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

#include "tcsc/core.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace tcsc {

std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyWorkerSet: return "EmptyWorkerSet";
    case ErrorCode::kSlotCountMismatch: return "SlotCountMismatch";
    case ErrorCode::kInvalidReliability: return "InvalidReliability";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidTask: return "InvalidTask";
    case ErrorCode::kInvalidWorker: return "InvalidWorker";
    case ErrorCode::kOutOfRangeSlot: return "OutOfRangeSlot";
    case ErrorCode::kMissingReliability: return "MissingReliability";
    case ErrorCode::kEmptyTaskSet: return "EmptyTaskSet";
    case ErrorCode::kDuplicateSlot: return "DuplicateSlot";
    case ErrorCode::kSlotAlreadyExecuted: return "SlotAlreadyExecuted";
    case ErrorCode::kNoUnexecutedSlot: return "NoUnexecutedSlot";
    case ErrorCode::kSlotOccupied: return "SlotOccupied";
    case ErrorCode::kNotCommitted: return "NotCommitted";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kCoordinatorTimeout: return "CoordinatorTimeout";
    case ErrorCode::kBadFlag: return "BadFlag";
    case ErrorCode::kUnreadableDataset: return "UnreadableDataset";
    case ErrorCode::kValidationFailure: return "ValidationFailure";
  }
  return "Unknown";
}

double Distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

int WorkerSchedule::active_slots() const {
  int n = 0;
  for (bool b : availability) n += b ? 1 : 0;
  return n;
}

void AssignmentLedger::add(Slot slot, WorkerId worker, double cost) {
  if (!entries_.emplace(slot, LedgerEntry{worker, cost}).second) {
    throw TcscError(ErrorCode::kDuplicateSlot,
                    "slot " + std::to_string(slot) + " already assigned");
  }
}

double AssignmentLedger::total_cost() const {
  double total = 0.0;
  for (const auto& [slot, entry] : entries_) total += entry.cost;
  return total;
}

void TaskState::execute(Slot slot, WorkerId worker, double cost) {
  if (slot < 1 || slot > spec_.m) {
    throw TcscError(ErrorCode::kOutOfRangeSlot,
                    "slot " + std::to_string(slot) + " outside [1, " +
                        std::to_string(spec_.m) + "]");
  }
  if (!(cost >= 0.0)) {
    throw TcscError(ErrorCode::kInvalidConfig, "negative assignment cost");
  }
  ledger_.add(slot, worker, cost);
  executed_.insert(slot);
  spent_ += cost;
}

Budget::Budget(double total) : total_(total), remaining_(total) {
  if (!(total >= 0.0) || !std::isfinite(total)) {
    throw TcscError(ErrorCode::kInvalidConfig, "budget must be finite and >= 0");
  }
}

void Budget::spend(double cost) {
  if (!(cost >= 0.0) || cost > remaining_) {
    throw TcscError(ErrorCode::kInvalidConfig, "spend exceeds remaining budget");
  }
  remaining_ -= cost;
}

std::string_view DistributionName(Distribution d) {
  switch (d) {
    case Distribution::kUniform: return "uniform";
    case Distribution::kGaussian: return "gaussian";
    case Distribution::kZipfian: return "zipfian";
  }
  return "uniform";
}

std::optional<Distribution> ParseDistribution(std::string_view name) {
  if (name == "uniform") return Distribution::kUniform;
  if (name == "gaussian") return Distribution::kGaussian;
  if (name == "zipfian") return Distribution::kZipfian;
  return std::nullopt;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << ErrorName(violations[i].code) << ": " << violations[i].message;
  }
  return out.str();
}

ValidationReport ValidateInstance(const std::vector<TaskSpec>& tasks,
                                  const std::vector<WorkerSchedule>& workers,
                                  const RunConfig& config) {
  ValidationReport report;
  auto add = [&report](ErrorCode code, std::string msg) {
    report.violations.push_back({code, std::move(msg)});
  };

  if (config.k < 1 || config.k > kMaxK) {
    add(ErrorCode::kInvalidConfig, "k must be in [1, " + std::to_string(kMaxK) + "]");
  }
  if (config.split_threshold < 1) add(ErrorCode::kInvalidConfig, "t_s must be >= 1");
  if (config.cores < 1) add(ErrorCode::kInvalidConfig, "cores must be >= 1");
  if (workers.empty()) add(ErrorCode::kEmptyWorkerSet, "no workers");
  if (tasks.empty()) add(ErrorCode::kEmptyTaskSet, "no tasks");

  const int m = tasks.empty() ? 0 : tasks.front().m;
  std::set<TaskId> task_ids;
  for (const TaskSpec& t : tasks) {
    const std::string name = "task " + std::to_string(t.id);
    if (t.m < 1) add(ErrorCode::kInvalidTask, name + " has m < 1");
    if (t.m != m) add(ErrorCode::kSlotCountMismatch, name + " has m != " + std::to_string(m));
    if (!std::isfinite(t.location.x) || !std::isfinite(t.location.y)) {
      add(ErrorCode::kInvalidTask, name + " location not finite");
    }
    if (!task_ids.insert(t.id).second) add(ErrorCode::kInvalidTask, name + " duplicated");
  }

  std::set<WorkerId> worker_ids;
  for (const WorkerSchedule& w : workers) {
    const std::string name = "worker " + std::to_string(w.id);
    if (!worker_ids.insert(w.id).second) add(ErrorCode::kInvalidWorker, name + " duplicated");
    if (!(w.reliability >= 0.0 && w.reliability <= 1.0)) {
      add(ErrorCode::kInvalidReliability, name + " reliability outside [0,1]");
    }
    if (m > 0 && static_cast<int>(w.availability.size()) != m) {
      add(ErrorCode::kSlotCountMismatch,
          name + " availability length " + std::to_string(w.availability.size()) +
              " != m=" + std::to_string(m));
      continue;
    }
    if (w.positions.size() != w.availability.size()) {
      add(ErrorCode::kInvalidWorker, name + " positions/availability length differ");
      continue;
    }
    for (std::size_t j = 0; j < w.availability.size(); ++j) {
      if (w.availability[j] &&
          (!std::isfinite(w.positions[j].x) || !std::isfinite(w.positions[j].y))) {
        add(ErrorCode::kInvalidWorker, name + " position undefined on an available slot");
        break;
      }
    }
  }
  return report;
}

Instance ValidatedInstance(std::vector<TaskSpec> tasks,
                           std::vector<WorkerSchedule> workers,
                           const RunConfig& config) {
  ValidationReport report = ValidateInstance(tasks, workers, config);
  if (!report.ok()) throw TcscError(ErrorCode::kValidationFailure, report.summary());
  return Instance{std::move(tasks), std::move(workers)};
}

}  // namespace tcsc
