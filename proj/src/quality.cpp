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

#include "tcsc/quality.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace tcsc {
namespace {

void CheckSlot(Slot slot, int m) {
  if (slot < 1 || slot > m) {
    throw TcscError(ErrorCode::kOutOfRangeSlot,
                    "slot " + std::to_string(slot) + " outside [1, " + std::to_string(m) + "]");
  }
}

void CheckReliabilities(const ExecutedTimeline& timeline, std::span<const double> lambda) {
  if (lambda.size() != static_cast<std::size_t>(timeline.m()) + 1) {
    throw TcscError(ErrorCode::kMissingReliability, "reliability table has wrong length");
  }
  for (Slot s : timeline.slots()) {
    const double l = lambda[s];
    if (!(l >= 0.0 && l <= 1.0)) {
      throw TcscError(ErrorCode::kMissingReliability,
                      "no reliability for executed slot " + std::to_string(s));
    }
  }
}

}  // namespace

ReliabilityTable::ReliabilityTable(std::span<const WorkerSchedule> workers) {
  for (const WorkerSchedule& w : workers) by_worker_[w.id] = w.reliability;
}

double ReliabilityTable::at(WorkerId id) const {
  auto it = by_worker_.find(id);
  if (it == by_worker_.end()) {
    throw TcscError(ErrorCode::kMissingReliability, "worker " + std::to_string(id));
  }
  return it->second;
}

std::vector<double> SlotReliabilities(const TaskState& state, const ReliabilityTable& table) {
  std::vector<double> out(static_cast<std::size_t>(state.m()) + 1,
                          std::numeric_limits<double>::quiet_NaN());
  for (const auto& [slot, entry] : state.ledger().entries()) out[slot] = table.at(entry.worker);
  return out;
}

ExecutedTimeline TimelineOf(const TaskState& state) {
  return ExecutedTimeline(state.m(), {state.executed().begin(), state.executed().end()});
}

double ErrorRatio(Slot slot, const ExecutedTimeline& timeline, int k) {
  const int m = timeline.m();
  CheckSlot(slot, m);
  long distance_sum = 0;
  bool executed = false;
  const int found = timeline.visit_knn(slot, k, 0, [&](Slot, int d) {
    if (d == 0) executed = true;
    distance_sum += d;
  });
  if (executed) return 0.0;
  distance_sum += static_cast<long>(k - found) * m;
  return static_cast<double>(distance_sum) / (static_cast<double>(k) * m);
}

double ErrorRatio(Slot slot, const TaskState& state, int k) {
  return ErrorRatio(slot, TimelineOf(state), k);
}

double FinishingProbability(Slot slot, const ExecutedTimeline& timeline, int k) {
  CheckSlot(slot, timeline.m());
  return ProbabilityAt(timeline, slot, k, 0, 1.0, {});
}

double FinishingProbability(Slot slot, const TaskState& state, int k) {
  return FinishingProbability(slot, TimelineOf(state), k);
}

double FinishingProbabilityReliable(Slot slot, const ExecutedTimeline& timeline,
                                    std::span<const double> slot_lambda, int k) {
  CheckSlot(slot, timeline.m());
  CheckReliabilities(timeline, slot_lambda);
  return ProbabilityAt(timeline, slot, k, 0, 1.0, slot_lambda);
}

double FinishingProbabilityReliable(Slot slot, const TaskState& state,
                                    const ReliabilityTable& table, int k) {
  const std::vector<double> lambda = SlotReliabilities(state, table);
  return FinishingProbabilityReliable(slot, TimelineOf(state), lambda, k);
}

double ErrorRatioLowerBound(const InterpolationResult& knn, int k, int m) {
  long sum = 1;
  int counted = 0;
  for (const Neighbor& n : knn.neighbors) {
    if (counted == k - 1) break;
    sum += n.distance;
    ++counted;
  }
  sum += static_cast<long>(k - 1 - counted) * m;
  return static_cast<double>(sum) / (static_cast<double>(k) * m);
}

double TaskQuality(const ExecutedTimeline& timeline, int k, std::span<const double> slot_lambda) {
  if (!slot_lambda.empty()) CheckReliabilities(timeline, slot_lambda);
  double q = 0.0;
  for (Slot j = 1; j <= timeline.m(); ++j) {
    q += PartialEntropy(ProbabilityAt(timeline, j, k, 0, 1.0, slot_lambda));
  }
  return q;
}

double TaskQuality(const TaskState& state, int k, QualityMode mode,
                   const ReliabilityTable* table) {
  const ExecutedTimeline timeline = TimelineOf(state);
  if (mode == QualityMode::kPlain) return TaskQuality(timeline, k);
  if (table == nullptr) {
    throw TcscError(ErrorCode::kMissingReliability, "reliability mode needs a table");
  }
  const std::vector<double> lambda = SlotReliabilities(state, *table);
  return TaskQuality(timeline, k, lambda);
}

double QualitySum(std::span<const TaskState> states, int k, QualityMode mode,
                  const ReliabilityTable* table) {
  double total = 0.0;
  for (const TaskState& s : states) total += TaskQuality(s, k, mode, table);
  return total;
}

double QualityMin(std::span<const TaskState> states, int k, QualityMode mode,
                  const ReliabilityTable* table) {
  if (states.empty()) throw TcscError(ErrorCode::kEmptyTaskSet, "q_min of no tasks");
  double best = std::numeric_limits<double>::infinity();
  for (const TaskState& s : states) best = std::min(best, TaskQuality(s, k, mode, table));
  return best;
}

}  // namespace tcsc
