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

// Task quality: interpolation error ratio, subtask finishing probability and
// the entropy-style aggregate q = -sum_j p_j log2 p_j.
//
// For an interpolated slot j with k-NN set S (missing neighbors padded at
// distance m):
//
//   error ratio   rho_j = sum_{e in S} |j - e| / (k m)
//   plain         p_j   = (1 - rho_j) / m
//   reliability   p_j   = (1/m) [ sum_{e in S} lambda_e / k - sum lambda_e |j - e| / (k m) ]
//
// Both forms are evaluated as W / (k m^2) with W = sum_{e in S} lambda_e (m - |j-e|)
// (lambda = 1 in plain mode, and for padded entries). An executed slot has
// p_j = lambda_j / m.

#ifndef TCSC_QUALITY_HPP_
#define TCSC_QUALITY_HPP_

#include <cmath>
#include <span>
#include <unordered_map>
#include <vector>

#include "tcsc/core.hpp"
#include "tcsc/timeline.hpp"

namespace tcsc {

// -p log2 p, with 0 log 0 = 0.
inline double PartialEntropy(double p) {
  return p > 0.0 ? -p * std::log2(p) : 0.0;
}

inline double ProbabilityDenominator(int k, int m) {
  return static_cast<double>(k) * m * m;
}

// Finishing probability of slot j when the timeline plus `extra` (0 = none)
// are executed. `lambda` is indexed by slot (size m+1) and holds executing
// worker reliabilities; empty means plain mode. `extra_lambda` is the
// reliability of the worker that would execute `extra`.
//
// Approx, Approx* and the oracles all go through this function, so the same
// state always yields bit-identical probabilities.
inline double ProbabilityAt(const ExecutedTimeline& timeline, Slot j, int k,
                            Slot extra, double extra_lambda,
                            std::span<const double> lambda) {
  const int m = timeline.m();
  double weight = 0.0;
  double self = -1.0;
  timeline.visit_knn(j, k, extra, [&](Slot s, int d) {
    const double lam =
        lambda.empty() ? 1.0 : (s == extra ? extra_lambda : lambda[s]);
    if (d == 0) self = lam;
    weight += lam * static_cast<double>(m - d);
  });
  if (self >= 0.0) return self / m;
  return weight / ProbabilityDenominator(k, m);
}

// Worker id -> reliability.
class ReliabilityTable {
 public:
  ReliabilityTable() = default;
  explicit ReliabilityTable(std::span<const WorkerSchedule> workers);
  void set(WorkerId id, double lambda) { by_worker_[id] = lambda; }
  // Throws kMissingReliability.
  double at(WorkerId id) const;

 private:
  std::unordered_map<WorkerId, double> by_worker_;
};

// Slot-indexed reliabilities of the executing workers (NaN on unexecuted
// slots). Throws kMissingReliability for unknown workers.
std::vector<double> SlotReliabilities(const TaskState& state,
                                      const ReliabilityTable& table);

ExecutedTimeline TimelineOf(const TaskState& state);

// Throws kOutOfRangeSlot.
double ErrorRatio(Slot slot, const ExecutedTimeline& timeline, int k);
double ErrorRatio(Slot slot, const TaskState& state, int k);

double FinishingProbability(Slot slot, const ExecutedTimeline& timeline, int k);
double FinishingProbability(Slot slot, const TaskState& state, int k);

// Throws kOutOfRangeSlot, kMissingReliability.
double FinishingProbabilityReliable(Slot slot, const ExecutedTimeline& timeline,
                                    std::span<const double> slot_lambda, int k);
double FinishingProbabilityReliable(Slot slot, const TaskState& state,
                                    const ReliabilityTable& table, int k);

// Lower bound on the error ratio of `knn`'s probe after one more execution
// anywhere at distance >= 1: (sum of the k-1 nearest distances + 1) / (k m).
double ErrorRatioLowerBound(const InterpolationResult& knn, int k, int m);

// Table is required in reliability mode and ignored in plain mode.
double TaskQuality(const TaskState& state, int k, QualityMode mode = QualityMode::kPlain,
                   const ReliabilityTable* table = nullptr);
double TaskQuality(const ExecutedTimeline& timeline, int k,
                   std::span<const double> slot_lambda = {});

double QualitySum(std::span<const TaskState> states, int k,
                  QualityMode mode = QualityMode::kPlain,
                  const ReliabilityTable* table = nullptr);
// Throws kEmptyTaskSet.
double QualityMin(std::span<const TaskState> states, int k,
                  QualityMode mode = QualityMode::kPlain,
                  const ReliabilityTable* table = nullptr);

}  // namespace tcsc

#endif  // TCSC_QUALITY_HPP_
