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

// Per-task slot cache: the executed timeline plus, for every slot, its k-NN
// window, interpolation weight, probability and entropy summand. Supports
// exact quality increments of a tentative execution.
//
// Executing e changes the k-NN set of a contiguous run of slots around e:
// to the left every j with e - j < kmax(j), to the right every j with
// j - e <= kmax(j) (ties go to the smaller slot). kmax is 1-Lipschitz in j,
// so both scans stop at the first slot that fails the test.

#ifndef TCSC_TASK_MODEL_HPP_
#define TCSC_TASK_MODEL_HPP_

#include <span>
#include <utility>
#include <vector>

#include "tcsc/core.hpp"
#include "tcsc/quality.hpp"
#include "tcsc/timeline.hpp"

namespace tcsc {

struct SlotInfo {
  double weight = 0.0;  // W: sum of lambda_e (m - d_e) over the k-NN
  double p = 0.0;
  double phi = 0.0;     // -p log2 p
  double wk = 0.0;      // weight of the k-th neighbor, 0 when padded
  int kmax = 0;         // k-th neighbor distance, m when padded
  Slot knn_lo = 0;      // k-NN window [knn_lo, knn_hi] of executed slots;
  Slot knn_hi = 0;      // 0/0 when nothing is executed
  bool executed = false;
};

class TaskModel {
 public:
  TaskModel(int m, int k, QualityMode mode = QualityMode::kPlain);

  int m() const { return m_; }
  int k() const { return k_; }
  bool reliable() const { return !lambda_.empty(); }
  const ExecutedTimeline& timeline() const { return timeline_; }
  const SlotInfo& slot(Slot j) const { return info_[j]; }
  std::span<const double> lambda() const { return lambda_; }

  // Sum of the cached summands in slot order.
  double quality() const;

  // Exact quality increment of executing unexecuted slot e by a worker of
  // reliability lam (ignored in plain mode). Only the affected run is summed.
  double gain(Slot e, double lam) const;
  // Same value evaluated over all m slots.
  double gain_full(Slot e, double lam) const;

  // Slots whose k-NN set changes when e is executed (includes e).
  std::pair<Slot, Slot> affected_range(Slot e) const;

  // Records the execution and refreshes the affected run, which is
  // returned. Throws kSlotAlreadyExecuted, kOutOfRangeSlot.
  std::pair<Slot, Slot> execute(Slot e, double lam = 1.0);

  // Upper bound on the summand increase of unexecuted j when a slot at
  // distance d >= 1 is executed. 0 for executed j or d beyond kmax(j).
  double neighbor_gain_bound(Slot j, int d) const;
  // Upper bound on the summand increase of executing j itself.
  double self_gain_bound(Slot j) const;

 private:
  void refresh(Slot j);
  double term(Slot j, Slot e, double lam) const;

  int m_;
  int k_;
  double denom_;
  double phi_cap_;
  ExecutedTimeline timeline_;
  std::vector<double> lambda_;
  std::vector<SlotInfo> info_;
};

// max_{y <= x} -y log2 y, the monotone envelope of the summand.
double EntropyEnvelope(double x);

}  // namespace tcsc

#endif  // TCSC_TASK_MODEL_HPP_
