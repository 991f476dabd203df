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

// Shared worker resource: per-slot spatial index over available workers,
// (worker, slot) occupancy and rank-r nearest eligible worker queries.
// Costs are Euclidean distances; ties break toward the smaller worker id.

#ifndef TCSC_WORKER_POOL_HPP_
#define TCSC_WORKER_POOL_HPP_

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tcsc/core.hpp"

namespace tcsc {

struct CostQuote {
  WorkerId worker = 0;
  int rank = 1;
  double cost = 0.0;
  double reliability = 1.0;
};

class WorkerPool {
 public:
  // Slots with fewer available workers than this are scanned linearly.
  static constexpr int kGridMinimum = 64;

  WorkerPool(std::vector<WorkerSchedule> workers, int m);

  int m() const { return m_; }
  const std::vector<WorkerSchedule>& workers() const { return workers_; }
  const WorkerSchedule& worker(WorkerId id) const;

  // rank-th cheapest worker available at slot and not occupied by any task.
  std::optional<CostQuote> kth_nearest_available(const Point& location, Slot slot,
                                                 int rank) const;
  // The `count` cheapest eligible workers in quote order.
  std::vector<CostQuote> nearest_available(const Point& location, Slot slot,
                                           int count) const;
  // Eligible workers at slot within `radius` of location (inclusive).
  std::vector<WorkerId> within_radius(const Point& location, Slot slot,
                                      double radius) const;

  // Throws kSlotOccupied (also for an unavailable pair).
  void commit(WorkerId worker, Slot slot, TaskId task);
  // Throws kNotCommitted.
  void release(WorkerId worker, Slot slot);
  std::optional<TaskId> occupant(WorkerId worker, Slot slot) const;
  std::size_t committed() const { return occupancy_.size(); }

  // Copy restricted to the given (slot, worker) pairs; occupancy is dropped.
  WorkerPool restricted(const std::vector<std::pair<Slot, WorkerId>>& pairs) const;

 private:
  struct SlotIndex {
    std::vector<int> members;  // worker indices available at the slot
    // Uniform grid (empty when members.size() < kGridMinimum).
    int g = 0;
    double x0 = 0.0, y0 = 0.0, cell = 1.0;
    std::vector<int> start;
    std::vector<int> items;
  };

  static std::uint64_t key(int index, Slot slot) {
    return (static_cast<std::uint64_t>(index) << 32) | static_cast<std::uint32_t>(slot);
  }
  int index_of(WorkerId id) const;
  bool eligible(int index, Slot slot) const;
  void build_index(Slot slot);
  // Sorted (cost, id) candidates; at least `count` when that many exist and
  // complete up to the last returned cost.
  std::vector<std::pair<double, int>> gather(const Point& p, Slot slot, int count,
                                             double radius) const;

  int m_;
  std::vector<WorkerSchedule> workers_;
  std::unordered_map<WorkerId, int> by_id_;
  std::vector<SlotIndex> slots_;
  std::unordered_map<std::uint64_t, TaskId> occupancy_;
};

}  // namespace tcsc

#endif  // TCSC_WORKER_POOL_HPP_
