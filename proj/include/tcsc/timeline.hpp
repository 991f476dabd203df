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

// Sorted list of executed slots with k-nearest-neighbor queries on the
// timeline. Binary search finds the nearest executed slot in O(log m), then
// the k neighbors are refined outward in O(k).
//
// Neighbors are ordered by (distance, slot): equal distances resolve toward
// the smaller slot index. With this rule the k-NN set of any probe is a run of
// k consecutive executed slots, and that run only moves right as the probe
// moves right.

#ifndef TCSC_TIMELINE_HPP_
#define TCSC_TIMELINE_HPP_

#include <algorithm>
#include <cstdlib>
#include <span>
#include <vector>

#include "tcsc/core.hpp"

namespace tcsc {

struct Neighbor {
  Slot slot = 0;
  int distance = 0;
  double reliability = 1.0;
};

// k-NN result for one probe. Missing neighbors are virtual entries at
// distance m (counted in padded_count, not listed).
struct InterpolationResult {
  std::vector<Neighbor> neighbors;
  int padded_count = 0;

  // k-th neighbor distance, m when padded.
  int kth_distance(int m) const {
    return padded_count > 0 || neighbors.empty() ? m : neighbors.back().distance;
  }
  std::vector<Slot> slot_set() const;
};

class ExecutedTimeline {
 public:
  explicit ExecutedTimeline(int m = 1);
  ExecutedTimeline(int m, std::vector<Slot> slots);

  int m() const { return m_; }
  std::span<const Slot> slots() const { return slots_; }
  std::size_t size() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }
  bool contains(Slot slot) const {
    return std::binary_search(slots_.begin(), slots_.end(), slot);
  }

  // Throws kOutOfRangeSlot or kDuplicateSlot.
  void insert(Slot slot);

  // Throws kOutOfRangeSlot.
  InterpolationResult knn(Slot probe, int k) const;

  // Visits up to k nearest executed slots of `probe` in (distance, slot)
  // order, treating `extra` (0 = none) as executed too. Returns the number of
  // real neighbors visited; the rest of the k are padding. No range checks.
  template <class Visitor>
  int visit_knn(Slot probe, int k, Slot extra, Visitor&& visit) const;

 private:
  int m_;
  std::vector<Slot> slots_;
};

template <class Visitor>
int ExecutedTimeline::visit_knn(Slot probe, int k, Slot extra,
                                Visitor&& visit) const {
  const Slot* data = slots_.data();
  const int n = static_cast<int>(slots_.size());
  int right = static_cast<int>(std::upper_bound(data, data + n, probe) - data);
  int left = right - 1;
  bool extra_left = extra != 0 && extra <= probe;
  bool extra_right = extra != 0 && extra > probe;

  auto peek_left = [&]() -> Slot {
    Slot s = left >= 0 ? data[left] : 0;
    if (extra_left && extra > s) return extra;
    return s;
  };
  auto pop_left = [&](Slot s) {
    if (extra_left && s == extra) extra_left = false;
    else --left;
  };
  auto peek_right = [&]() -> Slot {
    Slot s = right < n ? data[right] : 0;
    if (extra_right && (s == 0 || extra < s)) return extra;
    return s;
  };
  auto pop_right = [&](Slot s) {
    if (extra_right && s == extra) extra_right = false;
    else ++right;
  };

  int found = 0;
  while (found < k) {
    const Slot l = peek_left();
    const Slot r = peek_right();
    if (l == 0 && r == 0) break;
    if (r == 0 || (l != 0 && probe - l <= r - probe)) {
      visit(l, probe - l);
      pop_left(l);
    } else {
      visit(r, r - probe);
      pop_right(r);
    }
    ++found;
  }
  return found;
}

}  // namespace tcsc

#endif  // TCSC_TIMELINE_HPP_
