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

#include "tcsc/timeline.hpp"

#include <string>

namespace tcsc {

std::vector<Slot> InterpolationResult::slot_set() const {
  std::vector<Slot> out;
  out.reserve(neighbors.size());
  for (const Neighbor& n : neighbors) out.push_back(n.slot);
  std::sort(out.begin(), out.end());
  return out;
}

ExecutedTimeline::ExecutedTimeline(int m) : m_(m) {
  if (m < 1) throw TcscError(ErrorCode::kInvalidTask, "m must be >= 1");
}

ExecutedTimeline::ExecutedTimeline(int m, std::vector<Slot> slots)
    : ExecutedTimeline(m) {
  for (Slot s : slots) insert(s);
}

void ExecutedTimeline::insert(Slot slot) {
  if (slot < 1 || slot > m_) {
    throw TcscError(ErrorCode::kOutOfRangeSlot, "slot " + std::to_string(slot));
  }
  auto it = std::lower_bound(slots_.begin(), slots_.end(), slot);
  if (it != slots_.end() && *it == slot) {
    throw TcscError(ErrorCode::kDuplicateSlot, "slot " + std::to_string(slot));
  }
  slots_.insert(it, slot);
}

InterpolationResult ExecutedTimeline::knn(Slot probe, int k) const {
  if (probe < 1 || probe > m_) {
    throw TcscError(ErrorCode::kOutOfRangeSlot, "probe " + std::to_string(probe));
  }
  InterpolationResult result;
  result.neighbors.reserve(static_cast<std::size_t>(k));
  const int found = visit_knn(probe, k, 0, [&](Slot s, int d) {
    result.neighbors.push_back(Neighbor{s, d, 1.0});
  });
  result.padded_count = k - found;
  return result;
}

}  // namespace tcsc
