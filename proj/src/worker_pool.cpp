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

#include "tcsc/worker_pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace tcsc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

WorkerPool::WorkerPool(std::vector<WorkerSchedule> workers, int m)
    : m_(m), workers_(std::move(workers)), slots_(static_cast<std::size_t>(m) + 1) {
  for (std::size_t i = 0; i < workers_.size(); ++i) {
    const WorkerSchedule& w = workers_[i];
    if (!by_id_.emplace(w.id, static_cast<int>(i)).second) {
      throw TcscError(ErrorCode::kInvalidWorker, "duplicate worker " + std::to_string(w.id));
    }
    if (static_cast<int>(w.availability.size()) != m) {
      throw TcscError(ErrorCode::kSlotCountMismatch, "worker " + std::to_string(w.id));
    }
    for (Slot j = 1; j <= m; ++j) {
      if (w.available(j)) slots_[j].members.push_back(static_cast<int>(i));
    }
  }
  for (Slot j = 1; j <= m; ++j) build_index(j);
}

void WorkerPool::build_index(Slot slot) {
  SlotIndex& s = slots_[slot];
  const int n = static_cast<int>(s.members.size());
  if (n < kGridMinimum) return;
  double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;
  for (int i : s.members) {
    const Point& p = workers_[i].position(slot);
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  s.g = std::max(1, static_cast<int>(std::sqrt(n / 2.0)));
  const double side = std::max(x1 - x0, y1 - y0);
  s.cell = side > 0.0 ? side / s.g : 1.0;
  s.x0 = x0;
  s.y0 = y0;
  auto cell_of = [&](const Point& p) {
    const int cx = std::clamp(static_cast<int>((p.x - s.x0) / s.cell), 0, s.g - 1);
    const int cy = std::clamp(static_cast<int>((p.y - s.y0) / s.cell), 0, s.g - 1);
    return cy * s.g + cx;
  };
  s.start.assign(static_cast<std::size_t>(s.g) * s.g + 1, 0);
  for (int i : s.members) ++s.start[cell_of(workers_[i].position(slot)) + 1];
  for (std::size_t c = 1; c < s.start.size(); ++c) s.start[c] += s.start[c - 1];
  s.items.assign(s.members.size(), 0);
  std::vector<int> fill(s.start.begin(), s.start.end() - 1);
  for (int i : s.members) s.items[fill[cell_of(workers_[i].position(slot))]++] = i;
}

int WorkerPool::index_of(WorkerId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw TcscError(ErrorCode::kInvalidWorker, "unknown worker " + std::to_string(id));
  }
  return it->second;
}

const WorkerSchedule& WorkerPool::worker(WorkerId id) const {
  return workers_[index_of(id)];
}

bool WorkerPool::eligible(int index, Slot slot) const {
  return occupancy_.empty() || occupancy_.count(key(index, slot)) == 0;
}

std::vector<std::pair<double, int>> WorkerPool::gather(const Point& p, Slot slot,
                                                       int count, double radius) const {
  std::vector<std::pair<double, int>> found;
  if (slot < 1 || slot > m_) return found;
  const SlotIndex& s = slots_[slot];
  auto order = [this](const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first < b.first;
    return workers_[a.second].id < workers_[b.second].id;
  };
  auto consider = [&](int i) {
    if (!eligible(i, slot)) return;
    const double d = Distance(p, workers_[i].position(slot));
    if (d <= radius) found.emplace_back(d, i);
  };

  if (s.g == 0) {
    for (int i : s.members) consider(i);
  } else {
    const int cx = std::clamp(static_cast<int>(std::floor((p.x - s.x0) / s.cell)), 0, s.g - 1);
    const int cy = std::clamp(static_cast<int>(std::floor((p.y - s.y0) / s.cell)), 0, s.g - 1);
    for (int r = 0;; ++r) {
      for (int y = std::max(0, cy - r); y <= std::min(s.g - 1, cy + r); ++y) {
        const bool edge_row = y == cy - r || y == cy + r;
        for (int x = std::max(0, cx - r); x <= std::min(s.g - 1, cx + r); ++x) {
          if (!edge_row && x != cx - r && x != cx + r) continue;
          const int c = y * s.g + x;
          for (int t = s.start[c]; t < s.start[c + 1]; ++t) consider(s.items[t]);
        }
      }
      // Distance from p to any cell outside the visited block.
      const double lx = cx - r <= 0 ? kInf : p.x - (s.x0 + (cx - r) * s.cell);
      const double hx = cx + r >= s.g - 1 ? kInf : s.x0 + (cx + r + 1) * s.cell - p.x;
      const double ly = cy - r <= 0 ? kInf : p.y - (s.y0 + (cy - r) * s.cell);
      const double hy = cy + r >= s.g - 1 ? kInf : s.y0 + (cy + r + 1) * s.cell - p.y;
      const double safe = std::min({lx, hx, ly, hy});
      if (safe == kInf) break;
      if (count > 0 && static_cast<int>(found.size()) >= count) {
        std::nth_element(found.begin(), found.begin() + (count - 1), found.end(), order);
        if (found[count - 1].first < safe) break;
      }
      if (count == 0 && radius < safe) break;
    }
  }
  std::sort(found.begin(), found.end(), order);
  if (count > 0 && static_cast<int>(found.size()) > count) found.resize(count);
  return found;
}

std::optional<CostQuote> WorkerPool::kth_nearest_available(const Point& location,
                                                           Slot slot, int rank) const {
  if (rank < 1) throw TcscError(ErrorCode::kInvalidConfig, "rank must be >= 1");
  const auto found = gather(location, slot, rank, kInf);
  if (static_cast<int>(found.size()) < rank) return std::nullopt;
  const auto& [d, i] = found[rank - 1];
  return CostQuote{workers_[i].id, rank, d, workers_[i].reliability};
}

std::vector<CostQuote> WorkerPool::nearest_available(const Point& location, Slot slot,
                                                     int count) const {
  std::vector<CostQuote> out;
  if (count < 1) return out;
  const auto found = gather(location, slot, count, kInf);
  for (std::size_t r = 0; r < found.size(); ++r) {
    const int i = found[r].second;
    out.push_back({workers_[i].id, static_cast<int>(r) + 1, found[r].first,
                   workers_[i].reliability});
  }
  return out;
}

std::vector<WorkerId> WorkerPool::within_radius(const Point& location, Slot slot,
                                                double radius) const {
  std::vector<WorkerId> out;
  for (const auto& [d, i] : gather(location, slot, 0, radius)) out.push_back(workers_[i].id);
  return out;
}

void WorkerPool::commit(WorkerId worker, Slot slot, TaskId task) {
  const int i = index_of(worker);
  if (!workers_[i].available(slot)) {
    throw TcscError(ErrorCode::kSlotOccupied, "worker " + std::to_string(worker) +
                                                  " unavailable at slot " + std::to_string(slot));
  }
  if (!occupancy_.emplace(key(i, slot), task).second) {
    throw TcscError(ErrorCode::kSlotOccupied, "worker " + std::to_string(worker) +
                                                  " busy at slot " + std::to_string(slot));
  }
}

void WorkerPool::release(WorkerId worker, Slot slot) {
  if (occupancy_.erase(key(index_of(worker), slot)) == 0) {
    throw TcscError(ErrorCode::kNotCommitted, "worker " + std::to_string(worker) +
                                                  " at slot " + std::to_string(slot));
  }
}

std::optional<TaskId> WorkerPool::occupant(WorkerId worker, Slot slot) const {
  auto it = occupancy_.find(key(index_of(worker), slot));
  if (it == occupancy_.end()) return std::nullopt;
  return it->second;
}

WorkerPool WorkerPool::restricted(const std::vector<std::pair<Slot, WorkerId>>& pairs) const {
  std::map<WorkerId, WorkerSchedule> kept;
  for (const auto& [slot, id] : pairs) {
    const WorkerSchedule& src = workers_[index_of(id)];
    auto [it, fresh] = kept.try_emplace(id);
    if (fresh) {
      it->second = src;
      it->second.availability.assign(src.availability.size(), false);
    }
    if (src.available(slot)) it->second.availability[slot - 1] = true;
  }
  std::vector<WorkerSchedule> out;
  out.reserve(kept.size());
  for (auto& [id, w] : kept) out.push_back(std::move(w));
  return WorkerPool(std::move(out), m_);
}

}  // namespace tcsc
