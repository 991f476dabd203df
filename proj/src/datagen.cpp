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

#include "tcsc/datagen.hpp"

#include <algorithm>
#include <numeric>

namespace tcsc {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void CheckSpec(const GenSpec& spec) {
  if (spec.n_tasks < 1 || spec.n_workers < 1 || spec.m < 1 || !(spec.arena > 0.0) ||
      !(spec.jitter >= 0.0)) {
    throw TcscError(ErrorCode::kInvalidConfig, "generator counts and arena must be positive");
  }
}

}  // namespace

std::uint64_t StreamSeed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(seed ^ h);
}

std::mt19937_64 Stream(std::uint64_t seed, std::string_view name) {
  return std::mt19937_64(StreamSeed(seed, name));
}

std::vector<TaskSpec> GenTasks(const GenSpec& spec) {
  CheckSpec(spec);
  std::mt19937_64 rng = Stream(spec.seed, "tasks");
  const double a = spec.arena;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TaskSpec> out;
  out.reserve(spec.n_tasks);

  std::vector<int> cell_of_rank;
  std::discrete_distribution<int> zipf;
  if (spec.distribution == Distribution::kZipfian) {
    cell_of_rank.resize(kZipfGrid * kZipfGrid);
    std::iota(cell_of_rank.begin(), cell_of_rank.end(), 0);
    std::shuffle(cell_of_rank.begin(), cell_of_rank.end(), rng);
    std::vector<double> w(cell_of_rank.size());
    for (std::size_t r = 0; r < w.size(); ++r) w[r] = 1.0 / static_cast<double>(r + 1);
    zipf = std::discrete_distribution<int>(w.begin(), w.end());
  }
  std::normal_distribution<double> gauss(a / 2.0, a / 6.0);

  for (int i = 0; i < spec.n_tasks; ++i) {
    Point p;
    switch (spec.distribution) {
      case Distribution::kUniform:
        p = {unit(rng) * a, unit(rng) * a};
        break;
      case Distribution::kGaussian:
        p.x = std::clamp(gauss(rng), 0.0, a);
        p.y = std::clamp(gauss(rng), 0.0, a);
        break;
      case Distribution::kZipfian: {
        const int cell = cell_of_rank[zipf(rng)];
        const double side = a / kZipfGrid;
        p.x = (cell % kZipfGrid + unit(rng)) * side;
        p.y = (cell / kZipfGrid + unit(rng)) * side;
        break;
      }
    }
    out.push_back(TaskSpec{static_cast<TaskId>(i), p, spec.m});
  }
  return out;
}

std::vector<WorkerSchedule> GenWorkers(const GenSpec& spec) {
  CheckSpec(spec);
  std::mt19937_64 rng = Stream(spec.seed, "workers");
  const double a = spec.arena;
  const double sigma = spec.jitter;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> piece_count(1, 3);
  std::uniform_int_distribution<int> piece_len(1, 5);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<WorkerSchedule> out;
  out.reserve(spec.n_workers);
  for (int i = 0; i < spec.n_workers; ++i) {
    WorkerSchedule w;
    w.id = static_cast<WorkerId>(i);
    w.availability.assign(spec.m, false);
    w.positions.assign(spec.m, Point{});
    const int pieces = piece_count(rng);
    for (int p = 0; p < pieces; ++p) {
      const int len = std::min(piece_len(rng), spec.m);
      std::uniform_int_distribution<int> start_of(1, spec.m - len + 1);
      const Point anchor{unit(rng) * a, unit(rng) * a};
      // Pieces neither overlap nor touch, so each stays a separate run.
      for (int attempt = 0; attempt < 32; ++attempt) {
        const Slot s = start_of(rng);
        bool clash = false;
        for (Slot j = std::max(1, s - 1); j <= std::min(spec.m, s + len); ++j) {
          clash = clash || w.availability[j - 1];
        }
        if (clash) continue;
        for (Slot j = s; j < s + len; ++j) {
          w.availability[j - 1] = true;
          w.positions[j - 1] = {std::clamp(anchor.x + sigma * noise(rng), 0.0, a),
                                std::clamp(anchor.y + sigma * noise(rng), 0.0, a)};
        }
        break;
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

Instance GenInstance(const GenSpec& spec) {
  return Instance{GenTasks(spec), GenWorkers(spec)};
}

std::vector<std::pair<Slot, int>> ActivePieces(const WorkerSchedule& worker) {
  std::vector<std::pair<Slot, int>> out;
  const int m = static_cast<int>(worker.availability.size());
  for (Slot j = 1; j <= m;) {
    if (!worker.availability[j - 1]) {
      ++j;
      continue;
    }
    Slot e = j;
    while (e + 1 <= m && worker.availability[e]) ++e;
    out.emplace_back(j, e - j + 1);
    j = e + 1;
  }
  return out;
}

}  // namespace tcsc
