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

// Seeded synthetic instances. Every generator draws from its own named
// stream derived from the one 64-bit seed.

#ifndef TCSC_DATAGEN_HPP_
#define TCSC_DATAGEN_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "tcsc/core.hpp"

namespace tcsc {

struct GenSpec {
  int n_tasks = 300;
  int n_workers = 2000;
  int m = 500;
  Distribution distribution = Distribution::kUniform;
  double arena = 1000.0;  // side of the square [0, arena]^2
  double jitter = 1.0;    // per-slot position sigma
  std::uint64_t seed = 0;
};

// Zipf grid for skewed task locations.
inline constexpr int kZipfGrid = 32;

std::uint64_t StreamSeed(std::uint64_t seed, std::string_view name);
std::mt19937_64 Stream(std::uint64_t seed, std::string_view name);

// Throws kInvalidConfig for non-positive counts or arena, or negative jitter.
std::vector<TaskSpec> GenTasks(const GenSpec& spec);
std::vector<WorkerSchedule> GenWorkers(const GenSpec& spec);
Instance GenInstance(const GenSpec& spec);

// Maximal runs of availability: (start slot, length).
std::vector<std::pair<Slot, int>> ActivePieces(const WorkerSchedule& worker);

}  // namespace tcsc

#endif  // TCSC_DATAGEN_HPP_
