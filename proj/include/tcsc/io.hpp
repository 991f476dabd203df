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

// Dataset documents:
//
//   {"version": 1, "m": 500,
//    "tasks":   [{"id": 0, "x": 1.5, "y": 2.0}, ...],
//    "workers": [{"id": 0, "reliability": 1.0,
//                 "pieces": [{"start": 3, "len": 2, "x": 4.0, "y": 5.0,
//                             "positions": [[4.0, 5.0], [4.1, 5.2]]}]}]}
//
// A piece sits at (x, y) for all its slots unless the optional per-slot
// "positions" array is present.

#ifndef TCSC_IO_HPP_
#define TCSC_IO_HPP_

#include <string>

#include "tcsc/core.hpp"

namespace tcsc {

inline constexpr int kDatasetVersion = 1;

std::string DatasetToJson(const Instance& instance, int indent = -1);
// Throws kUnreadableDataset for malformed documents and kValidationFailure
// for pieces outside [1, m] or overlapping each other.
Instance DatasetFromJson(const std::string& text);

void SaveDataset(const Instance& instance, const std::string& path);
Instance LoadDataset(const std::string& path);

}  // namespace tcsc

#endif  // TCSC_IO_HPP_
