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

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tcsc/timeline.hpp"

using namespace tcsc;

TEST_CASE("insert keeps order and rejects duplicates") {
  ExecutedTimeline t(10, {2, 7});
  t.insert(5);
  CHECK(std::vector<Slot>(t.slots().begin(), t.slots().end()) == std::vector<Slot>{2, 5, 7});
  CHECK_THROWS_AS(t.insert(2), TcscError);
  CHECK_THROWS_AS(t.insert(11), TcscError);
  ExecutedTimeline empty(10);
  empty.insert(1);
  CHECK(empty.size() == 1);
}

TEST_CASE("knn on the worked example") {
  const ExecutedTimeline t(100, {2, 4, 7, 9});
  const InterpolationResult a = t.knn(1, 2);
  REQUIRE(a.neighbors.size() == 2);
  CHECK(a.neighbors[0].slot == 2);
  CHECK(a.neighbors[0].distance == 1);
  CHECK(a.neighbors[1].slot == 4);
  CHECK(a.neighbors[1].distance == 3);
  const InterpolationResult b = t.knn(6, 2);
  CHECK(b.neighbors[0].slot == 7);
  CHECK(b.neighbors[0].distance == 1);
  CHECK(b.neighbors[1].slot == 4);
  CHECK(b.neighbors[1].distance == 2);
  CHECK_THROWS_AS(t.knn(0, 2), TcscError);
}

TEST_CASE("knn pads an empty timeline") {
  const ExecutedTimeline t(100);
  const InterpolationResult r = t.knn(5, 2);
  CHECK(r.neighbors.empty());
  CHECK(r.padded_count == 2);
  CHECK(r.kth_distance(100) == 100);
}

TEST_CASE("knn matches the exhaustive scan on random triples") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = std::uniform_int_distribution<int>(1, 60)(rng);
    const int k = std::uniform_int_distribution<int>(1, 6)(rng);
    const std::set<Slot> s = oracle::RandomSubset(rng, m, 0.3);
    const ExecutedTimeline t(m, std::vector<Slot>(s.begin(), s.end()));
    const Slot probe = std::uniform_int_distribution<int>(1, m)(rng);
    const InterpolationResult r = t.knn(probe, k);
    const std::vector<Slot> want = oracle::Knn(oracle::Plain(s), probe, k);
    REQUIRE(r.slot_set().size() == want.size());
    CHECK(r.neighbors.size() + r.padded_count == static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(r.neighbors[i].slot == want[i]);
      if (i > 0) CHECK(r.neighbors[i].distance >= r.neighbors[i - 1].distance);
    }
  }
}
