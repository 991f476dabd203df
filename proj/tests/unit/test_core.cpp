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

#include <cmath>

#include "doctest.h"
#include "tcsc/core.hpp"

using namespace tcsc;

namespace {

WorkerSchedule Worker(WorkerId id, int m, double reliability = 1.0) {
  WorkerSchedule w;
  w.id = id;
  w.availability.assign(m, true);
  w.positions.assign(m, Point{1.0 * id, 0.0});
  w.reliability = reliability;
  return w;
}

bool Has(const ValidationReport& r, ErrorCode code) {
  for (const Violation& v : r.violations) {
    if (v.code == code) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate accepts a well-formed instance") {
  std::vector<WorkerSchedule> workers;
  for (WorkerId i = 0; i < 5; ++i) workers.push_back(Worker(i, 100));
  const ValidationReport r = ValidateInstance({TaskSpec{0, {0, 0}, 100}}, workers, RunConfig{});
  CHECK(r.ok());
}

TEST_CASE("validate flags reliability above one") {
  const ValidationReport r =
      ValidateInstance({TaskSpec{0, {0, 0}, 100}}, {Worker(0, 100, 1.2)}, RunConfig{});
  CHECK(Has(r, ErrorCode::kInvalidReliability));
  CHECK_THROWS_AS(ValidatedInstance({TaskSpec{0, {0, 0}, 100}}, {Worker(0, 100, 1.2)}, RunConfig{}),
                  TcscError);
}

TEST_CASE("validate flags availability length mismatch") {
  const ValidationReport r =
      ValidateInstance({TaskSpec{0, {0, 0}, 100}}, {Worker(0, 90)}, RunConfig{});
  CHECK(Has(r, ErrorCode::kSlotCountMismatch));
}

TEST_CASE("validate flags empty workers and bad config") {
  RunConfig c;
  c.k = 0;
  c.split_threshold = 0;
  const ValidationReport r = ValidateInstance({TaskSpec{0, {0, 0}, 10}}, {}, c);
  CHECK(Has(r, ErrorCode::kEmptyWorkerSet));
  CHECK(Has(r, ErrorCode::kInvalidConfig));
}

TEST_CASE("validate flags non-finite task location") {
  const ValidationReport r =
      ValidateInstance({TaskSpec{0, {NAN, 0}, 10}}, {Worker(0, 10)}, RunConfig{});
  CHECK(Has(r, ErrorCode::kInvalidTask));
}

TEST_CASE("task state keeps spent equal to ledger total") {
  TaskState s(TaskSpec{0, {0, 0}, 10});
  s.execute(3, 1, 0.5);
  s.execute(7, 2, 1.25);
  CHECK(s.executed() == std::set<Slot>{3, 7});
  CHECK(s.spent() == doctest::Approx(s.ledger().total_cost()).epsilon(1e-12));
  CHECK_THROWS_AS(s.execute(3, 4, 1.0), TcscError);
  CHECK_THROWS_AS(s.execute(11, 4, 1.0), TcscError);
  CHECK_THROWS_AS(s.execute(4, 4, -1.0), TcscError);
  CHECK(s.ledger().size() == 2);
}

TEST_CASE("budget spends down and refuses overdraft") {
  Budget b(10.0);
  CHECK(b.fits(10.0));
  b.spend(4.0);
  CHECK(b.remaining() == doctest::Approx(6.0));
  CHECK(b.spent() == doctest::Approx(4.0));
  CHECK_THROWS_AS(b.spend(7.0), TcscError);
  CHECK_THROWS_AS(Budget(-1.0), TcscError);
}

TEST_CASE("distribution names round trip") {
  for (Distribution d : {Distribution::kUniform, Distribution::kGaussian, Distribution::kZipfian}) {
    CHECK(ParseDistribution(DistributionName(d)) == d);
  }
  CHECK_FALSE(ParseDistribution("poisson").has_value());
}
