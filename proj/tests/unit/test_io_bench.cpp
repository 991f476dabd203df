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

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "tcsc/bench.hpp"
#include "tcsc/datagen.hpp"
#include "tcsc/io.hpp"

using namespace tcsc;
namespace fs = std::filesystem;

namespace {

Instance Generated(std::uint64_t seed) {
  GenSpec g;
  g.n_tasks = 6;
  g.n_workers = 80;
  g.m = 30;
  g.seed = seed;
  return GenInstance(g);
}

ErrorCode CodeOf(const std::string& text) {
  try {
    DatasetFromJson(text);
  } catch (const TcscError& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::kBadFlag;
}

BenchConfig Small(Mode mode) {
  BenchConfig c;
  c.mode = mode;
  c.m = 60;
  c.tasks = 8;
  c.workers = 150;
  c.budget = 150.0;
  c.run.cores = 2;
  return c;
}

fs::path TempDir() {
  const fs::path dir = fs::temp_directory_path() / ("tcsc_unit_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("dataset round trip is exact") {
  const Instance in = Generated(1);
  const Instance back = DatasetFromJson(DatasetToJson(in));
  REQUIRE(back.tasks.size() == in.tasks.size());
  REQUIRE(back.workers.size() == in.workers.size());
  for (std::size_t i = 0; i < in.tasks.size(); ++i) {
    CHECK(back.tasks[i].id == in.tasks[i].id);
    CHECK(back.tasks[i].location.x == in.tasks[i].location.x);
    CHECK(back.tasks[i].location.y == in.tasks[i].location.y);
    CHECK(back.tasks[i].m == in.tasks[i].m);
  }
  for (std::size_t i = 0; i < in.workers.size(); ++i) {
    CHECK(back.workers[i].availability == in.workers[i].availability);
    for (Slot j = 1; j <= 30; ++j) {
      if (!in.workers[i].available(j)) continue;
      CHECK(back.workers[i].position(j).x == in.workers[i].position(j).x);
      CHECK(back.workers[i].position(j).y == in.workers[i].position(j).y);
    }
  }
  CHECK(DatasetToJson(back) == DatasetToJson(in));
}

TEST_CASE("static pieces omit positions") {
  const std::string text =
      R"({"version":1,"m":4,"tasks":[{"id":0,"x":0,"y":0}],)"
      R"("workers":[{"id":3,"reliability":0.5,"pieces":[{"start":2,"len":2,"x":1,"y":2}]}]})";
  const Instance in = DatasetFromJson(text);
  CHECK(in.workers[0].available(2));
  CHECK(in.workers[0].available(3));
  CHECK_FALSE(in.workers[0].available(4));
  CHECK(in.workers[0].position(3).y == 2.0);
  CHECK(in.workers[0].reliability == 0.5);
  CHECK(DatasetToJson(in).find("positions") == std::string::npos);
}

TEST_CASE("bad datasets are classified") {
  CHECK(CodeOf("{not json") == ErrorCode::kUnreadableDataset);
  CHECK(CodeOf(R"({"version":1,"m":4,"tasks":[]})") == ErrorCode::kUnreadableDataset);
  CHECK(CodeOf(R"({"version":2,"m":4,"tasks":[],"workers":[]})") == ErrorCode::kUnreadableDataset);
  CHECK(CodeOf(R"({"version":1,"m":4,"tasks":[{"id":0,"x":"a","y":0}],"workers":[]})") ==
        ErrorCode::kUnreadableDataset);
  CHECK(CodeOf(R"({"version":1,"m":4,"tasks":[],"workers":[{"id":0,"pieces":)"
               R"([{"start":3,"len":3,"x":0,"y":0}]}]})") == ErrorCode::kValidationFailure);
  CHECK(CodeOf(R"({"version":1,"m":9,"tasks":[],"workers":[{"id":0,"pieces":)"
               R"([{"start":3,"len":3,"x":0,"y":0},{"start":4,"len":1,"x":0,"y":0}]}]})") ==
        ErrorCode::kValidationFailure);
  CHECK_THROWS_AS(LoadDataset("/nonexistent/tcsc.json"), TcscError);
}

TEST_CASE("mode and axis names round trip") {
  for (Mode m : {Mode::kSingleApprox, Mode::kSingleApproxStar, Mode::kMsqmSerial, Mode::kMsqmGroup,
                 Mode::kMsqmTask, Mode::kMmqm}) {
    CHECK(ParseMode(ModeName(m)) == m);
  }
  CHECK_FALSE(ParseMode("foo").has_value());
  CHECK(ParseSweepAxis("budget") == SweepAxis::kBudget);
  CHECK_THROWS_AS(ApplyAxis(BenchConfig{}, SweepAxis::kM, "many"), TcscError);
  CHECK(ApplyAxis(BenchConfig{}, SweepAxis::kDist, "zipfian").run.distribution ==
        Distribution::kZipfian);
}

TEST_CASE("runs are reproducible apart from timings") {
  for (Mode mode : {Mode::kSingleApproxStar, Mode::kMsqmTask, Mode::kMmqm}) {
    const RunMetrics a = RunOnce(Small(mode));
    const RunMetrics b = RunOnce(Small(mode));
    CHECK(a.quality == b.quality);
    CHECK(a.digest == b.digest);
    CHECK(a.iterations == b.iterations);
    CHECK(a.conflict_count == b.conflict_count);
    CHECK(a.budget_ratio > 0.0);
    CHECK(a.pruning_ratio.has_value() == (mode == Mode::kSingleApproxStar));
  }
}

TEST_CASE("loaded datasets reproduce generated runs") {
  const fs::path dir = TempDir();
  BenchConfig c = Small(Mode::kMsqmSerial);
  GenSpec g;
  g.n_tasks = c.tasks;
  g.n_workers = c.workers;
  g.m = c.m;
  SaveDataset(GenInstance(g), (dir / "d.json").string());
  const RunMetrics generated = RunOnce(c);
  c.data = (dir / "d.json").string();
  const RunMetrics loaded = RunOnce(c);
  CHECK(loaded.digest == generated.digest);
  CHECK(loaded.q_sum == generated.q_sum);
}

TEST_CASE("sweeps aggregate per value") {
  BenchConfig c = Small(Mode::kSingleApproxStar);
  const SweepReport r = Sweep(c, SweepAxis::kBudget, {"50", "100", "200"}, 3);
  CHECK(r.rows.size() == 9);
  REQUIRE(r.aggregates.size() == 3);
  CHECK(r.aggregates[0].runs == 3);
  CHECK(r.aggregates[0].spent.mean <= 50.0);
  double q = 0.0;
  for (int i = 0; i < 3; ++i) q += r.rows[i].metrics.quality;
  CHECK(r.aggregates[0].quality.mean == doctest::Approx(q / 3));
  const auto doc = nlohmann::json::parse(ReportJson(r));
  CHECK(doc["runs"].size() == 9);
  CHECK(doc["aggregates"].size() == 3);
  const std::string csv = ReportCsv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 9 + 6);
  CHECK_THROWS_AS(Sweep(c, SweepAxis::kM, {"10"}, 0), TcscError);
}

TEST_CASE("invalid budgets are validation failures") {
  BenchConfig c = Small(Mode::kSingleApprox);
  c.budget = -1.0;
  try {
    RunOnce(c);
    FAIL("expected an error");
  } catch (const TcscError& e) {
    CHECK(e.code() == ErrorCode::kValidationFailure);
  }
}

#ifdef TCSC_BENCH_PATH
TEST_CASE("cli exit codes and reports") {
  const fs::path dir = TempDir();
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(TCSC_BENCH_PATH) + " " + args + " >" +
                            (dir / "stdout.txt").string() + " 2>" + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const std::string out = (dir / "r.json").string();
  CHECK(run("--mode single-approx-star --m 200 --budget 100 --k 3 --ts 4 --dist uniform --seed 7 "
            "--out " + out) == 0);
  auto doc = nlohmann::json::parse(Slurp(out));
  REQUIRE(doc["runs"].size() == 1);
  CHECK(doc["runs"][0].contains("pruning_ratio"));
  CHECK(doc["runs"][0]["seed"] == 7);
  CHECK(doc["config"]["m"] == 200);
  CHECK(fs::exists(dir / "r.csv"));

  CHECK(run("--mode msqm-task --tasks 10 --workers 200 --m 60 --cores 4 --seed 1 --out " + out) == 0);
  doc = nlohmann::json::parse(Slurp(out));
  CHECK(doc["runs"][0].contains("conflict_count"));
  CHECK(doc["runs"][0]["digest"].get<std::string>().size() == 16);

  CHECK(run("--mode foo") == 2);
  CHECK(Slurp(dir / "stderr.txt").find("BadFlag") != std::string::npos);
  CHECK(run("--nonsense 3") == 2);
  CHECK(run("--m abc") == 2);
  CHECK(run("--data /nonexistent/d.json") == 2);
  CHECK(run("--budget -5 --m 50") == 3);
  CHECK(run("--k 0 --m 50") == 3);
  CHECK(run("sweep --axis colour --values 1,2") == 2);

  const std::string data = (dir / "d.json").string();
  CHECK(run("gen --tasks 5 --workers 50 --m 40 --seed 3 --out " + data) == 0);
  CHECK(run("--mode mmqm --data " + data + " --format csv --out " + (dir / "m.csv").string()) == 0);
  CHECK(Slurp(dir / "m.csv").rfind("kind,value,mode", 0) == 0);
  CHECK(fs::exists(dir / "m.json"));

  CHECK(run("sweep --axis m --values 40,60 --seeds 2 --mode single-approx --out " + out) == 0);
  doc = nlohmann::json::parse(Slurp(out));
  CHECK(doc["aggregates"].size() == 2);
  CHECK(doc["runs"].size() == 4);
  fs::remove_all(dir);
}
#endif
