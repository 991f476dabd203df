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

// Python module. Results cross the boundary as JSON and come back as dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "tcsc/assign_multi.hpp"
#include "tcsc/assign_single.hpp"
#include "tcsc/bench.hpp"
#include "tcsc/datagen.hpp"
#include "tcsc/io.hpp"
#include "tcsc/quality.hpp"

namespace py = pybind11;
using namespace tcsc;

namespace {

Distribution Dist(const std::string& name) {
  const auto d = ParseDistribution(name);
  if (!d) throw TcscError(ErrorCode::kBadFlag, "unknown distribution " + name);
  return *d;
}

py::object Loads(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

Instance FromDict(const py::dict& dataset) {
  const std::string text = py::module_::import("json").attr("dumps")(dataset).cast<std::string>();
  return DatasetFromJson(text);
}

BenchConfig Config(const std::string& mode, int m, int tasks, int workers, double budget, int k,
                   int ts, int cores, const std::string& dist, double arena, std::uint64_t seed,
                   const std::string& data) {
  BenchConfig c;
  const auto parsed = ParseMode(mode);
  if (!parsed) throw TcscError(ErrorCode::kBadFlag, "unknown mode " + mode);
  c.mode = *parsed;
  c.m = m;
  c.tasks = tasks;
  c.workers = workers;
  c.budget = budget;
  c.arena = arena;
  c.run.k = k;
  c.run.split_threshold = ts;
  c.run.cores = cores;
  c.run.distribution = Dist(dist);
  c.run.seed = seed;
  c.data = data;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Time-continuous spatial crowdsourcing assignment";

  py::register_exception<TcscError>(mod, "TcscError", PyExc_ValueError);

  mod.def(
      "generate",
      [](int tasks, int workers, int m, const std::string& dist, double arena, double jitter,
         std::uint64_t seed) {
        GenSpec g;
        g.n_tasks = tasks;
        g.n_workers = workers;
        g.m = m;
        g.distribution = Dist(dist);
        g.arena = arena;
        g.jitter = jitter;
        g.seed = seed;
        return Loads(DatasetToJson(GenInstance(g)));
      },
      py::arg("tasks") = 300, py::arg("workers") = 2000, py::arg("m") = 500,
      py::arg("dist") = "uniform", py::arg("arena") = 1000.0, py::arg("jitter") = 1.0,
      py::arg("seed") = 0, "Generate a dataset as a dict.");

  mod.def(
      "save_dataset", [](const py::dict& d, const std::string& path) { SaveDataset(FromDict(d), path); },
      py::arg("dataset"), py::arg("path"));
  mod.def(
      "load_dataset", [](const std::string& path) { return Loads(DatasetToJson(LoadDataset(path))); },
      py::arg("path"));

  mod.def(
      "quality",
      [](int m, std::vector<Slot> executed, int k) {
        return TaskQuality(ExecutedTimeline(m, std::move(executed)), k);
      },
      py::arg("m"), py::arg("executed"), py::arg("k") = 3,
      "Quality of a task whose executed slots are given.");
  mod.def(
      "error_ratio",
      [](int m, std::vector<Slot> executed, Slot slot, int k) {
        return ErrorRatio(slot, ExecutedTimeline(m, std::move(executed)), k);
      },
      py::arg("m"), py::arg("executed"), py::arg("slot"), py::arg("k") = 3);
  mod.def(
      "finishing_probability",
      [](int m, std::vector<Slot> executed, Slot slot, int k) {
        return FinishingProbability(slot, ExecutedTimeline(m, std::move(executed)), k);
      },
      py::arg("m"), py::arg("executed"), py::arg("slot"), py::arg("k") = 3);

  mod.def(
      "solve",
      [](const py::dict& dataset, const std::string& mode, double budget, int k, int ts,
         int cores, std::uint64_t seed) {
        const Instance in = FromDict(dataset);
        BenchConfig c = Config(mode, in.tasks.empty() ? 1 : in.tasks[0].m,
                               static_cast<int>(in.tasks.size()),
                               static_cast<int>(in.workers.size()), budget, k, ts, cores,
                               "uniform", 1000.0, seed, "");
        RunMetrics r;
        {
          py::gil_scoped_release release;
          r = RunOnInstance(c, in);
        }
        SweepReport report;
        report.base = c;
        report.seeds = {seed};
        report.rows.push_back({"", r});
        const py::object parsed = Loads(ReportJson(report));
        return py::object(parsed["runs"][py::int_(0)]);
      },
      py::arg("dataset"), py::arg("mode") = "msqm-serial", py::arg("budget") = 100.0,
      py::arg("k") = 3, py::arg("ts") = 4, py::arg("cores") = 1, py::arg("seed") = 0,
      "Run one solver on a dataset dict and return its metrics.");

  mod.def(
      "sweep",
      [](const std::string& mode, const std::string& axis, std::vector<std::string> values,
         int seeds, int m, int tasks, int workers, double budget, int k, int ts, int cores,
         const std::string& dist, double arena, std::uint64_t seed) {
        const BenchConfig c = Config(mode, m, tasks, workers, budget, k, ts, cores, dist, arena,
                                     seed, "");
        const auto parsed = ParseSweepAxis(axis);
        if (!parsed) throw TcscError(ErrorCode::kBadFlag, "unknown axis " + axis);
        if (*parsed == SweepAxis::kNone) values = {""};
        SweepReport report;
        {
          py::gil_scoped_release release;
          report = Sweep(c, *parsed, values, seeds);
        }
        return Loads(ReportJson(report));
      },
      py::arg("mode") = "single-approx-star", py::arg("axis") = "none",
      py::arg("values") = std::vector<std::string>{}, py::arg("seeds") = 1, py::arg("m") = 500,
      py::arg("tasks") = 300, py::arg("workers") = 2000, py::arg("budget") = 100.0,
      py::arg("k") = 3, py::arg("ts") = 4, py::arg("cores") = 1, py::arg("dist") = "uniform",
      py::arg("arena") = 1000.0, py::arg("seed") = 0,
      "Generate, run and aggregate like the bench CLI.");
}
