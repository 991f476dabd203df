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

#include "tcsc/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tcsc/datagen.hpp"

namespace tcsc {

namespace {

using nlohmann::json;

[[noreturn]] void Unreadable(const std::string& what) {
  throw TcscError(ErrorCode::kUnreadableDataset, what);
}

const json& Field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) Unreadable(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double Number(const json& obj, const char* key) {
  const json& v = Field(obj, key);
  if (!v.is_number()) Unreadable(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

long long Integer(const json& obj, const char* key) {
  const json& v = Field(obj, key);
  if (!v.is_number_integer()) Unreadable(std::string("field '") + key + "' is not an integer");
  return v.get<long long>();
}

const json& Array(const json& obj, const char* key) {
  const json& v = Field(obj, key);
  if (!v.is_array()) Unreadable(std::string("field '") + key + "' is not an array");
  return v;
}

bool SamePoint(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

}  // namespace

std::string DatasetToJson(const Instance& instance, int indent) {
  const int m = instance.tasks.empty()
                    ? (instance.workers.empty()
                           ? 0
                           : static_cast<int>(instance.workers.front().availability.size()))
                    : instance.tasks.front().m;
  json doc;
  doc["version"] = kDatasetVersion;
  doc["m"] = m;
  json tasks = json::array();
  for (const TaskSpec& t : instance.tasks) {
    tasks.push_back({{"id", t.id}, {"x", t.location.x}, {"y", t.location.y}});
  }
  doc["tasks"] = std::move(tasks);
  json workers = json::array();
  for (const WorkerSchedule& w : instance.workers) {
    json pieces = json::array();
    for (const auto& [start, len] : ActivePieces(w)) {
      const Point anchor = w.position(start);
      json piece = {{"start", start}, {"len", len}, {"x", anchor.x}, {"y", anchor.y}};
      bool moving = false;
      for (Slot j = start; j < start + len; ++j) moving = moving || !SamePoint(w.position(j), anchor);
      if (moving) {
        json positions = json::array();
        for (Slot j = start; j < start + len; ++j) {
          positions.push_back({w.position(j).x, w.position(j).y});
        }
        piece["positions"] = std::move(positions);
      }
      pieces.push_back(std::move(piece));
    }
    workers.push_back({{"id", w.id}, {"reliability", w.reliability}, {"pieces", std::move(pieces)}});
  }
  doc["workers"] = std::move(workers);
  return doc.dump(indent);
}

Instance DatasetFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Unreadable(e.what());
  }
  if (Integer(doc, "version") != kDatasetVersion) Unreadable("unsupported dataset version");
  const long long m = Integer(doc, "m");
  if (m < 1 || m > (1 << 24)) Unreadable("m out of range");

  Instance out;
  for (const json& t : Array(doc, "tasks")) {
    const long long id = Integer(t, "id");
    if (id < 0) Unreadable("negative task id");
    out.tasks.push_back(TaskSpec{static_cast<TaskId>(id), {Number(t, "x"), Number(t, "y")},
                                 static_cast<int>(m)});
  }
  for (const json& wj : Array(doc, "workers")) {
    WorkerSchedule w;
    const long long id = Integer(wj, "id");
    if (id < 0) Unreadable("negative worker id");
    w.id = static_cast<WorkerId>(id);
    w.reliability = wj.contains("reliability") ? Number(wj, "reliability") : 1.0;
    w.availability.assign(m, false);
    w.positions.assign(m, Point{});
    for (const json& p : Array(wj, "pieces")) {
      const long long start = Integer(p, "start");
      const long long len = Integer(p, "len");
      if (len < 1 || start < 1 || start + len - 1 > m) {
        throw TcscError(ErrorCode::kValidationFailure,
                        "worker " + std::to_string(id) + " has a piece outside [1, m]");
      }
      const Point anchor{Number(p, "x"), Number(p, "y")};
      const json* positions = p.contains("positions") ? &Array(p, "positions") : nullptr;
      if (positions && static_cast<long long>(positions->size()) != len) {
        Unreadable("piece positions length differs from len");
      }
      for (long long j = start; j < start + len; ++j) {
        if (w.availability[j - 1]) {
          throw TcscError(ErrorCode::kValidationFailure,
                          "worker " + std::to_string(id) + " has overlapping pieces");
        }
        w.availability[j - 1] = true;
        Point pos = anchor;
        if (positions) {
          const json& xy = (*positions)[j - start];
          if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() || !xy[1].is_number()) {
            Unreadable("piece position is not an [x, y] pair");
          }
          pos = {xy[0].get<double>(), xy[1].get<double>()};
        }
        w.positions[j - 1] = pos;
      }
    }
    out.workers.push_back(std::move(w));
  }
  return out;
}

void SaveDataset(const Instance& instance, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw TcscError(ErrorCode::kUnreadableDataset, "cannot write " + path);
  f << DatasetToJson(instance) << '\n';
}

Instance LoadDataset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw TcscError(ErrorCode::kUnreadableDataset, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return DatasetFromJson(ss.str());
}

}  // namespace tcsc
