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

#include "tcsc/task_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tcsc {

namespace {
const double kInvE = 1.0 / std::exp(1.0);
}  // namespace

double EntropyEnvelope(double x) {
  return PartialEntropy(std::min(x, kInvE));
}

TaskModel::TaskModel(int m, int k, QualityMode mode)
    : m_(m),
      k_(k),
      denom_(ProbabilityDenominator(k, m)),
      phi_cap_(EntropyEnvelope(1.0 / m)),
      timeline_(m),
      info_(static_cast<std::size_t>(m) + 1) {
  if (k < 1 || k > kMaxK) throw TcscError(ErrorCode::kInvalidConfig, "bad k");
  if (mode == QualityMode::kReliability) {
    lambda_.assign(static_cast<std::size_t>(m) + 1,
                   std::numeric_limits<double>::quiet_NaN());
  }
  for (Slot j = 1; j <= m; ++j) refresh(j);
}

void TaskModel::refresh(Slot j) {
  SlotInfo& s = info_[j];
  double weight = 0.0;
  double self = -1.0;
  Slot lo = 0, hi = 0;
  int last_d = m_;
  double last_w = 0.0;
  const int found = timeline_.visit_knn(j, k_, 0, [&](Slot e, int d) {
    const double lam = lambda_.empty() ? 1.0 : lambda_[e];
    const double w = lam * static_cast<double>(m_ - d);
    if (d == 0) self = lam;
    weight += w;
    lo = lo == 0 ? e : std::min(lo, e);
    hi = std::max(hi, e);
    last_d = d;
    last_w = w;
  });
  s.weight = weight;
  s.executed = self >= 0.0;
  s.knn_lo = lo;
  s.knn_hi = hi;
  if (found < k_) {
    s.kmax = m_;
    s.wk = 0.0;
  } else {
    s.kmax = last_d;
    s.wk = last_w;
  }
  s.p = s.executed ? self / m_ : weight / denom_;
  s.phi = PartialEntropy(s.p);
}

double TaskModel::quality() const {
  double q = 0.0;
  for (Slot j = 1; j <= m_; ++j) q += info_[j].phi;
  return q;
}

std::pair<Slot, Slot> TaskModel::affected_range(Slot e) const {
  Slot a = e;
  while (a > 1 && e - (a - 1) < info_[a - 1].kmax) --a;
  Slot b = e;
  while (b < m_ && (b + 1) - e <= info_[b + 1].kmax) ++b;
  return {a, b};
}

double TaskModel::term(Slot j, Slot e, double lam) const {
  const double p = ProbabilityAt(timeline_, j, k_, e, lam, lambda_);
  if (p == info_[j].p) return 0.0;
  return PartialEntropy(p) - info_[j].phi;
}

double TaskModel::gain(Slot e, double lam) const {
  const auto [a, b] = affected_range(e);
  double delta = 0.0;
  for (Slot j = a; j <= b; ++j) delta += term(j, e, lam);
  return delta;
}

double TaskModel::gain_full(Slot e, double lam) const {
  double delta = 0.0;
  for (Slot j = 1; j <= m_; ++j) delta += term(j, e, lam);
  return delta;
}

std::pair<Slot, Slot> TaskModel::execute(Slot e, double lam) {
  if (e < 1 || e > m_) {
    throw TcscError(ErrorCode::kOutOfRangeSlot, "slot " + std::to_string(e));
  }
  if (info_[e].executed) {
    throw TcscError(ErrorCode::kSlotAlreadyExecuted, "slot " + std::to_string(e));
  }
  const auto range = affected_range(e);
  timeline_.insert(e);
  if (!lambda_.empty()) lambda_[e] = lam;
  for (Slot j = range.first; j <= range.second; ++j) refresh(j);
  return range;
}

double TaskModel::neighbor_gain_bound(Slot j, int d) const {
  const SlotInfo& s = info_[j];
  if (s.executed || d > s.kmax) return 0.0;
  const double step = std::max(0.0, static_cast<double>(m_ - d) - s.wk);
  return std::max(0.0, EntropyEnvelope((s.weight + step) / denom_) - s.phi);
}

double TaskModel::self_gain_bound(Slot j) const {
  const SlotInfo& s = info_[j];
  if (s.executed) return 0.0;
  return std::max(0.0, phi_cap_ - s.phi);
}

}  // namespace tcsc
