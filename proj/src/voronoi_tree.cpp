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

#include "tcsc/voronoi_tree.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <limits>
#include <queue>

namespace tcsc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Bounds and exact gains are summed in different orders.
constexpr double kSlack = 1e-9;

std::string WindowText(const TaskModel& model, Slot probe) {
  const std::vector<Slot> slots = model.timeline().knn(probe, model.k()).slot_set();
  std::string out = "{";
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(slots[i]);
  }
  return out + "}";
}

struct Entry {
  Priority key;
  Slot left = 0;
  bool is_slot = false;
  int node = -1;  // -1 for a slot or a virtual segment
  Slot a = 0, b = 0;
  double gain = 0.0;
  double cost = 0.0;
};

// Max-heap order: key, then smaller left end, then slots before segments.
struct EntryLess {
  bool operator()(const Entry& x, const Entry& y) const {
    if (x.key < y.key) return true;
    if (y.key < x.key) return false;
    if (x.left != y.left) return x.left > y.left;
    return !x.is_slot && y.is_slot;
  }
};

}  // namespace

Priority HeuristicKey(double gain, double cost) {
  if (cost == 0.0) return {true, gain};
  return {false, gain / cost};
}

VoronoiTree::VoronoiTree(TaskModel& model, int split_threshold,
                         std::vector<double> costs, std::vector<double> lambdas)
    : model_(&model),
      ts_(split_threshold),
      costs_(std::move(costs)),
      lambdas_(std::move(lambdas)) {
  const std::size_t n = static_cast<std::size_t>(model.m()) + 1;
  if (ts_ < 1) throw TcscError(ErrorCode::kInvalidConfig, "t_s must be >= 1");
  if (costs_.size() != n || lambdas_.size() != n) {
    throw TcscError(ErrorCode::kSlotCountMismatch, "quote table length != m+1");
  }
  root_ = build(1, model.m());
}

int VoronoiTree::allocate() {
  if (!free_.empty()) {
    const int id = free_.back();
    free_.pop_back();
    nodes_[id] = VoronoiNode{};
    return id;
  }
  nodes_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

void VoronoiTree::release_subtree(int id) {
  if (!nodes_[id].leaf()) {
    release_subtree(nodes_[id].left);
    release_subtree(nodes_[id].right);
  }
  free_.push_back(id);
}

bool VoronoiTree::uniform(Slot l, Slot r) const {
  const SlotInfo& a = model_->slot(l);
  const SlotInfo& b = model_->slot(r);
  return a.knn_lo == b.knn_lo && a.knn_hi == b.knn_hi;
}

int VoronoiTree::build(Slot l, Slot r) {
  const int id = allocate();
  nodes_[id].l = l;
  nodes_[id].r = r;
  shape(id);
  summarize(id);
  return id;
}

// Applies the stopping conditions to node id, growing children if needed.
void VoronoiTree::shape(int id) {
  const Slot l = nodes_[id].l, r = nodes_[id].r;
  if (uniform(l, r)) {
    nodes_[id].condition = 1;
  } else if (r - l + 1 <= ts_) {
    nodes_[id].condition = 2;
  } else {
    nodes_[id].condition = 0;
    const Slot mid = l + (r - l + 2) / 2 - 1;
    const int lc = build(l, mid);
    const int rc = build(mid + 1, r);
    nodes_[id].left = lc;
    nodes_[id].right = rc;
  }
}

void VoronoiTree::summarize_leaf(int id) {
  VoronoiNode& n = nodes_[id];
  const Bound b = scan(n.l, n.r);
  double q = 0.0;
  for (Slot j = n.l; j <= n.r; ++j) q += model_->slot(j).phi;
  n.q_prime = q;
  n.max_self_gain = b.self;
  n.inner_gain = b.inner;
  n.min_cost = b.min_cost;
  n.unexecuted = b.unexecuted;
}

void VoronoiTree::summarize(int id) {
  VoronoiNode& n = nodes_[id];
  if (n.leaf()) {
    summarize_leaf(id);
  } else {
    const VoronoiNode& a = nodes_[n.left];
    const VoronoiNode& b = nodes_[n.right];
    n.q_prime = a.q_prime + b.q_prime;
    n.max_self_gain = std::max(a.max_self_gain, b.max_self_gain);
    n.inner_gain = a.inner_gain + b.inner_gain;
    n.min_cost = std::min(a.min_cost, b.min_cost);
    n.unexecuted = a.unexecuted + b.unexecuted;
  }
  const SlotInfo& sl = model_->slot(n.l);
  const SlotInfo& sr = model_->slot(n.r);
  n.knn_l_lo = sl.knn_lo;
  n.knn_l_hi = sl.knn_hi;
  n.knn_r_lo = sr.knn_lo;
  n.knn_r_hi = sr.knn_hi;
  n.kset_lo = sl.knn_lo;
  n.kset_hi = sr.knn_hi;
  n.infl_lo = std::max<Slot>(1, n.l - sl.kmax);
  n.infl_hi = std::min<Slot>(model_->m(), n.r + sr.kmax);
}

void VoronoiTree::refresh(int id, Slot e) {
  if (e < nodes_[id].infl_lo || e > nodes_[id].infl_hi) return;
  const Slot l = nodes_[id].l, r = nodes_[id].r;
  const bool stop = uniform(l, r) || r - l + 1 <= ts_;
  if (stop) {
    if (!nodes_[id].leaf()) {
      release_subtree(nodes_[id].left);
      release_subtree(nodes_[id].right);
      nodes_[id].left = nodes_[id].right = -1;
    }
    nodes_[id].condition = uniform(l, r) ? 1 : 2;
  } else if (nodes_[id].leaf()) {
    shape(id);
  } else {
    refresh(nodes_[id].left, e);
    refresh(nodes_[id].right, e);
  }
  summarize(id);
}

void VoronoiTree::execute(Slot e) {
  model_->execute(e, lambdas_[e]);
  refresh(root_, e);
}

void VoronoiTree::set_quote(Slot j, double cost, double lambda) {
  costs_[j] = cost;
  lambdas_[j] = lambda;
  std::vector<int> path;
  int id = root_;
  while (true) {
    path.push_back(id);
    const VoronoiNode& n = nodes_[id];
    if (n.leaf()) break;
    id = j <= nodes_[n.left].r ? n.left : n.right;
  }
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    VoronoiNode& n = nodes_[*it];
    if (n.leaf()) {
      n.min_cost = scan(n.l, n.r).min_cost;
    } else {
      n.min_cost = std::min(nodes_[n.left].min_cost, nodes_[n.right].min_cost);
    }
  }
}

VoronoiTree::Bound VoronoiTree::scan(Slot a, Slot b) const {
  Bound out;
  out.min_cost = kInf;
  for (Slot j = a; j <= b; ++j) {
    if (model_->slot(j).executed) continue;
    ++out.unexecuted;
    out.self = std::max(out.self, model_->self_gain_bound(j));
    out.inner += model_->neighbor_gain_bound(j, 1);
    out.min_cost = std::min(out.min_cost, costs_[j]);
  }
  return out;
}

double VoronoiTree::outer_gain(Slot a, Slot b) const {
  double sum = 0.0;
  for (Slot j = a - 1; j >= 1; --j) {
    const SlotInfo& s = model_->slot(j);
    if (j + s.kmax < a) break;
    sum += model_->neighbor_gain_bound(j, a - j);
  }
  for (Slot j = b + 1; j <= model_->m(); ++j) {
    const SlotInfo& s = model_->slot(j);
    if (j - s.kmax > b) break;
    sum += model_->neighbor_gain_bound(j, j - b);
  }
  return sum;
}

Priority VoronoiTree::bound_key(const Bound& b, Slot lo, Slot hi) const {
  const double gain = (b.self + b.inner + outer_gain(lo, hi)) * (1.0 + kSlack);
  Priority key = HeuristicKey(gain, b.min_cost);
  if (!key.free) key.value *= 1.0 + kSlack;
  return key;
}

Priority VoronoiTree::node_upper_bound(int id) const {
  const VoronoiNode& n = nodes_[id];
  if (n.unexecuted == 0) {
    throw TcscError(ErrorCode::kNoUnexecutedSlot,
                    "node [" + std::to_string(n.l) + "," + std::to_string(n.r) + "]");
  }
  Bound b;
  b.self = n.max_self_gain;
  b.inner = n.inner_gain;
  b.min_cost = n.min_cost;
  b.unexecuted = n.unexecuted;
  return bound_key(b, n.l, n.r);
}

std::optional<BestSlotResult> VoronoiTree::best_slot(double remaining) {
  std::priority_queue<Entry, std::vector<Entry>, EntryLess> heap;

  auto push_node = [&](int id) {
    const VoronoiNode& n = nodes_[id];
    if (n.unexecuted == 0 || n.min_cost > remaining) return;
    Entry e;
    e.key = node_upper_bound(id);
    e.left = n.l;
    e.node = id;
    e.a = n.l;
    e.b = n.r;
    heap.push(e);
  };
  auto push_segment = [&](Slot a, Slot b) {
    const Bound bd = scan(a, b);
    if (bd.unexecuted == 0 || bd.min_cost > remaining) return;
    Entry e;
    e.key = bound_key(bd, a, b);
    e.left = a;
    e.a = a;
    e.b = b;
    heap.push(e);
  };
  auto evaluate = [&](Slot a, Slot b) {
    for (Slot j = a; j <= b; ++j) {
      if (model_->slot(j).executed || costs_[j] > remaining) continue;
      Entry e;
      e.is_slot = true;
      e.left = j;
      e.a = e.b = j;
      e.gain = model_->gain(j, lambdas_[j]);
      e.cost = costs_[j];
      e.key = HeuristicKey(e.gain, e.cost);
      ++evaluations_;
      heap.push(e);
    }
  };

  push_node(root_);
  while (!heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    if (top.is_slot) return BestSlotResult{top.a, top.gain, top.cost, top.key};
    if (top.node >= 0 && !nodes_[top.node].leaf()) {
      push_node(nodes_[top.node].left);
      push_node(nodes_[top.node].right);
      continue;
    }
    const int len = top.b - top.a + 1;
    if (len <= ts_) {
      evaluate(top.a, top.b);
    } else {
      const Slot mid = top.a + (len + 1) / 2 - 1;
      push_segment(top.a, mid);
      push_segment(mid + 1, top.b);
    }
  }
  return std::nullopt;
}

std::vector<int> VoronoiTree::leaves() const {
  std::vector<int> out;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (nodes_[id].leaf()) {
      out.push_back(id);
    } else {
      stack.push_back(nodes_[id].right);
      stack.push_back(nodes_[id].left);
    }
  }
  return out;
}

int VoronoiTree::depth() const {
  int best = 0;
  std::vector<std::pair<int, int>> stack{{root_, 1}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes_[id].leaf()) {
      stack.push_back({nodes_[id].left, d + 1});
      stack.push_back({nodes_[id].right, d + 1});
    }
  }
  return best;
}

int VoronoiTree::node_count() const {
  return static_cast<int>(nodes_.size() - free_.size());
}

void VoronoiTree::dump_node(int id, int indent, std::string& out) const {
  const VoronoiNode& n = nodes_[id];
  char buf[160];
  std::snprintf(buf, sizeof(buf), "[%d,%d] c%d q'=%.9g infl=[%d,%d] ", n.l, n.r,
                n.condition, n.q_prime, n.infl_lo, n.infl_hi);
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  out += buf;
  out += "kset=";
  if (n.kset_lo == 0) {
    out += "{}";
  } else {
    out += "{";
    bool first = true;
    for (Slot s : model_->timeline().slots()) {
      if (s < n.kset_lo || s > n.kset_hi) continue;
      if (!first) out += ",";
      out += std::to_string(s);
      first = false;
    }
    out += "}";
  }
  out += " knn(l)=" + WindowText(*model_, n.l) + " knn(r)=" + WindowText(*model_, n.r) + "\n";
  if (!n.leaf()) {
    dump_node(n.left, indent + 1, out);
    dump_node(n.right, indent + 1, out);
  }
}

std::string VoronoiTree::dump() const {
  std::string out;
  dump_node(root_, 0, out);
  return out;
}

}  // namespace tcsc
