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

// Approximated 1-D order-k Voronoi diagram over the slots of one task.
//
// A node [l, r] stops splitting when its end slots share the same k-NN set
// (condition 1, the whole segment then lies in one order-k cell) or when it
// holds at most t_s slots (condition 2). Each node carries the quadruple
// <k-set, knn(l), knn(r), q'> plus the aggregates needed for an admissible
// upper bound on the heuristic value Delta q / cost of any slot inside it.
//
// best_slot() runs best-first search over a max-heap of nodes and evaluated
// slots; the first slot popped is the exact argmax (ties toward the smaller
// slot index). Condition-1 leaves longer than t_s are bisected on the fly
// during the search so their bounds tighten.

#ifndef TCSC_VORONOI_TREE_HPP_
#define TCSC_VORONOI_TREE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcsc/task_model.hpp"

namespace tcsc {

// Greedy selection key. Zero-cost slots form their own class ranked by raw
// gain above every priced slot.
struct Priority {
  bool free = false;
  double value = 0.0;
};

inline bool operator<(const Priority& a, const Priority& b) {
  if (a.free != b.free) return !a.free;
  return a.value < b.value;
}
inline bool operator==(const Priority& a, const Priority& b) {
  return a.free == b.free && a.value == b.value;
}

Priority HeuristicKey(double gain, double cost);

struct VoronoiNode {
  Slot l = 0;
  Slot r = 0;
  int left = -1;
  int right = -1;
  int condition = 0;  // 0 internal, 1 uniform k-NN leaf, 2 short leaf
  Slot kset_lo = 0, kset_hi = 0;
  Slot knn_l_lo = 0, knn_l_hi = 0;
  Slot knn_r_lo = 0, knn_r_hi = 0;
  Slot infl_lo = 0, infl_hi = 0;
  double q_prime = 0.0;
  double max_self_gain = 0.0;
  double inner_gain = 0.0;
  double min_cost = 0.0;  // over unexecuted slots; +inf when none is priced
  int unexecuted = 0;

  bool leaf() const { return left < 0; }
  int length() const { return r - l + 1; }
};

struct BestSlotResult {
  Slot slot = 0;
  double gain = 0.0;
  double cost = 0.0;
  Priority key;
};

class VoronoiTree {
 public:
  // costs/lambdas are slot-indexed (size m+1); +inf cost = no worker.
  VoronoiTree(TaskModel& model, int split_threshold, std::vector<double> costs,
              std::vector<double> lambdas);

  const TaskModel& model() const { return *model_; }
  int root() const { return root_; }
  const VoronoiNode& node(int id) const { return nodes_[id]; }
  int split_threshold() const { return ts_; }
  double cost(Slot j) const { return costs_[j]; }
  double lambda(Slot j) const { return lambdas_[j]; }

  // Executes e on the model and restores every quadruple to its rebuilt
  // value, touching only nodes whose influence range contains e.
  // Throws kSlotAlreadyExecuted.
  void execute(Slot e);

  // Re-prices slot j (cost and executing-worker reliability).
  void set_quote(Slot j, double cost, double lambda);

  // Upper bound on the key of every unexecuted slot of node id.
  // Throws kNoUnexecutedSlot.
  Priority node_upper_bound(int id) const;

  // Feasible (cost <= remaining) unexecuted slot with the largest key.
  std::optional<BestSlotResult> best_slot(double remaining);

  // Slots whose gain was computed exactly, summed over best_slot calls.
  std::int64_t evaluations() const { return evaluations_; }

  std::vector<int> leaves() const;
  int depth() const;
  int node_count() const;
  std::string dump() const;

 private:
  struct Bound {
    double self = 0.0;
    double inner = 0.0;
    double min_cost = 0.0;
    int unexecuted = 0;
  };

  int allocate();
  void release_subtree(int id);
  int build(Slot l, Slot r);
  void shape(int id);
  void summarize(int id);
  void summarize_leaf(int id);
  void refresh(int id, Slot e);
  bool uniform(Slot l, Slot r) const;
  Bound scan(Slot a, Slot b) const;
  double outer_gain(Slot a, Slot b) const;
  Priority bound_key(const Bound& b, Slot lo, Slot hi) const;
  void dump_node(int id, int indent, std::string& out) const;

  TaskModel* model_;
  int ts_;
  std::vector<double> costs_;
  std::vector<double> lambdas_;
  std::vector<VoronoiNode> nodes_;
  std::vector<int> free_;
  int root_ = -1;
  std::int64_t evaluations_ = 0;
};

}  // namespace tcsc

#endif  // TCSC_VORONOI_TREE_HPP_
