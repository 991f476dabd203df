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

#include "tcsc/assign_multi.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <random>
#include <thread>
#include <unordered_map>

#include "tcsc/datagen.hpp"
#include "tcsc/voronoi_tree.hpp"

namespace tcsc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t PairKey(Slot slot, WorkerId worker) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(slot)) << 32) | worker;
}

void CheckConfig(const std::vector<TaskSpec>& tasks, const RunConfig& config) {
  if (tasks.empty()) throw TcscError(ErrorCode::kEmptyTaskSet, "no tasks");
  if (config.k < 1 || config.k > kMaxK || config.split_threshold < 1 || config.cores < 1) {
    throw TcscError(ErrorCode::kValidationFailure, "invalid k, t_s or cores");
  }
  for (const TaskSpec& t : tasks) {
    if (t.m != tasks.front().m) {
      throw TcscError(ErrorCode::kValidationFailure, "tasks disagree on m");
    }
  }
}

// One task's model and tree. Owned by one execution context at a time; the
// coordinator talks to it only through the inbox.
struct Executor {
  struct Msg {
    bool execute = false;
    Slot slot = 0;
    double cost = 0.0;
    double lambda = 1.0;
  };

  Executor(const TaskSpec& spec, const RunConfig& config, const SlotQuotes& q)
      : model(spec.m, config.k, config.quality_mode),
        tree(model, config.split_threshold, q.cost, q.reliability) {}

  void apply() {
    const auto t0 = Clock::now();
    for (const Msg& msg : inbox) {
      if (msg.execute) {
        tree.execute(msg.slot);
      } else {
        tree.set_quote(msg.slot, msg.cost, msg.lambda);
      }
    }
    inbox.clear();
    update_seconds += Since(t0);
  }

  void run(double remaining) {
    apply();
    const auto t0 = Clock::now();
    best = tree.best_slot(remaining);
    eval_seconds += Since(t0);
    fresh = true;
    dead = !best;
  }

  TaskModel model;
  VoronoiTree tree;
  std::vector<Msg> inbox;
  std::optional<BestSlotResult> best;
  bool fresh = false;
  bool dead = false;
  double eval_seconds = 0.0;
  double update_seconds = 0.0;
};

struct SingleChoice {
  int task = -1;
  Slot slot = 0;
  double gain = 0.0;
};

// Best feasible single (task, slot) by quality increase from the empty state.
std::optional<SingleChoice> BestSingle(const std::vector<TaskSpec>& tasks,
                                       const std::vector<SlotQuotes>& quotes, double budget,
                                       const RunConfig& config) {
  std::optional<SingleChoice> best;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    TaskModel empty(tasks[i].m, config.k, config.quality_mode);
    std::vector<double> unit(quotes[i].cost.size(), kInf);
    for (Slot e = 1; e <= tasks[i].m; ++e) {
      if (quotes[i].cost[e] <= budget) unit[e] = 1.0;
    }
    VoronoiTree tree(empty, config.split_threshold, std::move(unit), quotes[i].reliability);
    const auto r = tree.best_slot(1.0);
    if (!r) continue;
    const bool better = !best || r->gain > best->gain ||
                        (r->gain == best->gain && tasks[i].id < tasks[best->task].id);
    if (better) best = SingleChoice{static_cast<int>(i), r->slot, r->gain};
  }
  return best;
}

class ThreadedExecutors {
 public:
  ThreadedExecutors(int threads, std::vector<std::unique_ptr<Executor>>& ex,
                    const std::vector<TaskSpec>& tasks, const ParallelOptions& options)
      : ex_(ex), tasks_(tasks), options_(options) {
    for (int t = 0; t < threads; ++t) threads_.emplace_back([this] { loop(); });
  }
  ~ThreadedExecutors() { shutdown(); }

  void run(const std::vector<int>& stale, const HeartbeatTable& heartbeats,
           double remaining) {
    std::unique_lock<std::mutex> lk(mu_);
    remaining_ = remaining;
    for (int i : stale) {
      const HeartbeatRow& row = heartbeats.row(tasks_[i].id);
      queue_.push(Job{Priority{row.free, row.value}, tasks_[i].id, i});
    }
    outstanding_ = static_cast<int>(stale.size());
    work_.notify_all();
    const bool done = done_.wait_for(lk, options_.heartbeat_timeout,
                                     [this] { return outstanding_ == 0; });
    if (!done) {
      lk.unlock();
      shutdown();
      throw TcscError(ErrorCode::kCoordinatorTimeout, "executor missed its heartbeat window");
    }
    if (error_) std::rethrow_exception(error_);
  }

 private:
  struct Job {
    Priority priority;
    TaskId id = 0;
    int index = 0;
  };
  struct JobLess {
    bool operator()(const Job& a, const Job& b) const {
      if (a.priority < b.priority) return true;
      if (b.priority < a.priority) return false;
      return a.id > b.id;
    }
  };

  void loop() {
    while (true) {
      std::unique_lock<std::mutex> lk(mu_);
      work_.wait(lk, [this] { return stop_ || !queue_.empty(); });
      if (stop_) return;
      const Job job = queue_.top();
      queue_.pop();
      const double remaining = remaining_;
      lk.unlock();
      try {
        if (options_.on_job) options_.on_job(job.id);
        ex_[job.index]->run(remaining);
      } catch (...) {
        std::lock_guard<std::mutex> g(mu_);
        if (!error_) error_ = std::current_exception();
      }
      lk.lock();
      if (--outstanding_ == 0) done_.notify_all();
    }
  }

  void shutdown() {
    {
      std::lock_guard<std::mutex> g(mu_);
      stop_ = true;
      queue_ = {};
    }
    work_.notify_all();
    for (std::thread& t : threads_) {
      if (t.joinable()) t.join();
    }
  }

  std::vector<std::unique_ptr<Executor>>& ex_;
  const std::vector<TaskSpec>& tasks_;
  const ParallelOptions& options_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable work_;
  std::condition_variable done_;
  std::priority_queue<Job, std::vector<Job>, JobLess> queue_;
  int outstanding_ = 0;
  double remaining_ = 0.0;
  bool stop_ = false;
  std::exception_ptr error_;
};

class Coordinator {
 public:
  using Recompute =
      std::function<void(const std::vector<int>&, double, const HeartbeatTable&)>;

  Coordinator(const std::vector<TaskSpec>& tasks, const WorkerPool& pool, double budget,
              const RunConfig& config)
      : tasks_(tasks), config_(config), pool_(pool), budget_(budget), table_(pool.workers()) {
    CheckConfig(tasks, config);
    start_ = Clock::now();
    for (const TaskSpec& t : tasks) {
      quotes_.push_back(QuoteTask(pool_, t));
      states_.emplace_back(t);
    }
    initial_quotes_ = quotes_;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      for (Slot j = 1; j <= tasks[i].m; ++j) {
        if (quotes_[i].cost[j] < kInf) {
          holders_[PairKey(j, quotes_[i].worker[j])].push_back(static_cast<int>(i));
        }
      }
    }
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      executors_.push_back(std::make_unique<Executor>(tasks[i], config, quotes_[i]));
    }
    timings_.tree_build = Since(t0);
  }

  std::vector<std::unique_ptr<Executor>>& executors() { return executors_; }

  MultiRunResult run_msqm(const Recompute& recompute, bool tables) {
    std::vector<TaskId> ids;
    for (const TaskSpec& t : tasks_) ids.push_back(t.id);
    result_.heartbeats.reset(ids);
    tables_ = tables;
    while (true) {
      std::vector<int> stale;
      for (std::size_t i = 0; i < executors_.size(); ++i) {
        if (!executors_[i]->fresh && !executors_[i]->dead) stale.push_back(static_cast<int>(i));
      }
      if (!stale.empty()) recompute(stale, budget_.remaining(), result_.heartbeats);
      for (int i : stale) {
        const auto& best = executors_[i]->best;
        result_.heartbeats.report(tasks_[i].id, best ? best->key.value : -kInf,
                                  best && best->key.free);
      }
      int pick = -1;
      for (std::size_t i = 0; i < executors_.size(); ++i) {
        const auto& best = executors_[i]->best;
        if (executors_[i]->dead || !best) continue;
        if (pick < 0) {
          pick = static_cast<int>(i);
          continue;
        }
        const Priority& cur = executors_[pick]->best->key;
        if (cur < best->key || (cur == best->key && tasks_[i].id < tasks_[pick].id)) {
          pick = static_cast<int>(i);
        }
      }
      if (pick < 0) break;
      grant(pick);
    }
    return finish(/*by_min=*/false);
  }

  MultiRunResult run_mmqm() {
    std::set<std::tuple<double, TaskId, int>> heap;
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
      heap.insert({executors_[i]->model.quality(), tasks_[i].id, static_cast<int>(i)});
    }
    while (!heap.empty()) {
      const auto [q, id, i] = *heap.begin();
      heap.erase(heap.begin());
      executors_[i]->run(budget_.remaining());
      if (!executors_[i]->best) continue;
      grant(i);
      executors_[i]->apply();
      heap.insert({executors_[i]->model.quality(), id, i});
    }
    return finish(/*by_min=*/true);
  }

 private:
  void grant(int i) {
    Executor& ex = *executors_[i];
    const BestSlotResult best = *ex.best;
    const Slot t = best.slot;
    const WorkerId w = quotes_[i].worker[t];
    const double cost = quotes_[i].cost[t];

    std::vector<int> contenders;
    if (auto it = holders_.find(PairKey(t, w)); it != holders_.end()) {
      contenders = std::move(it->second);
      holders_.erase(it);
    }
    if (contenders.size() >= 2) {
      result_.conflict_count += static_cast<std::int64_t>(contenders.size()) - 1;
      if (tables_) {
        std::set<TaskId> ids;
        for (int c : contenders) ids.insert(tasks_[c].id);
        result_.conflicts.grant(t, ids);
      }
    }

    pool_.commit(w, t, tasks_[i].id);
    budget_.spend(cost);
    states_[i].execute(t, w, cost);
    log_.append(Assignment{tasks_[i].id, t, w, cost, best.key.value, best.key.free,
                           static_cast<std::int64_t>(log_.entries().size())});
    ex.inbox.push_back({true, t, cost, quotes_[i].reliability[t]});
    ex.fresh = false;

    const bool reliable = config_.quality_mode == QualityMode::kReliability;
    for (int o : contenders) {
      if (o == i) continue;
      SlotQuotes& q = quotes_[o];
      const auto quote = pool_.kth_nearest_available(tasks_[o].location, t, 1);
      q.cost[t] = quote ? quote->cost : kInf;
      q.reliability[t] = quote ? quote->reliability : 1.0;
      q.worker[t] = quote ? quote->worker : 0;
      if (quote) holders_[PairKey(t, quote->worker)].push_back(o);
      Executor& other = *executors_[o];
      other.inbox.push_back({false, t, q.cost[t], q.reliability[t]});
      if (other.best && (reliable || other.best->slot == t)) other.fresh = false;
    }
    for (auto& e : executors_) {
      if (e->fresh && e->best && e->best->cost > budget_.remaining()) e->fresh = false;
    }
  }

  MultiRunResult finish(bool by_min) {
    MultiRunResult& r = result_;
    r.log = log_.entries();
    r.iterations = static_cast<int>(r.log.size());
    r.states = states_;
    auto score = [&](const std::vector<TaskState>& s) {
      return by_min ? QualityMin(s, config_.k, config_.quality_mode, &table_)
                    : QualitySum(s, config_.k, config_.quality_mode, &table_);
    };
    const double greedy = score(r.states);
    if (auto single = BestSingle(tasks_, initial_quotes_, budget_.total(), config_)) {
      std::vector<TaskState> alt;
      for (const TaskSpec& t : tasks_) alt.emplace_back(t);
      const SlotQuotes& q = initial_quotes_[single->task];
      alt[single->task].execute(single->slot, q.worker[single->slot], q.cost[single->slot]);
      if (score(alt) > greedy) {
        r.states = std::move(alt);
        r.log = {Assignment{tasks_[single->task].id, single->slot, q.worker[single->slot],
                            q.cost[single->slot], single->gain, false, 0}};
        r.used_singleton = true;
      }
    }
    r.q_sum = QualitySum(r.states, config_.k, config_.quality_mode, &table_);
    r.q_min = QualityMin(r.states, config_.k, config_.quality_mode, &table_);
    r.spent = 0.0;
    for (const TaskState& s : r.states) r.spent += s.spent();
    for (const auto& e : executors_) {
      r.evaluations += e->tree.evaluations();
      r.timings.heuristic_eval += e->eval_seconds;
      r.timings.tree_update += e->update_seconds;
    }
    r.timings.tree_build = timings_.tree_build;
    r.timings.total = Since(start_);
    return r;
  }

  const std::vector<TaskSpec>& tasks_;
  RunConfig config_;
  WorkerPool pool_;
  Budget budget_;
  ReliabilityTable table_;
  std::vector<SlotQuotes> quotes_;
  std::vector<SlotQuotes> initial_quotes_;
  std::vector<TaskState> states_;
  std::unordered_map<std::uint64_t, std::vector<int>> holders_;
  std::vector<std::unique_ptr<Executor>> executors_;
  LoggingTable log_;
  MultiRunResult result_;
  PhaseTimings timings_;
  Clock::time_point start_;
  bool tables_ = false;
};

void RunInline(std::vector<std::unique_ptr<Executor>>& ex, const std::vector<int>& stale,
               double remaining) {
  for (int i : stale) ex[i]->run(remaining);
}

}  // namespace

void HeartbeatTable::reset(const std::vector<TaskId>& tasks) {
  rows_.clear();
  for (TaskId t : tasks) rows_[t] = HeartbeatRow{};
}

void HeartbeatTable::report(TaskId task, double value, bool free) {
  HeartbeatRow& row = rows_.at(task);
  row.value = value;
  row.free = free;
  ++row.iteration;
}

void ConflictingTable::grant(Slot slot, const std::set<TaskId>& contenders) {
  for (ConflictRecord& r : records_) {
    if (r.slot != slot) continue;
    bool overlap = false;
    for (TaskId t : contenders) overlap = overlap || r.task_set.count(t) != 0;
    if (!overlap) continue;
    r.task_set.insert(contenders.begin(), contenders.end());
    ++r.kth_rank;
    return;
  }
  records_.push_back(ConflictRecord{contenders, slot, 2});
}

void LoggingTable::append(Assignment a) {
  if (!entries_.empty() && a.step <= entries_.back().step) {
    a.step = entries_.back().step + 1;
  }
  entries_.push_back(a);
}

std::vector<std::tuple<TaskId, Slot, WorkerId>> CommittedSet(const MultiRunResult& r) {
  std::vector<std::tuple<TaskId, Slot, WorkerId>> out;
  for (const TaskState& s : r.states) {
    for (const auto& [slot, entry] : s.ledger().entries()) {
      out.emplace_back(s.spec().id, slot, entry.worker);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string CommittedDigest(const MultiRunResult& r) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [t, s, w] : CommittedSet(r)) {
    mix(t);
    mix(static_cast<std::uint64_t>(s));
    mix(w);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::pair<Slot, WorkerId>> RankBound(const WorkerPool& pool, const TaskSpec& task,
                                                 int rank) {
  std::vector<std::pair<Slot, WorkerId>> out;
  for (Slot j = 1; j <= task.m; ++j) {
    const auto near = pool.nearest_available(task.location, j, rank);
    if (near.empty()) continue;
    for (WorkerId w : pool.within_radius(task.location, j, near.back().cost)) {
      out.emplace_back(j, w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

IndependenceGraph BuildIndependenceGraph(const std::vector<TaskSpec>& tasks,
                                         const WorkerPool& pool) {
  const int n = static_cast<int>(tasks.size());
  const int words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> adj(n, std::vector<std::uint64_t>(words, 0));
  std::vector<int> rank(n, 1);
  std::vector<std::vector<std::pair<Slot, WorkerId>>> bounds(n);

  auto degree = [&](int i) {
    int d = 0;
    for (std::uint64_t w : adj[i]) d += __builtin_popcountll(w);
    return d;
  };

  while (true) {
    std::unordered_map<std::uint64_t, std::vector<int>> holders;
    for (int i = 0; i < n; ++i) {
      bounds[i] = RankBound(pool, tasks[i], rank[i]);
      for (const auto& [s, w] : bounds[i]) holders[PairKey(s, w)].push_back(i);
    }
    bool added = false;
    std::vector<std::uint64_t> mask(words);
    for (const auto& [key, members] : holders) {
      if (members.size() < 2) continue;
      std::fill(mask.begin(), mask.end(), 0);
      for (int i : members) mask[i / 64] |= 1ULL << (i % 64);
      for (int i : members) {
        for (int wd = 0; wd < words; ++wd) {
          std::uint64_t bits = mask[wd];
          if (wd == i / 64) bits &= ~(1ULL << (i % 64));
          if (bits & ~adj[i][wd]) added = true;
          adj[i][wd] |= bits;
        }
      }
    }
    if (!added) break;
    for (int i = 0; i < n; ++i) rank[i] = degree(i) + 1;
  }

  IndependenceGraph g;
  for (int i = 0; i < n; ++i) {
    g.nodes.push_back(tasks[i].id);
    g.rank[tasks[i].id] = rank[i];
    g.bounds[tasks[i].id] = bounds[i];
    for (int j = i + 1; j < n; ++j) {
      if (adj[i][j / 64] >> (j % 64) & 1ULL) {
        g.edges.emplace_back(std::min(tasks[i].id, tasks[j].id),
                             std::max(tasks[i].id, tasks[j].id));
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  std::vector<int> comp(n, -1);
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int c = static_cast<int>(g.groups.size());
    g.groups.emplace_back();
    std::vector<int> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      g.groups[c].push_back(tasks[i].id);
      for (int j = 0; j < n; ++j) {
        if (comp[j] < 0 && (adj[i][j / 64] >> (j % 64) & 1ULL)) {
          comp[j] = c;
          stack.push_back(j);
        }
      }
    }
    std::sort(g.groups[c].begin(), g.groups[c].end());
  }
  return g;
}

MultiRunResult MsqmSerial(const std::vector<TaskSpec>& tasks, const WorkerPool& pool,
                          double budget, const RunConfig& config) {
  Coordinator c(tasks, pool, budget, config);
  auto& ex = c.executors();
  return c.run_msqm(
      [&ex](const std::vector<int>& s, double r, const HeartbeatTable&) { RunInline(ex, s, r); },
      false);
}

MultiRunResult MsqmParallelTask(const std::vector<TaskSpec>& tasks, const WorkerPool& pool,
                                double budget, const RunConfig& config,
                                const ParallelOptions& options) {
  if (config.cores == 1) return MsqmSerial(tasks, pool, budget, config);
  Coordinator c(tasks, pool, budget, config);
  auto& ex = c.executors();
  MultiRunResult r;
  if (options.scheduler == Scheduler::kSimulated) {
    std::mt19937_64 rng = Stream(config.seed, "scheduler");
    r = c.run_msqm(
        [&](const std::vector<int>& stale, double remaining, const HeartbeatTable&) {
          std::vector<int> order = stale;
          std::shuffle(order.begin(), order.end(), rng);
          for (int i : order) {
            if (options.on_job) options.on_job(tasks[i].id);
            ex[i]->run(remaining);
          }
        },
        true);
  } else {
    const int threads = std::max(1, std::min<int>(config.cores, static_cast<int>(tasks.size())));
    ThreadedExecutors pool_threads(threads, ex, tasks, options);
    r = c.run_msqm(
        [&](const std::vector<int>& stale, double remaining, const HeartbeatTable& hb) {
          pool_threads.run(stale, hb, remaining);
        },
        true);
  }

  // Replay the log by descending heuristic against the budget.
  std::vector<Assignment> order = r.log;
  std::stable_sort(order.begin(), order.end(), [](const Assignment& a, const Assignment& b) {
    if (a.free != b.free) return a.free;
    return a.heuristic > b.heuristic;
  });
  double remaining = budget;
  std::vector<std::tuple<TaskId, Slot, WorkerId>> replayed;
  for (const Assignment& a : order) {
    if (a.cost > remaining + 1e-9 * budget) continue;
    remaining -= a.cost;
    replayed.emplace_back(a.task, a.slot, a.worker);
  }
  std::sort(replayed.begin(), replayed.end());
  r.replay_matches = replayed == CommittedSet(r);
  return r;
}

MultiRunResult MsqmParallelGroup(const std::vector<TaskSpec>& tasks, const WorkerPool& pool,
                                 double budget, const RunConfig& config) {
  CheckConfig(tasks, config);
  const auto start = Clock::now();
  const IndependenceGraph graph = BuildIndependenceGraph(tasks, pool);
  std::map<TaskId, const TaskSpec*> by_id;
  for (const TaskSpec& t : tasks) by_id[t.id] = &t;

  const int n_groups = static_cast<int>(graph.groups.size());
  std::vector<std::vector<TaskSpec>> members(n_groups);
  std::vector<WorkerPool> sub_pools;
  for (int g = 0; g < n_groups; ++g) {
    std::vector<std::pair<Slot, WorkerId>> pairs;
    for (TaskId id : graph.groups[g]) {
      members[g].push_back(*by_id.at(id));
      const auto& b = graph.bounds.at(id);
      pairs.insert(pairs.end(), b.begin(), b.end());
    }
    sub_pools.push_back(pool.restricted(pairs));
  }

  // Runs the listed groups concurrently at the given budgets.
  auto run_groups = [&](const std::vector<int>& which, const std::vector<double>& budgets) {
    std::vector<MultiRunResult> out(which.size());
    std::vector<std::exception_ptr> errors(which.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < which.size(); i = next++) {
        try {
          out[i] = MsqmSerial(members[which[i]], sub_pools[which[i]], budgets[i], config);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const int threads = std::max(1, std::min<int>(config.cores, static_cast<int>(which.size())));
    std::vector<std::thread> pool_threads;
    for (int t = 1; t < threads; ++t) pool_threads.emplace_back(work);
    work();
    for (std::thread& t : pool_threads) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return out;
  };

  // Shares come from merging each group's unconstrained greedy log against
  // the whole budget, the order a serial run would have granted them in.
  // What is left over then goes, one group per round, to the group whose
  // quality it raises most.
  std::vector<int> active(n_groups);
  std::map<TaskId, int> group_of;
  for (int g = 0; g < n_groups; ++g) {
    active[g] = g;
    for (TaskId id : graph.groups[g]) group_of[id] = g;
  }
  std::vector<double> shares(n_groups, 0.0);
  {
    std::vector<Assignment> merged;
    for (const MultiRunResult& p : run_groups(active, std::vector<double>(n_groups, budget))) {
      merged.insert(merged.end(), p.log.begin(), p.log.end());
    }
    std::stable_sort(merged.begin(), merged.end(), [](const Assignment& a, const Assignment& b) {
      if (a.free != b.free) return a.free;
      return a.heuristic > b.heuristic;
    });
    double remaining = budget;
    for (const Assignment& a : merged) {
      if (a.cost > remaining) continue;
      remaining -= a.cost;
      shares[group_of.at(a.task)] += a.cost;
    }
  }
  std::vector<MultiRunResult> parts = run_groups(active, shares);
  constexpr int kRounds = 32;
  for (int round = 0; round < kRounds && !active.empty(); ++round) {
    double spent = 0.0;
    for (const MultiRunResult& p : parts) spent += p.spent;
    const double leftover = budget - spent;
    if (leftover <= 1e-9 * budget) break;
    std::vector<double> offers;
    for (int g : active) offers.push_back(parts[g].spent + leftover);
    std::vector<MultiRunResult> retry = run_groups(active, offers);
    std::vector<int> still;
    int best = -1;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const double gain = retry[i].q_sum - parts[active[i]].q_sum;
      if (gain <= 1e-12) continue;
      still.push_back(active[i]);
      if (best < 0 || gain > retry[best].q_sum - parts[active[best]].q_sum) {
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    const int g = active[best];
    retry[best].iterations += parts[g].iterations;
    retry[best].evaluations += parts[g].evaluations;
    parts[g] = std::move(retry[best]);
    active = std::move(still);
  }

  MultiRunResult r;
  std::map<TaskId, TaskState> states;
  for (MultiRunResult& p : parts) {
    for (TaskState& s : p.states) states.emplace(s.spec().id, std::move(s));
    r.log.insert(r.log.end(), p.log.begin(), p.log.end());
    r.iterations += p.iterations;
    r.conflict_count += p.conflict_count;
    r.evaluations += p.evaluations;
    r.timings += p.timings;
    r.used_singleton = r.used_singleton || p.used_singleton;
  }
  for (const TaskSpec& t : tasks) r.states.push_back(std::move(states.at(t.id)));
  const ReliabilityTable table(pool.workers());
  r.q_sum = QualitySum(r.states, config.k, config.quality_mode, &table);
  r.q_min = QualityMin(r.states, config.k, config.quality_mode, &table);
  for (const TaskState& s : r.states) r.spent += s.spent();
  r.groups = n_groups;
  r.timings.total = Since(start);
  return r;
}

MultiRunResult Mmqm(const std::vector<TaskSpec>& tasks, const WorkerPool& pool, double budget,
                    const RunConfig& config) {
  Coordinator c(tasks, pool, budget, config);
  return c.run_mmqm();
}

}  // namespace tcsc
