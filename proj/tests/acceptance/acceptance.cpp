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

// Acceptance suite: one PASS / FAIL line per criterion.
//
//   tcsc_acceptance [--only N,...] [--known-fail N,...]
//
// Exits non-zero when a criterion fails that is not listed in --known-fail,
// or when a listed one passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tcsc/assign_multi.hpp"
#include "tcsc/assign_single.hpp"
#include "tcsc/datagen.hpp"
#include "tcsc/quality.hpp"
#include "tcsc/voronoi_tree.hpp"

using namespace tcsc;

namespace {

constexpr double kRatio = 0.3934;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

Instance Defaults(std::uint64_t seed, int tasks, int m, Distribution d = Distribution::kUniform) {
  GenSpec g;
  g.n_tasks = tasks;
  g.m = m;
  g.distribution = d;
  g.seed = seed;
  return GenInstance(g);
}

std::vector<double> RandomCosts(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> kind(0, 19);
  std::vector<double> c(m + 1, kInf);
  for (Slot j = 1; j <= m; ++j) {
    const int t = kind(rng);
    c[j] = t == 0 ? 0.0 : t == 1 ? kInf : u(rng);
  }
  return c;
}

// 1. Greedy ratio against exhaustive enumeration.
Outcome GreedyRatio() {
  std::mt19937_64 rng(101);
  double worst = kInf;
  int bad = 0;
  for (int i = 0; i < 200; ++i) {
    const int m = std::uniform_int_distribution<int>(3, 10)(rng);
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const auto workers = oracle::RandomWorkers(rng, n, m, 10.0);
    WorkerPool pool(workers, m);
    const TaskSpec task{0, {std::uniform_real_distribution<double>(0, 10)(rng),
                            std::uniform_real_distribution<double>(0, 10)(rng)}, m};
    const SlotQuotes q = QuoteTask(pool, task);
    double total = 0.0;
    for (Slot j = 1; j <= m; ++j) total += std::isfinite(q.cost[j]) ? q.cost[j] : 0.0;
    const double b = std::uniform_real_distribution<double>(0.0, 0.6)(rng) * total;
    const double opt = oracle::SingleOptimum(workers, task, b, 3);
    const double got = Approx(task, pool, b, RunConfig{}).quality;
    if (opt > 0.0) worst = std::min(worst, got / opt);
    if (got < kRatio * opt - 1e-12) ++bad;
  }
  return {bad == 0, "200 instances, worst approx/OPT " + Fmt("%.4f", worst) + ", violations " +
                        std::to_string(bad)};
}

// 2. Approx and Approx* pick the same slots.
Outcome Exactness() {
  int mismatched = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance in = Defaults(seed, 1, 500);
    WorkerPool pool(in.workers, 500);
    const auto a = Approx(in.tasks[0], pool, 100.0, RunConfig{});
    const auto s = ApproxStar(in.tasks[0], pool, 100.0, RunConfig{});
    worst = std::max(worst, std::abs(a.quality - s.quality));
    if (a.sequence != s.sequence || std::abs(a.quality - s.quality) > 1e-9) ++mismatched;
  }
  return {mismatched == 0, "100 instances at m=500, mismatches " + std::to_string(mismatched) +
                               ", max |dq| " + Fmt("%.2e", worst)};
}

// 3. Pruning ratio at defaults.
Outcome Pruning() {
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance in = Defaults(seed, 1, 500);
    WorkerPool pool(in.workers, 500);
    sum += ApproxStar(in.tasks[0], pool, 100.0, RunConfig{}).pruning_ratio;
  }
  const double mean = sum / 20;
  return {mean >= 0.5, "mean pruning ratio " + Fmt("%.3f", mean) + " over 20 seeds (reference >0.7)"};
}

// 4. Wall-clock advantage at m=1000, b=200.
Outcome Speed() {
  const Instance in = Defaults(0, 1, 1000);
  WorkerPool pool(in.workers, 1000);
  std::vector<double> ta, ts;
  for (int rep = 0; rep < 5; ++rep) {
    auto t0 = Clock::now();
    Approx(in.tasks[0], pool, 200.0, RunConfig{});
    ta.push_back(Seconds(t0));
    t0 = Clock::now();
    ApproxStar(in.tasks[0], pool, 200.0, RunConfig{});
    ts.push_back(Seconds(t0));
  }
  std::sort(ta.begin(), ta.end());
  std::sort(ts.begin(), ts.end());
  const double a = ta[2], s = ts[2];
  return {s <= a / 10.0, "median approx " + Fmt("%.4f", a) + " s, approx* " + Fmt("%.4f", s) +
                             " s, speedup " + Fmt("%.1fx", a / s)};
}

// 5. Metric correctness.
Outcome Metric() {
  bool ok = true;
  const ExecutedTimeline fig(100, {2, 4, 7, 9});
  ok = ok && ErrorRatio(1, fig, 2) == 0.02;
  ok = ok && TaskQuality(ExecutedTimeline(100), 3) == 0.0;
  for (int m : {10, 100, 500}) {
    std::vector<Slot> all(m);
    for (Slot j = 1; j <= m; ++j) all[j - 1] = j;
    ok = ok && std::abs(TaskQuality(ExecutedTimeline(m, all), 3) - std::log2(m)) <= 1e-12;
  }
  std::mt19937_64 rng(505);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int m = std::uniform_int_distribution<int>(1, 120)(rng);
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    const std::set<Slot> s =
        oracle::RandomSubset(rng, m, std::uniform_real_distribution<double>(0, 0.5)(rng));
    const double got = TaskQuality(ExecutedTimeline(m, {s.begin(), s.end()}), k);
    worst = std::max(worst, std::abs(got - oracle::Quality(m, k, oracle::Plain(s))));
  }
  ok = ok && worst <= 1e-12;
  return {ok, "example ratio 0.02, null 0, full log2 m, 1000 states max err " + Fmt("%.1e", worst)};
}

// 6. Monotonicity and submodularity suites.
Outcome Properties() {
  std::mt19937_64 rng(606);
  constexpr double kTol = 1e-9;
  std::ostringstream detail;
  bool ok = true;
  auto report = [&](const char* name, int bad) {
    detail << name << " " << bad << " ";
    ok = ok && bad == 0;
  };
  auto pick_outside = [&](int m, const std::set<Slot>& t) -> Slot {
    std::vector<Slot> free;
    for (Slot j = 1; j <= m; ++j) {
      if (!t.count(j)) free.push_back(j);
    }
    if (free.empty()) return 0;
    return free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
  };

  // Per-slot probability.
  int mono = 0, sub = 0;
  for (int done = 0; done < 1000;) {
    const int m = std::uniform_int_distribution<int>(3, 60)(rng);
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    const std::set<Slot> t = oracle::RandomSubset(rng, m, 0.3);
    const Slot e = pick_outside(m, t);
    if (!e) continue;
    ++done;
    std::set<Slot> s;
    for (Slot x : t) {
      if (std::bernoulli_distribution(0.5)(rng)) s.insert(x);
    }
    const Slot j = std::uniform_int_distribution<int>(1, m)(rng);
    auto p = [&](std::set<Slot> x) {
      return FinishingProbability(j, ExecutedTimeline(m, {x.begin(), x.end()}), k);
    };
    auto with = [&](std::set<Slot> x) {
      x.insert(e);
      return x;
    };
    mono += p(with(s)) < p(s) - kTol;
    sub += p(with(s)) - p(s) < p(with(t)) - p(t) - kTol;
  }
  report("p-monotone", mono);
  report("p-submodular", sub);

  // Task quality, sum and min over random S subset of T and e outside T.
  struct Triple {
    int bad_mono = 0;
    int bad_sub = 0;
  };
  Triple q, qs, qm;
  for (int done = 0; done < 1000;) {
    const int m = std::uniform_int_distribution<int>(3, 40)(rng);
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    const std::set<Slot> t = oracle::RandomSubset(rng, m, 0.3);
    const Slot e = pick_outside(m, t);
    if (!e) continue;
    ++done;
    std::set<Slot> s;
    for (Slot x : t) {
      if (std::bernoulli_distribution(0.5)(rng)) s.insert(x);
    }
    auto f = [&](std::set<Slot> x) {
      return TaskQuality(ExecutedTimeline(m, {x.begin(), x.end()}), k);
    };
    auto with = [&](std::set<Slot> x) {
      x.insert(e);
      return x;
    };
    q.bad_mono += f(with(s)) < f(s) - kTol;
    q.bad_sub += f(with(s)) - f(s) < f(with(t)) - f(t) - kTol;
  }
  report("q-monotone", q.bad_mono);
  report("q-submodular", q.bad_sub);

  using Ground = std::set<std::pair<int, Slot>>;
  for (int done = 0; done < 1000;) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    const int m = std::uniform_int_distribution<int>(3, 20)(rng);
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    Ground t;
    for (int i = 0; i < n; ++i) {
      for (Slot j : oracle::RandomSubset(rng, m, 0.3)) t.insert({i, j});
    }
    if (static_cast<int>(t.size()) == n * m) continue;
    std::pair<int, Slot> e;
    do {
      e = {std::uniform_int_distribution<int>(0, n - 1)(rng),
           std::uniform_int_distribution<int>(1, m)(rng)};
    } while (t.count(e));
    ++done;
    Ground s;
    for (const auto& x : t) {
      if (std::bernoulli_distribution(0.5)(rng)) s.insert(x);
    }
    auto states = [&](const Ground& x) {
      std::vector<TaskState> out;
      for (int i = 0; i < n; ++i) out.emplace_back(TaskSpec{static_cast<TaskId>(i), {0, 0}, m});
      for (const auto& [i, j] : x) out[i].execute(j, 0, 0.0);
      return out;
    };
    auto with = [&](Ground x) {
      x.insert(e);
      return x;
    };
    auto fsum = [&](const Ground& x) { return QualitySum(states(x), k); };
    auto fmin = [&](const Ground& x) { return QualityMin(states(x), k); };
    qs.bad_mono += fsum(with(s)) < fsum(s) - kTol;
    qs.bad_sub += fsum(with(s)) - fsum(s) < fsum(with(t)) - fsum(t) - kTol;
    qm.bad_mono += fmin(with(s)) < fmin(s) - kTol;
    qm.bad_sub += fmin(with(s)) - fmin(s) < fmin(with(t)) - fmin(t) - kTol;
  }
  report("qsum-monotone", qs.bad_mono);
  report("qsum-submodular", qs.bad_sub);
  report("qmin-monotone", qm.bad_mono);
  report("qmin-submodular", qm.bad_sub);
  return {ok, "violations per 1000: " + detail.str()};
}

// 7. Tree soundness.
Outcome TreeSoundness() {
  std::mt19937_64 rng(707);
  int bad_leaves = 0, checked_leaves = 0;
  for (int i = 0; i < 100; ++i) {
    const int m = std::uniform_int_distribution<int>(5, 500)(rng);
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    const std::set<Slot> s =
        oracle::RandomSubset(rng, m, std::uniform_real_distribution<double>(0.01, 0.3)(rng));
    TaskModel model(m, k);
    for (Slot x : s) model.execute(x);
    VoronoiTree tree(model, std::uniform_int_distribution<int>(1, 8)(rng),
                     std::vector<double>(m + 1, 1.0), std::vector<double>(m + 1, 1.0));
    const oracle::Executed ex = oracle::Plain(s);
    for (int id : tree.leaves()) {
      const VoronoiNode& n = tree.node(id);
      if (n.condition != 1) continue;
      ++checked_leaves;
      auto ref = oracle::Knn(ex, n.l, k);
      std::sort(ref.begin(), ref.end());
      for (Slot j = n.l + 1; j <= n.r; ++j) {
        auto got = oracle::Knn(ex, j, k);
        std::sort(got.begin(), got.end());
        if (got != ref) {
          ++bad_leaves;
          break;
        }
      }
    }
  }

  int bad_steps = 0, steps = 0;
  std::function<bool(const VoronoiTree&, int, const VoronoiTree&, int)> same =
      [&](const VoronoiTree& a, int ia, const VoronoiTree& b, int ib) {
        const VoronoiNode& x = a.node(ia);
        const VoronoiNode& y = b.node(ib);
        if (x.l != y.l || x.r != y.r || x.leaf() != y.leaf() || x.condition != y.condition ||
            x.kset_lo != y.kset_lo || x.kset_hi != y.kset_hi || x.infl_lo != y.infl_lo ||
            x.infl_hi != y.infl_hi || std::abs(x.q_prime - y.q_prime) > 1e-9) {
          return false;
        }
        return x.leaf() || (same(a, x.left, b, y.left) && same(a, x.right, b, y.right));
      };
  for (int i = 0; i < 50; ++i) {
    const int m = std::uniform_int_distribution<int>(10, 300)(rng);
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    const int ts = std::uniform_int_distribution<int>(1, 8)(rng);
    TaskModel model(m, k);
    const std::vector<double> costs = RandomCosts(rng, m);
    VoronoiTree tree(model, ts, costs, std::vector<double>(m + 1, 1.0));
    std::vector<Slot> order(m);
    for (Slot j = 1; j <= m; ++j) order[j - 1] = j;
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(std::min(m, 40));
    for (Slot e : order) {
      tree.execute(e);
      TaskModel copy = model;
      VoronoiTree fresh(copy, ts, costs, std::vector<double>(m + 1, 1.0));
      ++steps;
      if (!same(tree, tree.root(), fresh, fresh.root()) || tree.dump() != fresh.dump()) ++bad_steps;
    }
  }
  return {bad_leaves == 0 && bad_steps == 0,
          std::to_string(checked_leaves) + " condition-1 leaves, " + std::to_string(bad_leaves) +
              " non-uniform; " + std::to_string(steps) + " update steps, " +
              std::to_string(bad_steps) + " differ from rebuild"};
}

// 8. Bound admissibility.
Outcome Admissibility() {
  std::mt19937_64 rng(808);
  int pairs = 0, bad = 0;
  while (pairs < 1000) {
    const int m = std::uniform_int_distribution<int>(2, 150)(rng);
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    const oracle::Executed ex =
        oracle::Plain(oracle::RandomSubset(rng, m, std::uniform_real_distribution<double>(0, 0.3)(rng)));
    TaskModel model(m, k);
    for (const auto& [e, l] : ex) model.execute(e);
    const std::vector<double> costs = RandomCosts(rng, m);
    VoronoiTree tree(model, std::uniform_int_distribution<int>(1, 6)(rng), costs,
                     std::vector<double>(m + 1, 1.0));
    std::vector<int> ids;
    std::function<void(int)> collect = [&](int id) {
      ids.push_back(id);
      if (!tree.node(id).leaf()) {
        collect(tree.node(id).left);
        collect(tree.node(id).right);
      }
    };
    collect(tree.root());
    const double base = oracle::Quality(m, k, ex);
    for (int round = 0; round < 5 && pairs < 1000; ++round) {
      const int id = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
      const VoronoiNode& n = tree.node(id);
      if (n.unexecuted == 0) continue;
      ++pairs;
      const Priority bound = tree.node_upper_bound(id);
      for (Slot j = n.l; j <= n.r; ++j) {
        if (ex.count(j) || !std::isfinite(costs[j])) continue;
        oracle::Executed next = ex;
        next[j] = 1.0;
        const Priority key = HeuristicKey(oracle::Quality(m, k, next) - base, costs[j]);
        if (bound < key) {
          ++bad;
          break;
        }
      }
    }
  }
  return {bad == 0, std::to_string(pairs) + " (state, node) pairs, " + std::to_string(bad) +
                        " inadmissible"};
}

// 9. Task-parallel runs commit the serial assignment set.
Outcome ParallelConsistency() {
  int runs = 0, bad = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenSpec g;
    g.n_tasks = 40;
    g.n_workers = 800;
    g.m = 100;
    g.distribution = static_cast<Distribution>(seed % 3);
    g.seed = seed;
    const Instance in = GenInstance(g);
    WorkerPool pool(in.workers, g.m);
    RunConfig c;
    c.seed = seed;
    const std::string serial = CommittedDigest(MsqmSerial(in.tasks, pool, 400.0, c));
    for (int cores : {2, 4, 8}) {
      c.cores = cores;
      for (Scheduler s : {Scheduler::kSimulated, Scheduler::kThreads}) {
        ParallelOptions o;
        o.scheduler = s;
        const MultiRunResult r = MsqmParallelTask(in.tasks, pool, 400.0, c, o);
        ++runs;
        if (CommittedDigest(r) != serial || !r.replay_matches) ++bad;
      }
    }
  }
  return {bad == 0, std::to_string(runs) + " parallel runs, " + std::to_string(bad) +
                        " differ from serial"};
}

// 10. Conflict counts by task distribution.
Outcome ConflictTrend() {
  double mean[3] = {0, 0, 0};
  for (int d = 0; d < 3; ++d) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Instance in = Defaults(seed, 300, 500, static_cast<Distribution>(d));
      WorkerPool pool(in.workers, 500);
      RunConfig c;
      c.cores = 8;
      c.seed = seed;
      ParallelOptions o;
      o.scheduler = Scheduler::kSimulated;
      mean[d] += static_cast<double>(MsqmParallelTask(in.tasks, pool, 100.0, c, o).conflict_count);
    }
    mean[d] /= 20;
  }
  const double u = mean[0], g = mean[1], z = mean[2];
  return {z >= g && g >= u, "mean conflicts uniform " + Fmt("%.1f", u) + ", gaussian " +
                                Fmt("%.1f", g) + ", zipfian " + Fmt("%.1f", z)};
}

// 11. Min-quality greedy against joint enumeration.
Outcome MmqmRatio() {
  std::mt19937_64 rng(1111);
  int bad = 0;
  double worst = kInf;
  for (int i = 0; i < 100; ++i) {
    const int m = std::uniform_int_distribution<int>(3, 6)(rng);
    const auto workers =
        oracle::RandomWorkers(rng, std::uniform_int_distribution<int>(1, 4)(rng), m, 10.0);
    WorkerPool pool(workers, m);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    const std::vector<TaskSpec> tasks{{0, {u(rng), u(rng)}, m}, {1, {u(rng), u(rng)}, m}};
    const double b = std::uniform_real_distribution<double>(0.0, 25.0)(rng);
    const double opt = oracle::PairOptimum(workers, tasks[0], tasks[1], b, 3, true);
    const double got = Mmqm(tasks, pool, b, RunConfig{}).q_min;
    if (opt > 0.0) worst = std::min(worst, got / opt);
    if (got < kRatio * opt - 1e-12) ++bad;
  }
  return {bad == 0, "100 instances, worst q_min/OPT " + Fmt("%.4f", worst) + ", violations " +
                        std::to_string(bad)};
}

std::set<int> ParseList(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, known;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") {
      only = ParseList(argv[i + 1]);
    } else if (flag == "--known-fail") {
      known = ParseList(argv[i + 1]);
    } else {
      std::fprintf(stderr, "unknown flag %s\n", flag.c_str());
      return 2;
    }
  }

  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"greedy ratio", GreedyRatio},
      {"index exactness", Exactness},
      {"pruning effectiveness", Pruning},
      {"speed advantage", Speed},
      {"metric correctness", Metric},
      {"submodularity and monotonicity", Properties},
      {"tree soundness", TreeSoundness},
      {"bound admissibility", Admissibility},
      {"parallel consistency", ParallelConsistency},
      {"conflict trend", ConflictTrend},
      {"mmqm ratio", MmqmRatio},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = Clock::now();
    const Outcome o = criteria[i].second();
    std::printf("%s %2d %s: %s [%.1f s]%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str(), Seconds(t0), !o.pass && known.count(id) ? " (known)" : "");
    std::fflush(stdout);
    if (o.pass == static_cast<bool>(known.count(id))) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
