// Copyright 2026 The xroute Authors
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

#pragma once

// Estimated success probability, output-distribution distance, and the
// search over crosstalk allowance.

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xroute/circuit.hpp"
#include "xroute/error.hpp"
#include "xroute/hardware.hpp"
#include "xroute/scheduler.hpp"

namespace xroute {

/// q(t) = (1 - e^{-t/T1}) (1 - e^{-t/T2}). Infinite constants give 0.
inline double decoherence_error(double t, double t1, double t2) {
  if (!(t >= 0.0)) throw InputError("lifetime must be non-negative");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw InputError("T1 and T2 must be positive");
  return (1.0 - std::exp(-t / t1)) * (1.0 - std::exp(-t / t2));
}

struct FidelityReport {
  double esp = 1.0;
  int depth_cx = 0;
  double total_excess_crosstalk = 0.0;
  std::map<int, double> per_qubit_idle_decay;  // survival factor per touched qubit
  double gate_error_product = 1.0;
};

/// Product of per-op success factors and per-qubit decoherence survival
/// over the wall-clock length of the schedule. A two-qubit op whose edge
/// appears in a ledger entry of its layer uses the conditional error.
inline FidelityReport esp(const ScheduledCircuit& sched, const CouplingGraph& graph, const CrosstalkProfile& profile) {
  FidelityReport r;
  r.depth_cx = sched.depth_cx();
  r.total_excess_crosstalk = sched.total_excess();

  std::map<int, std::map<Edge, double>> inflated;
  for (const auto& e : sched.ledger) {
    auto rec = profile.lookup(e.a, e.b);
    if (!rec) throw InputError("ledger pair " + e.a.str() + "/" + e.b.str() + " is not in the crosstalk profile");
    auto& layer = inflated[e.layer];
    layer[e.a] = std::max(layer[e.a], rec->e1_given_e2);
    layer[e.b] = std::max(layer[e.b], rec->e2_given_e1);
  }

  std::set<int> touched;
  for (int t = 0; t < sched.depth_cx(); ++t) {
    const auto lit = inflated.find(t);
    for (const PhysicalOp& op : sched.layers[static_cast<std::size_t>(t)]) {
      touched.insert(op.qubits.begin(), op.qubits.end());
      if (op.is_two_qubit()) {
        const Edge e = op.edge();
        auto base = graph.edge_error(e);
        if (!base) throw InputError("no error rate for used edge " + e.str());
        double eps = *base;
        if (lit != inflated.end()) {
          auto it = lit->second.find(e);
          if (it != lit->second.end()) eps = std::max(eps, it->second);
        }
        r.gate_error_product *= 1.0 - eps;
      } else {
        r.gate_error_product *= 1.0 - graph.single_qubit_error(op.qubits.at(0));
      }
    }
  }
  const double lifetime = r.depth_cx * graph.gate_time_cx();
  double survival = 1.0;
  for (int q : touched) {
    double s = 1.0 - decoherence_error(lifetime, graph.t1(q), graph.t2(q));
    r.per_qubit_idle_decay[q] = s;
    survival *= s;
  }
  r.esp = r.gate_error_product * survival;
  return r;
}

using Distribution = std::map<std::string, double>;

/// Total variation distance, half the L1 distance.
inline double tvd(const Distribution& p, const Distribution& q) {
  for (const auto* d : {&p, &q}) {
    double sum = 0.0;
    for (const auto& [k, v] : *d) {
      if (!(v >= 0.0)) throw InputError("negative probability for outcome '" + k + "'");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InputError("distribution is not normalized (sum " + detail::format_real(sum) + ")");
  }
  double acc = 0.0;
  auto pi = p.begin();
  auto qi = q.begin();
  while (pi != p.end() || qi != q.end()) {
    if (qi == q.end() || (pi != p.end() && pi->first < qi->first)) {
      acc += pi->second;
      ++pi;
    } else if (pi == p.end() || qi->first < pi->first) {
      acc += qi->second;
      ++qi;
    } else {
      acc += std::abs(pi->second - qi->second);
      ++pi;
      ++qi;
    }
  }
  return 0.5 * acc;
}

/// Allowance spent by the unlimited compile, in the requested units.
inline double find_x_max(const LogicalCircuit& circuit, const CouplingGraph& graph, const CrosstalkProfile& profile,
                         CompileOptions options = {}) {
  options.allowance = std::numeric_limits<double>::infinity();
  return compile_circuit(circuit, graph, profile, options).allowance_used(options.units);
}

struct Probe {
  double allowance = 0.0;
  double esp = 0.0;
};

struct SearchOptions {
  /// Maximum number of probes (compiles).
  int budget = 16;
  /// Neighbor step as a fraction of X_max.
  double delta_fraction = 1.0 / 32.0;
  /// Evaluate X and X+delta concurrently.
  bool parallel = true;
};

struct SearchTrace {
  double best_allowance = 0.0;
  double best_esp = 0.0;
  std::vector<Probe> probes;
  double x_min = 0.0;
  double x_max = 0.0;
  double delta = 0.0;
};

/// Bisection over [0, x_max] driven by a finite-difference test: probe X
/// and X + delta, keep the half the slope points to. The best probe seen
/// is returned, ties going to the smaller allowance, so a curve with
/// several peaks still yields the best point that was evaluated.
template <typename ProbeFn>
SearchTrace search_allowance_with(ProbeFn&& probe, double x_max, const SearchOptions& opt = {}) {
  if (opt.budget < 1) throw InputError("search budget must be at least 1 probe");
  if (!(x_max >= 0.0) || std::isinf(x_max)) throw InputError("X_max must be finite and non-negative");
  SearchTrace tr;
  tr.x_max = x_max;
  tr.delta = x_max * opt.delta_fraction;
  auto record = [&](double x, double e) {
    tr.probes.push_back({x, e});
    const bool first = tr.probes.size() == 1;
    if (first || e > tr.best_esp + 1e-15 || (std::abs(e - tr.best_esp) <= 1e-15 && x < tr.best_allowance)) {
      tr.best_allowance = x;
      tr.best_esp = e;
    }
  };
  auto budget_left = [&] { return opt.budget - static_cast<int>(tr.probes.size()); };

  record(0.0, probe(0.0));
  if (x_max <= 0.0 || budget_left() < 1) return tr;
  record(x_max, probe(x_max));

  double lo = 0.0, hi = x_max;
  while (hi - lo >= tr.delta && budget_left() >= 2) {
    const double x = 0.5 * (lo + hi);
    const double xd = std::min(x + tr.delta, x_max);
    double ex = 0.0, exd = 0.0;
    if (opt.parallel) {
      auto fut = std::async(std::launch::async, [&] { return probe(xd); });
      ex = probe(x);
      exd = fut.get();
    } else {
      ex = probe(x);
      exd = probe(xd);
    }
    record(x, ex);
    record(xd, exd);
    if (exd < ex)
      hi = x;
    else
      lo = x;
  }
  return tr;
}

struct AllowanceSearchResult {
  double best_allowance = 0.0;
  FidelityReport best_report;
  ScheduledCircuit best_schedule;
  std::vector<Probe> probes;
  double x_min = 0.0;
  double x_max = 0.0;
  double delta = 0.0;
};

/// Searches the allowance that maximizes esp for this circuit.
inline AllowanceSearchResult search_allowance(const LogicalCircuit& circuit, const CouplingGraph& graph,
                                              const CrosstalkProfile& profile, int probes_budget,
                                              CompileOptions options = {}, SearchOptions sopt = {}) {
  sopt.budget = probes_budget;
  if (options.observer) sopt.parallel = false;
  const double x_max = find_x_max(circuit, graph, profile, options);

  std::mutex mu;
  std::map<double, std::pair<ScheduledCircuit, FidelityReport>> seen;
  auto probe = [&](double x) {
    CompileOptions o = options;
    o.allowance = x;
    ScheduledCircuit s = compile_circuit(circuit, graph, profile, o);
    FidelityReport rep = esp(s, graph, profile);
    const double e = rep.esp;
    std::lock_guard<std::mutex> lock(mu);
    seen.emplace(x, std::make_pair(std::move(s), std::move(rep)));
    return e;
  };
  SearchTrace tr = search_allowance_with(probe, x_max, sopt);

  AllowanceSearchResult out;
  out.best_allowance = tr.best_allowance;
  out.probes = tr.probes;
  out.x_max = tr.x_max;
  out.delta = tr.delta;
  auto& best = seen.at(tr.best_allowance);
  out.best_schedule = best.first;
  out.best_report = best.second;
  return out;
}

}  // namespace xroute
