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

// Layered physical schedules and the chromatic compile loop: each
// iteration builds the candidate set graph, colors it, commits one color
// class as the next layer and advances running SWAPs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xroute/circuit.hpp"
#include "xroute/coloring.hpp"
#include "xroute/csg.hpp"
#include "xroute/error.hpp"
#include "xroute/hardware.hpp"
#include "xroute/log.hpp"

namespace xroute {

enum class OpKind { Cx, TwoQubit, Single, SwapSlice };

/// One operation in one layer. A SWAP appears as three consecutive
/// SwapSlice ops (slice 0,1,2). Routing SWAPs carry no logical_id and move
/// the mapping after slice 2; a logical swap gate carries its gate id and
/// leaves the mapping alone.
struct PhysicalOp {
  OpKind kind = OpKind::Cx;
  std::string name;
  std::vector<int> qubits;
  std::optional<int> logical_id;
  int slice = -1;
  std::vector<double> params;

  bool is_two_qubit() const { return qubits.size() == 2; }
  bool is_routing_swap() const { return kind == OpKind::SwapSlice && !logical_id; }
  Edge edge() const { return Edge(qubits.at(0), qubits.at(1)); }
  int duration() const { return kind == OpKind::SwapSlice ? 3 : 1; }
};

inline PhysicalOp make_swap_op(const Edge& e, std::optional<int> logical_id = std::nullopt) {
  return PhysicalOp{OpKind::SwapSlice, "swap", {e.a, e.b}, logical_id, -1, {}};
}

using Layer = std::vector<PhysicalOp>;

/// Two interfering two-qubit ops that overlap in time, charged once at the
/// start layer of the later one.
struct LedgerEntry {
  int layer = 0;
  Edge a;
  Edge b;
  double excess = 0.0;
};

struct ScheduledCircuit {
  int num_physical = 0;
  std::vector<Layer> layers;
  Mapping initial_mapping;
  /// Mapping after each layer.
  std::vector<Mapping> mapping_history;
  Mapping final_mapping;
  std::vector<LedgerEntry> ledger;

  /// One layer is one CX time unit, so a SWAP counts three.
  int depth_cx() const { return static_cast<int>(layers.size()); }

  double total_excess() const {
    double s = 0.0;
    for (const auto& e : ledger) s += e.excess;
    return s;
  }
  double allowance_used(AllowanceUnits units) const {
    return units == AllowanceUnits::Pairs ? static_cast<double>(ledger.size()) : total_excess();
  }
  std::size_t op_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.size();
    return n;
  }
};

/// Recomputes mapping_history and final_mapping from the layers.
inline void replay_mappings(ScheduledCircuit& s) {
  Mapping m = s.initial_mapping;
  s.mapping_history.clear();
  for (const auto& layer : s.layers) {
    for (const auto& op : layer)
      if (op.is_routing_swap() && op.slice == 2) m.apply_swap(op.qubits[0], op.qubits[1]);
    s.mapping_history.push_back(m);
  }
  s.final_mapping = m;
}

/// Ops placed on a time axis, the mapping at the current layer, and the
/// allowance left. Shared by the chromatic loop (which commits one layer
/// at a time) and by the list scheduler (which places ops as early as
/// per-qubit order and the allowance permit).
class Timeline {
 public:
  struct Placed {
    PhysicalOp op;
    int start = 0;
    int end() const { return start + op.duration(); }
  };

  Timeline(const CouplingGraph& graph, const CrosstalkProfile& profile, Mapping initial, AllowanceBudget budget)
      : graph_(&graph),
        profile_(&profile),
        initial_(initial),
        mapping_(std::move(initial)),
        budget_(budget),
        ready_(static_cast<std::size_t>(graph.num_physical()), 0) {}

  int now() const { return now_; }
  const Mapping& mapping() const { return mapping_; }
  const AllowanceBudget& budget() const { return budget_; }
  const std::vector<Placed>& placed() const { return placed_; }
  const std::vector<LedgerEntry>& ledger() const { return ledger_; }
  /// Routing SWAPs that finished at the end of the previous layer.
  const std::set<Edge>& last_completed() const { return last_completed_; }
  void forget_last_completed() { last_completed_.clear(); }

  int horizon() const {
    int h = now_;
    for (const auto& p : placed_) h = std::max(h, p.end());
    return h;
  }

  /// Ops started before now that still occupy now.
  std::vector<std::size_t> active() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < placed_.size(); ++i)
      if (placed_[i].start < now_ && placed_[i].end() > now_) out.push_back(i);
    return out;
  }
  bool has_active() const { return !active().empty(); }

  std::set<int> busy() const {
    std::set<int> out;
    for (auto i : active()) out.insert(placed_[i].op.qubits.begin(), placed_[i].op.qubits.end());
    return out;
  }

  /// Current mapping with every running routing SWAP already applied.
  Mapping projected() const {
    Mapping m = mapping_;
    for (auto i : active())
      if (placed_[i].op.is_routing_swap()) m.apply_swap(placed_[i].op.edge());
    return m;
  }

  std::vector<CsgVertex> in_progress_vertices() const {
    std::vector<CsgVertex> out;
    for (auto i : active()) {
      const auto& p = placed_[i];
      out.push_back(make_in_progress_vertex(p.op.edge(), p.end() - now_, p.op.logical_id.value_or(-1)));
    }
    return out;
  }

  struct CommitStats {
    int cgates = 0;
    int swaps_started = 0;
    std::set<int> helped;  // union of helps of the started SWAPs
  };

  /// Places the selected class at layer now() and charges its permitted
  /// crosstalk. Cgate vertices are turned into ops by `make_op`.
  CommitStats commit(const Csg& csg, const ColorClass& cls, const std::function<PhysicalOp(const CsgVertex&)>& make_op) {
    CommitStats stats;
    std::set<int> members(cls.members.begin(), cls.members.end());
    for (int m : cls.members) {
      const CsgVertex& v = csg.vertices.at(static_cast<std::size_t>(m));
      switch (v.kind) {
        case VertexKind::Cgate:
          place_at(make_op(v), now_);
          ++stats.cgates;
          break;
        case VertexKind::CandidateSwap:
          place_at(make_swap_op(v.edge()), now_);
          ++stats.swaps_started;
          stats.helped.insert(v.helps.begin(), v.helps.end());
          break;
        case VertexKind::InProgressSwap: break;
      }
    }
    double cost = 0.0;
    for (const auto& p : csg.permitted) {
      if (!members.count(p.u) || !members.count(p.v)) continue;
      const CsgVertex& x = csg.vertices[static_cast<std::size_t>(p.u)];
      const CsgVertex& y = csg.vertices[static_cast<std::size_t>(p.v)];
      if (x.kind == VertexKind::InProgressSwap && y.kind == VertexKind::InProgressSwap) continue;
      ledger_.push_back({now_, x.edge(), y.edge(), p.excess});
      cost += p.cost;
    }
    budget_.charge(cost);
    return stats;
  }

  /// Moves to the next layer and applies routing SWAPs that just ended.
  void advance() {
    ++now_;
    last_completed_.clear();
    for (const auto& p : placed_)
      if (p.op.is_routing_swap() && p.end() == now_) {
        mapping_.apply_swap(p.op.edge());
        last_completed_.insert(p.op.edge());
      }
  }

  void advance_to(int t) {
    while (now_ < t) advance();
  }

  /// List scheduling: earliest start at or after now() and after the last
  /// op on each of its qubits such that the crosstalk it adds against
  /// overlapping ops fits the allowance. Returns the start layer.
  int place_asap(PhysicalOp op) {
    int s = now_;
    for (int q : op.qubits) s = std::max(s, ready_.at(static_cast<std::size_t>(q)));
    const int dur = op.duration();
    for (;; ++s) {
      std::vector<LedgerEntry> entries;
      double cost = 0.0;
      if (op.is_two_qubit() && !profile_->empty()) {
        const Edge e = op.edge();
        for (const auto& p : placed_) {
          if (!p.op.is_two_qubit() || p.end() <= s || p.start >= s + dur) continue;
          const Edge f = p.op.edge();
          if (e.shares_qubit(f) || !profile_->lookup(e, f)) continue;
          double ex = profile_->excess(e, f);
          entries.push_back({std::max(s, p.start), f, e, ex});
          cost += budget_.cost(ex);
        }
      }
      if (!budget_.affords(cost)) continue;
      budget_.charge(cost);
      ledger_.insert(ledger_.end(), entries.begin(), entries.end());
      place_at(std::move(op), s);
      return s;
    }
  }

  ScheduledCircuit finish() const {
    ScheduledCircuit out;
    out.num_physical = graph_->num_physical();
    out.initial_mapping = initial_;
    out.layers.assign(static_cast<std::size_t>(horizon()), {});
    for (const auto& p : placed_)
      for (int t = p.start; t < p.end(); ++t) {
        PhysicalOp op = p.op;
        if (op.kind == OpKind::SwapSlice) op.slice = t - p.start;
        out.layers[static_cast<std::size_t>(t)].push_back(std::move(op));
      }
    for (auto& layer : out.layers)
      std::stable_sort(layer.begin(), layer.end(), [](const PhysicalOp& a, const PhysicalOp& b) {
        return *std::min_element(a.qubits.begin(), a.qubits.end()) < *std::min_element(b.qubits.begin(), b.qubits.end());
      });
    out.ledger = ledger_;
    std::stable_sort(out.ledger.begin(), out.ledger.end(), [](const LedgerEntry& x, const LedgerEntry& y) {
      return std::tie(x.layer, x.a, x.b) < std::tie(y.layer, y.a, y.b);
    });
    replay_mappings(out);
    return out;
  }

 private:
  void place_at(PhysicalOp op, int start) {
    for (int q : op.qubits) {
      auto& r = ready_.at(static_cast<std::size_t>(q));
      if (r > start) throw InvariantError("physical qubit " + std::to_string(q) + " double-booked at layer " + std::to_string(start));
      r = start + op.duration();
    }
    placed_.push_back({std::move(op), start});
  }

  const CouplingGraph* graph_;
  const CrosstalkProfile* profile_;
  Mapping initial_;
  Mapping mapping_;
  AllowanceBudget budget_;
  std::vector<int> ready_;
  std::vector<Placed> placed_;
  std::vector<LedgerEntry> ledger_;
  std::set<Edge> last_completed_;
  int now_ = 0;
};

/// Multipliers on the ranking keys; zero switches a key off.
struct RankingWeights {
  int top_k = 3;
  double criticality_weight = 1.0;
  double progress_bonus = 1.0;
  double allowance_tiebreak = 1.0;
};

struct RankingState {
  /// Indexed by Cgate gate_ref; missing entries count as zero.
  std::vector<int> criticality;
  /// Gates helped by the SWAPs started most recently and not yet executed.
  std::set<int> helped_last;
};

struct ClassScore {
  bool in_top = false;
  int cgates = 0;
  double progress = 0.0;
  double usage = 0.0;
  double criticality = 0.0;
  int lowest_id = 0;
};

inline ClassScore score_class(const Csg& csg, const ColorClass& cls, const RankingState& state, const RankingWeights& w) {
  ClassScore s;
  std::set<int> members(cls.members.begin(), cls.members.end());
  s.lowest_id = cls.members.empty() ? std::numeric_limits<int>::max() : cls.members.front();
  int progress = 0;
  double crit = 0.0;
  for (int m : cls.members) {
    const CsgVertex& v = csg.vertices.at(static_cast<std::size_t>(m));
    if (v.kind == VertexKind::Cgate) {
      ++s.cgates;
      if (v.gate_ref >= 0 && static_cast<std::size_t>(v.gate_ref) < state.criticality.size())
        crit += state.criticality[static_cast<std::size_t>(v.gate_ref)];
    } else if (v.kind == VertexKind::CandidateSwap) {
      if (std::any_of(v.helps.begin(), v.helps.end(), [&](int g) { return state.helped_last.count(g) > 0; })) ++progress;
    }
  }
  double usage = 0.0;
  for (const auto& p : csg.permitted) {
    if (!members.count(p.u) || !members.count(p.v)) continue;
    if (csg.vertices[static_cast<std::size_t>(p.u)].kind == VertexKind::InProgressSwap &&
        csg.vertices[static_cast<std::size_t>(p.v)].kind == VertexKind::InProgressSwap)
      continue;
    usage += p.cost;
  }
  s.progress = w.progress_bonus * progress;
  s.usage = w.allowance_tiebreak * usage;
  s.criticality = w.criticality_weight * crit;
  return s;
}

/// Lexicographic selection: membership in the top_k largest classes,
/// most Cgates, most SWAPs continuing last iteration's help, least
/// allowance spent, largest summed criticality, lowest vertex id.
inline ColorClass rank_and_select(const Csg& csg, const std::vector<ColorClass>& classes, const RankingState& state,
                                  const RankingWeights& w = {}) {
  if (classes.empty()) throw InvariantError("rank_and_select needs at least one class");
  if (w.top_k < 1) throw InputError("top_k must be at least 1");
  std::vector<std::size_t> by_size(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) by_size[i] = i;
  std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
    return std::make_pair(-static_cast<long>(classes[a].members.size()), classes[a].color) <
           std::make_pair(-static_cast<long>(classes[b].members.size()), classes[b].color);
  });
  std::vector<ClassScore> scores;
  for (const auto& cls : classes) scores.push_back(score_class(csg, cls, state, w));
  for (std::size_t r = 0; r < by_size.size() && r < static_cast<std::size_t>(w.top_k); ++r) scores[by_size[r]].in_top = true;

  constexpr double eps = 1e-12;
  auto better = [&](const ClassScore& a, const ClassScore& b) {
    if (a.in_top != b.in_top) return a.in_top;
    if (a.cgates != b.cgates) return a.cgates > b.cgates;
    if (std::abs(a.progress - b.progress) > eps) return a.progress > b.progress;
    if (std::abs(a.usage - b.usage) > eps) return a.usage < b.usage;
    if (std::abs(a.criticality - b.criticality) > eps) return a.criticality > b.criticality;
    return a.lowest_id < b.lowest_id;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < classes.size(); ++i)
    if (better(scores[i], scores[best])) best = i;
  return classes[best];
}

enum class Layout { Identity, Greedy };

/// Places qubits in order of first use: the first qubit of a fresh pair
/// goes to the lowest free physical qubit, a partner goes to the free
/// physical qubit nearest its placed peer (lowest index on ties).
inline Mapping greedy_layout(const LogicalCircuit& circuit, const CouplingGraph& graph) {
  const int n = graph.num_physical();
  if (circuit.num_qubits() > n)
    throw InputError("program needs " + std::to_string(circuit.num_qubits()) + " qubits but the device has " +
                     std::to_string(n));
  std::vector<int> l2p(static_cast<std::size_t>(circuit.num_qubits()), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto take = [&](int l, int p) {
    l2p[static_cast<std::size_t>(l)] = p;
    used[static_cast<std::size_t>(p)] = true;
  };
  auto lowest_free = [&] {
    for (int p = 0; p < n; ++p)
      if (!used[static_cast<std::size_t>(p)]) return p;
    throw InvariantError("no free physical qubit");
  };
  auto nearest_free = [&](int anchor) {
    int best = -1;
    for (int p = 0; p < n; ++p)
      if (!used[static_cast<std::size_t>(p)] && (best < 0 || graph.distance(anchor, p) < graph.distance(anchor, best)))
        best = p;
    if (best < 0) throw InvariantError("no free physical qubit");
    return best;
  };
  for (const Gate& g : circuit.gates()) {
    if (!g.is_two_qubit()) continue;
    int a = g.qubits[0], b = g.qubits[1];
    bool pa = l2p[static_cast<std::size_t>(a)] >= 0, pb = l2p[static_cast<std::size_t>(b)] >= 0;
    if (!pa && !pb) {
      take(a, lowest_free());
      pa = true;
    }
    if (pa && !pb) take(b, nearest_free(l2p[static_cast<std::size_t>(a)]));
    if (!pa && pb) take(a, nearest_free(l2p[static_cast<std::size_t>(b)]));
  }
  for (int l = 0; l < circuit.num_qubits(); ++l)
    if (l2p[static_cast<std::size_t>(l)] < 0) take(l, lowest_free());
  return Mapping(std::move(l2p), n);
}

struct CompileOptions {
  using ObserverFn = std::function<void(const Csg&, const std::vector<ColorClass>&)>;

  double allowance = 0.0;  // +inf for unlimited
  AllowanceUnits units = AllowanceUnits::Excess;
  RankingWeights ranking;
  std::optional<Mapping> initial_mapping;
  Layout layout = Layout::Identity;
  /// Called with every CSG and its coloring before a class is chosen.
  ObserverFn observer;
};

inline PhysicalOp op_for_gate(const Gate& g, const std::vector<int>& physical) {
  PhysicalOp op;
  op.qubits = physical;
  op.logical_id = g.id;
  op.params = g.params;
  switch (g.kind) {
    case GateKind::Cx: op.kind = OpKind::Cx; op.name = "cx"; break;
    case GateKind::TwoQubit: op.kind = OpKind::TwoQubit; op.name = g.label; break;
    case GateKind::Single: op.kind = OpKind::Single; op.name = g.label; break;
    case GateKind::Swap: op.kind = OpKind::SwapSlice; op.name = "swap"; break;
  }
  return op;
}

namespace detail {

/// One SWAP moving the endpoint of the lowest-id ready, non-adjacent,
/// idle gate one hop toward its partner. Used when ranking has not let a
/// circuit gate run for a long time.
inline std::vector<CsgVertex> forced_swap(const LogicalCircuit& circuit, const std::set<int>& executed,
                                          const Mapping& projected, const CouplingGraph& graph,
                                          const std::set<int>& busy) {
  for (int id : frontier(circuit, executed)) {
    const Gate& g = circuit.gate(id);
    if (!g.is_two_qubit()) continue;
    const int pa = projected.physical(g.qubits[0]);
    const int pb = projected.physical(g.qubits[1]);
    const int d = graph.distance(pa, pb);
    if (d <= 1 || busy.count(pa) || busy.count(pb)) continue;
    for (auto [from, to] : {std::pair{pa, pb}, std::pair{pb, pa}})
      for (int nb : graph.neighbors(from))
        if (graph.distance(nb, to) == d - 1 && !busy.count(nb)) return {make_swap_vertex(Edge(from, nb), {id})};
  }
  return {};
}

/// Drops SWAPs of a selected class that stop shortening every pair they
/// were chosen for once the class's lower-id SWAPs are applied to `m`.
/// `pair_of` maps a helps id to its logical pair; negative ids always stay.
inline ColorClass drop_cancelling_swaps(const Csg& csg, ColorClass cls, Mapping m, const CouplingGraph& graph,
                                        const std::function<std::pair<int, int>(int)>& pair_of) {
  std::vector<int> kept;
  for (int id : cls.members) {
    const CsgVertex& v = csg.vertices.at(static_cast<std::size_t>(id));
    if (v.kind != VertexKind::CandidateSwap) {
      kept.push_back(id);
      continue;
    }
    const Edge e = v.edge();
    Mapping after = m;
    after.apply_swap(e);
    bool useful = v.helps.empty();
    for (int h : v.helps) {
      if (h < 0) {
        useful = true;
        break;
      }
      auto [x, y] = pair_of(h);
      if (graph.distance(after.physical(x), after.physical(y)) < graph.distance(m.physical(x), m.physical(y))) {
        useful = true;
        break;
      }
    }
    if (!useful) continue;
    m = std::move(after);
    kept.push_back(id);
  }
  cls.members = std::move(kept);
  return cls;
}

inline bool touches_any(const CsgVertex& v, const std::set<int>& qubits) {
  return std::any_of(v.physical_qubits.begin(), v.physical_qubits.end(), [&](int q) { return qubits.count(q) > 0; });
}

}  // namespace detail

inline Mapping initial_mapping_for(const LogicalCircuit& circuit, const CouplingGraph& graph, const CompileOptions& options) {
  if (options.initial_mapping) {
    const Mapping& m = *options.initial_mapping;
    if (m.num_logical() != circuit.num_qubits() || m.num_physical() != graph.num_physical())
      throw InputError("initial mapping does not match program and device sizes");
    return m;
  }
  if (options.layout == Layout::Greedy) return greedy_layout(circuit, graph);
  return Mapping::identity(circuit.num_qubits(), graph.num_physical());
}

/// Compiles a logical circuit under a crosstalk allowance. The loop runs
/// one layer per iteration until every gate has run and no SWAP is open.
inline ScheduledCircuit compile_circuit(const LogicalCircuit& circuit, const CouplingGraph& graph,
                                        const CrosstalkProfile& profile, const CompileOptions& options = {}) {
  if (options.ranking.top_k < 1) throw InputError("top_k must be at least 1");
  const int n_phys = graph.num_physical();
  AllowanceBudget budget = std::isinf(options.allowance) ? AllowanceBudget::unlimited(options.units)
                                                         : AllowanceBudget(options.allowance, options.units);
  Timeline tl(graph, profile, initial_mapping_for(circuit, graph, options), budget);

  RankingState state;
  state.criticality = circuit.criticality();
  std::set<int> executed;
  int idle = 0;
  int without_cgate = 0;
  bool forced = false;
  const long cap = 64L * (static_cast<long>(circuit.size()) + 1) * (n_phys + 1) + 1000;

  auto make_op = [&](const CsgVertex& v) { return op_for_gate(circuit.gate(v.gate_ref), v.physical_qubits); };

  for (long iter = 0; executed.size() < circuit.size() || tl.has_active(); ++iter) {
    if (iter > cap) throw StallError("compile exceeded its iteration cap");
    const std::set<int> busy = tl.busy();
    const Mapping projected = tl.projected();

    std::vector<CsgVertex> cgates;
    for (auto& v : get_executable(circuit, executed, tl.mapping(), graph))
      if (!detail::touches_any(v, busy)) cgates.push_back(std::move(v));

    std::vector<CsgVertex> swaps;
    if (!forced) {
      for (auto& v : get_useful_swaps(circuit, executed, projected, graph, tl.last_completed()))
        if (!detail::touches_any(v, busy)) swaps.push_back(std::move(v));
    } else if (cgates.empty()) {
      swaps = detail::forced_swap(circuit, executed, projected, graph, busy);
    }

    const auto in_progress = tl.in_progress_vertices();
    Csg csg = build_csg(cgates, swaps, in_progress, profile, tl.budget());
    if (csg.size() == 0) {
      // Nothing can start: the only candidates were blocked by the
      // counteracting-SWAP rule, which lapses after one iteration.
      tl.forget_last_completed();
      if (++idle > n_phys) throw StallError("no schedulable gate for " + std::to_string(idle) + " iterations");
      ++without_cgate;
      continue;
    }
    std::set<int> pins;
    for (std::size_t i = cgates.size() + swaps.size(); i < csg.size(); ++i) pins.insert(static_cast<int>(i));
    auto classes = welsh_powell(csg, pins);
    if (options.observer) options.observer(csg, classes);
    ColorClass chosen = pins.empty() ? rank_and_select(csg, classes, state, options.ranking) : classes.front();
    chosen = detail::drop_cancelling_swaps(csg, std::move(chosen), projected, graph, [&](int id) {
      const Gate& g = circuit.gate(id);
      return std::pair{g.qubits[0], g.qubits[1]};
    });

    auto stats = tl.commit(csg, chosen, make_op);
    for (int m : chosen.members) {
      const CsgVertex& v = csg.vertices[static_cast<std::size_t>(m)];
      if (v.kind == VertexKind::Cgate) executed.insert(v.gate_ref);
    }
    if (stats.swaps_started > 0) state.helped_last = stats.helped;
    for (int g : executed) state.helped_last.erase(g);
    log::debug("layer ", tl.now(), ": ", stats.cgates, " gates, ", stats.swaps_started, " swaps started");
    tl.advance();

    idle = (stats.cgates > 0 || stats.swaps_started > 0) ? 0 : idle + 1;
    if (idle > n_phys) throw StallError("no progress for " + std::to_string(idle) + " consecutive iterations");
    if (stats.cgates > 0) {
      without_cgate = 0;
      forced = false;
    } else if (++without_cgate >= 3 * n_phys && !forced) {
      log::info("no circuit gate for ", without_cgate, " layers; routing the lowest ready gate directly");
      forced = true;
    }
  }
  return tl.finish();
}

}  // namespace xroute
