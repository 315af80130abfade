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

// Physical device model: coupling graph with error rates and decoherence
// constants, the crosstalk profile over pairs of coupling edges, and the
// logical-to-physical mapping.

#include <algorithm>
#include <compare>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xroute/error.hpp"

namespace xroute {

/// Unordered pair of physical qubits, stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;

  Edge() = default;
  Edge(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {}

  bool touches(int q) const { return a == q || b == q; }
  bool shares_qubit(const Edge& o) const { return touches(o.a) || touches(o.b); }
  std::string str() const { return std::to_string(a) + "-" + std::to_string(b); }

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

using DistanceTable = std::vector<std::vector<int>>;

/// BFS from every node. Throws InputError when the graph is disconnected.
inline DistanceTable all_pairs_distance(int num_nodes, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_nodes));
  for (const Edge& e : edges) {
    adj[static_cast<std::size_t>(e.a)].push_back(e.b);
    adj[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  DistanceTable dist(static_cast<std::size_t>(num_nodes), std::vector<int>(static_cast<std::size_t>(num_nodes), -1));
  for (int s = 0; s < num_nodes; ++s) {
    auto& d = dist[static_cast<std::size_t>(s)];
    std::deque<int> queue{s};
    d[static_cast<std::size_t>(s)] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (d[static_cast<std::size_t>(v)] >= 0) continue;
        d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
    for (int t = 0; t < num_nodes; ++t)
      if (d[static_cast<std::size_t>(t)] < 0)
        throw InputError("coupling graph is disconnected (no path " + std::to_string(s) + " -> " +
                         std::to_string(t) + ")");
  }
  return dist;
}

struct CouplingGraphParams {
  int num_physical = 0;
  std::vector<Edge> edges;
  std::map<Edge, double> edge_error;
  std::map<int, double> t1;
  std::map<int, double> t2;
  double gate_time_cx = 1.0;
  std::map<int, double> single_qubit_error;
};

/// Static hardware topology. Distances are computed once at construction.
class CouplingGraph {
 public:
  CouplingGraph() = default;

  explicit CouplingGraph(CouplingGraphParams p) : p_(std::move(p)) {
    const int n = p_.num_physical;
    if (n <= 0) throw InputError("device needs at least one physical qubit");
    std::sort(p_.edges.begin(), p_.edges.end());
    for (std::size_t i = 0; i < p_.edges.size(); ++i) {
      const Edge& e = p_.edges[i];
      if (e.a == e.b) throw InputError("self-loop on qubit " + std::to_string(e.a));
      if (e.a < 0 || e.b >= n) throw InputError("edge " + e.str() + " out of range");
      if (i > 0 && p_.edges[i - 1] == e) throw InputError("duplicate edge " + e.str());
    }
    auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
    for (const auto& [e, eps] : p_.edge_error) {
      if (!has_edge_sorted(e)) throw InputError("error rate for unknown edge " + e.str());
      if (!in_unit(eps)) throw InputError("edge error for " + e.str() + " must lie in [0,1)");
    }
    for (const auto& [q, eps] : p_.single_qubit_error) {
      check_qubit(q);
      if (!in_unit(eps)) throw InputError("single-qubit error must lie in [0,1)");
    }
    for (const auto* m : {&p_.t1, &p_.t2})
      for (const auto& [q, t] : *m) {
        check_qubit(q);
        if (!(t > 0.0)) throw InputError("T1/T2 must be positive (qubit " + std::to_string(q) + ")");
      }
    if (!(p_.gate_time_cx > 0.0)) throw InputError("gate_time_cx must be positive");
    adj_.assign(static_cast<std::size_t>(n), {});
    for (const Edge& e : p_.edges) {
      adj_[static_cast<std::size_t>(e.a)].push_back(e.b);
      adj_[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    dist_ = all_pairs_distance(n, p_.edges);
  }

  int num_physical() const { return p_.num_physical; }
  const std::vector<Edge>& edges() const { return p_.edges; }
  const std::vector<int>& neighbors(int q) const { return adj_.at(static_cast<std::size_t>(q)); }
  bool has_edge(int x, int y) const { return x != y && has_edge_sorted(Edge(x, y)); }
  int distance(int x, int y) const { return dist_.at(static_cast<std::size_t>(x)).at(static_cast<std::size_t>(y)); }
  const DistanceTable& distances() const { return dist_; }

  std::optional<double> edge_error(const Edge& e) const {
    auto it = p_.edge_error.find(e);
    if (it == p_.edge_error.end()) return std::nullopt;
    return it->second;
  }
  double single_qubit_error(int q) const {
    auto it = p_.single_qubit_error.find(q);
    return it == p_.single_qubit_error.end() ? 0.0 : it->second;
  }
  /// Infinity when the constant is not given (no decay).
  double t1(int q) const { return lookup_time(p_.t1, q); }
  double t2(int q) const { return lookup_time(p_.t2, q); }
  double gate_time_cx() const { return p_.gate_time_cx; }
  const CouplingGraphParams& params() const { return p_; }

 private:
  bool has_edge_sorted(const Edge& e) const { return std::binary_search(p_.edges.begin(), p_.edges.end(), e); }
  void check_qubit(int q) const {
    if (q < 0 || q >= p_.num_physical) throw InputError("qubit " + std::to_string(q) + " out of range");
  }
  static double lookup_time(const std::map<int, double>& m, int q) {
    auto it = m.find(q);
    return it == m.end() ? std::numeric_limits<double>::infinity() : it->second;
  }

  CouplingGraphParams p_;
  std::vector<std::vector<int>> adj_;
  DistanceTable dist_;
};

/// Conditional error rates of two coupling edges driven in the same layer.
struct CrosstalkRecord {
  Edge e1;
  Edge e2;
  double e1_given_e2 = 0.0;
  double e2_given_e1 = 0.0;
};

/// Crosstalk profile over unordered pairs of distinct coupling edges.
class CrosstalkProfile {
 public:
  CrosstalkProfile() = default;

  explicit CrosstalkProfile(const CouplingGraph& graph, const std::vector<CrosstalkRecord>& records = {})
      : edges_(graph.edges()) {
    for (const auto& r : records) {
      check_edge(r.e1);
      check_edge(r.e2);
      if (r.e1 == r.e2) throw InputError("crosstalk pair needs two distinct edges (" + r.e1.str() + ")");
      auto b1 = graph.edge_error(r.e1);
      auto b2 = graph.edge_error(r.e2);
      if (!b1 || !b2) throw InputError("crosstalk pair " + r.e1.str() + "/" + r.e2.str() + " uses an edge without an error rate");
      if (r.e1_given_e2 < *b1 || r.e2_given_e1 < *b2)
        throw InputError("conditional error below base error for pair " + r.e1.str() + "/" + r.e2.str());
      if (r.e1_given_e2 >= 1.0 || r.e2_given_e1 >= 1.0)
        throw InputError("conditional error must be below 1 for pair " + r.e1.str() + "/" + r.e2.str());
      Entry entry{canonical(r), r.e1 < r.e2 ? *b1 : *b2, r.e1 < r.e2 ? *b2 : *b1};
      auto key = std::make_pair(entry.rec.e1, entry.rec.e2);
      if (!pairs_.emplace(key, entry).second) throw InputError("duplicate crosstalk pair " + r.e1.str() + "/" + r.e2.str());
    }
  }

  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }

  /// Record oriented to the argument order, or nullopt when the pair is
  /// not profiled. Throws on unknown edges or e1 == e2.
  std::optional<CrosstalkRecord> between(const Edge& e1, const Edge& e2) const {
    check_edge(e1);
    check_edge(e2);
    if (e1 == e2) throw InputError("crosstalk query with identical edges " + e1.str());
    return lookup(e1, e2);
  }

  /// Unchecked variant used in hot loops; edges are assumed valid.
  std::optional<CrosstalkRecord> lookup(const Edge& e1, const Edge& e2) const {
    if (pairs_.empty() || e1 == e2) return std::nullopt;
    auto it = pairs_.find(e1 < e2 ? std::make_pair(e1, e2) : std::make_pair(e2, e1));
    if (it == pairs_.end()) return std::nullopt;
    CrosstalkRecord r = it->second.rec;
    if (r.e1 != e1) {
      std::swap(r.e1, r.e2);
      std::swap(r.e1_given_e2, r.e2_given_e1);
    }
    return r;
  }

  /// Summed error inflation of running both edges together:
  /// (ε(e1|e2) − ε(e1)) + (ε(e2|e1) − ε(e2)).
  double excess(const Edge& e1, const Edge& e2) const {
    check_edge(e1);
    check_edge(e2);
    auto it = pairs_.find(e1 < e2 ? std::make_pair(e1, e2) : std::make_pair(e2, e1));
    if (e1 == e2 || it == pairs_.end()) throw InputError("no crosstalk record for " + e1.str() + "/" + e2.str());
    return excess_of(it->second);
  }

  std::vector<CrosstalkRecord> records() const {
    std::vector<CrosstalkRecord> out;
    for (const auto& [k, v] : pairs_) out.push_back(v.rec);
    return out;
  }

 private:
  struct Entry {
    CrosstalkRecord rec;
    double base1 = 0.0;
    double base2 = 0.0;
  };

  static CrosstalkRecord canonical(CrosstalkRecord r) {
    if (r.e2 < r.e1) {
      std::swap(r.e1, r.e2);
      std::swap(r.e1_given_e2, r.e2_given_e1);
    }
    return r;
  }
  static double excess_of(const Entry& e) {
    return std::max(0.0, (e.rec.e1_given_e2 - e.base1) + (e.rec.e2_given_e1 - e.base2));
  }
  void check_edge(const Edge& e) const {
    if (!std::binary_search(edges_.begin(), edges_.end(), e)) throw InputError("unknown coupling edge " + e.str());
  }

  std::vector<Edge> edges_;
  std::map<std::pair<Edge, Edge>, Entry> pairs_;
};

/// Free-function entry points.
inline std::optional<CrosstalkRecord> crosstalk_between(const CrosstalkProfile& profile, const Edge& e1, const Edge& e2) {
  return profile.between(e1, e2);
}
inline double excess_error(const CrosstalkProfile& profile, const Edge& e1, const Edge& e2) {
  return profile.excess(e1, e2);
}

/// Injective placement of logical qubits onto physical qubits.
class Mapping {
 public:
  Mapping() = default;

  Mapping(std::vector<int> logical_to_physical, int num_physical)
      : l2p_(std::move(logical_to_physical)), p2l_(static_cast<std::size_t>(num_physical), -1) {
    for (std::size_t l = 0; l < l2p_.size(); ++l) {
      int p = l2p_[l];
      if (p < 0 || p >= num_physical) throw InputError("mapping target " + std::to_string(p) + " out of range");
      if (p2l_[static_cast<std::size_t>(p)] != -1) throw InputError("mapping is not injective at physical " + std::to_string(p));
      p2l_[static_cast<std::size_t>(p)] = static_cast<int>(l);
    }
  }

  static Mapping identity(int num_logical, int num_physical) {
    if (num_logical > num_physical)
      throw InputError("program needs " + std::to_string(num_logical) + " qubits but the device has " +
                       std::to_string(num_physical));
    std::vector<int> l2p(static_cast<std::size_t>(num_logical));
    for (int i = 0; i < num_logical; ++i) l2p[static_cast<std::size_t>(i)] = i;
    return Mapping(std::move(l2p), num_physical);
  }

  int num_logical() const { return static_cast<int>(l2p_.size()); }
  int num_physical() const { return static_cast<int>(p2l_.size()); }
  int physical(int logical) const { return l2p_.at(static_cast<std::size_t>(logical)); }
  /// -1 when the physical qubit holds no logical qubit.
  int logical(int physical) const { return p2l_.at(static_cast<std::size_t>(physical)); }
  const std::vector<int>& logical_to_physical() const { return l2p_; }

  /// Exchanges the contents of two physical qubits.
  void apply_swap(int p, int q) {
    int lp = p2l_.at(static_cast<std::size_t>(p));
    int lq = p2l_.at(static_cast<std::size_t>(q));
    p2l_[static_cast<std::size_t>(p)] = lq;
    p2l_[static_cast<std::size_t>(q)] = lp;
    if (lp >= 0) l2p_[static_cast<std::size_t>(lp)] = q;
    if (lq >= 0) l2p_[static_cast<std::size_t>(lq)] = p;
  }
  void apply_swap(const Edge& e) { apply_swap(e.a, e.b); }

  friend bool operator==(const Mapping&, const Mapping&) = default;

 private:
  std::vector<int> l2p_;
  std::vector<int> p2l_;
};

/// Coupling graph plus its crosstalk profile.
struct Device {
  CouplingGraph graph;
  CrosstalkProfile profile;
};

/// Unit in which crosstalk allowance is budgeted: summed excess error
/// (default) or number of concurrently scheduled interfering pairs.
enum class AllowanceUnits { Excess, Pairs };

/// Remaining crosstalk allowance. Infinite allowance permits everything.
class AllowanceBudget {
 public:
  explicit AllowanceBudget(double allowance = 0.0, AllowanceUnits units = AllowanceUnits::Excess)
      : left_(allowance), units_(units) {
    if (!(allowance >= 0.0)) throw InputError("crosstalk allowance must be non-negative");
  }

  static AllowanceBudget unlimited(AllowanceUnits units = AllowanceUnits::Excess) {
    return AllowanceBudget(std::numeric_limits<double>::infinity(), units);
  }

  double left() const { return left_; }
  AllowanceUnits units() const { return units_; }
  double cost(double excess) const { return units_ == AllowanceUnits::Pairs ? 1.0 : excess; }
  bool affords(double cost_sum) const { return cost_sum <= left_ + kSlack; }
  void charge(double cost_sum) {
    if (!affords(cost_sum)) throw InvariantError("crosstalk allowance overdrawn");
    left_ = std::max(0.0, left_ - cost_sum);
  }

  static constexpr double kSlack = 1e-12;

 private:
  double left_;
  AllowanceUnits units_;
};

}  // namespace xroute
