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

// Logical circuits: gates, the per-qubit dependence DAG and the
// line-oriented text format.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "xroute/error.hpp"

namespace xroute {

enum class GateKind {
  Single,    ///< opaque single-qubit gate, identified by its label
  Cx,        ///< CNOT, qubits = {control, target}
  TwoQubit,  ///< RZZ-like two-qubit interaction, one CX time unit
  Swap,      ///< logical SWAP, three CX time units
};

/// Number of CX-length layers a gate of this kind occupies.
constexpr int gate_duration(GateKind kind) { return kind == GateKind::Swap ? 3 : 1; }

struct Gate {
  int id = 0;
  GateKind kind = GateKind::Cx;
  std::string label;
  std::vector<int> qubits;
  std::vector<double> params;

  bool is_two_qubit() const { return qubits.size() == 2; }
};

inline std::string_view kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::Single: return "u";
    case GateKind::Cx: return "cx";
    case GateKind::TwoQubit: return "rzz";
    case GateKind::Swap: return "swap";
  }
  return "?";
}

/// A gate list plus its dependence DAG. Edges connect each gate to the
/// previous gate on each of its qubits. A commuting circuit (2-local VQA)
/// has no edges at all: every gate is dependence-resolved from the start.
///
/// Immutable after construction.
class LogicalCircuit {
 public:
  LogicalCircuit() = default;

  LogicalCircuit(int num_qubits, std::vector<Gate> gates, bool commuting = false)
      : num_qubits_(num_qubits), gates_(std::move(gates)), commuting_(commuting) {
    if (num_qubits_ < 0) throw InputError("negative qubit count");
    validate();
    build_dag();
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(int id) const { return gates_.at(static_cast<std::size_t>(id)); }
  bool is_commuting() const { return commuting_; }

  const std::vector<int>& predecessors(int id) const { return preds_.at(static_cast<std::size_t>(id)); }
  const std::vector<int>& successors(int id) const { return succs_.at(static_cast<std::size_t>(id)); }

  std::vector<std::pair<int, int>> dag_edges() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t g = 0; g < gates_.size(); ++g)
      for (int s : succs_[g]) out.emplace_back(static_cast<int>(g), s);
    return out;
  }

  /// Kahn's algorithm; ties resolved by ascending id. Throws if the DAG
  /// has a cycle, which the construction rules out.
  std::vector<int> topological_order() const {
    std::vector<int> indeg(gates_.size(), 0);
    for (std::size_t g = 0; g < gates_.size(); ++g) indeg[g] = static_cast<int>(preds_[g].size());
    std::set<int> ready;
    for (std::size_t g = 0; g < gates_.size(); ++g)
      if (indeg[g] == 0) ready.insert(static_cast<int>(g));
    std::vector<int> order;
    while (!ready.empty()) {
      int g = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(g);
      for (int s : succs_[static_cast<std::size_t>(g)])
        if (--indeg[static_cast<std::size_t>(s)] == 0) ready.insert(s);
    }
    if (order.size() != gates_.size()) throw InvariantError("dependence graph has a cycle");
    return order;
  }

  /// Longest DAG path (in edges) from each gate to any sink.
  std::vector<int> criticality() const {
    std::vector<int> crit(gates_.size(), 0);
    auto order = topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto g = static_cast<std::size_t>(*it);
      for (int s : succs_[g]) crit[g] = std::max(crit[g], crit[static_cast<std::size_t>(s)] + 1);
    }
    return crit;
  }

 private:
  void validate() const {
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      const Gate& g = gates_[i];
      if (g.id != static_cast<int>(i)) throw InputError("gate ids must follow input order");
      const std::size_t want = g.kind == GateKind::Single ? 1 : 2;
      if (g.qubits.size() != want)
        throw InputError("gate " + std::to_string(g.id) + " has the wrong number of qubits");
      for (int q : g.qubits)
        if (q < 0 || q >= num_qubits_)
          throw InputError("gate " + std::to_string(g.id) + ": qubit " + std::to_string(q) +
                           " out of range");
      if (want == 2 && g.qubits[0] == g.qubits[1])
        throw InputError("gate " + std::to_string(g.id) + ": duplicate qubit");
    }
  }

  void build_dag() {
    preds_.assign(gates_.size(), {});
    succs_.assign(gates_.size(), {});
    if (commuting_) return;
    std::vector<int> last(static_cast<std::size_t>(num_qubits_), -1);
    for (const Gate& g : gates_) {
      for (int q : g.qubits) {
        int p = last[static_cast<std::size_t>(q)];
        auto& preds = preds_[static_cast<std::size_t>(g.id)];
        if (p >= 0 && std::find(preds.begin(), preds.end(), p) == preds.end()) {
          preds.push_back(p);
          succs_[static_cast<std::size_t>(p)].push_back(g.id);
        }
        last[static_cast<std::size_t>(q)] = g.id;
      }
      std::sort(preds_[static_cast<std::size_t>(g.id)].begin(), preds_[static_cast<std::size_t>(g.id)].end());
    }
  }

  int num_qubits_ = 0;
  std::vector<Gate> gates_;
  bool commuting_ = false;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
};

/// Gates whose predecessors are all executed and which are not executed
/// themselves, in ascending id order.
inline std::vector<int> frontier(const LogicalCircuit& circuit, const std::set<int>& executed) {
  for (int g : executed) {
    if (g < 0 || static_cast<std::size_t>(g) >= circuit.size())
      throw InputError("executed set references unknown gate " + std::to_string(g));
    for (int p : circuit.predecessors(g))
      if (!executed.count(p))
        throw InputError("executed set is not dependence-closed at gate " + std::to_string(g));
  }
  std::vector<int> out;
  for (const Gate& g : circuit.gates()) {
    if (executed.count(g.id)) continue;
    const auto& preds = circuit.predecessors(g.id);
    if (std::all_of(preds.begin(), preds.end(), [&](int p) { return executed.count(p) > 0; }))
      out.push_back(g.id);
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  auto pos = line.find('#');
  return pos == std::string_view::npos ? line : line.substr(0, pos);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(lineno, line);
    if (end == text.size()) break;
    start = end + 1;
  }
}

inline int parse_int(std::string_view tok, int lineno) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw InputError("line " + std::to_string(lineno) + ": expected integer, got '" + std::string(tok) + "'");
  return v;
}

inline double parse_real(std::string_view tok, int lineno) {
  std::string s(tok);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw InputError("line " + std::to_string(lineno) + ": expected number, got '" + s + "'");
  return v;
}

/// Shortest text that round-trips to the same double.
inline std::string format_real(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Parses the line-oriented circuit format:
///
///     qubits N
///     cx a b
///     swap a b
///     rzz theta a b
///     u label q
///
/// `#` starts a comment. Errors carry the offending line number.
inline LogicalCircuit parse_circuit(std::string_view text) {
  int num_qubits = -1;
  std::vector<Gate> gates;
  detail::for_each_line(text, [&](int lineno, std::string_view raw) {
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) return;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    if (toks[0] == "qubits") {
      if (num_qubits >= 0) throw InputError(where() + "duplicate 'qubits' header");
      if (toks.size() != 2) throw InputError(where() + "expected 'qubits N'");
      num_qubits = detail::parse_int(toks[1], lineno);
      if (num_qubits < 0) throw InputError(where() + "negative qubit count");
      return;
    }
    if (num_qubits < 0) throw InputError(where() + "gate before 'qubits' header");
    Gate g;
    g.id = static_cast<int>(gates.size());
    auto qubit = [&](std::string_view tok) {
      int q = detail::parse_int(tok, lineno);
      if (q < 0 || q >= num_qubits) throw InputError(where() + "qubit index " + std::string(tok) + " out of range");
      return q;
    };
    if (toks[0] == "cx" || toks[0] == "swap") {
      if (toks.size() != 3) throw InputError(where() + "expected '" + std::string(toks[0]) + " a b'");
      g.kind = toks[0] == "cx" ? GateKind::Cx : GateKind::Swap;
      g.label = std::string(toks[0]);
      g.qubits = {qubit(toks[1]), qubit(toks[2])};
    } else if (toks[0] == "rzz") {
      if (toks.size() != 4) throw InputError(where() + "expected 'rzz theta a b'");
      g.kind = GateKind::TwoQubit;
      g.label = "rzz";
      g.params = {detail::parse_real(toks[1], lineno)};
      g.qubits = {qubit(toks[2]), qubit(toks[3])};
    } else if (toks[0] == "u") {
      if (toks.size() != 3) throw InputError(where() + "expected 'u label q'");
      g.kind = GateKind::Single;
      g.label = std::string(toks[1]);
      g.qubits = {qubit(toks[2])};
    } else {
      throw InputError(where() + "unknown gate '" + std::string(toks[0]) + "'");
    }
    if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) throw InputError(where() + "duplicate qubit in gate");
    gates.push_back(std::move(g));
  });
  if (num_qubits < 0) throw InputError("missing 'qubits N' header");
  return LogicalCircuit(num_qubits, std::move(gates));
}

/// Canonical text form; parse(serialize(c)) reproduces c.
inline std::string serialize_circuit(const LogicalCircuit& circuit) {
  std::ostringstream os;
  os << "qubits " << circuit.num_qubits() << '\n';
  for (const Gate& g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::Single: os << "u " << g.label << ' ' << g.qubits[0]; break;
      case GateKind::Cx: os << "cx " << g.qubits[0] << ' ' << g.qubits[1]; break;
      case GateKind::Swap: os << "swap " << g.qubits[0] << ' ' << g.qubits[1]; break;
      case GateKind::TwoQubit:
        os << "rzz " << detail::format_real(g.params.empty() ? 0.0 : g.params[0]) << ' ' << g.qubits[0] << ' '
           << g.qubits[1];
        break;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace xroute
