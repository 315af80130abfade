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

// JSON and text formats: hardware description, scheduled circuits,
// fidelity reports, distributions, and the human-readable timeline.

#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "xroute/circuit.hpp"
#include "xroute/error.hpp"
#include "xroute/fidelity.hpp"
#include "xroute/hardware.hpp"
#include "xroute/scheduler.hpp"

namespace xroute {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

namespace detail {

inline json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

inline int json_int(const json& j, std::string_view what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<int>();
}

inline double json_real(const json& j, std::string_view what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline Edge json_edge(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 2) throw InputError(std::string(what) + " must be a pair [a, b]");
  return Edge(json_int(j[0], what), json_int(j[1], what));
}

inline Edge edge_key(const std::string& key) {
  auto dash = key.find('-');
  if (dash == std::string::npos) throw InputError("edge key '" + key + "' must look like 'a-b'");
  return Edge(parse_int(std::string_view(key).substr(0, dash), 0), parse_int(std::string_view(key).substr(dash + 1), 0));
}

inline std::map<int, double> qubit_map(const json& j, std::string_view what) {
  if (!j.is_object()) throw InputError(std::string(what) + " must map qubit indices to numbers");
  std::map<int, double> out;
  for (const auto& [k, v] : j.items()) out[parse_int(k, 0)] = json_real(v, what);
  return out;
}

}  // namespace detail

/// Parses the hardware JSON. Unknown top-level fields are rejected.
inline Device parse_hardware(std::string_view text) {
  json j = detail::parse_json(text, "hardware file");
  if (!j.is_object()) throw InputError("hardware file must be a JSON object");
  static const std::set<std::string> known{"num_qubits", "edges", "edge_error", "t1", "t2",
                                           "crosstalk", "gate_time_cx", "single_qubit_error"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw InputError("unknown hardware field '" + k + "'");
  if (!j.contains("num_qubits") || !j.contains("edges")) throw InputError("hardware file needs num_qubits and edges");

  CouplingGraphParams p;
  try {
    p.num_physical = detail::json_int(j["num_qubits"], "num_qubits");
    if (!j["edges"].is_array()) throw InputError("edges must be a list");
    for (const auto& e : j["edges"]) p.edges.push_back(detail::json_edge(e, "edge"));
    if (j.contains("edge_error")) {
      if (!j["edge_error"].is_object()) throw InputError("edge_error must be an object");
      for (const auto& [k, v] : j["edge_error"].items()) p.edge_error[detail::edge_key(k)] = detail::json_real(v, "edge_error");
    }
    if (j.contains("t1")) p.t1 = detail::qubit_map(j["t1"], "t1");
    if (j.contains("t2")) p.t2 = detail::qubit_map(j["t2"], "t2");
    if (j.contains("gate_time_cx")) p.gate_time_cx = detail::json_real(j["gate_time_cx"], "gate_time_cx");
    if (j.contains("single_qubit_error")) p.single_qubit_error = detail::qubit_map(j["single_qubit_error"], "single_qubit_error");
  } catch (const json::exception& e) {
    throw InputError(std::string("hardware file: ") + e.what());
  }
  Device dev{CouplingGraph(std::move(p)), {}};

  std::vector<CrosstalkRecord> records;
  if (j.contains("crosstalk")) {
    if (!j["crosstalk"].is_array()) throw InputError("crosstalk must be a list");
    static const std::set<std::string> fields{"e1", "e2", "e1_given_e2", "e2_given_e1"};
    for (const auto& r : j["crosstalk"]) {
      if (!r.is_object()) throw InputError("crosstalk entries must be objects");
      for (const auto& [k, v] : r.items())
        if (!fields.count(k)) throw InputError("unknown crosstalk field '" + k + "'");
      for (const auto& f : fields)
        if (!r.contains(f)) throw InputError("crosstalk entry lacks '" + f + "'");
      records.push_back({detail::json_edge(r["e1"], "e1"), detail::json_edge(r["e2"], "e2"),
                         detail::json_real(r["e1_given_e2"], "e1_given_e2"), detail::json_real(r["e2_given_e1"], "e2_given_e1")});
    }
  }
  dev.profile = CrosstalkProfile(dev.graph, records);
  return dev;
}

inline Device load_hardware(const std::string& path) { return parse_hardware(read_file(path)); }

inline json schedule_to_json(const ScheduledCircuit& s) {
  json layers = json::array();
  for (const auto& layer : s.layers) {
    json ops = json::array();
    for (const auto& op : layer) {
      json o{{"op", op.name}, {"qubits", op.qubits}};
      if (op.logical_id) o["logical_id"] = *op.logical_id;
      if (op.kind == OpKind::SwapSlice) o["slice"] = op.slice;
      if (!op.params.empty()) o["params"] = op.params;
      ops.push_back(std::move(o));
    }
    layers.push_back(std::move(ops));
  }
  json ledger = json::array();
  for (const auto& e : s.ledger)
    ledger.push_back({{"layer", e.layer}, {"e1", {e.a.a, e.a.b}}, {"e2", {e.b.a, e.b.b}}, {"excess", e.excess}});
  return json{{"num_physical", s.num_physical},
              {"initial_mapping", s.initial_mapping.logical_to_physical()},
              {"layers", std::move(layers)},
              {"depth_cx", s.depth_cx()},
              {"crosstalk_ledger", std::move(ledger)},
              {"total_excess_crosstalk", s.total_excess()},
              {"final_mapping", s.final_mapping.logical_to_physical()}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Reads a schedule written by schedule_to_json. Mapping history is
/// rebuilt by replay.
inline ScheduledCircuit schedule_from_json(std::string_view text) {
  json j = detail::parse_json(text, "schedule file");
  ScheduledCircuit s;
  try {
    s.num_physical = detail::json_int(j.at("num_physical"), "num_physical");
    s.initial_mapping = Mapping(j.at("initial_mapping").get<std::vector<int>>(), s.num_physical);
    for (const auto& layer : j.at("layers")) {
      Layer l;
      for (const auto& o : layer) {
        PhysicalOp op;
        op.name = o.at("op").get<std::string>();
        op.qubits = o.at("qubits").get<std::vector<int>>();
        if (op.qubits.empty() || op.qubits.size() > 2) throw InputError("operation must act on 1 or 2 qubits");
        for (int q : op.qubits)
          if (q < 0 || q >= s.num_physical) throw InputError("operation qubit " + std::to_string(q) + " out of range");
        if (o.contains("logical_id")) op.logical_id = detail::json_int(o["logical_id"], "logical_id");
        if (o.contains("params")) op.params = o["params"].get<std::vector<double>>();
        if (op.name == "swap") {
          op.kind = OpKind::SwapSlice;
          op.slice = detail::json_int(o.at("slice"), "slice");
        } else if (op.name == "cx") {
          op.kind = OpKind::Cx;
        } else {
          op.kind = op.qubits.size() == 1 ? OpKind::Single : OpKind::TwoQubit;
        }
        l.push_back(std::move(op));
      }
      s.layers.push_back(std::move(l));
    }
    if (j.contains("crosstalk_ledger"))
      for (const auto& e : j["crosstalk_ledger"])
        s.ledger.push_back({detail::json_int(e.at("layer"), "layer"), detail::json_edge(e.at("e1"), "e1"),
                            detail::json_edge(e.at("e2"), "e2"), detail::json_real(e.at("excess"), "excess")});
  } catch (const json::exception& e) {
    throw InputError(std::string("schedule file: ") + e.what());
  }
  replay_mappings(s);
  return s;
}

inline json report_to_json(const FidelityReport& r) {
  json decay = json::object();
  for (const auto& [q, v] : r.per_qubit_idle_decay) decay[std::to_string(q)] = v;
  return json{{"esp", r.esp},
              {"depth_cx", r.depth_cx},
              {"total_excess_crosstalk", r.total_excess_crosstalk},
              {"per_qubit_idle_decay", std::move(decay)},
              {"gate_error_product", r.gate_error_product}};
}

inline Distribution parse_distribution(std::string_view text) {
  json j = detail::parse_json(text, "distribution file");
  if (!j.is_object()) throw InputError("distribution must map bitstrings to probabilities");
  Distribution d;
  for (const auto& [k, v] : j.items()) d[k] = detail::json_real(v, "probability");
  return d;
}

/// One line per layer, e.g. `   3 | cx 1,2 #4 | swap 4,5 [2/3]`.
inline std::string timeline_text(const ScheduledCircuit& s) {
  std::ostringstream os;
  for (int t = 0; t < s.depth_cx(); ++t) {
    os << std::setw(4) << t;
    for (const auto& op : s.layers[static_cast<std::size_t>(t)]) {
      os << " | " << op.name << ' ';
      for (std::size_t i = 0; i < op.qubits.size(); ++i) os << (i ? "," : "") << op.qubits[i];
      if (op.logical_id) os << " #" << *op.logical_id;
      if (op.kind == OpKind::SwapSlice) os << " [" << op.slice + 1 << "/3]";
    }
    for (const auto& e : s.ledger)
      if (e.layer == t) os << " | xtalk " << e.a.str() << "/" << e.b.str();
    os << '\n';
  }
  return os.str();
}

}  // namespace xroute
