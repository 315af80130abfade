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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xroute/circuit.hpp"
#include "xroute/error.hpp"

namespace xroute {

enum class PauliOp : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(PauliOp op) { return "IXYZ"[static_cast<int>(op)]; }

inline PauliOp pauli_from_char(char c) {
  switch (c) {
    case 'I': return PauliOp::I;
    case 'X': return PauliOp::X;
    case 'Y': return PauliOp::Y;
    case 'Z': return PauliOp::Z;
    default: throw InputError(std::string("invalid Pauli operator '") + c + "'");
  }
}

enum class Locality { Identity, Single, TwoLocal, NLocal };

/// A tensor product over {I,X,Y,Z} with a real coefficient. Character i of
/// the operator string acts on qubit i.
struct PauliString {
  std::vector<PauliOp> ops;
  double coefficient = 1.0;

  static PauliString parse(std::string_view text, double coefficient = 1.0) {
    PauliString p;
    p.coefficient = coefficient;
    p.ops.reserve(text.size());
    for (char c : text) p.ops.push_back(pauli_from_char(c));
    return p;
  }

  std::size_t size() const { return ops.size(); }

  /// Qubits carrying a non-identity operator, ascending.
  std::vector<int> support() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (ops[i] != PauliOp::I) out.push_back(static_cast<int>(i));
    return out;
  }

  std::size_t weight() const { return support().size(); }

  Locality locality() const {
    switch (weight()) {
      case 0: return Locality::Identity;
      case 1: return Locality::Single;
      case 2: return Locality::TwoLocal;
      default: return Locality::NLocal;
    }
  }

  std::string str() const {
    std::string s;
    for (PauliOp op : ops) s.push_back(pauli_char(op));
    return s;
  }
};

struct PauliProgram {
  int num_qubits = 0;
  std::vector<PauliString> strings;

  Locality locality(std::size_t i) const { return strings.at(i).locality(); }

  /// True when no string touches more than two qubits.
  bool is_two_local() const {
    for (const auto& s : strings)
      if (s.locality() == Locality::NLocal) return false;
    return true;
  }
};

/// One `coefficient OPSTRING` per line; `#` comments and blank lines are
/// ignored. All operator strings must have the same length.
inline PauliProgram parse_pauli_program(std::string_view text) {
  PauliProgram prog;
  prog.num_qubits = -1;
  detail::for_each_line(text, [&](int lineno, std::string_view raw) {
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) return;
    auto where = "line " + std::to_string(lineno) + ": ";
    if (toks.size() != 2) throw InputError(where + "expected 'coefficient OPSTRING'");
    double coeff = detail::parse_real(toks[0], lineno);
    PauliString p;
    try {
      p = PauliString::parse(toks[1], coeff);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
    if (p.ops.empty()) throw InputError(where + "empty operator string");
    if (prog.num_qubits < 0) {
      prog.num_qubits = static_cast<int>(p.size());
    } else if (static_cast<int>(p.size()) != prog.num_qubits) {
      throw InputError(where + "operator string length " + std::to_string(p.size()) + " differs from " +
                       std::to_string(prog.num_qubits));
    }
    prog.strings.push_back(std::move(p));
  });
  if (prog.num_qubits < 0) prog.num_qubits = 0;
  return prog;
}

inline std::string serialize_pauli_program(const PauliProgram& prog) {
  std::string out;
  for (const auto& s : prog.strings) out += detail::format_real(s.coefficient) + " " + s.str() + "\n";
  return out;
}

/// Commuting circuit for a program with no string wider than two qubits.
/// Each two-qubit string becomes one TwoQubit gate labelled with its
/// operator pair (e.g. "ZZ", "XY"); single-qubit strings become Single
/// gates; identity strings are dropped.
inline LogicalCircuit two_local_circuit(const PauliProgram& prog) {
  if (!prog.is_two_local()) throw InputError("program contains strings wider than two qubits");
  std::vector<Gate> gates;
  for (const auto& s : prog.strings) {
    auto sup = s.support();
    if (sup.empty()) continue;
    Gate g;
    g.id = static_cast<int>(gates.size());
    g.qubits = sup;
    g.params = {2.0 * s.coefficient};
    std::string label;
    for (int q : sup) label.push_back(pauli_char(s.ops[static_cast<std::size_t>(q)]));
    g.label = label;
    g.kind = sup.size() == 1 ? GateKind::Single : GateKind::TwoQubit;
    gates.push_back(std::move(g));
  }
  return LogicalCircuit(prog.num_qubits, std::move(gates), /*commuting=*/true);
}

}  // namespace xroute
