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

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xroute/csg.hpp"
#include "xroute/error.hpp"

namespace xroute {

struct ColorClass {
  int color = 0;
  std::vector<int> members;  // ascending vertex ids
};

/// Welsh-Powell on an arbitrary simple graph given by adjacency sets.
/// Pinned vertices take color 0 before the sweep starts; the rest are
/// visited by descending degree, ties by ascending id, and each color is
/// filled greedily before the next one opens.
inline std::vector<ColorClass> welsh_powell(const std::vector<std::set<int>>& adj, const std::set<int>& pinned = {}) {
  const int n = static_cast<int>(adj.size());
  for (int p : pinned) {
    if (p < 0 || p >= n) throw InputError("pinned vertex " + std::to_string(p) + " out of range");
    for (int q : pinned)
      if (adj[static_cast<std::size_t>(p)].count(q))
        throw InputError("pinned vertices " + std::to_string(p) + " and " + std::to_string(q) + " are adjacent");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return adj[static_cast<std::size_t>(a)].size() > adj[static_cast<std::size_t>(b)].size();
  });

  std::vector<int> color(static_cast<std::size_t>(n), -1);
  std::vector<ColorClass> classes;
  int colored = 0;
  auto fits = [&](int v, const ColorClass& cls) {
    return std::none_of(cls.members.begin(), cls.members.end(),
                        [&](int m) { return adj[static_cast<std::size_t>(v)].count(m) > 0; });
  };
  auto assign = [&](int v, ColorClass& cls) {
    color[static_cast<std::size_t>(v)] = cls.color;
    cls.members.push_back(v);
    ++colored;
  };

  for (int c = 0; colored < n; ++c) {
    ColorClass cls{c, {}};
    if (c == 0)
      for (int p : pinned) assign(p, cls);
    for (int v : order)
      if (color[static_cast<std::size_t>(v)] < 0 && fits(v, cls)) assign(v, cls);
    std::sort(cls.members.begin(), cls.members.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

inline std::vector<ColorClass> welsh_powell(const Csg& csg, const std::set<int>& pinned = {}) {
  std::vector<std::set<int>> adj;
  adj.reserve(csg.size());
  for (std::size_t v = 0; v < csg.size(); ++v) adj.push_back(csg.neighbors(static_cast<int>(v)));
  return welsh_powell(adj, pinned);
}

/// Every vertex in exactly one class and no class holds an edge.
inline bool is_proper_coloring(const std::vector<std::set<int>>& adj, const std::vector<ColorClass>& classes) {
  std::vector<int> seen(adj.size(), 0);
  for (const auto& cls : classes)
    for (int m : cls.members) {
      if (m < 0 || static_cast<std::size_t>(m) >= adj.size()) return false;
      ++seen[static_cast<std::size_t>(m)];
      for (int o : cls.members)
        if (adj[static_cast<std::size_t>(m)].count(o)) return false;
    }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

inline bool is_proper_coloring(const Csg& csg, const std::vector<ColorClass>& classes) {
  std::vector<std::set<int>> adj;
  for (std::size_t v = 0; v < csg.size(); ++v) adj.push_back(csg.neighbors(static_cast<int>(v)));
  return is_proper_coloring(adj, classes);
}

}  // namespace xroute
