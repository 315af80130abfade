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

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string_view>

namespace xroute::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("CQC_LOG");
    if (env == nullptr) return Level::Error;
    std::string_view v(env);
    if (v == "debug") return Level::Debug;
    if (v == "info") return Level::Info;
    return Level::Error;
  }();
  return level;
}

template <typename... Args>
void write(Level level, std::string_view tag, const Args&... args) {
  if (static_cast<int>(level) > static_cast<int>(threshold())) return;
  std::ostringstream os;
  os << "[" << tag << "] ";
  (os << ... << args);
  os << '\n';
  std::cerr << os.str();
}

template <typename... Args>
void error(const Args&... args) { write(Level::Error, "error", args...); }
template <typename... Args>
void info(const Args&... args) { write(Level::Info, "info", args...); }
template <typename... Args>
void debug(const Args&... args) { write(Level::Debug, "debug", args...); }

}  // namespace xroute::log
