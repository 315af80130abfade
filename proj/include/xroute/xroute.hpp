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

#include "xroute/baseline.hpp"
#include "xroute/circuit.hpp"
#include "xroute/coloring.hpp"
#include "xroute/csg.hpp"
#include "xroute/error.hpp"
#include "xroute/fidelity.hpp"
#include "xroute/hardware.hpp"
#include "xroute/io.hpp"
#include "xroute/jw.hpp"
#include "xroute/log.hpp"
#include "xroute/pauli.hpp"
#include "xroute/scheduler.hpp"
#include "xroute/verify.hpp"
#include "xroute/vqa.hpp"

namespace xroute {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace xroute
