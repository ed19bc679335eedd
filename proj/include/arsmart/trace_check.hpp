// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <string>
#include <vector>

#include "arsmart/engine.hpp"

namespace arsmart {

// Replays a trace and reports every protocol problem found: cycles going backwards,
// a link granted while owned, a release without a grant, links still owned at the end,
// and messages whose ejected flit count differs from the injected one. Empty = valid.
std::vector<std::string> validate_trace(const Trace &trace);

}  // namespace arsmart
