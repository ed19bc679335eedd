// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "arsmart/model.hpp"

namespace arsmart {

// A task graph together with its placement and any per-PE rate overrides.
struct Workload {
    TaskGraph graph;
    Mapping mapping;
    std::vector<std::pair<Coord, double>> rates;

    // copies the rate overrides onto the platform
    void apply_rates(Platform &platform) const;
    bool operator==(const Workload &) const = default;
};

// Line-oriented DAG format:
//   task <id> <workload>
//   edge <src> <dst> <flits>
//   map <task> <row> <col>
//   rate <row> <col> <rate>
// '#' starts a comment. Throws ParseError with the offending line number.
Workload parse_workload(std::istream &in);
Workload read_workload_file(const std::string &path);

// Tasks, then edges, then mappings, then rates; output parses back to an equal Workload.
void write_workload(std::ostream &out, const Workload &w);
// writes to a temporary file next to `path` and renames it into place
void write_workload_file(const std::string &path, const Workload &w);

}  // namespace arsmart
