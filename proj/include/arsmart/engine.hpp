// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "arsmart/metrics.hpp"
#include "arsmart/model.hpp"
#include "arsmart/routing.hpp"
#include "arsmart/workload_file.hpp"

namespace arsmart {

enum class NocType : std::uint8_t { arsmart, smart, traditional };
enum class RoutingAlgo : std::uint8_t { xy, r1, r2 };

const char *noc_name(NocType t);
const char *routing_name(RoutingAlgo r);
NocType parse_noc(const std::string &s);          // throws ConfigError
RoutingAlgo parse_routing(const std::string &s);  // throws ConfigError

struct SimConfig {
    NocType noc = NocType::arsmart;
    RoutingAlgo routing = RoutingAlgo::xy;
    std::uint64_t seed = 1;
    EnergyCoefficients energy;
    double air = 1.0;  // message-size multiplier
    CostModel cost = CostModel::additive;
    bool trace = false;

    void validate() const;  // throws ConfigError
};

struct TraceLine {
    Cycle cycle = 0;
    std::string kind;
    MessageId msg = -1;
    std::string detail;
};

struct Trace {
    std::vector<TraceLine> lines;

    void write(std::ostream &os) const;
    std::string str() const;
    std::uint64_t digest() const;  // FNV-1a over str()
};

// Parses `cycle=<c> kind=<k> msg=<id> detail=<...>` lines. Throws ParseError.
Trace read_trace(std::istream &is);

// A contiguous stretch during which `waiter` slept on links owned by `holder`.
struct BlockingInterval {
    MessageId waiter = 0;
    MessageId holder = 0;
    Cycle begin = 0;
    Cycle end = 0;
    Cycle holder_woc = 0;  // holder's own L_w/oc
};

// Source blocking of one message against the sum of L_w/oc over the active messages
// that shared a link with its route when the route was assigned.
struct SourceBlocking {
    MessageId msg = 0;
    Cycle blocked = 0;
    Cycle bound = 0;
};

struct Diagnostics {
    std::vector<BlockingInterval> blocking;
    std::vector<SourceBlocking> source_blocking;
    std::int64_t checks = 0;
    std::int64_t grants = 0;
    std::int64_t xy_fallbacks = 0;
    int max_unlatched_segment = 0;
};

struct SimResult {
    MetricsReport report;
    Trace trace;
    Diagnostics diagnostics;
};

// Runs the task graph to completion. Deterministic for a fixed configuration and seed.
// Throws InvariantViolation when a protocol invariant breaks.
SimResult simulate(const TaskGraph &graph, const Mapping &mapping, const Platform &platform,
                   const SimConfig &config);

}  // namespace arsmart
