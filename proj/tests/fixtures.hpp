// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <cstdint>
#include <random>

#include "arsmart/engine.hpp"
#include "arsmart/model.hpp"
#include "arsmart/workload.hpp"

namespace fixture {

using namespace arsmart;

struct Case {
    TaskGraph graph;
    Mapping mapping;
    Platform platform;
};

// Two messages into router 3 of a 4x4 single-cluster mesh. The first (router 1, two
// single-flit packets) is ready at cycle 1, the second (router 2, one packet) at cycle 2.
// Data preparation fully overlaps path setup.
inline Case two_message_timeline() {
    TimingParams t;
    t.package_size = 1;
    t.prep_delay = 4;
    Case c{{}, {}, build_platform(4, 4, {1.0}, 8, t)};
    const TaskId a = c.graph.add_task("T1", 1);
    const TaskId b = c.graph.add_task("T2", 2);
    const TaskId sink = c.graph.add_task("sink", 0);
    c.graph.add_edge(a, sink, 2);
    c.graph.add_edge(b, sink, 1);
    c.mapping.placement = {{0, 1}, {0, 2}, {0, 3}};
    return c;
}

// Two producer/consumer pairs on a 4x4 single-cluster mesh whose XY routes overlap on
// the top row while a one-row detour for the second pair is free.
inline Case overlapping_pairs() {
    Case c{{}, {}, build_platform(4, 4, {1.0}, 8, TimingParams{})};
    const TaskId a = c.graph.add_task("A", 20);
    const TaskId b = c.graph.add_task("B", 20);
    const TaskId cc = c.graph.add_task("C", 20);
    const TaskId d = c.graph.add_task("D", 20);
    c.graph.add_edge(a, cc, 20);
    c.graph.add_edge(b, d, 20);
    c.mapping.placement = {{0, 0}, {0, 1}, {0, 3}, {1, 3}};
    return c;
}

// One message of `flits` flits between two tasks; the consumer does no work.
inline Case single_message(const Platform &p, Coord src, Coord dst, std::int64_t producer_work,
                           std::int64_t flits) {
    Case c{{}, {}, p};
    const TaskId a = c.graph.add_task("src", producer_work);
    const TaskId b = c.graph.add_task("dst", 0);
    c.graph.add_edge(a, b, flits);
    c.mapping.placement = {src, dst};
    return c;
}

// Default synthetic parameters scaled down: 30 tasks, 60 edges on 8x8 with 4x4 clusters.
inline Workload scaled_synthetic(std::uint64_t seed, MappingPolicy mapping = MappingPolicy::contention_aware) {
    SyntheticParams sp;
    sp.node_count = 30;
    sp.link_count = 60;
    sp.avg_task_volume = 400;
    sp.avg_message_size = 80;
    sp.seed = seed;
    sp.mapping = mapping;
    return generate_workload(sp);
}

inline Platform synthetic_platform(const Workload &w, int cluster_dim = 4) {
    TimingParams t;
    t.package_size = 10;
    Platform p = build_platform(8, cluster_dim, {1.0}, 8, t);
    w.apply_rates(p);
    return p;
}

inline SimConfig with_noc(NocType noc) {
    SimConfig cfg;
    cfg.noc = noc;
    return cfg;
}

}  // namespace fixture
