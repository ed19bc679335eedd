// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "arsmart/engine.hpp"
#include "arsmart/model.hpp"
#include "arsmart/workload_file.hpp"

namespace arsmart {

enum class MappingPolicy : std::uint8_t {
    round_robin,
    contention_aware,   // greedy: minimise sum of size x distance to placed neighbours
    computation_aware,  // fastest PE with free capacity
};
const char *mapping_name(MappingPolicy p);
MappingPolicy parse_mapping(const std::string &s);  // throws ConfigError

struct SyntheticParams {
    int node_count = 100;
    int link_count = 300;
    std::int64_t avg_task_volume = 8192;
    std::int64_t avg_message_size = 8192;  // flits
    double heterogeneity_degree = 1.0;
    int mesh_size = 8;
    int package_size = 10;
    std::uint64_t seed = 42;
    MappingPolicy mapping = MappingPolicy::contention_aware;

    void validate() const;  // throws ConfigError
};

// Seeded layered DAG. Workloads and message sizes are uniform in [avg/2, 3 avg/2].
// Throws ConfigError when link_count cannot be met acyclically.
TaskGraph gen_task_graph(const SyntheticParams &params);

// At most ceil(tasks / PEs) tasks per PE; tasks are placed in topological order.
Mapping map_tasks(const TaskGraph &graph, const Platform &platform, MappingPolicy policy);

// Graph + mapping on a mesh_size platform whose rates follow set_heterogeneity.
Workload generate_workload(const SyntheticParams &params);

// Rates drawn uniformly from [1, 1 + degree]; degree 0 gives rate 1 everywhere.
Platform set_heterogeneity(const Platform &platform, double degree, std::uint64_t seed);

double average_distance(const TaskGraph &graph, const Mapping &mapping);

// Local search for a mapping whose mean producer/consumer distance is within 0.25 of
// the target. Throws ConfigError for targets outside [1, 2 (N - 1)] or when the search
// cannot reach the band.
Mapping distance_constrained_mapping(const TaskGraph &graph, const Platform &platform,
                                     double target_avg_distance, std::uint64_t seed);

enum class SweepVariable : std::uint8_t { distance, message_size, heterogeneity, air };
const char *sweep_name(SweepVariable v);
SweepVariable parse_sweep_variable(const std::string &s);  // throws ConfigError

struct SweepMode {
    NocType noc = NocType::arsmart;
    RoutingAlgo routing = RoutingAlgo::xy;
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::distance;
    std::vector<double> values;  // message_size values are in packets
    int repetitions = 1;
    SyntheticParams base;
    std::vector<SweepMode> modes{{NocType::arsmart, RoutingAlgo::xy}, {NocType::smart, RoutingAlgo::xy}};
    int cluster_dim = 4;
    int hpc_max = 8;
    TimingParams timing;
    EnergyCoefficients energy;
    int threads = 1;

    void validate() const;  // throws ConfigError
};

struct SweepRow {
    SweepVariable variable = SweepVariable::distance;
    double value = 0;
    SweepMode mode;
    double schedule_length = 0;  // means over repetitions
    double avg_latency = 0;
    double energy = 0;
};

// Points run as independent simulations, optionally on several threads.
std::vector<SweepRow> run_sweep(const SweepSpec &spec);
// CSV with header variable,mode,routing,schedule_length,avg_latency,energy; the first
// column reads "<variable>=<value>".
void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows);
// parses "a..b" (integer steps) or a comma list
std::vector<double> parse_range(const std::string &s);

// The workload and platform one sweep point simulates (repetition `rep`).
std::pair<Workload, Platform> sweep_point(const SweepSpec &spec, double value, int rep);

}  // namespace arsmart
