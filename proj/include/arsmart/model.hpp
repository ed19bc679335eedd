// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace arsmart {

using Cycle = std::int64_t;
using RouterId = std::int32_t;
using TaskId = std::int32_t;
using MessageId = std::int32_t;

struct Coord {
    int row = 0;
    int col = 0;
    auto operator<=>(const Coord &) const = default;
};

inline int manhattan(Coord a, Coord b) {
    return (a.row > b.row ? a.row - b.row : b.row - a.row) +
           (a.col > b.col ? a.col - b.col : b.col - a.col);
}

// Router ports. N is towards row 0, W towards column 0.
enum class Port : std::uint8_t { N = 0, S = 1, E = 2, W = 3, Local = 4 };
inline constexpr int kPortCount = 5;
inline constexpr Port kMeshPorts[] = {Port::N, Port::S, Port::E, Port::W};

Port opposite(Port p);
const char *port_name(Port p);

// A directed link is named by the router and output port it leaves through.
using LinkId = std::int32_t;
inline LinkId link_id(RouterId r, Port p) { return r * kPortCount + static_cast<int>(p); }
inline RouterId link_router(LinkId l) { return l / kPortCount; }
inline Port link_port(LinkId l) { return static_cast<Port>(l % kPortCount); }

struct TimingParams {
    Cycle router_delay = 1;         // L_r
    Cycle link_delay = 1;           // L_w
    Cycle prep_delay = 0;           // L_pre, NI data preparation overlapping path setup
    Cycle release_delay = 1;        // L_rls
    Cycle cluster_coord_delay = 1;  // L_cn contribution per involved cluster
    int package_size = 4;           // flits per packet
    Cycle route_cycles_per_node = 0;  // controller cost per expanded node; 0 = free

    // throws ConfigError
    void validate() const;
};

// N x N mesh split into square clusters. Router ids are cluster-major: clusters are
// numbered row-major from the top-left and routers inside a cluster are numbered
// row-major, so the 8x8 mesh with 4x4 clusters has router 7 on the east edge of
// cluster 0 and routers 16..31 in cluster 1 (top-right). With a single cluster this
// is plain row-major numbering.
class Platform {
   public:
    Platform(int mesh_dim, int cluster_dim, std::vector<double> rates, int hpc_max,
             TimingParams timing);

    int mesh_dim() const { return mesh_dim_; }
    int cluster_dim() const { return cluster_dim_; }
    int hpc_max() const { return hpc_max_; }
    int router_count() const { return mesh_dim_ * mesh_dim_; }
    int clusters_per_side() const { return mesh_dim_ / cluster_dim_; }
    int cluster_count() const { return clusters_per_side() * clusters_per_side(); }

    bool contains(Coord c) const {
        return c.row >= 0 && c.col >= 0 && c.row < mesh_dim_ && c.col < mesh_dim_;
    }
    RouterId id_of(Coord c) const;
    Coord coord_of(RouterId id) const;
    int cluster_of(RouterId id) const;
    int cluster_of(Coord c) const { return cluster_of(id_of(c)); }
    std::vector<RouterId> cluster_routers(int cluster) const;
    std::optional<RouterId> neighbor(RouterId id, Port p) const;
    // port of `from` whose link leads to the adjacent router `to`; nullopt if not adjacent
    std::optional<Port> port_towards(RouterId from, RouterId to) const;

    double rate(RouterId id) const { return rates_.at(static_cast<std::size_t>(id)); }
    double rate(Coord c) const { return rate(id_of(c)); }
    void set_rate(Coord c, double rate);
    const std::vector<double> &rates() const { return rates_; }

    const TimingParams &timing() const { return timing_; }
    void set_timing(const TimingParams &t);
    void set_hpc_max(int hpc);

   private:
    int mesh_dim_;
    int cluster_dim_;
    int hpc_max_;
    std::vector<double> rates_;  // by router id
    TimingParams timing_;
};

// rates: one entry (uniform) or one per router id. Throws ConfigError.
Platform build_platform(int mesh_dim, int cluster_dim, std::vector<double> rates, int hpc_max,
                        TimingParams timing = {});

struct Task {
    std::string name;
    std::int64_t workload = 0;
};

struct Edge {
    TaskId src = 0;
    TaskId dst = 0;
    std::int64_t size_flits = 1;
};

class TaskGraph {
   public:
    TaskId add_task(std::string name, std::int64_t workload);
    MessageId add_edge(TaskId src, TaskId dst, std::int64_t size_flits);

    const std::vector<Task> &tasks() const { return tasks_; }
    const std::vector<Edge> &edges() const { return edges_; }
    std::size_t task_count() const { return tasks_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::optional<TaskId> find_task(const std::string &name) const;

    const std::vector<MessageId> &in_edges(TaskId t) const { return in_.at(t); }
    const std::vector<MessageId> &out_edges(TaskId t) const { return out_.at(t); }

    // Kahn's algorithm, smallest task id first among ready tasks. Throws GraphError on a cycle.
    std::vector<TaskId> topological_order() const;
    bool is_acyclic() const;

    bool operator==(const TaskGraph &o) const;

   private:
    std::vector<Task> tasks_;
    std::vector<Edge> edges_;
    std::vector<std::vector<MessageId>> in_;
    std::vector<std::vector<MessageId>> out_;
};

// Task -> PE coordinate. Several tasks may share a PE; they run one after another.
struct Mapping {
    std::vector<Coord> placement;

    Coord at(TaskId t) const { return placement.at(static_cast<std::size_t>(t)); }
    // throws ConfigError when not total over the graph or off-mesh
    void validate(const TaskGraph &g, const Platform &p) const;
    bool operator==(const Mapping &) const = default;
};

// ceil(size / package) packets, all full except possibly the last. Throws InvalidMessage.
std::vector<int> packetize(std::int64_t message_size_flits, int package_size);

// ceil(workload / rate) cycles. Throws ConfigError on a nonpositive rate.
Cycle execution_time(std::int64_t workload, double rate);

}  // namespace arsmart
