// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "arsmart/error.hpp"

namespace arsmart {

Port opposite(Port p) {
    switch (p) {
        case Port::N: return Port::S;
        case Port::S: return Port::N;
        case Port::E: return Port::W;
        case Port::W: return Port::E;
        case Port::Local: return Port::Local;
    }
    return Port::Local;
}

const char *port_name(Port p) {
    switch (p) {
        case Port::N: return "N";
        case Port::S: return "S";
        case Port::E: return "E";
        case Port::W: return "W";
        case Port::Local: return "L";
    }
    return "?";
}

void TimingParams::validate() const {
    if (router_delay < 0 || link_delay < 0 || prep_delay < 0 || release_delay < 0 ||
        cluster_coord_delay < 0 || route_cycles_per_node < 0) {
        throw ConfigError("timing parameters must be nonnegative");
    }
    if (link_delay < 1) throw ConfigError("link delay L_w must be at least 1 cycle");
    if (package_size < 1) throw ConfigError("package size must be at least 1 flit");
}

Platform::Platform(int mesh_dim, int cluster_dim, std::vector<double> rates, int hpc_max,
                   TimingParams timing)
    : mesh_dim_(mesh_dim), cluster_dim_(cluster_dim), hpc_max_(hpc_max), timing_(timing) {
    if (mesh_dim <= 0) throw ConfigError("mesh dimension must be positive");
    if (cluster_dim <= 0 || mesh_dim % cluster_dim != 0) {
        throw ConfigError("mesh dimension " + std::to_string(mesh_dim) +
                          " is not divisible by cluster dimension " + std::to_string(cluster_dim));
    }
    if (cluster_dim > 8) throw ConfigError("cluster dimension is limited to 8");
    if (hpc_max < 1) throw ConfigError("HPC_max must be at least 1");
    timing_.validate();
    const auto n = static_cast<std::size_t>(mesh_dim * mesh_dim);
    if (rates.size() == 1) {
        rates_.assign(n, rates.front());
    } else if (rates.size() == n) {
        rates_ = std::move(rates);
    } else {
        throw ConfigError("expected 1 or " + std::to_string(n) + " processing rates, got " +
                          std::to_string(rates.size()));
    }
    for (double r : rates_) {
        if (!(r > 0.0)) throw ConfigError("processing rates must be positive");
    }
}

RouterId Platform::id_of(Coord c) const {
    if (!contains(c)) throw ConfigError("coordinate outside the mesh");
    const int per_side = clusters_per_side();
    const int cluster = (c.row / cluster_dim_) * per_side + c.col / cluster_dim_;
    const int local = (c.row % cluster_dim_) * cluster_dim_ + c.col % cluster_dim_;
    return cluster * cluster_dim_ * cluster_dim_ + local;
}

Coord Platform::coord_of(RouterId id) const {
    if (id < 0 || id >= router_count()) throw ConfigError("router id out of range");
    const int per_cluster = cluster_dim_ * cluster_dim_;
    const int cluster = id / per_cluster;
    const int local = id % per_cluster;
    const int per_side = clusters_per_side();
    return {(cluster / per_side) * cluster_dim_ + local / cluster_dim_,
            (cluster % per_side) * cluster_dim_ + local % cluster_dim_};
}

int Platform::cluster_of(RouterId id) const {
    if (id < 0 || id >= router_count()) throw ConfigError("router id out of range");
    return id / (cluster_dim_ * cluster_dim_);
}

std::vector<RouterId> Platform::cluster_routers(int cluster) const {
    if (cluster < 0 || cluster >= cluster_count()) throw ConfigError("cluster id out of range");
    const int per_cluster = cluster_dim_ * cluster_dim_;
    std::vector<RouterId> out(static_cast<std::size_t>(per_cluster));
    for (int i = 0; i < per_cluster; ++i) out[static_cast<std::size_t>(i)] = cluster * per_cluster + i;
    return out;
}

std::optional<RouterId> Platform::neighbor(RouterId id, Port p) const {
    Coord c = coord_of(id);
    switch (p) {
        case Port::N: --c.row; break;
        case Port::S: ++c.row; break;
        case Port::E: ++c.col; break;
        case Port::W: --c.col; break;
        case Port::Local: return std::nullopt;
    }
    if (!contains(c)) return std::nullopt;
    return id_of(c);
}

std::optional<Port> Platform::port_towards(RouterId from, RouterId to) const {
    const Coord a = coord_of(from);
    const Coord b = coord_of(to);
    if (a.row == b.row && b.col == a.col + 1) return Port::E;
    if (a.row == b.row && b.col == a.col - 1) return Port::W;
    if (a.col == b.col && b.row == a.row + 1) return Port::S;
    if (a.col == b.col && b.row == a.row - 1) return Port::N;
    return std::nullopt;
}

void Platform::set_rate(Coord c, double rate) {
    if (!(rate > 0.0)) throw ConfigError("processing rates must be positive");
    rates_.at(static_cast<std::size_t>(id_of(c))) = rate;
}

void Platform::set_timing(const TimingParams &t) {
    t.validate();
    timing_ = t;
}

void Platform::set_hpc_max(int hpc) {
    if (hpc < 1) throw ConfigError("HPC_max must be at least 1");
    hpc_max_ = hpc;
}

Platform build_platform(int mesh_dim, int cluster_dim, std::vector<double> rates, int hpc_max,
                        TimingParams timing) {
    return Platform(mesh_dim, cluster_dim, std::move(rates), hpc_max, timing);
}

TaskId TaskGraph::add_task(std::string name, std::int64_t workload) {
    if (workload < 0) throw GraphError("task workload must be nonnegative");
    if (find_task(name)) throw GraphError("duplicate task '" + name + "'");
    tasks_.push_back({std::move(name), workload});
    in_.emplace_back();
    out_.emplace_back();
    return static_cast<TaskId>(tasks_.size() - 1);
}

MessageId TaskGraph::add_edge(TaskId src, TaskId dst, std::int64_t size_flits) {
    const auto n = static_cast<TaskId>(tasks_.size());
    if (src < 0 || dst < 0 || src >= n || dst >= n) throw GraphError("edge endpoint does not exist");
    if (src == dst) throw GraphError("self-loop edge");
    if (size_flits < 1) throw GraphError("message size must be a positive number of flits");
    edges_.push_back({src, dst, size_flits});
    const auto id = static_cast<MessageId>(edges_.size() - 1);
    out_[static_cast<std::size_t>(src)].push_back(id);
    in_[static_cast<std::size_t>(dst)].push_back(id);
    return id;
}

std::optional<TaskId> TaskGraph::find_task(const std::string &name) const {
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        if (tasks_[i].name == name) return static_cast<TaskId>(i);
    }
    return std::nullopt;
}

std::vector<TaskId> TaskGraph::topological_order() const {
    std::vector<int> indeg(tasks_.size(), 0);
    for (const auto &e : edges_) ++indeg[static_cast<std::size_t>(e.dst)];
    std::priority_queue<TaskId, std::vector<TaskId>, std::greater<>> ready;
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        if (indeg[i] == 0) ready.push(static_cast<TaskId>(i));
    }
    std::vector<TaskId> order;
    order.reserve(tasks_.size());
    while (!ready.empty()) {
        const TaskId t = ready.top();
        ready.pop();
        order.push_back(t);
        for (MessageId m : out_[static_cast<std::size_t>(t)]) {
            const auto d = static_cast<std::size_t>(edges_[static_cast<std::size_t>(m)].dst);
            if (--indeg[d] == 0) ready.push(static_cast<TaskId>(d));
        }
    }
    if (order.size() != tasks_.size()) throw GraphError("task graph contains a directed cycle");
    return order;
}

bool TaskGraph::is_acyclic() const {
    try {
        topological_order();
        return true;
    } catch (const GraphError &) {
        return false;
    }
}

bool TaskGraph::operator==(const TaskGraph &o) const {
    if (tasks_.size() != o.tasks_.size() || edges_.size() != o.edges_.size()) return false;
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        if (tasks_[i].name != o.tasks_[i].name || tasks_[i].workload != o.tasks_[i].workload) {
            return false;
        }
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto &a = edges_[i];
        const auto &b = o.edges_[i];
        if (a.src != b.src || a.dst != b.dst || a.size_flits != b.size_flits) return false;
    }
    return true;
}

void Mapping::validate(const TaskGraph &g, const Platform &p) const {
    if (placement.size() != g.task_count()) {
        throw ConfigError("mapping covers " + std::to_string(placement.size()) + " of " +
                          std::to_string(g.task_count()) + " tasks");
    }
    for (std::size_t i = 0; i < placement.size(); ++i) {
        if (!p.contains(placement[i])) {
            throw ConfigError("task '" + g.tasks()[i].name + "' is mapped outside the mesh");
        }
    }
}

std::vector<int> packetize(std::int64_t message_size_flits, int package_size) {
    if (message_size_flits < 1) throw InvalidMessage("message size must be at least one flit");
    if (package_size < 1) throw InvalidMessage("package size must be at least one flit");
    const std::int64_t full = message_size_flits / package_size;
    const std::int64_t rest = message_size_flits % package_size;
    std::vector<int> out(static_cast<std::size_t>(full), package_size);
    if (rest > 0) out.push_back(static_cast<int>(rest));
    return out;
}

Cycle execution_time(std::int64_t workload, double rate) {
    if (!(rate > 0.0)) throw ConfigError("processing rate must be positive");
    const double q = static_cast<double>(workload) / rate;
    const double nearest = std::round(q);
    // absorb representation error such as 3 / 0.1 = 30.000000000000004
    if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, q)) return static_cast<Cycle>(nearest);
    return static_cast<Cycle>(std::ceil(q));
}

}  // namespace arsmart
