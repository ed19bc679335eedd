// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/controller.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "arsmart/error.hpp"

namespace arsmart {

LinkStateTable::LinkStateTable(int cluster, const Platform &platform) : cluster_(cluster) {
    for (RouterId r : platform.cluster_routers(cluster)) {
        for (int p = 0; p < kPortCount; ++p) {
            index_.emplace(link_id(r, static_cast<Port>(p)), index_.size());
        }
    }
    owner_.assign(index_.size(), -1);
}

std::size_t LinkStateTable::slot(LinkId l) const {
    const auto it = index_.find(l);
    if (it == index_.end()) {
        throw InvariantViolation("link " + std::to_string(l) + " is not managed by cluster " +
                                 std::to_string(cluster_));
    }
    return it->second;
}

std::optional<MessageId> LinkStateTable::owner(LinkId l) const {
    const MessageId m = owner_[slot(l)];
    if (m == -1) return std::nullopt;
    return m;
}

void LinkStateTable::acquire(LinkId l, MessageId msg) {
    auto &o = owner_[slot(l)];
    if (o != -1) {
        throw InvariantViolation("link " + std::to_string(l) + " granted to message " +
                                 std::to_string(msg) + " while owned by " + std::to_string(o));
    }
    o = msg;
}

void LinkStateTable::release(LinkId l, MessageId msg) {
    auto &o = owner_[slot(l)];
    if (o != msg) {
        throw InvariantViolation("message " + std::to_string(msg) + " releases link " +
                                 std::to_string(l) + " it does not own");
    }
    o = -1;
}

std::vector<LinkId> LinkStateTable::owned_by(MessageId msg) const {
    std::vector<LinkId> out;
    for (const auto &[l, i] : index_) {
        if (owner_[i] == msg) out.push_back(l);
    }
    return out;
}

void LinkRequestQueue::push(MessageId msg, Cycle tau) {
    if (contains(msg)) return;
    const Request r{msg, tau};
    queue_.insert(std::upper_bound(queue_.begin(), queue_.end(), r), r);
}

bool LinkRequestQueue::remove(MessageId msg) {
    return std::erase_if(queue_, [msg](const Request &r) { return r.msg == msg; }) > 0;
}

bool LinkRequestQueue::contains(MessageId msg) const {
    return std::any_of(queue_.begin(), queue_.end(), [msg](const Request &r) { return r.msg == msg; });
}

std::optional<LinkRequestQueue::Request> LinkRequestQueue::head() const {
    if (queue_.empty()) return std::nullopt;
    return queue_.front();
}

const char *signal_name(SignalKind k) {
    switch (k) {
        case SignalKind::transmission_request: return "transmission-request";
        case SignalKind::processor_finish: return "processor-finish";
        case SignalKind::router_configure: return "router-configure";
        case SignalKind::configuration_finish: return "configuration-finish";
        case SignalKind::transmission_begin: return "transmission-begin";
        case SignalKind::transmission_finish: return "transmission-finish";
    }
    return "?";
}

int router_id_bits(int router_count) {
    const int needed = router_count <= 1 ? 1 : std::bit_width(static_cast<unsigned>(router_count - 1));
    return std::max(6, needed);
}

int signal_width(SignalKind k, int router_count) {
    switch (k) {
        case SignalKind::transmission_request:
        case SignalKind::transmission_finish: return 2 * router_id_bits(router_count);
        case SignalKind::processor_finish: return router_id_bits(router_count);
        case SignalKind::router_configure: return 7;
        case SignalKind::configuration_finish:
        case SignalKind::transmission_begin: return 1;
    }
    return 0;
}

ControlSignal make_signal(SignalKind kind, std::uint32_t payload, int router_count) {
    const int width = signal_width(kind, router_count);
    if (width < 32 && payload >> width != 0) {
        throw InvalidMessage(std::string(signal_name(kind)) + " payload " + std::to_string(payload) +
                             " exceeds " + std::to_string(width) + " bits");
    }
    return {kind, payload};
}

std::uint32_t pack_endpoints(RouterId src, RouterId dst, int router_count) {
    const int bits = router_id_bits(router_count);
    if (src < 0 || dst < 0 || src >= router_count || dst >= router_count) {
        throw InvalidMessage("endpoint outside the mesh");
    }
    return (static_cast<std::uint32_t>(src) << bits) | static_cast<std::uint32_t>(dst);
}

const char *phase_name(Phase p) {
    switch (p) {
        case Phase::compute: return "compute";
        case Phase::check: return "check";
        case Phase::configure: return "configure";
        case Phase::communicate: return "communicate";
        case Phase::release: return "release";
        case Phase::done: return "done";
    }
    return "?";
}

void MessageThread::advance(Phase next) {
    if (next < phase_) {
        throw InvariantViolation("message " + std::to_string(msg_) + " moves from " +
                                 phase_name(phase_) + " back to " + phase_name(next));
    }
    phase_ = next;
}

void MessageThread::assign_route(Route route, std::vector<int> clusters) {
    if (phase_ != Phase::compute) {
        throw InvariantViolation("route of message " + std::to_string(msg_) + " is already fixed");
    }
    route_ = std::move(route);
    clusters_ = std::move(clusters);
}

namespace {

struct ClusterBox {
    int r0, r1, c0, c1;
};

ClusterBox cluster_box(int cluster, const Platform &platform) {
    const int cd = platform.cluster_dim();
    const int per_side = platform.clusters_per_side();
    const int r0 = (cluster / per_side) * cd;
    const int c0 = (cluster % per_side) * cd;
    return {r0, r0 + cd - 1, c0, c0 + cd - 1};
}

std::vector<RouterId> facing_edges(RouterId from, RouterId dst, int cluster, const Platform &platform,
                                   bool within_box) {
    const ClusterBox b = cluster_box(cluster, platform);
    const Coord f = platform.coord_of(from);
    const Coord d = platform.coord_of(dst);
    const int row_lo = std::min(f.row, d.row), row_hi = std::max(f.row, d.row);
    const int col_lo = std::min(f.col, d.col), col_hi = std::max(f.col, d.col);
    std::set<RouterId> out;
    auto take = [&](Coord c) {
        if (within_box && (c.row < row_lo || c.row > row_hi || c.col < col_lo || c.col > col_hi)) return;
        out.insert(platform.id_of(c));
    };
    if (d.col > b.c1 || d.col < b.c0) {
        const int col = d.col > b.c1 ? b.c1 : b.c0;
        for (int r = b.r0; r <= b.r1; ++r) take({r, col});
    }
    if (d.row > b.r1 || d.row < b.r0) {
        const int row = d.row > b.r1 ? b.r1 : b.r0;
        for (int c = b.c0; c <= b.c1; ++c) take({row, c});
    }
    return {out.begin(), out.end()};
}

}  // namespace

std::vector<RouterId> boundary_candidates(RouterId from, RouterId dst, int cluster,
                                          const Platform &platform) {
    return facing_edges(from, dst, cluster, platform, true);
}

RouterId select_boundary_router(RouterId from, RouterId dst, int cluster,
                                const Platform &platform, std::mt19937_64 &rng) {
    if (platform.cluster_of(dst) == cluster) {
        throw ConfigError("destination lies inside the cluster; no boundary router needed");
    }
    auto candidates = boundary_candidates(from, dst, cluster, platform);
    if (candidates.empty()) candidates = facing_edges(from, dst, cluster, platform, false);
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)];
}

RouterId cross_boundary(RouterId b, RouterId dst, const Platform &platform) {
    const ClusterBox box = cluster_box(platform.cluster_of(b), platform);
    const Coord c = platform.coord_of(b);
    const Coord d = platform.coord_of(dst);
    if (d.col > box.c1 && c.col == box.c1) return platform.id_of({c.row, c.col + 1});
    if (d.col < box.c0 && c.col == box.c0) return platform.id_of({c.row, c.col - 1});
    if (d.row > box.r1 && c.row == box.r1) return platform.id_of({c.row + 1, c.col});
    if (d.row < box.r0 && c.row == box.r0) return platform.id_of({c.row - 1, c.col});
    throw InvariantViolation("router " + std::to_string(b) + " is not on an edge facing router " +
                             std::to_string(dst));
}

std::vector<int> route_clusters(const Route &route, const Platform &platform) {
    std::vector<int> out;
    for (RouterId r : route) {
        const int c = platform.cluster_of(r);
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

AssembledRoute assemble_route(RouterId src, RouterId dst, const ActiveSet &active, MessageId self,
                              const Platform &platform, std::mt19937_64 &rng, CostModel cost) {
    AssembledRoute out;
    RouterId from = src;
    while (true) {
        const int cluster = platform.cluster_of(from);
        PlanOptions opt;
        opt.cost = cost;
        opt.cluster = cluster;
        const bool last = platform.cluster_of(dst) == cluster;
        const RouterId to = last ? dst : select_boundary_router(from, dst, cluster, platform, rng);
        auto seg = route_r1(from, to, active, self, platform, opt);
        if (seg.route.empty()) throw InvariantViolation("cluster segment is unreachable");
        out.expanded += seg.expanded;
        out.route.insert(out.route.end(), seg.route.begin(), seg.route.end());
        out.clusters.push_back(cluster);
        if (last) break;
        out.temporary_destinations.push_back(to);
        from = cross_boundary(to, dst, platform);
    }
    return out;
}

Cycle config_latency(Cycle l_cn, Cycle l_rc, Cycle l_rls, Cycle l_pre) {
    return std::max<Cycle>(0, 2 * (l_cn + l_rc) + l_rls - l_pre);
}

Cycle config_latency_bound(int cn) { return 2 * (cn + 5) + cn; }

Cycle max_no_contention_latency(int hops, std::int64_t flits, int cn, const Platform &platform) {
    const auto &t = platform.timing();
    const Cycle conf = std::max(config_latency_bound(cn),
                                config_latency(cn * t.cluster_coord_delay, 5, t.release_delay, t.prep_delay));
    const Cycle latches = std::min<Cycle>(std::max(hops - 1, 0), 2 * (cn - 1) + hops / platform.hpc_max());
    return conf + (flits - 1) * t.link_delay + (latches + 1) * t.link_delay + latches * t.router_delay +
           t.release_delay;
}

ControlPlane::ControlPlane(const Platform &platform)
    : platform_(&platform),
      queues_(static_cast<std::size_t>(platform.router_count() * kPortCount)) {
    for (int c = 0; c < platform.cluster_count(); ++c) tables_.emplace_back(c, platform);
    for (RouterId r = 0; r < platform.router_count(); ++r) routers_.emplace_back(r);
}

LinkStateTable &ControlPlane::table_for(LinkId l) {
    return tables_[static_cast<std::size_t>(platform_->cluster_of(link_router(l)))];
}

const LinkStateTable &ControlPlane::table_for(LinkId l) const {
    return tables_[static_cast<std::size_t>(platform_->cluster_of(link_router(l)))];
}

bool ControlPlane::link_busy(LinkId l) const { return table_for(l).busy(l); }

std::optional<MessageId> ControlPlane::link_owner(LinkId l) const { return table_for(l).owner(l); }

void ControlPlane::request(MessageId msg, const Route &route, Cycle tau) {
    for (LinkId l : route_links(route, *platform_)) queues_[static_cast<std::size_t>(l)].push(msg, tau);
}

void ControlPlane::withdraw(MessageId msg, const Route &route) {
    for (LinkId l : route_links(route, *platform_)) queues_[static_cast<std::size_t>(l)].remove(msg);
}

ControlPlane::CheckResult ControlPlane::check_links(MessageId msg, const Route &route) {
    const auto links = route_links(route, *platform_);
    for (LinkId l : links) {
        if (auto o = link_owner(l)) {
            withdraw(msg, route);
            return {false, *o};
        }
    }
    for (LinkId l : links) {
        const auto head = queues_[static_cast<std::size_t>(l)].head();
        if (head && head->msg != msg) {
            withdraw(msg, route);
            return {false, head->msg};
        }
    }
    // clusters grant in ascending id order; all links are free, so none can refuse
    std::vector<LinkId> ordered = links;
    std::stable_sort(ordered.begin(), ordered.end(), [this](LinkId a, LinkId b) {
        return platform_->cluster_of(link_router(a)) < platform_->cluster_of(link_router(b));
    });
    for (LinkId l : ordered) table_for(l).acquire(l, msg);
    withdraw(msg, route);
    waits_on_.erase(msg);
    return {true, std::nullopt};
}

ControlPlane::ConfigureResult ControlPlane::configure_path(MessageId msg, const Route &route,
                                                           const std::vector<RouterId> &latches,
                                                           const std::vector<int> &clusters,
                                                           Cycle grant) {
    ConfigureResult res;
    res.l_cn = static_cast<Cycle>(clusters.size()) * platform_->timing().cluster_coord_delay;
    const Cycle issue = grant + res.l_cn;
    for (int c : clusters) res.cluster_done[c] = issue;
    for (const auto &u : path_updates(route, latches, *platform_)) {
        Router &router = routers_[static_cast<std::size_t>(u.router)];
        const Cycle at = router.reserve_config_slot(issue);
        try {
            router.apply(u.update, msg);
        } catch (const ConfigConflict &e) {
            throw InvariantViolation(std::string("configuration conflict: ") + e.what());
        }
        res.l_rc = std::max(res.l_rc, at - issue + 1);
        auto &done = res.cluster_done[platform_->cluster_of(u.router)];
        done = std::max(done, at + 1);
        ++res.router_configs;
    }
    return res;
}

Cycle ControlPlane::begin_transmission(const ConfigureResult &cfg, Cycle grant) const {
    const auto &t = platform_->timing();
    return grant + config_latency(cfg.l_cn, cfg.l_rc, t.release_delay, t.prep_delay);
}

std::vector<MessageId> ControlPlane::release_path(MessageId msg, const Route &route) {
    for (LinkId l : route_links(route, *platform_)) table_for(l).release(l, msg);
    for (std::size_t i = 1; i < route.size(); ++i) routers_[static_cast<std::size_t>(route[i])].clear(msg);
    std::vector<MessageId> woken;
    if (auto it = sleepers_.find(msg); it != sleepers_.end()) {
        woken = std::move(it->second);
        sleepers_.erase(it);
    }
    for (MessageId w : woken) waits_on_.erase(w);
    return woken;
}

void ControlPlane::sleep_on(MessageId waiter, MessageId blocker) {
    if (waiter == blocker) throw InvariantViolation("message sleeps on itself");
    waits_on_[waiter] = blocker;
    sleepers_[blocker].push_back(waiter);
}

bool ControlPlane::has_wait_cycle() const {
    for (const auto &[start, first] : waits_on_) {
        std::set<MessageId> seen{start};
        MessageId cur = first;
        while (true) {
            if (!seen.insert(cur).second) return true;
            const auto it = waits_on_.find(cur);
            if (it == waits_on_.end()) break;
            cur = it->second;
        }
    }
    return false;
}

}  // namespace arsmart
