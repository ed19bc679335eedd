// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "arsmart/model.hpp"
#include "arsmart/router.hpp"
#include "arsmart/routing.hpp"

namespace arsmart {

// Busy/owner state of the |R_n| x 5 links leaving the routers of one cluster.
class LinkStateTable {
   public:
    LinkStateTable(int cluster, const Platform &platform);

    int cluster() const { return cluster_; }
    std::size_t size() const { return owner_.size(); }
    bool covers(LinkId l) const { return index_.contains(l); }

    bool busy(LinkId l) const { return owner_[slot(l)] != -1; }
    std::optional<MessageId> owner(LinkId l) const;
    // throws InvariantViolation if the link is already owned
    void acquire(LinkId l, MessageId msg);
    // throws InvariantViolation if `msg` does not own the link
    void release(LinkId l, MessageId msg);
    std::vector<LinkId> owned_by(MessageId msg) const;

   private:
    std::size_t slot(LinkId l) const;

    int cluster_;
    std::map<LinkId, std::size_t> index_;
    std::vector<MessageId> owner_;
};

// Per-link FIFO ordered by (request time, message id).
class LinkRequestQueue {
   public:
    struct Request {
        MessageId msg = 0;
        Cycle tau = 0;
        auto operator<=>(const Request &o) const {
            if (auto c = tau <=> o.tau; c != 0) return c;
            return msg <=> o.msg;
        }
        bool operator==(const Request &) const = default;
    };

    // no-op when `msg` is already queued
    void push(MessageId msg, Cycle tau);
    bool remove(MessageId msg);
    bool contains(MessageId msg) const;
    std::optional<Request> head() const;
    const std::vector<Request> &requests() const { return queue_; }
    bool empty() const { return queue_.empty(); }

   private:
    std::vector<Request> queue_;
};

enum class SignalKind : std::uint8_t {
    transmission_request,
    processor_finish,
    router_configure,
    configuration_finish,
    transmission_begin,
    transmission_finish,
};
const char *signal_name(SignalKind k);

// Bits needed for one router id: 6 up to 64 routers, widened beyond that.
int router_id_bits(int router_count);
int signal_width(SignalKind k, int router_count);

struct ControlSignal {
    SignalKind kind = SignalKind::transmission_request;
    std::uint32_t payload = 0;
};
// throws InvalidMessage when the payload does not fit the signal width
ControlSignal make_signal(SignalKind kind, std::uint32_t payload, int router_count);
// src/dst pair packed as src in the high half, dst in the low half
std::uint32_t pack_endpoints(RouterId src, RouterId dst, int router_count);

enum class Phase : std::uint8_t { compute, check, configure, communicate, release, done };
const char *phase_name(Phase p);

struct ThreadId {
    RouterId src = 0;
    RouterId dst = 0;
    int seq = 0;  // per-source message counter
    auto operator<=>(const ThreadId &) const = default;
};

class MessageThread {
   public:
    MessageThread(ThreadId id, MessageId msg) : id_(id), msg_(msg) {}

    const ThreadId &id() const { return id_; }
    MessageId msg() const { return msg_; }
    Phase phase() const { return phase_; }
    const Route &route() const { return route_; }
    const std::vector<int> &clusters() const { return clusters_; }

    // throws InvariantViolation on a backwards transition
    void advance(Phase next);
    // only during compute; throws InvariantViolation afterwards
    void assign_route(Route route, std::vector<int> clusters);

   private:
    ThreadId id_;
    MessageId msg_;
    Phase phase_ = Phase::compute;
    Route route_;
    std::vector<int> clusters_;
};

// Routers of cluster `cluster` on an edge facing the cluster of `dst`, inside the
// bounding box of `from` and `dst`. Empty when `dst` is inside `cluster`.
std::vector<RouterId> boundary_candidates(RouterId from, RouterId dst, int cluster,
                                          const Platform &platform);

// Uniform draw over boundary_candidates; falls back to every router of the dst-facing
// edges when the box leaves none. Throws ConfigError when dst is inside the cluster.
RouterId select_boundary_router(RouterId from, RouterId dst, int cluster,
                                const Platform &platform, std::mt19937_64 &rng);

// The router on the far side of the cluster edge, reached from boundary router `b`.
// X is preferred at corners.
RouterId cross_boundary(RouterId b, RouterId dst, const Platform &platform);

struct AssembledRoute {
    Route route;
    std::vector<RouterId> temporary_destinations;
    std::vector<int> clusters;  // in traversal order
    int expanded = 0;
};

// Per-cluster planning: each controller routes from its (temporary) source to the
// destination or to a boundary router, and the next cluster takes over from the far
// side of that boundary.
AssembledRoute assemble_route(RouterId src, RouterId dst, const ActiveSet &active, MessageId self,
                              const Platform &platform, std::mt19937_64 &rng,
                              CostModel cost = CostModel::additive);

// ordered list of distinct clusters visited by `route`
std::vector<int> route_clusters(const Route &route, const Platform &platform);

// max(0, 2 (L_cn + L_rc) + L_rls - L_pre)
Cycle config_latency(Cycle l_cn, Cycle l_rc, Cycle l_rls, Cycle l_pre);
// 2 (cn + 5) + cn
Cycle config_latency_bound(int cn);

// L_w/oc upper estimate for time-triggered windows, from hop count and flit count.
Cycle max_no_contention_latency(int hops, std::int64_t flits, int cn, const Platform &platform);

// Link arbitration, router configuration and release for all clusters of a platform.
class ControlPlane {
   public:
    explicit ControlPlane(const Platform &platform);

    struct CheckResult {
        bool granted = false;
        std::optional<MessageId> blocker;  // holder of the first busy link, or queue head
    };

    // Enqueues `msg` with timestamp tau on every link of `route`.
    void request(MessageId msg, const Route &route, Cycle tau);
    // Grants all links when every one is free and msg heads every queue. Otherwise
    // withdraws msg from every queue and reports the first blocker in route order.
    CheckResult check_links(MessageId msg, const Route &route);

    struct ConfigureResult {
        Cycle l_cn = 0;
        Cycle l_rc = 0;  // max per-router slot over all configured routers, 1-based
        std::map<int, Cycle> cluster_done;  // cycle each cluster collected its replies
        int router_configs = 0;
    };
    // Writes the registers along `route` at cycle `grant`; configure signals reach the
    // routers after L_cn and each router applies one update per cycle.
    ConfigureResult configure_path(MessageId msg, const Route &route,
                                   const std::vector<RouterId> &latches,
                                   const std::vector<int> &clusters, Cycle grant);

    // cycle the source PE may start injecting: L_conf after the grant
    Cycle begin_transmission(const ConfigureResult &cfg, Cycle grant) const;

    // Frees every link and register entry owned by msg and returns the messages that
    // were sleeping on it. Throws InvariantViolation if a route link is not owned.
    std::vector<MessageId> release_path(MessageId msg, const Route &route);

    void sleep_on(MessageId waiter, MessageId blocker);
    // true when the wait-for relation (waiter -> blocker -> owner ...) has a cycle
    bool has_wait_cycle() const;

    bool link_busy(LinkId l) const;
    std::optional<MessageId> link_owner(LinkId l) const;
    const LinkRequestQueue &queue(LinkId l) const { return queues_.at(static_cast<std::size_t>(l)); }
    const std::vector<LinkStateTable> &tables() const { return tables_; }
    const std::vector<Router> &routers() const { return routers_; }

   private:
    LinkStateTable &table_for(LinkId l);
    const LinkStateTable &table_for(LinkId l) const;
    void withdraw(MessageId msg, const Route &route);

    const Platform *platform_;
    std::vector<LinkStateTable> tables_;
    std::vector<LinkRequestQueue> queues_;
    std::vector<Router> routers_;
    std::map<MessageId, MessageId> waits_on_;
    std::map<MessageId, std::vector<MessageId>> sleepers_;
};

}  // namespace arsmart
