// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "arsmart/model.hpp"

namespace arsmart {

using Route = std::vector<RouterId>;

// nonempty, mesh-adjacent, no repeated router
bool is_valid_route(const Route &route, const Platform &platform);
// directed links used by the route, in order
std::vector<LinkId> route_links(const Route &route, const Platform &platform);
bool routes_share_link(const Route &a, const Route &b, const Platform &platform);

// Moves along the row (X) first, then along the column (Y).
Route route_xy(RouterId src, RouterId dst, const Platform &platform);

// A message that holds a route and has not finished transmitting.
struct ActiveMessage {
    MessageId id = 0;
    Route route;
    std::int64_t size_flits = 0;
    Cycle no_contention_latency = 0;  // L_w/oc, used by blocking_bound
};
using ActiveSet = std::vector<ActiveMessage>;

// Sum of sizes of active messages (other than `self`) whose routes use the directed
// link u -> v. Throws ConfigError when u and v are not adjacent.
std::int64_t route_cost(RouterId v, RouterId u, const ActiveSet &active, MessageId self,
                        const Platform &platform);

// Per-link sums as a dense table indexed by LinkId.
std::vector<std::int64_t> link_cost_table(const ActiveSet &active, MessageId self,
                                          const Platform &platform);

// Sum over links of the per-link cost; a message crossing the route twice counts twice.
std::int64_t additive_route_cost(const Route &route, const ActiveSet &active, MessageId self,
                                 const Platform &platform);
// Sum of |m_j| over the distinct active messages sharing at least one link with the route.
std::int64_t message_set_route_cost(const Route &route, const ActiveSet &active, MessageId self,
                                    const Platform &platform);

enum class CostModel {
    additive,     // per-link Dijkstra relaxation
    message_set,  // exact label search over contributing-message sets; small meshes only
};

struct PlanOptions {
    CostModel cost = CostModel::additive;
    std::optional<int> cluster;                     // stay inside this cluster
    const std::vector<char> *blocked_links = nullptr;  // indexed by LinkId
};

struct PlanResult {
    Route route;  // empty when dst is unreachable
    std::int64_t cost = 0;
    int expanded = 0;  // vertices settled, the unit of route computation time
};

// Minimum-cost route. Ties break on hop count, then on the lexicographically smallest
// direction sequence with E < W < N < S, so an empty active set reproduces route_xy.
PlanResult route_r1(RouterId src, RouterId dst, const ActiveSet &active, MessageId self,
                    const Platform &platform, const PlanOptions &options = {});

struct Reservation {
    MessageId msg = 0;
    Route route;
    Cycle t1 = 0;
    Cycle t2 = 0;  // window is [t1, t2)
};

class ReservationList {
   public:
    // throws InvariantViolation if the window is empty or collides with another entry
    void insert(Reservation r, const Platform &platform);
    const std::vector<Reservation> &entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    // drops entries whose window closed at or before `now`
    void expire(Cycle now);
    // true when no two entries share a link during overlapping windows
    bool is_sound(const Platform &platform) const;

   private:
    std::vector<Reservation> entries_;
};

inline bool windows_overlap(Cycle a1, Cycle a2, Cycle b1, Cycle b2) { return a1 < b2 && b1 < a2; }

// Link mask (indexed by LinkId) of links reserved during any part of [t1, t2).
std::vector<char> load_graph(const ReservationList &rl, Cycle t1, Cycle t2,
                             const Platform &platform);

// Smallest window end strictly after t1. Throws InvariantViolation when there is none.
Cycle next_release(Cycle t1, const ReservationList &rl);

struct TimedRoute {
    Route route;
    Cycle t1 = 0;
    Cycle t2 = 0;
    int attempts = 0;
    int expanded = 0;
};

// Time-triggered planning: shortest route in the graph of links free over
// [t1, t1 + max_lwoc), sliding t1 to the next release until one exists. The result is
// inserted into `rl`.
TimedRoute route_r2(RouterId src, RouterId dst, MessageId msg, ReservationList &rl,
                    Cycle t_start, Cycle max_lwoc, const Platform &platform);

// Sum of L_w/oc over active messages (other than `self`) sharing a link with `route`.
Cycle blocking_bound(const Route &route, const ActiveSet &active, MessageId self,
                     const Platform &platform);

}  // namespace arsmart
