// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/routing.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "arsmart/error.hpp"

namespace arsmart {

namespace {

// tie-break rank of a move direction; horizontal moves sort first
std::uint8_t move_rank(Port p) {
    switch (p) {
        case Port::E: return 0;
        case Port::W: return 1;
        case Port::N: return 2;
        case Port::S: return 3;
        case Port::Local: break;
    }
    return 4;
}

bool link_allowed(RouterId from, Port p, RouterId to, const Platform &platform,
                  const PlanOptions &opt) {
    if (opt.cluster && platform.cluster_of(to) != *opt.cluster) return false;
    if (opt.blocked_links && (*opt.blocked_links)[static_cast<std::size_t>(link_id(from, p))]) {
        return false;
    }
    return true;
}

// Removes cycles from a walk; the result is a simple path with the same endpoints.
Route shortcut(const Route &walk) {
    Route out;
    std::unordered_map<RouterId, std::size_t> pos;
    for (RouterId r : walk) {
        if (auto it = pos.find(r); it != pos.end()) {
            for (std::size_t i = it->second + 1; i < out.size(); ++i) pos.erase(out[i]);
            out.resize(it->second + 1);
        } else {
            pos[r] = out.size();
            out.push_back(r);
        }
    }
    return out;
}

PlanResult dijkstra_additive(RouterId src, RouterId dst, const ActiveSet &active, MessageId self,
                             const Platform &platform, const PlanOptions &opt) {
    const auto n = static_cast<std::size_t>(platform.router_count());
    constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
    const auto link_cost = link_cost_table(active, self, platform);

    std::vector<std::int64_t> cost(n, kInf);
    std::vector<int> hops(n, 0);
    std::vector<std::vector<std::uint8_t>> seq(n);
    std::vector<RouterId> prev(n, -1);
    std::vector<char> settled(n, 0);

    using Key = std::tuple<std::int64_t, int, RouterId>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
    cost[static_cast<std::size_t>(src)] = 0;
    queue.emplace(0, 0, src);

    PlanResult result;
    while (!queue.empty()) {
        auto [c, h, u] = queue.top();
        queue.pop();
        const auto ui = static_cast<std::size_t>(u);
        if (settled[ui] || c != cost[ui] || h != hops[ui]) continue;
        settled[ui] = 1;
        ++result.expanded;
        if (u == dst) break;
        for (Port p : kMeshPorts) {
            const auto v = platform.neighbor(u, p);
            if (!v || !link_allowed(u, p, *v, platform, opt)) continue;
            const auto vi = static_cast<std::size_t>(*v);
            if (settled[vi]) continue;
            const std::int64_t nc = c + link_cost[static_cast<std::size_t>(link_id(u, p))];
            const int nh = h + 1;
            auto nseq = seq[ui];
            nseq.push_back(move_rank(p));
            if (std::tie(nc, nh, nseq) < std::tie(cost[vi], hops[vi], seq[vi])) {
                cost[vi] = nc;
                hops[vi] = nh;
                seq[vi] = std::move(nseq);
                prev[vi] = u;
                queue.emplace(nc, nh, *v);
            }
        }
    }
    const auto di = static_cast<std::size_t>(dst);
    if (!settled[di]) return result;
    result.cost = cost[di];
    for (RouterId r = dst; r != -1; r = prev[static_cast<std::size_t>(r)]) result.route.push_back(r);
    std::reverse(result.route.begin(), result.route.end());
    return result;
}

using Bits = std::vector<std::uint64_t>;

bool subset_of(const Bits &a, const Bits &b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] & ~b[i]) != 0) return false;
    }
    return true;
}

// Best-first search over (router, contributing-message set) labels. Extending a label
// can only add messages, so the first label popped at dst is optimal.
PlanResult search_message_set(RouterId src, RouterId dst, const ActiveSet &active, MessageId self,
                              const Platform &platform, const PlanOptions &opt) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < active.size(); ++i) {
        if (active[i].id != self) members.push_back(i);
    }
    const std::size_t words = (members.size() + 63) / 64;
    std::vector<std::vector<std::size_t>> on_link(static_cast<std::size_t>(platform.router_count() * kPortCount));
    for (std::size_t k = 0; k < members.size(); ++k) {
        for (LinkId l : route_links(active[members[k]].route, platform)) {
            auto &list = on_link[static_cast<std::size_t>(l)];
            if (list.empty() || list.back() != k) list.push_back(k);
        }
    }

    struct Label {
        RouterId at;
        std::int64_t cost;
        int hops;
        Bits set;
        std::int64_t parent;
    };
    std::vector<Label> labels;
    std::vector<std::vector<std::size_t>> settled(static_cast<std::size_t>(platform.router_count()));
    using Key = std::tuple<std::int64_t, int, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
    labels.push_back({src, 0, 0, Bits(words, 0), -1});
    queue.emplace(0, 0, 0);

    PlanResult result;
    while (!queue.empty()) {
        const auto [c, h, idx] = queue.top();
        queue.pop();
        const Label cur = labels[idx];
        auto &done = settled[static_cast<std::size_t>(cur.at)];
        const bool dominated = std::any_of(done.begin(), done.end(), [&](std::size_t o) {
            return subset_of(labels[o].set, cur.set);
        });
        if (dominated) continue;
        done.push_back(idx);
        ++result.expanded;
        if (cur.at == dst) {
            Route walk;
            for (auto i = static_cast<std::int64_t>(idx); i != -1; i = labels[static_cast<std::size_t>(i)].parent) {
                walk.push_back(labels[static_cast<std::size_t>(i)].at);
            }
            std::reverse(walk.begin(), walk.end());
            result.route = shortcut(walk);
            result.cost = message_set_route_cost(result.route, active, self, platform);
            return result;
        }
        for (Port p : kMeshPorts) {
            const auto v = platform.neighbor(cur.at, p);
            if (!v || !link_allowed(cur.at, p, *v, platform, opt)) continue;
            Bits next = cur.set;
            std::int64_t nc = cur.cost;
            for (std::size_t k : on_link[static_cast<std::size_t>(link_id(cur.at, p))]) {
                auto &word = next[k / 64];
                const std::uint64_t bit = std::uint64_t{1} << (k % 64);
                if (!(word & bit)) {
                    word |= bit;
                    nc += active[members[k]].size_flits;
                }
            }
            labels.push_back({*v, nc, cur.hops + 1, std::move(next), static_cast<std::int64_t>(idx)});
            queue.emplace(nc, cur.hops + 1, labels.size() - 1);
        }
    }
    return result;
}

}  // namespace

bool is_valid_route(const Route &route, const Platform &platform) {
    if (route.empty()) return false;
    std::vector<char> seen(static_cast<std::size_t>(platform.router_count()), 0);
    for (std::size_t i = 0; i < route.size(); ++i) {
        if (route[i] < 0 || route[i] >= platform.router_count()) return false;
        auto &s = seen[static_cast<std::size_t>(route[i])];
        if (s) return false;
        s = 1;
        if (i > 0 && !platform.port_towards(route[i - 1], route[i])) return false;
    }
    return true;
}

std::vector<LinkId> route_links(const Route &route, const Platform &platform) {
    std::vector<LinkId> out;
    if (route.size() < 2) return out;
    out.reserve(route.size() - 1);
    for (std::size_t i = 0; i + 1 < route.size(); ++i) {
        const auto p = platform.port_towards(route[i], route[i + 1]);
        if (!p) throw InvariantViolation("route is not mesh-adjacent");
        out.push_back(link_id(route[i], *p));
    }
    return out;
}

bool routes_share_link(const Route &a, const Route &b, const Platform &platform) {
    auto la = route_links(a, platform);
    auto lb = route_links(b, platform);
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    std::vector<LinkId> common;
    std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(common));
    return !common.empty();
}

Route route_xy(RouterId src, RouterId dst, const Platform &platform) {
    Coord c = platform.coord_of(src);
    const Coord d = platform.coord_of(dst);
    Route route{src};
    while (c.col != d.col) {
        c.col += d.col > c.col ? 1 : -1;
        route.push_back(platform.id_of(c));
    }
    while (c.row != d.row) {
        c.row += d.row > c.row ? 1 : -1;
        route.push_back(platform.id_of(c));
    }
    return route;
}

std::vector<std::int64_t> link_cost_table(const ActiveSet &active, MessageId self,
                                          const Platform &platform) {
    std::vector<std::int64_t> table(static_cast<std::size_t>(platform.router_count() * kPortCount), 0);
    for (const auto &m : active) {
        if (m.id == self) continue;
        for (LinkId l : route_links(m.route, platform)) table[static_cast<std::size_t>(l)] += m.size_flits;
    }
    return table;
}

std::int64_t route_cost(RouterId v, RouterId u, const ActiveSet &active, MessageId self,
                        const Platform &platform) {
    const auto p = platform.port_towards(u, v);
    if (!p) {
        throw ConfigError("routers " + std::to_string(u) + " and " + std::to_string(v) +
                          " are not adjacent");
    }
    const LinkId target = link_id(u, *p);
    std::int64_t sum = 0;
    for (const auto &m : active) {
        if (m.id == self) continue;
        for (LinkId l : route_links(m.route, platform)) {
            if (l == target) sum += m.size_flits;
        }
    }
    return sum;
}

std::int64_t additive_route_cost(const Route &route, const ActiveSet &active, MessageId self,
                                 const Platform &platform) {
    const auto table = link_cost_table(active, self, platform);
    std::int64_t sum = 0;
    for (LinkId l : route_links(route, platform)) sum += table[static_cast<std::size_t>(l)];
    return sum;
}

std::int64_t message_set_route_cost(const Route &route, const ActiveSet &active, MessageId self,
                                    const Platform &platform) {
    std::int64_t sum = 0;
    for (const auto &m : active) {
        if (m.id != self && routes_share_link(route, m.route, platform)) sum += m.size_flits;
    }
    return sum;
}

PlanResult route_r1(RouterId src, RouterId dst, const ActiveSet &active, MessageId self,
                    const Platform &platform, const PlanOptions &options) {
    if (options.cluster && (platform.cluster_of(src) != *options.cluster ||
                            platform.cluster_of(dst) != *options.cluster)) {
        throw ConfigError("route endpoints lie outside the planning cluster");
    }
    if (src == dst) return {{src}, 0, 1};
    if (options.cost == CostModel::message_set) {
        return search_message_set(src, dst, active, self, platform, options);
    }
    return dijkstra_additive(src, dst, active, self, platform, options);
}

void ReservationList::insert(Reservation r, const Platform &platform) {
    if (!(r.t1 < r.t2)) throw InvariantViolation("reservation window must satisfy t1 < t2");
    for (const auto &e : entries_) {
        if (windows_overlap(e.t1, e.t2, r.t1, r.t2) && routes_share_link(e.route, r.route, platform)) {
            throw InvariantViolation("reservation for message " + std::to_string(r.msg) +
                                     " collides with message " + std::to_string(e.msg));
        }
    }
    entries_.push_back(std::move(r));
}

void ReservationList::expire(Cycle now) {
    std::erase_if(entries_, [now](const Reservation &e) { return e.t2 <= now; });
}

bool ReservationList::is_sound(const Platform &platform) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        for (std::size_t j = i + 1; j < entries_.size(); ++j) {
            const auto &a = entries_[i];
            const auto &b = entries_[j];
            if (windows_overlap(a.t1, a.t2, b.t1, b.t2) && routes_share_link(a.route, b.route, platform)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<char> load_graph(const ReservationList &rl, Cycle t1, Cycle t2,
                             const Platform &platform) {
    std::vector<char> blocked(static_cast<std::size_t>(platform.router_count() * kPortCount), 0);
    for (const auto &e : rl.entries()) {
        if (!windows_overlap(e.t1, e.t2, t1, t2)) continue;
        for (LinkId l : route_links(e.route, platform)) blocked[static_cast<std::size_t>(l)] = 1;
    }
    return blocked;
}

Cycle next_release(Cycle t1, const ReservationList &rl) {
    std::optional<Cycle> best;
    for (const auto &e : rl.entries()) {
        if (e.t2 > t1 && (!best || e.t2 < *best)) best = e.t2;
    }
    if (!best) throw InvariantViolation("no reservation is released after cycle " + std::to_string(t1));
    return *best;
}

TimedRoute route_r2(RouterId src, RouterId dst, MessageId msg, ReservationList &rl,
                    Cycle t_start, Cycle max_lwoc, const Platform &platform) {
    if (max_lwoc < 1) throw ConfigError("time-triggered window must be at least one cycle");
    TimedRoute out;
    out.t1 = t_start;
    out.t2 = t_start + max_lwoc;
    if (src == dst) {
        out.route = {src};
        out.attempts = 1;
        return out;
    }
    while (true) {
        ++out.attempts;
        const auto blocked = load_graph(rl, out.t1, out.t2, platform);
        PlanOptions opt;
        opt.blocked_links = &blocked;
        auto found = route_r1(src, dst, {}, msg, platform, opt);
        out.expanded += found.expanded;
        if (!found.route.empty()) {
            out.route = std::move(found.route);
            rl.insert({msg, out.route, out.t1, out.t2}, platform);
            return out;
        }
        out.t1 = next_release(out.t1, rl);
        out.t2 = out.t1 + max_lwoc;
    }
}

Cycle blocking_bound(const Route &route, const ActiveSet &active, MessageId self,
                     const Platform &platform) {
    Cycle sum = 0;
    for (const auto &m : active) {
        if (m.id != self && routes_share_link(route, m.route, platform)) sum += m.no_contention_latency;
    }
    return sum;
}

}  // namespace arsmart
