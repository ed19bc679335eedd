// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/router.hpp"

#include <algorithm>
#include <string>

#include "arsmart/error.hpp"

namespace arsmart {

PortCode port_code(Port p) {
    switch (p) {
        case Port::S: return PortCode::S;
        case Port::N: return PortCode::N;
        case Port::E: return PortCode::E;
        case Port::W: return PortCode::W;
        case Port::Local: break;
    }
    throw DecodeError("the local port has no non-local code");
}

std::optional<Port> decode_port(PortCode c) {
    switch (c) {
        case PortCode::disconnected: return std::nullopt;
        case PortCode::S: return Port::S;
        case PortCode::N: return Port::N;
        case PortCode::E: return Port::E;
        case PortCode::W: return Port::W;
    }
    throw DecodeError("reserved port code");
}

int entry_index(Port input) {
    return static_cast<int>(port_code(input)) - 1;
}

Port entry_port(int index) {
    if (index < 0 || index > 3) throw DecodeError("register entry index out of range");
    return *decode_port(static_cast<PortCode>(index + 1));
}

RegisterUpdate decode_config(std::uint8_t word) {
    if (word > 0x7F) throw DecodeError("router-configure word exceeds 7 bits");
    RegisterUpdate u;
    u.select = (word & 0x1) ? RegisterSelect::local : RegisterSelect::non_local;
    u.entry = entry_port((word >> 1) & 0x3);
    if (u.select == RegisterSelect::non_local) {
        const int code = (word >> 3) & 0x7;
        if (code > 4) throw DecodeError("reserved port code " + std::to_string(code));
        u.output = static_cast<PortCode>(code);
        u.delay = (word >> 6) & 0x1;
    } else {
        u.local_connect = (word >> 3) & 0x1;
    }
    return u;
}

std::uint8_t encode_config(const RegisterUpdate &u) {
    unsigned word = static_cast<unsigned>(u.select);
    word |= static_cast<unsigned>(entry_index(u.entry)) << 1;
    if (u.select == RegisterSelect::non_local) {
        word |= static_cast<unsigned>(u.output) << 3;
        word |= (u.delay ? 1u : 0u) << 6;
    } else {
        word |= (u.local_connect ? 1u : 0u) << 3;
    }
    return static_cast<std::uint8_t>(word);
}

void Router::apply(const RegisterUpdate &u, MessageId msg) {
    const auto e = static_cast<std::size_t>(entry_index(u.entry));
    const bool connecting = u.select == RegisterSelect::non_local
                                ? u.output != PortCode::disconnected
                                : u.local_connect;
    if (connecting && owner_[e] != -1 && owner_[e] != msg) {
        throw ConfigConflict("router " + std::to_string(id_) + ": input " + port_name(u.entry) +
                             " is held by message " + std::to_string(owner_[e]));
    }
    if (u.select == RegisterSelect::non_local) {
        if (u.output != PortCode::disconnected) {
            for (std::size_t i = 0; i < 4; ++i) {
                if (i != e && regs_.non_local[i] == u.output) {
                    throw ConfigConflict("router " + std::to_string(id_) + ": output " +
                                         port_name(*decode_port(u.output)) +
                                         " already driven by input " + port_name(entry_port(static_cast<int>(i))));
                }
            }
            if (regs_.local[e]) {
                throw ConfigConflict("router " + std::to_string(id_) +
                                     ": input already ejects to the local PE");
            }
        }
        regs_.non_local[e] = u.output;
        regs_.delay[e] = u.output != PortCode::disconnected && u.delay;
    } else {
        if (u.local_connect && regs_.non_local[e] != PortCode::disconnected) {
            throw ConfigConflict("router " + std::to_string(id_) +
                                 ": input already forwards to a non-local port");
        }
        regs_.local[e] = u.local_connect;
    }
    const bool in_use = regs_.local[e] || regs_.non_local[e] != PortCode::disconnected;
    owner_[e] = in_use ? msg : -1;
}

int Router::clear(MessageId msg) {
    int cleared = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (owner_[i] != msg) continue;
        regs_.non_local[i] = PortCode::disconnected;
        regs_.local[i] = false;
        regs_.delay[i] = false;
        owner_[i] = -1;
        ++cleared;
    }
    return cleared;
}

std::optional<Port> Router::output_for(Port input) const {
    const auto e = static_cast<std::size_t>(entry_index(input));
    if (regs_.local[e]) return Port::Local;
    return decode_port(regs_.non_local[e]);
}

std::optional<MessageId> Router::owner_of(Port input) const {
    const MessageId m = owner_[static_cast<std::size_t>(entry_index(input))];
    if (m < 0) return std::nullopt;
    return m;
}

Cycle Router::reserve_config_slot(Cycle issue) {
    const Cycle at = std::max(issue, next_config_cycle_);
    next_config_cycle_ = at + 1;
    return at;
}

std::vector<RouterId> latch_points(const std::vector<RouterId> &route, int hpc_max,
                                   const Platform &platform) {
    std::vector<RouterId> latches;
    if (route.size() < 2) return latches;
    int since_latch = 0;
    for (std::size_t i = 1; i + 1 < route.size(); ++i) {
        ++since_latch;
        const bool exits_cluster = platform.cluster_of(route[i]) != platform.cluster_of(route[i + 1]);
        if (exits_cluster || since_latch % hpc_max == 0) {
            latches.push_back(route[i]);
            since_latch = 0;
        }
    }
    return latches;
}

int longest_unlatched_segment(const std::vector<RouterId> &route,
                              const std::vector<RouterId> &latches) {
    int longest = 0;
    int run = 0;
    std::size_t next = 0;
    for (std::size_t i = 1; i < route.size(); ++i) {
        ++run;
        if (next < latches.size() && route[i] == latches[next]) {
            longest = std::max(longest, run);
            run = 0;
            ++next;
        }
    }
    return std::max(longest, run);
}

TraversalSchedule traverse(std::int64_t flits, int latch_count, const TimingParams &timing,
                           Cycle inject) {
    if (flits < 1) throw InvalidMessage("traversal needs at least one flit");
    TraversalSchedule s;
    s.inject = inject;
    s.flits = flits;
    s.gap = timing.link_delay;
    s.head_eject = inject + (latch_count + 1) * timing.link_delay + latch_count * timing.router_delay;
    return s;
}

std::vector<RouterUpdate> path_updates(const std::vector<RouterId> &route,
                                       const std::vector<RouterId> &latches,
                                       const Platform &platform) {
    std::vector<RouterUpdate> out;
    for (std::size_t i = 1; i < route.size(); ++i) {
        const auto back = platform.port_towards(route[i], route[i - 1]);
        if (!back) throw InvariantViolation("route is not mesh-adjacent");
        RegisterUpdate u;
        u.entry = *back;
        if (i + 1 == route.size()) {
            u.select = RegisterSelect::local;
            u.local_connect = true;
        } else {
            const auto fwd = platform.port_towards(route[i], route[i + 1]);
            if (!fwd) throw InvariantViolation("route is not mesh-adjacent");
            u.select = RegisterSelect::non_local;
            u.output = port_code(*fwd);
            u.delay = std::find(latches.begin(), latches.end(), route[i]) != latches.end();
        }
        out.push_back({route[i], u});
    }
    return out;
}

bool registers_form_chain(const std::vector<Router> &routers, const std::vector<RouterId> &route,
                          MessageId msg, const Platform &platform) {
    if (route.size() < 2) return true;
    auto first = platform.port_towards(route[0], route[1]);
    if (!first) return false;
    RouterId here = route[1];
    Port arriving = opposite(*first);
    for (std::size_t i = 1; i < route.size(); ++i) {
        if (here != route[i]) return false;
        const Router &r = routers.at(static_cast<std::size_t>(here));
        if (r.owner_of(arriving) != msg) return false;
        const auto out = r.output_for(arriving);
        if (!out) return false;
        if (*out == Port::Local) return i + 1 == route.size();
        const auto next = platform.neighbor(here, *out);
        if (!next) return false;
        here = *next;
        arriving = opposite(*out);
    }
    return false;
}

}  // namespace arsmart
