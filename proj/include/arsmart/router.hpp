// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "arsmart/model.hpp"

namespace arsmart {

// 3-bit output selector stored in a non-local register entry.
enum class PortCode : std::uint8_t { disconnected = 0, S = 1, N = 2, E = 3, W = 4 };

PortCode port_code(Port p);           // Local has no code; throws DecodeError
std::optional<Port> decode_port(PortCode c);  // nullopt for `disconnected`

// Register entries are addressed by input port with a 2-bit index equal to the
// port's PortCode minus one: 00 = S, 01 = N, 10 = E, 11 = W.
int entry_index(Port input);
Port entry_port(int index);

enum class RegisterSelect : std::uint8_t { non_local = 0, local = 1 };

struct RegisterUpdate {
    RegisterSelect select = RegisterSelect::non_local;
    Port entry = Port::N;  // input port
    PortCode output = PortCode::disconnected;  // non-local only
    bool local_connect = false;                // local only
    bool delay = false;                        // non-local only

    bool operator==(const RegisterUpdate &) const = default;
};

// router-configure word, 7 bits:
//   bit 0      register select (0 non-local, 1 local)
//   bits 1-2   entry (input port)
//   non-local: bits 3-5 PortCode, bit 6 delay-register flag
//   local:     bit 3 connect-to-PE, bits 4-6 ignored
RegisterUpdate decode_config(std::uint8_t word);  // throws DecodeError
std::uint8_t encode_config(const RegisterUpdate &u);

struct RouterConfigRegisters {
    std::array<PortCode, 4> non_local{};  // by entry index
    std::array<bool, 4> local{};
    std::array<bool, 4> delay{};

    bool operator==(const RouterConfigRegisters &) const = default;
};

class Router {
   public:
    explicit Router(RouterId id = 0) : id_(id) { owner_.fill(-1); }

    RouterId id() const { return id_; }
    const RouterConfigRegisters &registers() const { return regs_; }

    // Writes one register entry on behalf of `msg`. Throws ConfigConflict when another
    // input already drives the same output, or the entry is held by another message.
    void apply(const RegisterUpdate &u, MessageId msg);
    // clears every entry owned by `msg`; returns how many were cleared
    int clear(MessageId msg);

    // output the input port currently forwards to: a mesh port, Local, or nullopt
    std::optional<Port> output_for(Port input) const;
    bool holds_flit_at(Port input) const { return regs_.delay[static_cast<std::size_t>(entry_index(input))]; }
    std::optional<MessageId> owner_of(Port input) const;

    // The configuration port accepts one update per cycle. Returns the cycle at which an
    // update issued at `issue` is applied.
    Cycle reserve_config_slot(Cycle issue);

   private:
    RouterId id_;
    RouterConfigRegisters regs_;
    std::array<MessageId, 4> owner_{};
    Cycle next_config_cycle_ = 0;
};

// Routers where flits are latched in a delay register: every cluster-exit router
// (except the source) plus every router whose hop distance from the last latch or the
// source is a positive multiple of hpc_max. The destination never latches.
std::vector<RouterId> latch_points(const std::vector<RouterId> &route, int hpc_max,
                                   const Platform &platform);

// Longest run of hops between consecutive latch points (or route ends).
int longest_unlatched_segment(const std::vector<RouterId> &route,
                              const std::vector<RouterId> &latches);

// Per-flit ejection times of a bypass transmission injected at `inject`.
struct TraversalSchedule {
    Cycle inject = 0;
    Cycle head_eject = 0;
    Cycle gap = 1;
    std::int64_t flits = 0;

    Cycle eject(std::int64_t flit) const { return head_eject + flit * gap; }
    Cycle tail_eject() const { return eject(flits - 1); }
};

TraversalSchedule traverse(std::int64_t flits, int latch_count, const TimingParams &timing,
                           Cycle inject);

// Register updates that realise `route` for one message. The source router is driven
// directly by its PE and needs no entry; every later router gets one entry.
struct RouterUpdate {
    RouterId router = 0;
    RegisterUpdate update;
};
std::vector<RouterUpdate> path_updates(const std::vector<RouterId> &route,
                                       const std::vector<RouterId> &latches,
                                       const Platform &platform);

// Follows the configured registers from the source's first hop and returns true when
// they lead to a local ejection at the route destination along exactly `route`.
bool registers_form_chain(const std::vector<Router> &routers, const std::vector<RouterId> &route,
                          MessageId msg, const Platform &platform);

}  // namespace arsmart
