// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include <random>

#include "arsmart/error.hpp"
#include "arsmart/router.hpp"
#include "arsmart/routing.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace arsmart;

namespace {

// 0 -> 7 -> (cluster 1) -> 31 -> (cluster 3) -> 63 on the 8x8 mesh with 4x4 clusters
Route cross_mesh_route(const Platform &p) {
    const Coord path[] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 3}, {1, 4}, {1, 5}, {2, 5}, {2, 6}, {1, 6},
                          {1, 7}, {2, 7}, {3, 7}, {4, 7}, {5, 7}, {6, 7}, {7, 7}};
    Route r;
    for (Coord c : path) r.push_back(p.id_of(c));
    return r;
}

}  // namespace

TEST_CASE("port codes and register entries") {
    CHECK(static_cast<int>(port_code(Port::S)) == 1);
    CHECK(static_cast<int>(port_code(Port::N)) == 2);
    CHECK(static_cast<int>(port_code(Port::E)) == 3);
    CHECK(static_cast<int>(port_code(Port::W)) == 4);
    CHECK_THROWS_AS(port_code(Port::Local), DecodeError);
    CHECK(entry_index(Port::N) == 1);
    for (Port p : kMeshPorts) CHECK(entry_port(entry_index(p)) == p);
}

TEST_CASE("decode router-configure words") {
    SUBCASE("N -> S with a one-cycle hold") {
        const auto u = decode_config(0b1'001'01'0);
        CHECK(u.select == RegisterSelect::non_local);
        CHECK(u.entry == Port::N);
        CHECK(u.output == PortCode::S);
        CHECK(u.delay);
        Router r(31);
        r.apply(u, 5);
        CHECK(r.output_for(Port::N) == Port::S);
        CHECK(r.holds_flit_at(Port::N));
    }
    SUBCASE("N ejects to the local PE") {
        const auto u = decode_config(0b000'1'01'1);
        CHECK(u.select == RegisterSelect::local);
        CHECK(u.entry == Port::N);
        CHECK(u.local_connect);
        Router r(63);
        r.apply(u, 5);
        CHECK(r.output_for(Port::N) == Port::Local);
    }
    SUBCASE("disconnection") {
        const auto u = decode_config(0);
        CHECK(u.output == PortCode::disconnected);
        CHECK_FALSE(u.delay);
        Router r(0);
        r.apply(u, 1);
        CHECK_FALSE(r.output_for(u.entry).has_value());
        CHECK_FALSE(r.owner_of(u.entry).has_value());
    }
    SUBCASE("local words ignore bits 4-6") {
        CHECK(decode_config(0b111'1'01'1) == decode_config(0b000'1'01'1));
    }
    SUBCASE("reserved codes and oversized words") {
        for (int code = 5; code <= 7; ++code) {
            CHECK_THROWS_AS(decode_config(static_cast<std::uint8_t>(code << 3)), DecodeError);
        }
        CHECK_THROWS_AS(decode_config(0x80), DecodeError);
    }
}

TEST_CASE("encode and decode are inverse on every valid word") {
    int valid = 0;
    for (int w = 0; w < 128; ++w) {
        const auto word = static_cast<std::uint8_t>(w);
        RegisterUpdate u;
        try {
            u = decode_config(word);
        } catch (const DecodeError &) {
            continue;
        }
        ++valid;
        CHECK(decode_config(encode_config(u)) == u);
        if (u.select == RegisterSelect::non_local) CHECK(encode_config(u) == word);
    }
    // 4 entries x 5 codes x 2 delay flags, plus 4 entries x 16 ignored-bit patterns
    CHECK(valid == 40 + 64);
}

TEST_CASE("router apply and conflicts") {
    Router r(9);
    RegisterUpdate ns{RegisterSelect::non_local, Port::N, PortCode::S, false, false};
    r.apply(ns, 1);
    CHECK(r.output_for(Port::N) == Port::S);
    CHECK(r.owner_of(Port::N) == 1);

    SUBCASE("fan-in onto one output") {
        RegisterUpdate we{RegisterSelect::non_local, Port::W, PortCode::E, false, false};
        r.apply(we, 2);
        RegisterUpdate ne{RegisterSelect::non_local, Port::E, PortCode::E, false, false};
        CHECK_THROWS_AS(r.apply(ne, 3), ConfigConflict);
        RegisterUpdate se{RegisterSelect::non_local, Port::S, PortCode::E, false, false};
        CHECK_THROWS_AS(r.apply(se, 3), ConfigConflict);
    }
    SUBCASE("entry held by another message") {
        RegisterUpdate nw{RegisterSelect::non_local, Port::N, PortCode::W, false, false};
        CHECK_THROWS_AS(r.apply(nw, 2), ConfigConflict);
    }
    SUBCASE("local ejection excludes forwarding on the same input") {
        RegisterUpdate nl{RegisterSelect::local, Port::N, PortCode::disconnected, true, false};
        CHECK_THROWS_AS(r.apply(nl, 1), ConfigConflict);
    }
    SUBCASE("clear") {
        CHECK(r.clear(2) == 0);
        CHECK(r.clear(1) == 1);
        CHECK_FALSE(r.output_for(Port::N).has_value());
        RegisterUpdate nw{RegisterSelect::non_local, Port::N, PortCode::W, false, false};
        CHECK_NOTHROW(r.apply(nw, 2));
    }
}

TEST_CASE("configuration slots serialise one update per cycle") {
    Router r(0);
    CHECK(r.reserve_config_slot(10) == 10);
    CHECK(r.reserve_config_slot(10) == 11);
    CHECK(r.reserve_config_slot(10) == 12);
    CHECK(r.reserve_config_slot(20) == 20);
}

TEST_CASE("latch points") {
    SUBCASE("10 hops in one cluster latch at hop 8") {
        const auto p = build_platform(8, 8, {1.0}, 8);
        Route r;
        for (int c = 0; c < 8; ++c) r.push_back(p.id_of({0, c}));
        for (int row = 1; row <= 3; ++row) r.push_back(p.id_of({row, 7}));
        REQUIRE(r.size() == 11);
        CHECK(latch_points(r, 8, p) == std::vector<RouterId>{r[8]});
    }
    SUBCASE("cross-cluster route latches at its exit routers") {
        const auto p = build_platform(8, 4, {1.0}, 8);
        const Route r = cross_mesh_route(p);
        REQUIRE(is_valid_route(r, p));
        CHECK(latch_points(r, 8, p) == std::vector<RouterId>{7, 31});
    }
    SUBCASE("short route") {
        const auto p = build_platform(8, 8, {1.0}, 8);
        CHECK(latch_points({0, 1, 2, 3}, 8, p).empty());
        CHECK(latch_points({0}, 8, p).empty());
    }
    SUBCASE("property: agrees with the oracle and bounds every run by hpc") {
        std::mt19937_64 rng(3);
        for (int cd : {2, 4, 8}) {
            const auto p = build_platform(8, cd, {1.0}, 8);
            std::uniform_int_distribution<int> id(0, 63), hpc(1, 8);
            for (int i = 0; i < 400; ++i) {
                const RouterId a = id(rng), b = id(rng);
                const int h = hpc(rng);
                const Route r = route_xy(a, b, p);
                const auto l = latch_points(r, h, p);
                CHECK(l == oracle::latches(r, h, p));
                CHECK(longest_unlatched_segment(r, l) <= h);
            }
        }
    }
}

TEST_CASE("longest unlatched segment") {
    CHECK(longest_unlatched_segment({0, 1, 2, 3, 4}, {}) == 4);
    CHECK(longest_unlatched_segment({0, 1, 2, 3, 4}, {1}) == 3);
    CHECK(longest_unlatched_segment({0, 1, 2, 3, 4}, {2}) == 2);
    CHECK(longest_unlatched_segment({0}, {}) == 0);
}

TEST_CASE("bypass traversal schedule") {
    TimingParams t;
    SUBCASE("1 flit, no latch") {
        const auto s = traverse(1, 0, t, 0);
        CHECK(s.head_eject == 1);
        CHECK(s.tail_eject() == 1);
    }
    SUBCASE("4 flits, 1 latch") {
        const auto s = traverse(4, 1, t, 0);
        CHECK(s.head_eject == 3);
        CHECK(s.tail_eject() == 6);
    }
    SUBCASE("1 flit through two latches") {
        CHECK(traverse(1, 2, t, 0).head_eject == 5);
    }
    SUBCASE("constant gap L_w") {
        t.link_delay = 3;
        t.router_delay = 2;
        const auto s = traverse(6, 2, t, 100);
        CHECK(s.head_eject == 100 + 3 * 3 + 2 * 2);
        for (int f = 1; f < 6; ++f) CHECK(s.eject(f) - s.eject(f - 1) == 3);
    }
    CHECK_THROWS_AS(traverse(0, 0, t, 0), InvalidMessage);
}

TEST_CASE("path updates form a register chain") {
    const auto p = build_platform(8, 4, {1.0}, 8);
    const Route r = cross_mesh_route(p);
    const auto l = latch_points(r, 8, p);
    const auto ups = path_updates(r, l, p);
    REQUIRE(ups.size() == r.size() - 1);
    CHECK(ups.front().router == r[1]);
    CHECK(ups.back().update.select == RegisterSelect::local);
    int delays = 0;
    for (const auto &u : ups) delays += u.update.delay ? 1 : 0;
    CHECK(delays == 2);

    std::vector<Router> routers;
    for (RouterId i = 0; i < 64; ++i) routers.emplace_back(i);
    CHECK_FALSE(registers_form_chain(routers, r, 4, p));
    for (const auto &u : ups) routers[static_cast<std::size_t>(u.router)].apply(u.update, 4);
    CHECK(registers_form_chain(routers, r, 4, p));
    CHECK_FALSE(registers_form_chain(routers, r, 5, p));
    // 7 latches the flit arriving from (0,3) before forwarding east
    CHECK(routers[7].holds_flit_at(Port::N));
    CHECK(routers[7].output_for(Port::N) == Port::E);

    routers[static_cast<std::size_t>(r[5])].clear(4);
    CHECK_FALSE(registers_form_chain(routers, r, 4, p));
}
