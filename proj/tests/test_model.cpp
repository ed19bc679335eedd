// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "arsmart/error.hpp"
#include "arsmart/model.hpp"
#include "arsmart/workload_file.hpp"
#include "doctest.h"

using namespace arsmart;

TEST_CASE("platform construction") {
    SUBCASE("8x8 with one 8x8 cluster") {
        const auto p = build_platform(8, 8, {1.0}, 8);
        CHECK(p.router_count() == 64);
        CHECK(p.cluster_count() == 1);
        CHECK(p.cluster_routers(0).size() == 64);
        // a single cluster degenerates to row-major numbering
        CHECK(p.id_of({2, 3}) == 19);
    }
    SUBCASE("8x8 with 4x4 clusters") {
        const auto p = build_platform(8, 4, {1.0}, 8);
        CHECK(p.cluster_count() == 4);
        for (int c = 0; c < 4; ++c) CHECK(p.cluster_routers(c).size() == 16);
        CHECK(p.cluster_of(31) == 1);
        CHECK(p.coord_of(31) == Coord{3, 7});
        CHECK(p.cluster_of(p.id_of({0, 7})) == 1);  // top-right
        CHECK(p.id_of({0, 3}) == 3);
        CHECK(p.id_of({1, 3}) == 7);   // east edge of cluster 0
        CHECK(p.id_of({0, 4}) == 16);  // first router of cluster 1
        CHECK(p.id_of({7, 7}) == 63);
    }
    SUBCASE("single router") {
        const auto p = build_platform(1, 1, {1.0}, 1);
        CHECK(p.router_count() == 1);
        CHECK(p.cluster_count() == 1);
        CHECK_FALSE(p.neighbor(0, Port::E).has_value());
    }
    SUBCASE("invalid dimensions") {
        CHECK_THROWS_AS(build_platform(8, 3, {1.0}, 8), ConfigError);
        CHECK_THROWS_AS(build_platform(0, 1, {1.0}, 8), ConfigError);
        CHECK_THROWS_AS(build_platform(16, 16, {1.0}, 8), ConfigError);
        CHECK_THROWS_AS(build_platform(4, 4, {1.0}, 0), ConfigError);
        CHECK_THROWS_AS(build_platform(4, 4, {0.0}, 8), ConfigError);
        CHECK_THROWS_AS(build_platform(4, 4, {1.0, 2.0}, 8), ConfigError);
        TimingParams t;
        t.link_delay = 0;
        CHECK_THROWS_AS(build_platform(4, 4, {1.0}, 8, t), ConfigError);
    }
}

TEST_CASE("router numbering is a bijection") {
    for (int n : {1, 2, 4, 8, 16}) {
        for (int cd : {1, 2, 4, 8}) {
            if (cd > n || n % cd != 0) continue;
            const auto p = build_platform(n, cd, {1.0}, 8);
            std::set<RouterId> ids;
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) {
                    const RouterId id = p.id_of({r, c});
                    CHECK(p.coord_of(id) == Coord{r, c});
                    ids.insert(id);
                }
            }
            CHECK(ids.size() == static_cast<std::size_t>(n * n));
            CHECK(*ids.begin() == 0);
            CHECK(*ids.rbegin() == n * n - 1);
        }
    }
}

TEST_CASE("neighbours and ports") {
    const auto p = build_platform(8, 4, {1.0}, 8);
    const RouterId r7 = p.id_of({1, 3});
    CHECK(p.neighbor(r7, Port::E) == p.id_of({1, 4}));
    CHECK(p.neighbor(r7, Port::N) == p.id_of({0, 3}));
    CHECK(p.port_towards(r7, p.id_of({2, 3})) == Port::S);
    CHECK_FALSE(p.port_towards(r7, p.id_of({3, 3})).has_value());
    CHECK_FALSE(p.neighbor(0, Port::N).has_value());
    CHECK_FALSE(p.neighbor(0, Port::W).has_value());
    CHECK(opposite(Port::E) == Port::W);
}

TEST_CASE("packetize") {
    CHECK(packetize(10, 4) == std::vector<int>{4, 4, 2});
    CHECK(packetize(4, 4) == std::vector<int>{4});
    CHECK(packetize(1, 10) == std::vector<int>{1});
    CHECK_THROWS_AS(packetize(0, 4), InvalidMessage);
    CHECK_THROWS_AS(packetize(4, 0), InvalidMessage);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> size(1, 5000);
    std::uniform_int_distribution<int> pkg(1, 64);
    for (int i = 0; i < 2000; ++i) {
        const auto s = size(rng);
        const int k = pkg(rng);
        const auto pk = packetize(s, k);
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < pk.size(); ++j) {
            sum += pk[j];
            if (j + 1 < pk.size()) CHECK(pk[j] == k);
            CHECK(pk[j] >= 1);
            CHECK(pk[j] <= k);
        }
        CHECK(sum == s);
        CHECK(static_cast<std::int64_t>(pk.size()) == (s + k - 1) / k);
    }
}

TEST_CASE("execution time") {
    CHECK(execution_time(8192, 1.0) == 8192);
    CHECK(execution_time(10, 4.0) == 3);
    CHECK(execution_time(0, 1.0) == 0);
    CHECK(execution_time(3, 0.1) == 30);
    CHECK_THROWS_AS(execution_time(10, 0.0), ConfigError);
}

TEST_CASE("task graph") {
    TaskGraph g;
    const auto a = g.add_task("a", 1);
    const auto b = g.add_task("b", 2);
    const auto c = g.add_task("c", 3);
    g.add_edge(a, c, 5);
    g.add_edge(b, c, 5);
    CHECK(g.topological_order() == std::vector<TaskId>{0, 1, 2});
    CHECK(g.in_edges(c).size() == 2);
    CHECK(g.is_acyclic());
    CHECK_THROWS_AS(g.add_edge(a, a, 1), GraphError);
    CHECK_THROWS_AS(g.add_edge(a, 9, 1), GraphError);
    CHECK_THROWS_AS(g.add_edge(a, b, 0), GraphError);
    CHECK_THROWS_AS(g.add_task("a", 1), GraphError);
    CHECK_THROWS_AS(g.add_task("x", -1), GraphError);
    g.add_edge(c, a, 1);
    CHECK_FALSE(g.is_acyclic());
    CHECK_THROWS_AS(g.topological_order(), GraphError);
}

TEST_CASE("mapping validation") {
    TaskGraph g;
    g.add_task("a", 1);
    g.add_task("b", 1);
    const auto p = build_platform(4, 4, {1.0}, 8);
    Mapping m{{{0, 0}}};
    CHECK_THROWS_AS(m.validate(g, p), ConfigError);
    m.placement.push_back({4, 0});
    CHECK_THROWS_AS(m.validate(g, p), ConfigError);
    m.placement.back() = {3, 3};
    CHECK_NOTHROW(m.validate(g, p));
}

namespace {
const char *kSample = R"(# two producers, one consumer
task A 10
task B 20
task C 0
edge A C 8
edge B C 4   # trailing comment
map A 0 0
map B 0 1
map C 1 1
rate 0 1 2.5
)";
}

TEST_CASE("workload file parse and round trip") {
    std::istringstream in(kSample);
    const Workload w = parse_workload(in);
    REQUIRE(w.graph.task_count() == 3);
    CHECK(w.graph.edges()[0].size_flits == 8);
    CHECK(w.mapping.at(2) == Coord{1, 1});
    REQUIRE(w.rates.size() == 1);
    CHECK(w.rates[0].second == doctest::Approx(2.5));

    std::ostringstream out;
    write_workload(out, w);
    std::istringstream back(out.str());
    CHECK(parse_workload(back) == w);

    Platform p = build_platform(4, 4, {1.0}, 8);
    w.apply_rates(p);
    CHECK(p.rate(Coord{0, 1}) == doctest::Approx(2.5));

    const auto path = std::filesystem::temp_directory_path() / "arsmart_model_roundtrip.dag";
    write_workload_file(path.string(), w);
    CHECK(read_workload_file(path.string()) == w);
    std::filesystem::remove(path);
}

TEST_CASE("workload file errors carry line numbers") {
    auto line_of = [](const std::string &text) {
        std::istringstream in(text);
        try {
            parse_workload(in);
        } catch (const ParseError &e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("task A 1\nbogus 1\n") == 2);
    CHECK(line_of("task A 1\ntask B x\n") == 2);
    CHECK(line_of("task A 1\nedge A Z 3\n") == 2);
    CHECK(line_of("task A 1\nmap A 0 0\nmap A 1 1\n") == 3);
    CHECK(line_of("task A 1\nmap A 0 0 9\n") == 2);
    CHECK(line_of("task A 1\ntask B 1\nedge A B 0\n") == 3);
    std::istringstream partial("task A 1\ntask B 1\nmap A 0 0\n");
    CHECK_THROWS_AS(parse_workload(partial), ParseError);
    std::istringstream cyclic("task A 1\ntask B 1\nedge A B 1\nedge B A 1\nmap A 0 0\nmap B 0 1\n");
    CHECK_THROWS_AS(parse_workload(cyclic), ParseError);
    CHECK_THROWS_AS(read_workload_file("/nonexistent/x.dag"), ParseError);
}
