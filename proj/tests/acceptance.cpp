// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

// One PASS/FAIL line per acceptance criterion. A criterion passes only when its check
// holds and it finishes inside its time budget. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "arsmart/controller.hpp"
#include "arsmart/engine.hpp"
#include "arsmart/routing.hpp"
#include "arsmart/trace_check.hpp"
#include "arsmart/workload.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace arsmart;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

// Every ArSMART message simulated below, for the configuration latency criterion.
struct ConfSample {
    Cycle l_conf;
    int clusters;
};
std::vector<ConfSample> conf_samples;

// The bound assumes unit coordination and release delays.
void record_conf(const MetricsReport &r, const Platform &p) {
    const auto &t = p.timing();
    if (r.noc != noc_name(NocType::arsmart) || t.cluster_coord_delay != 1 || t.release_delay != 1) return;
    for (const auto &m : r.messages) {
        if (m.src != m.dst) conf_samples.push_back({m.l_conf, m.clusters});
    }
}

// `spent` is time already used on shared setup charged to this criterion.
void criterion(int n, const char *name, double limit_s, const std::function<Outcome()> &body, double spent = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = spent + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= limit_s;
    const bool pass = o.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.2fs / %.0fs%s]\n", pass ? "PASS" : "FAIL", n, name, o.detail.c_str(),
                s, limit_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

template <typename... A>
std::string fmt(const char *f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

SimResult run(const fixture::Case &c, NocType noc, RoutingAlgo routing = RoutingAlgo::xy, bool trace = false) {
    SimConfig cfg;
    cfg.noc = noc;
    cfg.routing = routing;
    cfg.trace = trace;
    auto r = simulate(c.graph, c.mapping, c.platform, cfg);
    record_conf(r.report, c.platform);
    return r;
}

int threads() { return static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1U, 8U)); }

ActiveSet random_active_set(const Platform &p, std::mt19937_64 &rng, int count, std::int64_t max_size) {
    std::uniform_int_distribution<RouterId> id(0, p.router_count() - 1);
    std::uniform_int_distribution<std::int64_t> size(1, max_size);
    ActiveSet out;
    for (int i = 0; i < count; ++i) {
        RouterId a = id(rng), b = id(rng);
        while (b == a) b = id(rng);
        const auto paths = oracle::simple_paths(a, b, p);
        out.push_back({100 + i, paths[std::uniform_int_distribution<std::size_t>(0, paths.size() - 1)(rng)],
                       size(rng), 0});
    }
    return out;
}

Outcome two_message_timeline() {
    const auto c = fixture::two_message_timeline();
    const auto ars = run(c, NocType::arsmart).report.schedule_length;
    const auto smart = run(c, NocType::smart).report.schedule_length;
    return {ars == 7 && smart > 7, fmt("arsmart %lld (want 7), smart %lld (want > 7)", static_cast<long long>(ars),
                                       static_cast<long long>(smart))};
}

Outcome zero_contention() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim_pick(0, 3), small(0, 3), hpc(1, 8), pkg(1, 6);
    std::uniform_int_distribution<std::int64_t> flits(1, 40), work(0, 50);
    const int dims[] = {2, 4, 6, 8};
    const NocType modes[] = {NocType::arsmart, NocType::smart, NocType::traditional};
    int mismatches = 0, packets_checked = 0;
    for (int i = 0; i < 200; ++i) {
        const int n = dims[dim_pick(rng)];
        std::vector<int> cds;
        for (int d = 1; d <= n; ++d) {
            if (n % d == 0) cds.push_back(d);
        }
        const int cd = cds[std::uniform_int_distribution<std::size_t>(0, cds.size() - 1)(rng)];
        TimingParams t;
        t.router_delay = small(rng);
        t.link_delay = small(rng) + 1;
        t.prep_delay = small(rng) * 3;
        t.release_delay = small(rng);
        t.cluster_coord_delay = small(rng);
        t.package_size = pkg(rng);
        const int h = hpc(rng);
        const auto p = build_platform(n, cd, {1.0}, h, t);
        std::uniform_int_distribution<int> coord(0, n - 1);
        Coord a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
        while (b == a) b = {coord(rng), coord(rng)};
        const auto c = fixture::single_message(p, a, b, work(rng), flits(rng));
        const auto packets = packetize(c.graph.edges()[0].size_flits, t.package_size);
        const Route xy = oracle::xy(a, b, p);
        const auto hops = static_cast<std::int64_t>(xy.size()) - 1;
        for (NocType m : modes) {
            const auto result = run(c, m);
            const auto &rec = result.report.messages.at(0);
            if (rec.packet_latency.size() != packets.size()) {
                ++mismatches;
                continue;
            }
            for (std::size_t k = 0; k < packets.size(); ++k) {
                Rational expect;
                if (m == NocType::traditional) {
                    expect = oracle::traditional_latency(t.router_delay, t.link_delay, hops + 1, packets[k], 0);
                } else if (m == NocType::smart) {
                    expect = oracle::smart_latency(t.router_delay, t.link_delay, 0, (hops - 1) / h, packets[k], 0);
                } else {
                    const auto lat = static_cast<std::int64_t>(oracle::latches(xy, h, p).size());
                    const auto conf = oracle::uncontended_lconf(oracle::distinct_clusters(xy, p), t);
                    expect = oracle::arsmart_latency(conf, static_cast<std::int64_t>(packets.size()), lat,
                                                     t.router_delay, t.link_delay, packets[k], 0);
                }
                ++packets_checked;
                mismatches += rec.packet_latency[k] == expect ? 0 : 1;
            }
        }
    }
    return {mismatches == 0, fmt("200 cases x 3 modes, %d packets, %d mismatches", packets_checked, mismatches)};
}

Outcome r1_optimality() {
    std::mt19937_64 rng(31337);
    int bad = 0, sets = 0;
    for (int n : {3, 4}) {
        const auto p = build_platform(n, n, {1.0}, 8);
        std::uniform_int_distribution<RouterId> id(0, p.router_count() - 1);
        std::uniform_int_distribution<int> count(0, 8);
        for (int trial = 0; trial < 100; ++trial, ++sets) {
            const ActiveSet active = random_active_set(p, rng, count(rng), 500);
            RouterId a = id(rng), b = id(rng);
            while (b == a) b = id(rng);
            PlanOptions exact;
            exact.cost = CostModel::message_set;
            const auto r = route_r1(a, b, active, 0, p, exact);
            const auto best = oracle::min_over_paths(oracle::simple_paths(a, b, p),
                                                     [&](const Route &x) { return oracle::set_cost(x, active, 0); });
            if (!is_valid_route(r.route, p) || oracle::set_cost(r.route, active, 0) != best) ++bad;
        }
    }
    return {bad == 0, fmt("%d message sets on 3x3 and 4x4, %d suboptimal", sets, bad)};
}

struct BlockingStats {
    std::int64_t intervals = 0, t1_violations = 0, sources = 0, t2_violations = 0, worst_excess = 0;
    std::int64_t runs = 0;
};

Outcome holder_bound(const BlockingStats &s) {
    return {s.t1_violations == 0 && s.intervals > 0,
            fmt("%lld runs, %lld blocking intervals, %lld longer than the holder's L_w/oc",
                static_cast<long long>(s.runs), static_cast<long long>(s.intervals),
                static_cast<long long>(s.t1_violations))};
}

Outcome sharer_bound(const BlockingStats &s) {
    return {s.t2_violations == 0,
            fmt("%lld messages, %lld over the sharer bound (worst excess %lld cycles)",
                static_cast<long long>(s.sources), static_cast<long long>(s.t2_violations),
                static_cast<long long>(s.worst_excess))};
}

BlockingStats blocking_runs() {
    BlockingStats s;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const auto w = fixture::scaled_synthetic(seed);
        const auto p = fixture::synthetic_platform(w);
        SimConfig cfg;
        cfg.routing = seed % 2 ? RoutingAlgo::r1 : RoutingAlgo::xy;
        cfg.seed = seed;
        const auto r = simulate(w.graph, w.mapping, p, cfg);
        record_conf(r.report, p);
        ++s.runs;
        for (const auto &b : r.diagnostics.blocking) {
            ++s.intervals;
            s.t1_violations += b.end - b.begin <= b.holder_woc ? 0 : 1;
        }
        for (const auto &sb : r.diagnostics.source_blocking) {
            ++s.sources;
            if (sb.blocked > sb.bound) {
                ++s.t2_violations;
                s.worst_excess = std::max(s.worst_excess, sb.blocked - sb.bound);
            }
        }
    }
    return s;
}

Outcome invariants_and_determinism() {
    const std::pair<NocType, RoutingAlgo> modes[] = {
        {NocType::arsmart, RoutingAlgo::xy}, {NocType::arsmart, RoutingAlgo::r1}, {NocType::arsmart, RoutingAlgo::r2},
        {NocType::smart, RoutingAlgo::xy},   {NocType::smart, RoutingAlgo::r1},   {NocType::traditional, RoutingAlgo::xy}};
    int runs = 0, bad_traces = 0, nondeterministic = 0, segment = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto w = fixture::scaled_synthetic(seed, seed % 3 == 0 ? MappingPolicy::round_robin
                                                                     : MappingPolicy::contention_aware);
        const auto p = fixture::synthetic_platform(w);
        for (const auto &[noc, routing] : modes) {
            SimConfig cfg;
            cfg.noc = noc;
            cfg.routing = routing;
            cfg.seed = seed;
            cfg.trace = true;
            const auto a = simulate(w.graph, w.mapping, p, cfg);
            const auto b = simulate(w.graph, w.mapping, p, cfg);
            record_conf(a.report, p);
            ++runs;
            bad_traces += validate_trace(a.trace).empty() ? 0 : 1;
            nondeterministic += a.trace.digest() == b.trace.digest() ? 0 : 1;
            if (noc == NocType::arsmart && a.diagnostics.max_unlatched_segment > p.hpc_max()) ++segment;
        }
    }
    return {bad_traces == 0 && nondeterministic == 0 && segment == 0,
            fmt("%d runs: %d invalid traces, %d digest mismatches, %d unlatched segments over HPC_max", runs,
                bad_traces, nondeterministic, segment)};
}

Outcome detour_ratio() {
    const auto c = fixture::overlapping_pairs();
    const auto xy = run(c, NocType::arsmart, RoutingAlgo::xy).report.schedule_length;
    const auto r1 = run(c, NocType::arsmart, RoutingAlgo::r1).report.schedule_length;
    const double ratio = static_cast<double>(r1) / static_cast<double>(xy);
    return {ratio >= 0.60 && ratio <= 0.90,
            fmt("r1 %lld / xy %lld = %.3f (want [0.60, 0.90])", static_cast<long long>(r1),
                static_cast<long long>(xy), ratio)};
}

Outcome distance_insensitivity() {
    SweepSpec s;
    s.variable = SweepVariable::distance;
    s.values = {1, 2, 3, 4, 5};
    s.base.node_count = 30;
    s.base.link_count = 29;
    s.base.avg_task_volume = 8192;
    s.base.avg_message_size = 40;
    s.base.package_size = 10;
    s.base.heterogeneity_degree = 0;
    const int reps = 10;
    std::vector<double> ars, smart;
    for (double d : s.values) {
        Rational sum{0};
        std::int64_t n = 0;
        double smart_sum = 0;
        for (int rep = 0; rep < reps; ++rep) {
            const auto [w, p] = sweep_point(s, d, rep);
            SimConfig cfg;
            cfg.routing = RoutingAlgo::r1;
            const auto a = simulate(w.graph, w.mapping, p, cfg).report;
            record_conf(a, p);
            // only messages short enough to cross without a latch
            for (const auto &m : a.messages) {
                if (m.src == m.dst || m.latches != 0) continue;
                for (const auto &l : m.packet_latency) {
                    sum += l;
                    ++n;
                }
            }
            cfg.noc = NocType::smart;
            cfg.routing = RoutingAlgo::xy;
            smart_sum += to_double(simulate(w.graph, w.mapping, p, cfg).report.avg_network_latency);
        }
        ars.push_back(n ? to_double(sum / n) : 0.0);
        smart.push_back(smart_sum / reps);
    }
    const double ars_slope = oracle::least_squares_slope(s.values, ars);
    const double smart_slope = oracle::least_squares_slope(s.values, smart);
    std::ostringstream means;
    for (double v : ars) means << ' ' << fmt("%.2f", v);
    return {ars_slope <= 0.15 && smart_slope > 0,
            fmt("arsmart slope %.3f cycles/hop (want <= 0.15; means%s), smart slope %.3f (want > 0)", ars_slope,
                means.str().c_str(), smart_slope)};
}

Outcome message_size_crossover() {
    SweepSpec s;
    s.variable = SweepVariable::message_size;
    s.values = {1, 1.5, 2, 3, 4, 6};
    s.repetitions = 10;
    s.base.node_count = 30;
    s.base.link_count = 60;
    s.base.avg_task_volume = 8192;
    s.threads = threads();
    const auto rows = run_sweep(s);
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        const auto &a = rows[i];
        const auto &b = rows[i + 1];
        d << fmt(" %.1fp:%.2f/%.2f", a.value, a.avg_latency, b.avg_latency);
        if (a.value >= 2 && !(a.avg_latency < b.avg_latency)) ok = false;
    }
    return {ok, "arsmart/smart latency at" + d.str() + " (want arsmart lower from 2 packets)"};
}

Outcome air_scaling() {
    SweepSpec s;
    s.variable = SweepVariable::air;
    s.values = {1, 2, 4, 8};
    s.repetitions = 5;
    s.base.node_count = 30;
    s.base.link_count = 60;
    s.base.avg_task_volume = 8192;
    s.base.avg_message_size = 8192;
    s.threads = threads();
    s.modes = {{NocType::arsmart, RoutingAlgo::r1}, {NocType::arsmart, RoutingAlgo::xy}, {NocType::smart, RoutingAlgo::xy}};
    const auto rows = run_sweep(s);
    const auto &r1 = rows[rows.size() - 3];
    const auto &axy = rows[rows.size() - 2];
    const auto &sxy = rows[rows.size() - 1];
    const double vs_axy = 1.0 - r1.schedule_length / axy.schedule_length;
    const double vs_sxy = 1.0 - r1.schedule_length / sxy.schedule_length;
    return {vs_axy >= 0.10 && vs_sxy >= 0.15,
            fmt("AIR %.0f: r1 %.0f, arsmart-xy %.0f (%.1f%% shorter, want >= 10%%), smart-xy %.0f (%.1f%% shorter, "
                "want >= 15%%)",
                r1.value, r1.schedule_length, axy.schedule_length, 100 * vs_axy, sxy.schedule_length, 100 * vs_sxy)};
}

Outcome energy_comparison() {
    const auto w = fixture::scaled_synthetic(3);
    const auto p = fixture::synthetic_platform(w);
    const auto e = [&](NocType m) {
        const auto r = simulate(w.graph, w.mapping, p, fixture::with_noc(m)).report;
        record_conf(r, p);
        return r.total_energy;
    };
    const double a = e(NocType::arsmart), s = e(NocType::smart);
    return {a < s, fmt("arsmart %.1f, smart %.1f", a, s)};
}

Outcome config_latency_check() {
    std::int64_t over = 0;
    for (const auto &c : conf_samples) over += c.l_conf <= config_latency_bound(c.clusters) ? 0 : 1;
    return {over == 0 && !conf_samples.empty(),
            fmt("%zu messages, %lld over 2(cn + 5) + cn", conf_samples.size(), static_cast<long long>(over))};
}

}  // namespace

int main() {
    criterion(1, "two-message timeline", 1, two_message_timeline);
    criterion(2, "zero-contention closed forms", 10, zero_contention);
    criterion(3, "r1 optimality", 60, r1_optimality);
    BlockingStats stats;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        stats = blocking_runs();
    } catch (const std::exception &e) {
        std::printf("blocking runs aborted: %s\n", e.what());
        stats.t1_violations = stats.t2_violations = -1;
    }
    const double blocking_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // both bounds share one batch of runs and its 5 minute budget
    criterion(4, "blocking bounded by holder L_w/oc", 300, [&] { return holder_bound(stats); }, blocking_s);
    criterion(4, "source blocking bounded by sharers", 300, [&] { return sharer_bound(stats); }, blocking_s);
    criterion(5, "invariants and determinism", 300, invariants_and_determinism);
    criterion(6, "detour schedule ratio", 1, detour_ratio);
    criterion(7, "distance insensitivity", 120, distance_insensitivity);
    criterion(8, "message-size crossover", 120, message_size_crossover);
    criterion(9, "AIR scaling", 300, air_scaling);
    criterion(10, "energy", 30, energy_comparison);
    criterion(11, "configuration latency bound", 1, config_latency_check);
    std::printf("%d failing\n", failures);
    return failures == 0 ? 0 : 1;
}
