// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/workload.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "arsmart/error.hpp"

namespace arsmart {

const char *mapping_name(MappingPolicy p) {
    switch (p) {
        case MappingPolicy::round_robin: return "round-robin";
        case MappingPolicy::contention_aware: return "contention";
        case MappingPolicy::computation_aware: return "computation";
    }
    return "?";
}

MappingPolicy parse_mapping(const std::string &s) {
    if (s == "round-robin") return MappingPolicy::round_robin;
    if (s == "contention") return MappingPolicy::contention_aware;
    if (s == "computation") return MappingPolicy::computation_aware;
    throw ConfigError("unknown mapping policy '" + s + "'");
}

void SyntheticParams::validate() const {
    if (node_count < 1) throw ConfigError("node_count must be positive");
    const auto n = static_cast<std::int64_t>(node_count);
    if (link_count < 0 || link_count > n * (n - 1) / 2) {
        throw ConfigError("link_count " + std::to_string(link_count) + " is infeasible for " +
                          std::to_string(node_count) + " acyclic nodes");
    }
    if (avg_task_volume < 1 || avg_message_size < 1) throw ConfigError("averages must be positive");
    if (heterogeneity_degree < 0) throw ConfigError("heterogeneity degree must be nonnegative");
    if (mesh_size < 1) throw ConfigError("mesh size must be positive");
    if (package_size < 1) throw ConfigError("package size must be positive");
}

namespace {

std::int64_t draw_around(std::int64_t avg, std::mt19937_64 &rng) {
    std::uniform_int_distribution<std::int64_t> d(avg / 2, avg + avg / 2);
    return std::max<std::int64_t>(1, d(rng));
}

}  // namespace

TaskGraph gen_task_graph(const SyntheticParams &params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    const int n = params.node_count;

    // layer sizes: every layer nonempty, extra nodes scattered at random
    int layers = std::clamp(static_cast<int>(std::lround(std::sqrt(n))), 1, n);
    auto layer_sizes = [&](int count) {
        std::vector<std::int64_t> sizes(static_cast<std::size_t>(count), 1);
        std::uniform_int_distribution<int> pick(0, count - 1);
        for (int i = count; i < n; ++i) ++sizes[static_cast<std::size_t>(pick(rng))];
        return sizes;
    };
    auto sizes = layer_sizes(layers);
    std::int64_t forward = 0, before = 0;
    for (auto s : sizes) {
        forward += before * s;
        before += s;
    }
    if (forward < params.link_count) {
        layers = n;
        sizes.assign(static_cast<std::size_t>(n), 1);
    }
    std::vector<int> layer_of;
    for (int l = 0; l < layers; ++l) {
        for (std::int64_t k = 0; k < sizes[static_cast<std::size_t>(l)]; ++k) layer_of.push_back(l);
    }

    TaskGraph g;
    for (int i = 0; i < n; ++i) g.add_task("t" + std::to_string(i), draw_around(params.avg_task_volume, rng));

    std::set<std::pair<int, int>> chosen;
    // give every non-source-layer node one predecessor while the budget lasts
    for (int v = 0; v < n && static_cast<int>(chosen.size()) < params.link_count; ++v) {
        if (layer_of[static_cast<std::size_t>(v)] == 0) continue;
        int first_of_layer = v;
        while (first_of_layer > 0 && layer_of[static_cast<std::size_t>(first_of_layer - 1)] ==
                                         layer_of[static_cast<std::size_t>(v)]) {
            --first_of_layer;
        }
        std::uniform_int_distribution<int> pick(0, first_of_layer - 1);
        chosen.emplace(pick(rng), v);
    }
    std::vector<std::pair<int, int>> rest;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (layer_of[static_cast<std::size_t>(u)] < layer_of[static_cast<std::size_t>(v)] &&
                !chosen.contains({u, v})) {
                rest.emplace_back(u, v);
            }
        }
    }
    std::shuffle(rest.begin(), rest.end(), rng);
    for (std::size_t i = 0; static_cast<int>(chosen.size()) < params.link_count; ++i) chosen.insert(rest[i]);
    for (const auto &[u, v] : chosen) g.add_edge(u, v, draw_around(params.avg_message_size, rng));
    return g;
}

Mapping map_tasks(const TaskGraph &graph, const Platform &platform, MappingPolicy policy) {
    const int n = static_cast<int>(graph.task_count());
    const int pes = platform.router_count();
    const int dim = platform.mesh_dim();
    const int cap = (n + pes - 1) / pes;
    Mapping m;
    m.placement.assign(static_cast<std::size_t>(n), Coord{});
    auto coord = [dim](int pe) { return Coord{pe / dim, pe % dim}; };
    if (policy == MappingPolicy::round_robin) {
        for (int t = 0; t < n; ++t) m.placement[static_cast<std::size_t>(t)] = coord(t % pes);
        return m;
    }
    std::vector<int> load(static_cast<std::size_t>(pes), 0);
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    const auto &edges = graph.edges();
    for (TaskId t : graph.topological_order()) {
        int best = -1;
        std::tuple<double, int, int> best_key{};
        for (int pe = 0; pe < pes; ++pe) {
            if (load[static_cast<std::size_t>(pe)] >= cap) continue;
            double primary = 0;
            if (policy == MappingPolicy::contention_aware) {
                for (const auto &list : {graph.in_edges(t), graph.out_edges(t)}) {
                    for (MessageId e : list) {
                        const auto &ed = edges[static_cast<std::size_t>(e)];
                        const TaskId other = ed.src == t ? ed.dst : ed.src;
                        if (!placed[static_cast<std::size_t>(other)]) continue;
                        primary += static_cast<double>(ed.size_flits) *
                                   manhattan(coord(pe), m.placement[static_cast<std::size_t>(other)]);
                    }
                }
            } else {
                primary = -platform.rate(platform.id_of(coord(pe)));
            }
            const std::tuple<double, int, int> key{primary, load[static_cast<std::size_t>(pe)], pe};
            if (best < 0 || key < best_key) {
                best = pe;
                best_key = key;
            }
        }
        m.placement[static_cast<std::size_t>(t)] = coord(best);
        ++load[static_cast<std::size_t>(best)];
        placed[static_cast<std::size_t>(t)] = 1;
    }
    return m;
}

Platform set_heterogeneity(const Platform &platform, double degree, std::uint64_t seed) {
    if (degree < 0) throw ConfigError("heterogeneity degree must be nonnegative");
    Platform out = platform;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < platform.mesh_dim(); ++r) {
        for (int c = 0; c < platform.mesh_dim(); ++c) out.set_rate({r, c}, 1.0 + degree * u(rng));
    }
    return out;
}

Workload generate_workload(const SyntheticParams &params) {
    Workload w;
    w.graph = gen_task_graph(params);
    TimingParams t;
    t.package_size = params.package_size;
    const Platform base = build_platform(params.mesh_size, 1, {1.0}, 8, t);
    const Platform p = set_heterogeneity(base, params.heterogeneity_degree, params.seed);
    if (params.heterogeneity_degree > 0) {
        for (int r = 0; r < p.mesh_dim(); ++r) {
            for (int c = 0; c < p.mesh_dim(); ++c) w.rates.emplace_back(Coord{r, c}, p.rate(Coord{r, c}));
        }
    }
    w.mapping = map_tasks(w.graph, p, params.mapping);
    return w;
}

double average_distance(const TaskGraph &graph, const Mapping &mapping) {
    if (graph.edge_count() == 0) return 0.0;
    double sum = 0;
    for (const auto &e : graph.edges()) sum += manhattan(mapping.at(e.src), mapping.at(e.dst));
    return sum / static_cast<double>(graph.edge_count());
}

Mapping distance_constrained_mapping(const TaskGraph &graph, const Platform &platform,
                                     double target, std::uint64_t seed) {
    const int dim = platform.mesh_dim();
    if (target < 1.0 || target > 2.0 * (dim - 1)) {
        throw ConfigError("target distance " + std::to_string(target) + " is outside [1, " +
                          std::to_string(2 * (dim - 1)) + "]");
    }
    if (graph.edge_count() == 0) throw ConfigError("distance mapping needs at least one edge");
    const int n = static_cast<int>(graph.task_count());
    const int pes = platform.router_count();
    const int cap = (n + pes - 1) / pes;
    const double edges = static_cast<double>(graph.edge_count());
    const auto &es = graph.edges();
    auto coord = [dim](int pe) { return Coord{pe / dim, pe % dim}; };

    for (int attempt = 0; attempt < 8; ++attempt) {
        std::mt19937_64 rng(seed + 7919ULL * static_cast<std::uint64_t>(attempt));
        std::vector<int> slots;
        for (int pe = 0; pe < pes; ++pe) {
            for (int k = 0; k < cap; ++k) slots.push_back(pe);
        }
        std::shuffle(slots.begin(), slots.end(), rng);
        std::vector<int> at(slots.begin(), slots.begin() + n);
        std::vector<std::vector<int>> on(static_cast<std::size_t>(pes));
        for (int t = 0; t < n; ++t) on[static_cast<std::size_t>(at[static_cast<std::size_t>(t)])].push_back(t);

        auto incident = [&](int t) {
            double s = 0;
            for (const auto &list : {graph.in_edges(t), graph.out_edges(t)}) {
                for (MessageId e : list) {
                    const auto &ed = es[static_cast<std::size_t>(e)];
                    s += manhattan(coord(at[static_cast<std::size_t>(ed.src)]), coord(at[static_cast<std::size_t>(ed.dst)]));
                }
            }
            return s;
        };
        double total = 0;
        for (const auto &ed : es) {
            total += manhattan(coord(at[static_cast<std::size_t>(ed.src)]), coord(at[static_cast<std::size_t>(ed.dst)]));
        }
        std::uniform_int_distribution<int> pick_task(0, n - 1);
        std::uniform_int_distribution<int> pick_pe(0, pes - 1);
        for (int it = 0; it < 400000 && std::abs(total / edges - target) > 0.1; ++it) {
            const int t = pick_task(rng);
            const int q = pick_pe(rng);
            const int from = at[static_cast<std::size_t>(t)];
            if (q == from) continue;
            auto &dest = on[static_cast<std::size_t>(q)];
            const int other = static_cast<int>(dest.size()) < cap
                                  ? -1
                                  : dest[std::uniform_int_distribution<std::size_t>(0, dest.size() - 1)(rng)];
            // edges touching both moved tasks are counted twice before and after; that cancels
            const double before = incident(t) + (other >= 0 ? incident(other) : 0.0);
            at[static_cast<std::size_t>(t)] = q;
            if (other >= 0) at[static_cast<std::size_t>(other)] = from;
            const double after = incident(t) + (other >= 0 ? incident(other) : 0.0);
            const double next = total + after - before;
            if (std::abs(next / edges - target) <= std::abs(total / edges - target)) {
                total = next;
                auto &src_list = on[static_cast<std::size_t>(from)];
                src_list.erase(std::find(src_list.begin(), src_list.end(), t));
                dest.push_back(t);
                if (other >= 0) {
                    dest.erase(std::find(dest.begin(), dest.end(), other));
                    src_list.push_back(other);
                }
            } else {
                at[static_cast<std::size_t>(t)] = from;
                if (other >= 0) at[static_cast<std::size_t>(other)] = q;
            }
        }
        Mapping m;
        for (int t = 0; t < n; ++t) m.placement.push_back(coord(at[static_cast<std::size_t>(t)]));
        if (std::abs(average_distance(graph, m) - target) <= 0.25) return m;
    }
    throw ConfigError("could not reach average distance " + std::to_string(target));
}

const char *sweep_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::distance: return "distance";
        case SweepVariable::message_size: return "message_size";
        case SweepVariable::heterogeneity: return "heterogeneity";
        case SweepVariable::air: return "air";
    }
    return "?";
}

SweepVariable parse_sweep_variable(const std::string &s) {
    for (auto v : {SweepVariable::distance, SweepVariable::message_size, SweepVariable::heterogeneity,
                   SweepVariable::air}) {
        if (s == sweep_name(v)) return v;
    }
    throw ConfigError("unknown sweep variable '" + s + "'");
}

void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep range is empty");
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (modes.empty()) throw ConfigError("sweep needs at least one NoC mode");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    base.validate();
}

std::pair<Workload, Platform> sweep_point(const SweepSpec &spec, double value, int rep) {
    SyntheticParams params = spec.base;
    params.seed = spec.base.seed + 1000003ULL * static_cast<std::uint64_t>(rep);
    if (spec.variable == SweepVariable::message_size) {
        params.avg_message_size = std::max<std::int64_t>(1, std::llround(value * params.package_size));
    }
    if (spec.variable == SweepVariable::heterogeneity) params.heterogeneity_degree = value;
    TimingParams timing = spec.timing;
    timing.package_size = params.package_size;
    const Platform base = build_platform(params.mesh_size, spec.cluster_dim, {1.0}, spec.hpc_max, timing);
    Platform platform = set_heterogeneity(base, params.heterogeneity_degree, params.seed);
    Workload w;
    w.graph = gen_task_graph(params);
    w.mapping = spec.variable == SweepVariable::distance
                    ? distance_constrained_mapping(w.graph, platform, value, params.seed)
                    : map_tasks(w.graph, platform, params.mapping);
    return {std::move(w), std::move(platform)};
}

std::vector<SweepRow> run_sweep(const SweepSpec &spec) {
    spec.validate();
    const std::size_t nv = spec.values.size();
    const std::size_t nm = spec.modes.size();
    const auto reps = static_cast<std::size_t>(spec.repetitions);
    // results[(value, rep)][mode]
    std::vector<std::vector<MetricsReport>> results(nv * reps);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t job = next++; job < nv * reps; job = next++) {
            try {
                const double value = spec.values[job / reps];
                const auto [w, platform] = sweep_point(spec, value, static_cast<int>(job % reps));
                for (const auto &mode : spec.modes) {
                    SimConfig cfg;
                    cfg.noc = mode.noc;
                    cfg.routing = mode.routing;
                    cfg.seed = spec.base.seed + job;
                    cfg.energy = spec.energy;
                    if (spec.variable == SweepVariable::air) cfg.air = value;
                    results[job].push_back(simulate(w.graph, w.mapping, platform, cfg).report);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < spec.threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<SweepRow> rows;
    for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t k = 0; k < nm; ++k) {
            SweepRow row;
            row.variable = spec.variable;
            row.value = spec.values[v];
            row.mode = spec.modes[k];
            for (std::size_t r = 0; r < reps; ++r) {
                const auto &rep = results[v * reps + r][k];
                row.schedule_length += static_cast<double>(rep.schedule_length);
                row.avg_latency += to_double(rep.avg_network_latency);
                row.energy += rep.total_energy;
            }
            row.schedule_length /= static_cast<double>(reps);
            row.avg_latency /= static_cast<double>(reps);
            row.energy /= static_cast<double>(reps);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows) {
    os << "variable,mode,routing,schedule_length,avg_latency,energy\n";
    for (const auto &r : rows) {
        std::ostringstream v;
        v << r.value;
        os << sweep_name(r.variable) << '=' << v.str() << ',' << noc_name(r.mode.noc) << ','
           << routing_name(r.mode.routing) << ',' << r.schedule_length << ',' << r.avg_latency << ','
           << r.energy << '\n';
    }
}

std::vector<double> parse_range(const std::string &s) {
    std::vector<double> out;
    try {
        if (const auto dots = s.find(".."); dots != std::string::npos) {
            const long lo = std::stol(s.substr(0, dots));
            const long hi = std::stol(s.substr(dots + 2));
            if (hi < lo) throw ConfigError("empty range '" + s + "'");
            for (long v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
            return out;
        }
        std::istringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    } catch (const std::logic_error &) {
        throw ConfigError("malformed range '" + s + "'");
    }
    if (out.empty()) throw ConfigError("empty range '" + s + "'");
    return out;
}

}  // namespace arsmart
