// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "arsmart/controller.hpp"
#include "arsmart/error.hpp"
#include "arsmart/routing.hpp"
#include "arsmart/trace_check.hpp"
#include "arsmart/workload.hpp"
#include "arsmart/workload_file.hpp"

namespace arsmart {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T number(const std::string &key, const std::string &v) {
    std::istringstream in(v);
    T out{};
    in >> out;
    if (!in || !in.eof()) throw ConfigError("value '" + v + "' for '" + key + "' is not a number");
    return out;
}

void write_atomic(const std::string &path, const std::string &content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + path);
        f << content;
        if (!f) throw ConfigError("cannot write " + path);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

void apply_config_entry(const std::string &key, const std::string &value, RunConfig &cfg) {
    auto &t = cfg.timing;
    auto &s = cfg.sim;
    if (key == "mesh_dim") cfg.mesh_dim = number<int>(key, value);
    else if (key == "cluster_dim") cfg.cluster_dim = number<int>(key, value);
    else if (key == "hpc_max") cfg.hpc_max = number<int>(key, value);
    else if (key == "router_delay") t.router_delay = number<Cycle>(key, value);
    else if (key == "link_delay") t.link_delay = number<Cycle>(key, value);
    else if (key == "prep_delay") t.prep_delay = number<Cycle>(key, value);
    else if (key == "release_delay") t.release_delay = number<Cycle>(key, value);
    else if (key == "cluster_coord_delay") t.cluster_coord_delay = number<Cycle>(key, value);
    else if (key == "package_size") t.package_size = number<int>(key, value);
    else if (key == "route_cycles_per_node") t.route_cycles_per_node = number<Cycle>(key, value);
    else if (key == "noc") s.noc = parse_noc(value);
    else if (key == "routing") s.routing = parse_routing(value);
    else if (key == "seed") s.seed = number<std::uint64_t>(key, value);
    else if (key == "air") s.air = number<double>(key, value);
    else if (key == "cost_model") {
        if (value == "additive") s.cost = CostModel::additive;
        else if (value == "message_set") s.cost = CostModel::message_set;
        else throw ConfigError("unknown cost model '" + value + "'");
    } else if (key.rfind("energy.", 0) == 0) {
        const double v = number<double>(key, value);
        auto &e = s.energy;
        switch (parse_energy_event(key.substr(7))) {
            case EnergyEvent::link_traversal: e.link_traversal = v; break;
            case EnergyEvent::crossbar_traversal: e.crossbar_traversal = v; break;
            case EnergyEvent::buffer_write: e.buffer_write = v; break;
            case EnergyEvent::buffer_read: e.buffer_read = v; break;
            case EnergyEvent::arbitration: e.arbitration = v; break;
            case EnergyEvent::config_signal: e.config_signal = v; break;
            case EnergyEvent::controller_compute: e.controller_compute = v; break;
        }
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

void apply_config(std::istream &in, RunConfig &cfg) {
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", n);
        try {
            apply_config_entry(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), cfg);
        } catch (const ConfigError &e) {
            throw ParseError(e.what(), n);
        }
    }
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Cluster-controlled SMART NoC simulator", "arsmart"};
    app.require_subcommand(1);

    // generate
    SyntheticParams gp;
    std::string gen_out, gen_mapping = "contention";
    auto *gen = app.add_subcommand("generate", "write a synthetic task graph");
    gen->add_option("--nodes", gp.node_count, "task count")->capture_default_str();
    gen->add_option("--links", gp.link_count, "edge count")->capture_default_str();
    gen->add_option("--task-volume", gp.avg_task_volume, "mean task workload")->capture_default_str();
    gen->add_option("--message-size", gp.avg_message_size, "mean message size in flits")->capture_default_str();
    gen->add_option("--heterogeneity", gp.heterogeneity_degree, "PE rate spread")->capture_default_str();
    gen->add_option("--mesh", gp.mesh_size, "mesh dimension")->capture_default_str();
    gen->add_option("--package", gp.package_size, "flits per packet")->capture_default_str();
    gen->add_option("--seed", gp.seed)->capture_default_str();
    gen->add_option("--mapping", gen_mapping, "round-robin | contention | computation")->capture_default_str();
    gen->add_option("-o,--output", gen_out, "DAG file")->required();

    // simulate
    std::string sim_file, sim_config, sim_report, sim_trace, sim_noc, sim_routing, sim_cost;
    std::uint64_t sim_seed = 1;
    int sim_mesh = 0, sim_cluster = 0, sim_hpc = 0;
    double sim_air = 1.0;
    auto *sim = app.add_subcommand("simulate", "run a DAG file and write a JSON report");
    sim->add_option("workload", sim_file, "DAG file")->required();
    sim->add_option("--config", sim_config, "key = value configuration file");
    auto *o_noc = sim->add_option("--noc", sim_noc, "arsmart | smart | traditional");
    auto *o_routing = sim->add_option("--routing", sim_routing, "xy | r1 | r2");
    auto *o_seed = sim->add_option("--seed", sim_seed);
    auto *o_mesh = sim->add_option("--mesh", sim_mesh);
    auto *o_cluster = sim->add_option("--cluster", sim_cluster);
    auto *o_hpc = sim->add_option("--hpc", sim_hpc);
    auto *o_air = sim->add_option("--air", sim_air);
    auto *o_cost = sim->add_option("--cost", sim_cost, "additive | message_set");
    sim->add_option("-o,--report", sim_report, "report path (default: <workload>.report.json)");
    sim->add_option("--trace", sim_trace, "trace output path");

    // compare
    std::string cmp_a, cmp_b;
    auto *cmp = app.add_subcommand("compare", "ratio table of two reports");
    cmp->add_option("a", cmp_a)->required();
    cmp->add_option("b", cmp_b)->required();

    // sweep
    SweepSpec sw;
    std::string sw_var = "distance", sw_range = "1..5", sw_modes = "arsmart:xy,smart:xy", sw_out, sw_mapping = "contention";
    auto *swc = app.add_subcommand("sweep", "parameter sweep to CSV");
    swc->add_option("--var", sw_var, "distance | message_size | heterogeneity | air")->capture_default_str();
    swc->add_option("--range", sw_range, "a..b or comma list")->capture_default_str();
    swc->add_option("--reps", sw.repetitions)->capture_default_str();
    swc->add_option("--modes", sw_modes, "comma list of noc:routing")->capture_default_str();
    swc->add_option("--nodes", sw.base.node_count)->capture_default_str();
    swc->add_option("--links", sw.base.link_count)->capture_default_str();
    swc->add_option("--task-volume", sw.base.avg_task_volume)->capture_default_str();
    swc->add_option("--message-size", sw.base.avg_message_size)->capture_default_str();
    swc->add_option("--heterogeneity", sw.base.heterogeneity_degree)->capture_default_str();
    swc->add_option("--mesh", sw.base.mesh_size)->capture_default_str();
    swc->add_option("--package", sw.base.package_size)->capture_default_str();
    swc->add_option("--cluster", sw.cluster_dim)->capture_default_str();
    swc->add_option("--hpc", sw.hpc_max)->capture_default_str();
    swc->add_option("--seed", sw.base.seed)->capture_default_str();
    swc->add_option("--mapping", sw_mapping)->capture_default_str();
    swc->add_option("--threads", sw.threads)->capture_default_str();
    swc->add_option("-o,--output", sw_out, "CSV path (default: stdout)");

    // route-debug
    int rd_mesh = 8, rd_cluster = 4, rd_src = 0, rd_dst = 63;
    std::uint64_t rd_seed = 1;
    std::string rd_state;
    auto *rd = app.add_subcommand("route-debug", "print planner output for a state snapshot");
    rd->add_option("--mesh", rd_mesh)->capture_default_str();
    rd->add_option("--cluster", rd_cluster)->capture_default_str();
    rd->add_option("--src", rd_src)->capture_default_str();
    rd->add_option("--dst", rd_dst)->capture_default_str();
    rd->add_option("--seed", rd_seed)->capture_default_str();
    rd->add_option("--state", rd_state, "lines: active <id> <size> <router> <router> ...");

    // validate
    std::string val_file;
    auto *val = app.add_subcommand("validate", "check protocol invariants on a trace");
    val->add_option("trace", val_file)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        if (*gen) {
            gp.mapping = parse_mapping(gen_mapping);
            const Workload w = generate_workload(gp);
            write_workload_file(gen_out, w);
            out << "wrote " << gen_out << ": " << w.graph.task_count() << " tasks, " << w.graph.edge_count()
                << " edges\n";
            return 0;
        }
        if (*sim) {
            RunConfig rc;
            if (!sim_config.empty()) {
                std::ifstream f(sim_config);
                if (!f) throw ConfigError("cannot open " + sim_config);
                apply_config(f, rc);
            }
            if (o_noc->count()) rc.sim.noc = parse_noc(sim_noc);
            if (o_routing->count()) rc.sim.routing = parse_routing(sim_routing);
            if (o_seed->count()) rc.sim.seed = sim_seed;
            if (o_mesh->count()) rc.mesh_dim = sim_mesh;
            if (o_cluster->count()) rc.cluster_dim = sim_cluster;
            if (o_hpc->count()) rc.hpc_max = sim_hpc;
            if (o_air->count()) rc.sim.air = sim_air;
            if (o_cost->count()) apply_config_entry("cost_model", sim_cost, rc);
            rc.sim.trace = !sim_trace.empty();
            const Workload w = read_workload_file(sim_file);
            Platform platform = build_platform(rc.mesh_dim, rc.cluster_dim, {1.0}, rc.hpc_max, rc.timing);
            w.apply_rates(platform);
            const auto result = simulate(w.graph, w.mapping, platform, rc.sim);
            if (sim_report.empty()) sim_report = std::filesystem::path(sim_file).replace_extension(".report.json").string();
            std::ostringstream js;
            result.report.write_json(js);
            write_atomic(sim_report, js.str());
            if (!sim_trace.empty()) write_atomic(sim_trace, result.trace.str());
            out << "schedule_length " << result.report.schedule_length << "\navg_network_latency "
                << to_double(result.report.avg_network_latency) << "\ntotal_energy " << result.report.total_energy
                << "\nreport " << sim_report << '\n';
            return 0;
        }
        if (*cmp) {
            std::istringstream a(read_file(cmp_a)), b(read_file(cmp_b));
            const auto ra = MetricsReport::read_json(a);
            const auto rb = MetricsReport::read_json(b);
            out << "a = " << cmp_a << " (" << ra.noc << "/" << ra.routing << ")\nb = " << cmp_b << " (" << rb.noc
                << "/" << rb.routing << ")\n";
            write_ratio_table(out, compare_reports(ra, rb));
            return 0;
        }
        if (*swc) {
            sw.variable = parse_sweep_variable(sw_var);
            sw.values = parse_range(sw_range);
            sw.base.mapping = parse_mapping(sw_mapping);
            sw.modes.clear();
            std::istringstream ms(sw_modes);
            std::string tok;
            while (std::getline(ms, tok, ',')) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos) throw ConfigError("mode '" + tok + "' is not noc:routing");
                sw.modes.push_back({parse_noc(tok.substr(0, colon)), parse_routing(tok.substr(colon + 1))});
            }
            const auto rows = run_sweep(sw);
            std::ostringstream csv;
            write_sweep_csv(csv, rows);
            if (sw_out.empty()) {
                out << csv.str();
            } else {
                write_atomic(sw_out, csv.str());
                out << "wrote " << rows.size() << " rows to " << sw_out << '\n';
            }
            return 0;
        }
        if (*rd) {
            const Platform platform = build_platform(rd_mesh, rd_cluster, {1.0}, 8);
            ActiveSet active;
            if (!rd_state.empty()) {
                std::istringstream st(read_file(rd_state));
                std::string line;
                int n = 0;
                while (std::getline(st, line)) {
                    ++n;
                    std::istringstream ls(line);
                    std::string kw;
                    if (!(ls >> kw) || kw[0] == '#') continue;
                    if (kw != "active") throw ParseError("expected 'active'", n);
                    ActiveMessage m;
                    if (!(ls >> m.id >> m.size_flits)) throw ParseError("expected id and size", n);
                    RouterId r;
                    while (ls >> r) m.route.push_back(r);
                    if (!is_valid_route(m.route, platform)) throw ParseError("invalid route", n);
                    active.push_back(std::move(m));
                }
            }
            const MessageId self = -1;
            auto show = [&](const char *name, const Route &r) {
                out << name << ":";
                for (RouterId x : r) out << ' ' << x;
                out << "  (set cost " << message_set_route_cost(r, active, self, platform) << ", additive cost "
                    << additive_route_cost(r, active, self, platform) << ")\n";
            };
            show("xy", route_xy(rd_src, rd_dst, platform));
            show("r1 global", route_r1(rd_src, rd_dst, active, self, platform).route);
            PlanOptions exact;
            exact.cost = CostModel::message_set;
            show("r1 exact", route_r1(rd_src, rd_dst, active, self, platform, exact).route);
            std::mt19937_64 rng(rd_seed);
            const auto a = assemble_route(rd_src, rd_dst, active, self, platform, rng);
            show("r1 clustered", a.route);
            out << "temporary destinations:";
            for (RouterId b : a.temporary_destinations) out << ' ' << b;
            out << "\nlatches:";
            for (RouterId b : latch_points(a.route, platform.hpc_max(), platform)) out << ' ' << b;
            out << '\n';
            return 0;
        }
        if (*val) {
            std::istringstream in(read_file(val_file));
            const auto problems = validate_trace(read_trace(in));
            for (const auto &p : problems) out << p << '\n';
            out << (problems.empty() ? "trace ok\n" : "trace has problems\n");
            return problems.empty() ? 0 : 1;
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

int run_cli(int argc, char **argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace arsmart
