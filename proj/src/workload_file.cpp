// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/workload_file.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "arsmart/error.hpp"

namespace arsmart {

void Workload::apply_rates(Platform &platform) const {
    for (const auto &[coord, rate] : rates) platform.set_rate(coord, rate);
}

namespace {

template <typename T>
T read_field(std::istringstream &ss, const char *what, int line) {
    T value{};
    if (!(ss >> value)) throw ParseError(std::string("expected ") + what, line);
    return value;
}

}  // namespace

Workload parse_workload(std::istream &in) {
    Workload w;
    std::map<TaskId, Coord> placed;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ss(raw);
        std::string keyword;
        if (!(ss >> keyword)) continue;
        try {
            if (keyword == "task") {
                auto name = read_field<std::string>(ss, "task id", line_no);
                auto workload = read_field<std::int64_t>(ss, "task workload", line_no);
                w.graph.add_task(std::move(name), workload);
            } else if (keyword == "edge") {
                auto src = read_field<std::string>(ss, "edge source", line_no);
                auto dst = read_field<std::string>(ss, "edge destination", line_no);
                auto flits = read_field<std::int64_t>(ss, "message size", line_no);
                auto s = w.graph.find_task(src);
                auto d = w.graph.find_task(dst);
                if (!s || !d) throw ParseError("edge references an undeclared task", line_no);
                w.graph.add_edge(*s, *d, flits);
            } else if (keyword == "map") {
                auto name = read_field<std::string>(ss, "task id", line_no);
                auto row = read_field<int>(ss, "row", line_no);
                auto col = read_field<int>(ss, "column", line_no);
                auto t = w.graph.find_task(name);
                if (!t) throw ParseError("map references an undeclared task", line_no);
                if (row < 0 || col < 0) throw ParseError("negative coordinate", line_no);
                if (!placed.emplace(*t, Coord{row, col}).second) {
                    throw ParseError("task '" + name + "' is mapped twice", line_no);
                }
            } else if (keyword == "rate") {
                auto row = read_field<int>(ss, "row", line_no);
                auto col = read_field<int>(ss, "column", line_no);
                auto rate = read_field<double>(ss, "rate", line_no);
                if (!(rate > 0.0)) throw ParseError("rate must be positive", line_no);
                w.rates.emplace_back(Coord{row, col}, rate);
            } else {
                throw ParseError("unknown keyword '" + keyword + "'", line_no);
            }
        } catch (const GraphError &e) {
            throw ParseError(e.what(), line_no);
        }
        std::string extra;
        if (ss >> extra) throw ParseError("trailing token '" + extra + "'", line_no);
    }
    if (!placed.empty() || w.graph.task_count() > 0) {
        if (placed.size() != w.graph.task_count()) {
            throw ParseError("mapping is not total: " + std::to_string(placed.size()) + " of " +
                             std::to_string(w.graph.task_count()) + " tasks are mapped");
        }
    }
    for (const auto &[t, c] : placed) w.mapping.placement.push_back(c);
    try {
        w.graph.topological_order();
    } catch (const GraphError &e) {
        throw ParseError(e.what());
    }
    return w;
}

Workload read_workload_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_workload(in);
}

void write_workload(std::ostream &out, const Workload &w) {
    const auto &tasks = w.graph.tasks();
    for (const auto &t : tasks) out << "task " << t.name << ' ' << t.workload << '\n';
    for (const auto &e : w.graph.edges()) {
        out << "edge " << tasks[static_cast<std::size_t>(e.src)].name << ' '
            << tasks[static_cast<std::size_t>(e.dst)].name << ' ' << e.size_flits << '\n';
    }
    for (std::size_t i = 0; i < w.mapping.placement.size(); ++i) {
        const auto c = w.mapping.placement[i];
        out << "map " << tasks[i].name << ' ' << c.row << ' ' << c.col << '\n';
    }
    for (const auto &[c, rate] : w.rates) {
        out << "rate " << c.row << ' ' << c.col << ' ' << std::setprecision(17) << rate << '\n';
    }
}

void write_workload_file(const std::string &path, const Workload &w) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ParseError("cannot write '" + tmp + "'");
        out << "# arsmart workload: " << w.graph.task_count() << " tasks, "
            << w.graph.edge_count() << " edges\n";
        write_workload(out, w);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace arsmart
