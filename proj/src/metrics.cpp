// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/metrics.hpp"

#include <iomanip>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "arsmart/error.hpp"

namespace arsmart {

using ordered_json = nlohmann::ordered_json;

double to_double(const Rational &r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational &r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Cycle e2e_traditional(Cycle l_r, Cycle l_w, int route_len, std::int64_t flits, Cycle l_ct) {
    if (route_len < 2) throw InvalidMessage("a network route has at least two routers");
    if (flits < 1) throw InvalidMessage("a packet has at least one flit");
    return l_r * (route_len - 1) + l_w * route_len + l_w * (flits - 1) + l_ct;
}

Cycle e2e_smart(Cycle l_r, Cycle l_w, int ct, int limit, std::int64_t flits, Cycle l_ct) {
    if (flits < 1) throw InvalidMessage("a packet has at least one flit");
    if (ct < 0 || limit < 0 || l_ct < 0) throw InvalidMessage("negative SMART overhead");
    return 2 * (l_r + l_w) + (ct + limit) * (l_r + l_w) + (flits - 1) * l_w + l_ct;
}

Rational e2e_arsmart(Cycle l_conf, int packets, int limit, Cycle l_r, Cycle l_w,
                     std::int64_t flits, Cycle l_cs) {
    if (packets < 1) throw InvalidMessage("a message has at least one packet");
    if (flits < 1) throw InvalidMessage("a packet has at least one flit");
    return Rational(l_conf, packets) + Rational(limit * (l_r + l_w) + (flits - 1) * l_w) +
           Rational(l_cs, packets);
}

MessageLatency msg_arsmart(Cycle l_conf, Cycle l_tr, Cycle l_cs) {
    return {l_conf + l_tr + l_cs, l_conf + l_tr};
}

const char *energy_event_name(EnergyEvent e) {
    switch (e) {
        case EnergyEvent::link_traversal: return "link_traversal";
        case EnergyEvent::crossbar_traversal: return "crossbar_traversal";
        case EnergyEvent::buffer_write: return "buffer_write";
        case EnergyEvent::buffer_read: return "buffer_read";
        case EnergyEvent::arbitration: return "arbitration";
        case EnergyEvent::config_signal: return "config_signal";
        case EnergyEvent::controller_compute: return "controller_compute";
    }
    return "?";
}

EnergyEvent parse_energy_event(const std::string &name) {
    for (int i = 0; i < kEnergyEventCount; ++i) {
        const auto e = static_cast<EnergyEvent>(i);
        if (name == energy_event_name(e)) return e;
    }
    throw ConfigError("unknown energy event '" + name + "'");
}

double EnergyCoefficients::of(EnergyEvent e) const {
    switch (e) {
        case EnergyEvent::link_traversal: return link_traversal;
        case EnergyEvent::crossbar_traversal: return crossbar_traversal;
        case EnergyEvent::buffer_write: return buffer_write;
        case EnergyEvent::buffer_read: return buffer_read;
        case EnergyEvent::arbitration: return arbitration;
        case EnergyEvent::config_signal: return config_signal;
        case EnergyEvent::controller_compute: return controller_compute;
    }
    return 0.0;
}

void EnergyCoefficients::validate() const {
    for (int i = 0; i < kEnergyEventCount; ++i) {
        const auto e = static_cast<EnergyEvent>(i);
        if (of(e) < 0) throw ConfigError(std::string("negative energy coefficient ") + energy_event_name(e));
    }
}

EnergyCoefficients EnergyCoefficients::scaled(double k) const {
    return {link_traversal * k, crossbar_traversal * k, buffer_write * k, buffer_read * k,
            arbitration * k,    config_signal * k,      controller_compute * k};
}

double accumulate_energy(const std::vector<EnergyRecord> &trace, const EnergyCoefficients &k) {
    double total = 0.0;
    for (const auto &r : trace) total += static_cast<double>(r.count) * k.of(parse_energy_event(r.kind));
    return total;
}

double energy_of(const EventCounts &counts, const EnergyCoefficients &k) {
    double total = 0.0;
    for (int i = 0; i < kEnergyEventCount; ++i) {
        total += static_cast<double>(counts[static_cast<std::size_t>(i)]) * k.of(static_cast<EnergyEvent>(i));
    }
    return total;
}

Rational average_packet_latency(const std::vector<MessageRecord> &messages) {
    Rational sum{0};
    std::int64_t n = 0;
    for (const auto &m : messages) {
        if (m.src == m.dst) continue;
        for (const auto &l : m.packet_latency) sum += l;
        n += static_cast<std::int64_t>(m.packet_latency.size());
    }
    return n == 0 ? Rational{0} : sum / n;
}

void MetricsReport::write_json(std::ostream &os) const {
    ordered_json j;
    j["noc"] = noc;
    j["routing"] = routing;
    j["seed"] = seed;
    j["schedule_length"] = schedule_length;
    j["avg_network_latency"] = to_double(avg_network_latency);
    j["avg_network_latency_exact"] = to_string(avg_network_latency);
    j["total_energy"] = total_energy;
    ordered_json ev = ordered_json::object();
    for (int i = 0; i < kEnergyEventCount; ++i) {
        ev[energy_event_name(static_cast<EnergyEvent>(i))] = events[static_cast<std::size_t>(i)];
    }
    j["events"] = ev;
    ordered_json msgs = ordered_json::array();
    for (const auto &m : messages) {
        ordered_json jm;
        jm["id"] = m.id;
        jm["src"] = m.src;
        jm["dst"] = m.dst;
        jm["size_flits"] = m.size_flits;
        jm["packets"] = m.packets;
        jm["hops"] = m.hops;
        jm["clusters"] = m.clusters;
        jm["latches"] = m.latches;
        jm["route"] = m.route;
        jm["ready"] = m.ready;
        jm["grant"] = m.grant;
        jm["inject"] = m.inject;
        jm["delivered"] = m.delivered;
        jm["released"] = m.released;
        jm["L_conf"] = m.l_conf;
        jm["L_rc"] = m.l_rc;
        jm["L_tr"] = m.l_tr;
        jm["L_cs"] = m.l_cs;
        jm["L_woc"] = m.l_woc;
        jm["L_head"] = m.l_head;
        jm["L_seri"] = m.l_seri;
        jm["L_ct"] = m.l_ct;
        jm["ct"] = m.ct;
        jm["limit"] = m.limit;
        ordered_json lat = ordered_json::array();
        for (const auto &l : m.packet_latency) lat.push_back(to_string(l));
        jm["packet_latency"] = lat;
        msgs.push_back(std::move(jm));
    }
    j["messages"] = msgs;
    os << j.dump(2) << '\n';
}

MetricsReport MetricsReport::read_json(std::istream &is) {
    MetricsReport r;
    try {
        const auto j = nlohmann::json::parse(is);
        r.noc = j.at("noc").get<std::string>();
        r.routing = j.at("routing").get<std::string>();
        r.seed = j.value("seed", std::uint64_t{0});
        r.schedule_length = j.at("schedule_length").get<Cycle>();
        const double avg = j.at("avg_network_latency").get<double>();
        r.avg_network_latency = Rational(static_cast<std::int64_t>(avg * 1000000.0 + 0.5), 1000000);
        r.total_energy = j.at("total_energy").get<double>();
        if (j.contains("events")) {
            for (const auto &[k, v] : j.at("events").items()) {
                r.events[static_cast<std::size_t>(parse_energy_event(k))] = v.get<std::int64_t>();
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    } catch (const ConfigError &e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
    return r;
}

std::vector<RatioRow> compare_reports(const MetricsReport &a, const MetricsReport &b) {
    auto row = [](std::string name, double x, double y) {
        return RatioRow{std::move(name), x, y, y == 0 ? 0.0 : x / y};
    };
    return {
        row("schedule_length", static_cast<double>(a.schedule_length), static_cast<double>(b.schedule_length)),
        row("avg_network_latency", to_double(a.avg_network_latency), to_double(b.avg_network_latency)),
        row("total_energy", a.total_energy, b.total_energy),
    };
}

void write_ratio_table(std::ostream &os, const std::vector<RatioRow> &rows) {
    os << std::left << std::setw(22) << "metric" << std::right << std::setw(14) << "a" << std::setw(14)
       << "b" << std::setw(10) << "a/b" << '\n';
    for (const auto &r : rows) {
        os << std::left << std::setw(22) << r.metric << std::right << std::fixed << std::setprecision(3)
           << std::setw(14) << r.a << std::setw(14) << r.b << std::setprecision(4) << std::setw(10)
           << r.ratio << '\n';
        os.unsetf(std::ios::fixed);
    }
}

}  // namespace arsmart
