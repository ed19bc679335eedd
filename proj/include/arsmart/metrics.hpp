// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "arsmart/model.hpp"

namespace arsmart {

using Rational = boost::rational<std::int64_t>;

double to_double(const Rational &r);
std::string to_string(const Rational &r);  // "7" or "7/2"

// Packet latency of a buffered hop-by-hop NoC. route_len counts routers (>= 2).
Cycle e2e_traditional(Cycle l_r, Cycle l_w, int route_len, std::int64_t flits, Cycle l_ct);

// Packet latency of a SMART NoC with per-packet path setup.
Cycle e2e_smart(Cycle l_r, Cycle l_w, int ct, int limit, std::int64_t flits, Cycle l_ct);

// Packet latency with per-message configuration shared by `packets` packets.
Rational e2e_arsmart(Cycle l_conf, int packets, int limit, Cycle l_r, Cycle l_w,
                     std::int64_t flits, Cycle l_cs);

struct MessageLatency {
    Cycle total = 0;
    Cycle without_contention = 0;  // L_w/oc = L_conf + L_tr
};
MessageLatency msg_arsmart(Cycle l_conf, Cycle l_tr, Cycle l_cs);

enum class EnergyEvent : std::uint8_t {
    link_traversal,
    crossbar_traversal,
    buffer_write,
    buffer_read,
    arbitration,
    config_signal,
    controller_compute,
};
inline constexpr int kEnergyEventCount = 7;
const char *energy_event_name(EnergyEvent e);
// throws ConfigError on an unknown name
EnergyEvent parse_energy_event(const std::string &name);

// Abstract per-event energy units. Buffer accesses dominate, as in buffered routers.
struct EnergyCoefficients {
    double link_traversal = 1.0;
    double crossbar_traversal = 0.5;
    double buffer_write = 1.0;
    double buffer_read = 1.0;
    double arbitration = 0.2;
    double config_signal = 0.1;
    double controller_compute = 1.0;

    double of(EnergyEvent e) const;
    void validate() const;  // throws ConfigError on a negative coefficient
    EnergyCoefficients scaled(double k) const;
};

using EventCounts = std::array<std::int64_t, kEnergyEventCount>;

// One energy-relevant trace record: `count` occurrences of event `kind`.
struct EnergyRecord {
    std::string kind;
    std::int64_t count = 0;
};

// Fold over records; throws ConfigError on an unknown kind.
double accumulate_energy(const std::vector<EnergyRecord> &trace, const EnergyCoefficients &k);
double energy_of(const EventCounts &counts, const EnergyCoefficients &k);

// Per-message measurements. Cycle fields not meaningful for a mode stay 0.
struct MessageRecord {
    MessageId id = 0;
    RouterId src = 0;
    RouterId dst = 0;
    std::int64_t size_flits = 0;
    int packets = 0;
    int hops = 0;
    int clusters = 0;
    int latches = 0;
    std::vector<RouterId> route;

    Cycle ready = 0;     // tau: producer finished
    Cycle grant = 0;
    Cycle inject = 0;
    Cycle delivered = 0;  // tail ejected at the destination
    Cycle released = 0;

    // ArSMART decomposition
    Cycle l_conf = 0;
    Cycle l_rc = 0;
    Cycle l_tr = 0;
    Cycle l_cs = 0;
    Cycle l_woc = 0;

    // head / serialization / contention split of the summed packet latencies
    Cycle l_head = 0;
    Cycle l_seri = 0;
    Cycle l_ct = 0;

    int ct = 0;     // SMART bypass breaks caused by contention
    int limit = 0;  // latches (ArSMART) or HPC breaks (SMART) per packet, max over packets

    std::vector<Rational> packet_latency;
};

struct MetricsReport {
    std::string noc;
    std::string routing;
    std::uint64_t seed = 0;
    Cycle schedule_length = 0;
    Rational avg_network_latency{0};  // mean over packets of network messages
    double total_energy = 0.0;
    EventCounts events{};
    std::vector<MessageRecord> messages;

    void write_json(std::ostream &os) const;
    static MetricsReport read_json(std::istream &is);  // summary fields only; throws ParseError
};

// Recomputes avg_network_latency from the per-message records.
Rational average_packet_latency(const std::vector<MessageRecord> &messages);

struct RatioRow {
    std::string metric;
    double a = 0;
    double b = 0;
    double ratio = 0;  // a / b, 0 when b is 0
};
std::vector<RatioRow> compare_reports(const MetricsReport &a, const MetricsReport &b);
void write_ratio_table(std::ostream &os, const std::vector<RatioRow> &rows);

}  // namespace arsmart
