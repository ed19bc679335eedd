// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/engine.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "arsmart/controller.hpp"
#include "arsmart/error.hpp"
#include "arsmart/router.hpp"

namespace arsmart {

const char *noc_name(NocType t) {
    switch (t) {
        case NocType::arsmart: return "arsmart";
        case NocType::smart: return "smart";
        case NocType::traditional: return "traditional";
    }
    return "?";
}

const char *routing_name(RoutingAlgo r) {
    switch (r) {
        case RoutingAlgo::xy: return "xy";
        case RoutingAlgo::r1: return "r1";
        case RoutingAlgo::r2: return "r2";
    }
    return "?";
}

NocType parse_noc(const std::string &s) {
    if (s == "arsmart") return NocType::arsmart;
    if (s == "smart") return NocType::smart;
    if (s == "traditional") return NocType::traditional;
    throw ConfigError("unknown NoC type '" + s + "'");
}

RoutingAlgo parse_routing(const std::string &s) {
    if (s == "xy") return RoutingAlgo::xy;
    if (s == "r1") return RoutingAlgo::r1;
    if (s == "r2") return RoutingAlgo::r2;
    throw ConfigError("unknown routing algorithm '" + s + "'");
}

void SimConfig::validate() const {
    if (!(air > 0.0)) throw ConfigError("AIR scale must be positive");
    if (routing == RoutingAlgo::r2 && noc != NocType::arsmart) {
        throw ConfigError("time-triggered routing needs the ArSMART control plane");
    }
    energy.validate();
}

void Trace::write(std::ostream &os) const {
    for (const auto &l : lines) {
        os << "cycle=" << l.cycle << " kind=" << l.kind << " msg=" << l.msg << " detail=" << l.detail << '\n';
    }
}

std::string Trace::str() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

std::uint64_t Trace::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Trace read_trace(std::istream &is) {
    Trace t;
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        if (line.empty()) continue;
        TraceLine tl;
        const auto field = [&](const std::string &key, std::size_t from) -> std::pair<std::string, std::size_t> {
            const std::string tag = key + "=";
            if (line.compare(from, tag.size(), tag) != 0) throw ParseError("expected '" + tag + "'", n);
            const std::size_t start = from + tag.size();
            if (key == "detail") return {line.substr(start), line.size()};
            const std::size_t end = line.find(' ', start);
            if (end == std::string::npos) throw ParseError("truncated trace line", n);
            return {line.substr(start, end - start), end + 1};
        };
        try {
            auto [c, p1] = field("cycle", 0);
            auto [k, p2] = field("kind", p1);
            auto [m, p3] = field("msg", p2);
            auto [d, p4] = field("detail", p3);
            (void)p4;
            tl.cycle = std::stoll(c);
            tl.kind = k;
            tl.msg = std::stoi(m);
            tl.detail = d;
        } catch (const std::logic_error &) {
            throw ParseError("bad number in trace line", n);
        }
        t.lines.push_back(std::move(tl));
    }
    return t;
}

namespace {

enum class EvKind : std::uint8_t {
    link_free,     // SMART / traditional: a link's hold ends
    release,       // ArSMART: transmission-finish handled, links return to free
    delivered,     // tail flit ejected at the destination
    task_finish,
    recheck,
    check,
    packet_step,   // SMART / traditional: a packet tries to advance
};

int priority(EvKind k) {
    switch (k) {
        case EvKind::link_free:
        case EvKind::release: return 0;
        case EvKind::delivered: return 1;
        case EvKind::task_finish: return 2;
        case EvKind::recheck: return 3;
        case EvKind::check: return 4;
        case EvKind::packet_step: return 5;
    }
    return 9;
}

struct Event {
    Cycle cycle;
    int prio;
    std::int64_t k1;
    std::int64_t k2;
    std::uint64_t seq;
    EvKind kind;
    std::int64_t a;

    bool operator>(const Event &o) const {
        return std::tie(cycle, prio, k1, k2, seq) > std::tie(o.cycle, o.prio, o.k1, o.k2, o.seq);
    }
};

std::string join(const std::vector<RouterId> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

struct Packet {
    MessageId msg = 0;
    int index = 0;
    std::int64_t flits = 0;
    std::size_t pos = 0;  // SMART: router index on the route; traditional: next link index
    Cycle issue = -1;
    Cycle arrival = -1;   // when it started waiting for its current link, -1 if not waiting
    Cycle wait = 0;
    int ct = 0;
    int limit = 0;
    bool first_segment = true;
    Cycle tail = -1;
};

struct LinkHold {
    Cycle busy_until = 0;
    std::vector<std::pair<Cycle, std::int64_t>> queue;  // (arrival, packet), sorted
};

struct MsgState {
    MessageId id = 0;
    TaskId producer = 0;
    TaskId consumer = 0;
    RouterId src = 0;
    RouterId dst = 0;
    std::int64_t size = 0;
    std::vector<int> packets;
    Route route;
    std::vector<int> clusters;
    std::vector<RouterId> latches;
    Cycle tau = 0;
    Cycle request_at = 0;
    Cycle woc = 0;
    bool active = false;
    Cycle routed_at = -1;    // route assignment
    Cycle inactive_at = -1;  // left the active set
    std::optional<MessageThread> thread;
    std::optional<std::size_t> open_block;  // index into Diagnostics::blocking
    int packets_done = 0;
    std::int64_t first_packet = 0;
    MessageRecord rec;
};

class Engine {
   public:
    Engine(const TaskGraph &g, const Mapping &m, const Platform &p, const SimConfig &c)
        : graph_(g), mapping_(m), platform_(p), cfg_(c), cp_(p), rng_(c.seed),
          holds_(static_cast<std::size_t>(p.router_count() * kPortCount)) {}

    SimResult run();

   private:
    const TimingParams &timing() const { return platform_.timing(); }
    void push(Cycle at, EvKind kind, std::int64_t a, std::int64_t k1 = 0, std::int64_t k2 = 0) {
        if (at < now_) throw InvariantViolation("event scheduled in the past");
        events_.push({at, priority(kind), k1, k2, seq_++, kind, a});
    }
    void trace(Cycle at, const char *kind, MessageId msg, std::string detail) {
        if (cfg_.trace) result_.trace.lines.push_back({at, kind, msg, std::move(detail)});
    }
    void count(EnergyEvent e, std::int64_t n) { result_.report.events[static_cast<std::size_t>(e)] += n; }

    void try_start(RouterId pe);
    void start_task(TaskId t);
    void finish_task(TaskId t);
    void plan_route(MsgState &m, Cycle exec);
    void message_ready(MsgState &m);
    void deliver(MsgState &m);

    // ArSMART
    void check(MsgState &m, bool recheck);
    void grant(MsgState &m);
    void release(MsgState &m);

    // SMART / traditional
    void packet_step(std::int64_t pid);
    void link_free(LinkId l);
    void smart_step(Packet &pk, std::int64_t pid);
    void traditional_step(Packet &pk, std::int64_t pid);
    bool claim(LinkId l, std::int64_t pid, Packet &pk);
    void hold(LinkId l, Cycle until);
    void packet_done(Packet &pk);

    ActiveSet active_set() const;

    const TaskGraph &graph_;
    const Mapping &mapping_;
    const Platform &platform_;
    SimConfig cfg_;
    ControlPlane cp_;
    std::mt19937_64 rng_;
    ReservationList reservations_;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::uint64_t seq_ = 0;
    Cycle now_ = 0;

    std::vector<MsgState> msgs_;
    std::vector<int> pending_inputs_;
    std::vector<Cycle> task_start_;
    std::vector<Cycle> task_finish_;
    std::vector<std::vector<TaskId>> pe_order_;
    std::vector<std::size_t> pe_next_;
    std::vector<char> pe_busy_;
    std::vector<int> per_source_seq_;

    std::vector<Packet> packets_;
    std::vector<LinkHold> holds_;

    SimResult result_;
};

ActiveSet Engine::active_set() const {
    ActiveSet out;
    for (const auto &m : msgs_) {
        if (m.active) out.push_back({m.id, m.route, m.size, m.woc});
    }
    return out;
}

void Engine::try_start(RouterId pe) {
    const auto p = static_cast<std::size_t>(pe);
    if (pe_busy_[p] || pe_next_[p] >= pe_order_[p].size()) return;
    const TaskId t = pe_order_[p][pe_next_[p]];
    if (pending_inputs_[static_cast<std::size_t>(t)] > 0) return;
    ++pe_next_[p];
    pe_busy_[p] = 1;
    start_task(t);
}

void Engine::start_task(TaskId t) {
    const auto ti = static_cast<std::size_t>(t);
    const RouterId pe = platform_.id_of(mapping_.at(t));
    const Cycle exec = execution_time(graph_.tasks()[ti].workload, platform_.rate(pe));
    task_start_[ti] = now_;
    trace(now_, "task-start", -1, "task=" + std::to_string(t) + " pe=" + std::to_string(pe));
    for (MessageId e : graph_.out_edges(t)) plan_route(msgs_[static_cast<std::size_t>(e)], exec);
    push(now_ + exec, EvKind::task_finish, t);
}

void Engine::plan_route(MsgState &m, Cycle exec) {
    m.thread.emplace(ThreadId{m.src, m.dst, per_source_seq_[static_cast<std::size_t>(m.src)]++}, m.id);
    m.tau = now_ + exec;
    m.request_at = m.tau;
    if (m.src == m.dst) {
        m.route = {m.src};
        m.clusters = {platform_.cluster_of(m.src)};
        return;
    }
    const bool arsmart = cfg_.noc == NocType::arsmart;
    const Cycle per_node = timing().route_cycles_per_node;
    bool fallback = false;
    int computations = 0;
    switch (cfg_.routing) {
        case RoutingAlgo::xy: m.route = route_xy(m.src, m.dst, platform_); break;
        case RoutingAlgo::r1: {
            const auto active = active_set();
            if (arsmart) {
                auto a = assemble_route(m.src, m.dst, active, m.id, platform_, rng_, cfg_.cost);
                fallback = per_node * a.expanded > exec;
                m.route = std::move(a.route);
                computations = static_cast<int>(a.clusters.size());
            } else {
                PlanOptions opt;
                opt.cost = cfg_.cost;
                auto r = route_r1(m.src, m.dst, active, m.id, platform_, opt);
                fallback = per_node * r.expanded > exec;
                m.route = std::move(r.route);
                computations = 1;
            }
            break;
        }
        case RoutingAlgo::r2: {
            reservations_.expire(now_);
            const Route xy = route_xy(m.src, m.dst, platform_);
            const int cn = static_cast<int>(route_clusters(xy, platform_).size());
            const Cycle window = max_no_contention_latency(static_cast<int>(xy.size()) - 1, m.size, cn, platform_);
            ReservationList trial = reservations_;
            auto tr = route_r2(m.src, m.dst, m.id, trial, m.tau, window, platform_);
            fallback = per_node * tr.expanded > exec;
            if (!fallback) {
                reservations_ = std::move(trial);
                m.route = std::move(tr.route);
                m.request_at = std::max(m.tau, tr.t1);
            }
            computations = 1;
            break;
        }
    }
    if (fallback) {
        m.route = route_xy(m.src, m.dst, platform_);
        ++result_.diagnostics.xy_fallbacks;
    }
    if (!is_valid_route(m.route, platform_) || m.route.front() != m.src || m.route.back() != m.dst) {
        throw InvariantViolation("planner produced an invalid route for message " + std::to_string(m.id));
    }
    m.clusters = route_clusters(m.route, platform_);
    if (arsmart) {
        count(EnergyEvent::controller_compute, computations);
        count(EnergyEvent::config_signal, 1);  // transmission-request
        m.latches = latch_points(m.route, platform_.hpc_max(), platform_);
        const int seg = longest_unlatched_segment(m.route, m.latches);
        if (seg > platform_.hpc_max()) throw InvariantViolation("unlatched run exceeds HPC_max");
        result_.diagnostics.max_unlatched_segment = std::max(result_.diagnostics.max_unlatched_segment, seg);
        m.thread->assign_route(m.route, m.clusters);
    }
    m.routed_at = now_;
    m.active = true;
    trace(now_, "route", m.id, "routers=" + join(m.route) + " clusters=" + std::to_string(m.clusters.size()));
}

void Engine::finish_task(TaskId t) {
    const auto ti = static_cast<std::size_t>(t);
    task_finish_[ti] = now_;
    result_.report.schedule_length = std::max(result_.report.schedule_length, now_);
    trace(now_, "task-finish", -1, "task=" + std::to_string(t));
    for (MessageId e : graph_.out_edges(t)) message_ready(msgs_[static_cast<std::size_t>(e)]);
    const RouterId pe = platform_.id_of(mapping_.at(t));
    pe_busy_[static_cast<std::size_t>(pe)] = 0;
    try_start(pe);
}

void Engine::message_ready(MsgState &m) {
    m.rec.ready = now_;
    if (m.src == m.dst) {
        m.rec.grant = m.rec.inject = m.rec.delivered = m.rec.released = now_;
        m.active = false;
        m.inactive_at = now_;
        if (m.thread) m.thread->advance(Phase::done);
        deliver(m);
        return;
    }
    if (cfg_.noc == NocType::arsmart) {
        count(EnergyEvent::config_signal, 1);  // processor-finish
        m.thread->advance(Phase::check);
        push(m.request_at, EvKind::check, m.id, m.tau, m.id);
        return;
    }
    m.first_packet = static_cast<std::int64_t>(packets_.size());
    for (std::size_t k = 0; k < m.packets.size(); ++k) {
        Packet pk;
        pk.msg = m.id;
        pk.index = static_cast<int>(k);
        pk.flits = m.packets[k];
        packets_.push_back(pk);
    }
    m.rec.inject = now_;
    trace(now_, "inject", m.id, "flits=" + std::to_string(m.size));
    if (cfg_.noc == NocType::traditional) {
        // every packet queues for the injection link; FCFS order keeps them in sequence
        for (std::size_t k = 0; k < m.packets.size(); ++k) {
            const auto pid = m.first_packet + static_cast<std::int64_t>(k);
            push(now_, EvKind::packet_step, pid, pid);
        }
    } else {
        push(now_, EvKind::packet_step, m.first_packet, m.first_packet);
    }
}

void Engine::deliver(MsgState &m) {
    trace(now_, "deliver", m.id, "task=" + std::to_string(m.consumer));
    const auto ci = static_cast<std::size_t>(m.consumer);
    if (--pending_inputs_[ci] == 0) try_start(platform_.id_of(mapping_.at(m.consumer)));
}

void Engine::check(MsgState &m, bool recheck) {
    ++result_.diagnostics.checks;
    count(EnergyEvent::arbitration, 1);
    cp_.request(m.id, m.route, m.tau);
    const auto res = cp_.check_links(m.id, m.route);
    if (res.granted) {
        if (m.open_block) {
            result_.diagnostics.blocking[*m.open_block].end = now_;
            m.open_block.reset();
        }
        grant(m);
        return;
    }
    const MessageId blocker = *res.blocker;
    bool owns = false;
    for (LinkId l : route_links(m.route, platform_)) owns = owns || cp_.link_owner(l) == blocker;
    if (!owns) throw InvariantViolation("message " + std::to_string(m.id) + " would sleep on a non-holder");
    cp_.sleep_on(m.id, blocker);
    if (cp_.has_wait_cycle()) throw InvariantViolation("wait-for cycle detected");
    if (!m.open_block || result_.diagnostics.blocking[*m.open_block].holder != blocker) {
        if (m.open_block) result_.diagnostics.blocking[*m.open_block].end = now_;
        m.open_block = result_.diagnostics.blocking.size();
        result_.diagnostics.blocking.push_back({m.id, blocker, now_, now_, 0});
    }
    trace(now_, recheck ? "recheck-fail" : "check-fail", m.id, "blocker=" + std::to_string(blocker));
}

void Engine::grant(MsgState &m) {
    ++result_.diagnostics.grants;
    const auto links = route_links(m.route, platform_);
    for (LinkId l : links) {
        if (cp_.link_owner(l) != m.id) throw InvariantViolation("partial link acquisition");
        for (const auto &q : cp_.queue(l).requests()) {
            if (q < LinkRequestQueue::Request{m.id, m.tau}) throw InvariantViolation("grant skipped an earlier request");
        }
    }
    const Cycle g = now_;
    m.thread->advance(Phase::configure);
    const auto cfg = cp_.configure_path(m.id, m.route, m.latches, m.clusters, g);
    if (!registers_form_chain(cp_.routers(), m.route, m.id, platform_)) {
        throw InvariantViolation("router registers do not realise the route of message " + std::to_string(m.id));
    }
    const Cycle inject = cp_.begin_transmission(cfg, g);
    const auto lat = static_cast<int>(m.latches.size());
    const auto sched = traverse(m.size, lat, timing(), inject);
    const Cycle tail = sched.tail_eject();
    m.thread->advance(Phase::communicate);

    auto &r = m.rec;
    r.grant = g;
    r.inject = inject;
    r.delivered = tail;
    r.released = tail + timing().release_delay;
    r.l_conf = inject - g;
    r.l_rc = cfg.l_rc;
    r.l_tr = tail - inject + timing().release_delay;
    r.l_cs = g - m.tau;
    r.l_woc = msg_arsmart(r.l_conf, r.l_tr, r.l_cs).without_contention;
    r.latches = lat;
    r.limit = lat;
    m.woc = r.l_woc;

    const auto packets = static_cast<int>(m.packets.size());
    std::int64_t offset = 0;
    for (int f : m.packets) {
        const Cycle head_inject = inject + offset * timing().link_delay;
        const Cycle packet_tail = sched.eject(offset + f - 1);
        r.packet_latency.push_back(Rational(r.l_conf + r.l_cs, packets) +
                                   Rational(packet_tail - head_inject - timing().link_delay));
        offset += f;
    }
    r.l_head = r.l_conf + packets * lat * (timing().router_delay + timing().link_delay);
    r.l_seri = (m.size - packets) * timing().link_delay;
    r.l_ct = r.l_cs;

    const auto hops = static_cast<std::int64_t>(links.size());
    count(EnergyEvent::link_traversal, m.size * hops);
    count(EnergyEvent::crossbar_traversal, m.size * (hops + 1));
    count(EnergyEvent::buffer_write, m.size * lat);
    count(EnergyEvent::buffer_read, m.size * lat);
    const auto ncl = static_cast<std::int64_t>(m.clusters.size());
    // router-configure + configuration-finish per router, begin + finish per cluster
    count(EnergyEvent::config_signal, 2 * cfg.router_configs + 2 * ncl);

    std::string lk;
    for (std::size_t i = 0; i < links.size(); ++i) lk += (i ? "," : "") + std::to_string(links[i]);
    trace(g, "grant", m.id, "links=" + lk + " tau=" + std::to_string(m.tau));
    trace(g, "configure", m.id,
          "L_cn=" + std::to_string(cfg.l_cn) + " L_rc=" + std::to_string(cfg.l_rc) +
              " routers=" + std::to_string(cfg.router_configs) + " latches=" + join(m.latches));
    trace(inject, "inject", m.id, "flits=" + std::to_string(m.size));
    trace(tail, "eject", m.id, "flits=" + std::to_string(m.size));
    push(tail, EvKind::delivered, m.id);
    push(r.released, EvKind::release, m.id);
}

void Engine::release(MsgState &m) {
    m.thread->advance(Phase::release);
    const auto woken = cp_.release_path(m.id, m.route);
    m.thread->advance(Phase::done);
    m.active = false;
    m.inactive_at = now_;
    trace(now_, "release", m.id, "links=" + std::to_string(route_links(m.route, platform_).size()));
    for (MessageId w : woken) {
        auto &wm = msgs_[static_cast<std::size_t>(w)];
        if (wm.open_block) {
            auto &b = result_.diagnostics.blocking[*wm.open_block];
            b.end = now_;
            b.holder_woc = m.woc;
            wm.open_block.reset();
        }
        push(now_, EvKind::recheck, w, wm.tau, w);
    }
}

void Engine::hold(LinkId l, Cycle until) {
    auto &h = holds_[static_cast<std::size_t>(l)];
    if (h.busy_until > now_) throw InvariantViolation("link " + std::to_string(l) + " claimed twice");
    h.busy_until = until;
    push(until, EvKind::link_free, l);
}

// True when the packet may take the link now; otherwise it joins the FCFS queue.
bool Engine::claim(LinkId l, std::int64_t pid, Packet &pk) {
    auto &h = holds_[static_cast<std::size_t>(l)];
    const bool free = h.busy_until <= now_;
    const bool first = h.queue.empty() || h.queue.front().second == pid;
    if (free && first) {
        if (!h.queue.empty()) h.queue.erase(h.queue.begin());
        if (pk.arrival >= 0) {
            pk.wait += now_ - pk.arrival;
            pk.arrival = -1;
        }
        return true;
    }
    if (pk.arrival < 0) {
        pk.arrival = now_;
        const std::pair<Cycle, std::int64_t> key{now_, pid};
        h.queue.insert(std::upper_bound(h.queue.begin(), h.queue.end(), key), key);
    }
    return false;
}

void Engine::link_free(LinkId l) {
    auto &h = holds_[static_cast<std::size_t>(l)];
    if (h.busy_until > now_ || h.queue.empty()) return;
    const std::int64_t pid = h.queue.front().second;
    packet_step(pid);
}

void Engine::packet_step(std::int64_t pid) {
    Packet &pk = packets_[static_cast<std::size_t>(pid)];
    if (cfg_.noc == NocType::smart) {
        smart_step(pk, pid);
    } else {
        traditional_step(pk, pid);
    }
}

void Engine::traditional_step(Packet &pk, std::int64_t pid) {
    const MsgState &m = msgs_[static_cast<std::size_t>(pk.msg)];
    const auto links = route_links(m.route, platform_);
    const std::size_t j = pk.pos;  // 0 is the injection link
    const LinkId l = j == 0 ? link_id(m.src, Port::Local) : links[j - 1];
    if (j == 0) {
        // waiting behind earlier packets of the NI is not network latency
        const Cycle arrival = pk.arrival;
        if (!claim(l, pid, pk)) return;
        if (arrival >= 0) pk.wait -= now_ - arrival;
        pk.issue = now_;
    } else if (!claim(l, pid, pk)) {
        return;
    }
    const auto &t = timing();
    hold(l, now_ + pk.flits * t.link_delay);
    count(EnergyEvent::arbitration, 1);
    count(EnergyEvent::buffer_write, pk.flits);
    count(EnergyEvent::buffer_read, pk.flits);
    count(EnergyEvent::crossbar_traversal, pk.flits);
    if (j < links.size()) {
        count(EnergyEvent::link_traversal, pk.flits);
        ++pk.pos;
        push(now_ + t.link_delay + t.router_delay, EvKind::packet_step, pid, pid);
        return;
    }
    pk.tail = now_ + t.link_delay + (pk.flits - 1) * t.link_delay;
    packet_done(pk);
}

void Engine::smart_step(Packet &pk, std::int64_t pid) {
    MsgState &m = msgs_[static_cast<std::size_t>(pk.msg)];
    const auto links = route_links(m.route, platform_);
    if (pk.issue < 0) pk.issue = now_;
    if (!claim(links[pk.pos], pid, pk)) return;
    const auto &t = timing();
    std::size_t k = 0;
    bool blocked = false;
    while (pk.pos + k < links.size() && static_cast<int>(k) < platform_.hpc_max()) {
        if (k > 0 && holds_[static_cast<std::size_t>(links[pk.pos + k])].busy_until > now_) {
            blocked = true;
            break;
        }
        ++k;
    }
    const bool reached = pk.pos + k == links.size();
    if (!reached) {
        if (blocked) {
            ++pk.ct;
        } else {
            ++pk.limit;
        }
    }
    const Cycle cost = (pk.first_segment ? 2 : 1) * (t.router_delay + t.link_delay);
    const Cycle arrive = now_ + cost;
    const Cycle until = arrive + (pk.flits - 1) * t.link_delay;
    for (std::size_t i = 0; i < k; ++i) hold(links[pk.pos + i], until);
    // setup request arbitrated at every router it covers, buffer write/read where it starts
    count(EnergyEvent::arbitration, static_cast<std::int64_t>(k) + 1);
    count(EnergyEvent::buffer_write, pk.flits);
    count(EnergyEvent::buffer_read, pk.flits);
    count(EnergyEvent::link_traversal, pk.flits * static_cast<std::int64_t>(k));
    count(EnergyEvent::crossbar_traversal, pk.flits * static_cast<std::int64_t>(k));
    if (pk.first_segment) {
        count(EnergyEvent::crossbar_traversal, pk.flits);  // source router
        const auto next = pid + 1;
        if (pk.index + 1 < static_cast<int>(m.packets.size())) push(until, EvKind::packet_step, next, next);
    }
    pk.first_segment = false;
    pk.pos += k;
    if (reached) {
        pk.tail = until;
        packet_done(pk);
        return;
    }
    push(arrive, EvKind::packet_step, pid, pid);
}

void Engine::packet_done(Packet &pk) {
    MsgState &m = msgs_[static_cast<std::size_t>(pk.msg)];
    const auto &t = timing();
    const Cycle latency = pk.tail - pk.issue;
    const auto hops = static_cast<int>(m.route.size()) - 1;
    Cycle closed = 0;
    if (cfg_.noc == NocType::smart) {
        closed = e2e_smart(t.router_delay, t.link_delay, pk.ct, pk.limit, pk.flits, pk.wait);
    } else {
        closed = e2e_traditional(t.router_delay, t.link_delay, hops + 1, pk.flits, pk.wait);
    }
    if (closed != latency) {
        throw InvariantViolation("packet latency " + std::to_string(latency) + " disagrees with the closed form " +
                                 std::to_string(closed));
    }
    auto &r = m.rec;
    r.packet_latency.push_back(Rational(latency));
    r.l_ct += pk.wait;
    r.l_seri += (pk.flits - 1) * t.link_delay;
    r.l_head += latency - pk.wait - (pk.flits - 1) * t.link_delay;
    r.ct += pk.ct;
    r.limit = std::max(r.limit, pk.limit);
    r.delivered = std::max(r.delivered, pk.tail);
    if (++m.packets_done == static_cast<int>(m.packets.size())) {
        r.released = r.delivered;
        m.active = false;
        m.inactive_at = now_;
        trace(r.delivered, "eject", m.id, "flits=" + std::to_string(m.size));
        push(r.delivered, EvKind::delivered, m.id);
    }
}

SimResult Engine::run() {
    cfg_.validate();
    mapping_.validate(graph_, platform_);
    const auto order = graph_.topological_order();
    const auto nt = graph_.task_count();
    const auto nr = static_cast<std::size_t>(platform_.router_count());
    pending_inputs_.assign(nt, 0);
    task_start_.assign(nt, -1);
    task_finish_.assign(nt, -1);
    pe_order_.assign(nr, {});
    pe_next_.assign(nr, 0);
    pe_busy_.assign(nr, 0);
    per_source_seq_.assign(nr, 0);
    for (TaskId t : order) pe_order_[static_cast<std::size_t>(platform_.id_of(mapping_.at(t)))].push_back(t);

    const auto &edges = graph_.edges();
    msgs_.resize(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto &m = msgs_[i];
        const auto &e = edges[i];
        m.id = static_cast<MessageId>(i);
        m.producer = e.src;
        m.consumer = e.dst;
        m.src = platform_.id_of(mapping_.at(e.src));
        m.dst = platform_.id_of(mapping_.at(e.dst));
        m.size = std::max<std::int64_t>(1, std::llround(static_cast<double>(e.size_flits) * cfg_.air));
        m.packets = packetize(m.size, timing().package_size);
        ++pending_inputs_[static_cast<std::size_t>(e.dst)];
        auto &r = m.rec;
        r.id = m.id;
        r.src = m.src;
        r.dst = m.dst;
        r.size_flits = m.size;
        r.packets = static_cast<int>(m.packets.size());
    }

    for (RouterId pe = 0; pe < platform_.router_count(); ++pe) try_start(pe);
    while (!events_.empty()) {
        const Event ev = events_.top();
        events_.pop();
        if (ev.cycle < now_) throw InvariantViolation("event queue went back in time");
        now_ = ev.cycle;
        switch (ev.kind) {
            case EvKind::link_free: link_free(static_cast<LinkId>(ev.a)); break;
            case EvKind::release: release(msgs_[static_cast<std::size_t>(ev.a)]); break;
            case EvKind::delivered: deliver(msgs_[static_cast<std::size_t>(ev.a)]); break;
            case EvKind::task_finish: finish_task(static_cast<TaskId>(ev.a)); break;
            case EvKind::recheck: check(msgs_[static_cast<std::size_t>(ev.a)], true); break;
            case EvKind::check: check(msgs_[static_cast<std::size_t>(ev.a)], false); break;
            case EvKind::packet_step: packet_step(ev.a); break;
        }
    }

    for (std::size_t t = 0; t < nt; ++t) {
        if (task_finish_[t] < 0) throw InvariantViolation("task " + std::to_string(t) + " never finished");
    }
    auto &rep = result_.report;
    rep.noc = noc_name(cfg_.noc);
    rep.routing = routing_name(cfg_.routing);
    rep.seed = cfg_.seed;
    for (auto &m : msgs_) {
        if (m.active) throw InvariantViolation("message " + std::to_string(m.id) + " never completed");
        m.rec.route = m.route;
        m.rec.hops = static_cast<int>(m.route.size()) - 1;
        m.rec.clusters = static_cast<int>(m.clusters.size());
        if (cfg_.noc == NocType::arsmart && m.src != m.dst) {
            // sharers active at the assignment instant, including those routed later in the same cycle
            Cycle bound = 0;
            for (const auto &o : msgs_) {
                if (o.id != m.id && o.routed_at >= 0 && o.routed_at <= m.routed_at && o.inactive_at > m.routed_at &&
                    routes_share_link(o.route, m.route, platform_)) {
                    bound += o.woc;
                }
            }
            result_.diagnostics.source_blocking.push_back({m.id, m.rec.l_cs, bound});
        }
        rep.messages.push_back(m.rec);
    }
    if (cfg_.noc == NocType::arsmart) {
        for (const auto &tb : cp_.tables()) {
            for (const auto &m : msgs_) {
                if (!tb.owned_by(m.id).empty()) throw InvariantViolation("link still owned after the run");
            }
        }
    }
    rep.avg_network_latency = average_packet_latency(rep.messages);
    rep.total_energy = energy_of(rep.events, cfg_.energy);
    std::stable_sort(result_.trace.lines.begin(), result_.trace.lines.end(),
                     [](const TraceLine &a, const TraceLine &b) { return a.cycle < b.cycle; });
    return std::move(result_);
}

}  // namespace

SimResult simulate(const TaskGraph &graph, const Mapping &mapping, const Platform &platform,
                   const SimConfig &config) {
    Engine e(graph, mapping, platform, config);
    return e.run();
}

}  // namespace arsmart
