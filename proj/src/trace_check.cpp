// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/trace_check.hpp"

#include <map>
#include <sstream>

namespace arsmart {

namespace {

// value of `key=` inside a space-separated detail string
std::string detail_field(const std::string &detail, const std::string &key) {
    std::istringstream in(detail);
    std::string tok;
    while (in >> tok) {
        if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
    }
    return {};
}

std::vector<long long> split_numbers(const std::string &s) {
    std::vector<long long> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoll(tok));
    }
    return out;
}

}  // namespace

std::vector<std::string> validate_trace(const Trace &trace) {
    std::vector<std::string> problems;
    auto report = [&](const TraceLine &l, const std::string &what) {
        problems.push_back("cycle " + std::to_string(l.cycle) + " msg " + std::to_string(l.msg) + ": " + what);
    };
    std::map<long long, MessageId> owner;
    std::map<MessageId, std::vector<long long>> held;
    std::map<MessageId, long long> injected;
    std::map<MessageId, long long> ejected;
    Cycle last = 0;
    for (const auto &l : trace.lines) {
        if (l.cycle < last) report(l, "cycle goes backwards");
        last = std::max(last, l.cycle);
        try {
            if (l.kind == "grant") {
                if (held.contains(l.msg)) report(l, "granted twice without release");
                const auto links = split_numbers(detail_field(l.detail, "links"));
                for (long long k : links) {
                    if (auto it = owner.find(k); it != owner.end()) {
                        report(l, "link " + std::to_string(k) + " already owned by " + std::to_string(it->second));
                    }
                    owner[k] = l.msg;
                }
                held[l.msg] = links;
            } else if (l.kind == "release") {
                auto it = held.find(l.msg);
                if (it == held.end()) {
                    report(l, "release without grant");
                    continue;
                }
                for (long long k : it->second) {
                    if (owner[k] != l.msg) report(l, "releases link " + std::to_string(k) + " it does not own");
                    owner.erase(k);
                }
                held.erase(it);
            } else if (l.kind == "inject") {
                injected[l.msg] += std::stoll(detail_field(l.detail, "flits"));
            } else if (l.kind == "eject") {
                ejected[l.msg] += std::stoll(detail_field(l.detail, "flits"));
            }
        } catch (const std::logic_error &) {
            report(l, "malformed detail '" + l.detail + "'");
        }
    }
    for (const auto &[msg, links] : held) {
        problems.push_back("message " + std::to_string(msg) + " still holds " + std::to_string(links.size()) +
                           " links at the end");
    }
    for (const auto &[msg, n] : injected) {
        const long long out = ejected.contains(msg) ? ejected[msg] : 0;
        if (out != n) {
            problems.push_back("message " + std::to_string(msg) + " injected " + std::to_string(n) +
                               " flits but ejected " + std::to_string(out));
        }
    }
    for (const auto &[msg, n] : ejected) {
        if (!injected.contains(msg)) problems.push_back("message " + std::to_string(msg) + " ejected without injection");
    }
    return problems;
}

}  // namespace arsmart
