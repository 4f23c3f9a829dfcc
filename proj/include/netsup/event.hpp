#ifndef NETSUP_EVENT_HPP
#define NETSUP_EVENT_HPP

#include <algorithm>
#include <compare>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netsup/errors.hpp"

namespace netsup {

// Kind of a lifted-alphabet event. PLAIN doubles as an unlifted base event
// when an automaton has not yet been relabelled.
enum class EventKind {
    PLAIN = 0,   // unobservable plant event (or raw base event pre-relabel)
    OBS_IN = 1,  // observable plant event fires, observation message enters channel
    OBS_OUT = 2, // supervisor receives an observation message
    OBS_LOSS = 3,// observation message lost in transit
    CMD_IN = 4,  // supervisor sends a control command
    CMD_OUT = 5, // plant side receives a control command
    CMD_LOSS = 6,// control command lost in transit
};

inline bool kind_is_cmd(EventKind k) {
    return k == EventKind::CMD_IN || k == EventKind::CMD_OUT || k == EventKind::CMD_LOSS;
}

inline bool kind_is_loss(EventKind k) {
    return k == EventKind::OBS_LOSS || k == EventKind::CMD_LOSS;
}

// A structured event label. For PLAIN/OBS_* the payload is a single base
// event name; for CMD_* it is a nonempty set of controllable base events
// (the control command gamma), kept sorted and unique.
struct EventLabel {
    EventKind kind = EventKind::PLAIN;
    std::string base;                  // payload for PLAIN/OBS_*
    std::vector<std::string> command;  // payload for CMD_*, sorted unique

    EventLabel() = default;

    static EventLabel plain(std::string b) {
        EventLabel e;
        e.kind = EventKind::PLAIN;
        e.base = std::move(b);
        return e;
    }
    static EventLabel obs_in(std::string b) { return lifted(EventKind::OBS_IN, std::move(b)); }
    static EventLabel obs_out(std::string b) { return lifted(EventKind::OBS_OUT, std::move(b)); }
    static EventLabel obs_loss(std::string b) { return lifted(EventKind::OBS_LOSS, std::move(b)); }

    static EventLabel lifted(EventKind k, std::string b) {
        EventLabel e;
        e.kind = k;
        e.base = std::move(b);
        return e;
    }

    static EventLabel cmd(EventKind k, std::vector<std::string> gamma) {
        if (gamma.empty())
            throw Error(ErrorCode::INVALID_PARAMS, "control command must be nonempty");
        std::sort(gamma.begin(), gamma.end());
        gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
        EventLabel e;
        e.kind = k;
        e.command = std::move(gamma);
        return e;
    }
    static EventLabel cmd_in(std::vector<std::string> g) { return cmd(EventKind::CMD_IN, std::move(g)); }
    static EventLabel cmd_out(std::vector<std::string> g) { return cmd(EventKind::CMD_OUT, std::move(g)); }
    static EventLabel cmd_loss(std::vector<std::string> g) { return cmd(EventKind::CMD_LOSS, std::move(g)); }

    bool is_cmd() const { return kind_is_cmd(kind); }
    bool is_loss() const { return kind_is_loss(kind); }

    // Fixed total order: kind rank, then payload lexicographic. Canonical
    // state numbering of every construction depends on this order.
    friend auto operator<=>(const EventLabel& a, const EventLabel& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        if (auto c = a.base <=> b.base; c != 0) return c;
        return a.command <=> b.command;
    }
    friend bool operator==(const EventLabel& a, const EventLabel& b) = default;

    std::string str() const {
        switch (kind) {
            case EventKind::PLAIN: return base;
            case EventKind::OBS_IN: return "in:" + base;
            case EventKind::OBS_OUT: return "out:" + base;
            case EventKind::OBS_LOSS: return "loss:" + base;
            case EventKind::CMD_IN: return "cmd_in:" + command_str();
            case EventKind::CMD_OUT: return "cmd_out:" + command_str();
            case EventKind::CMD_LOSS: return "cmd_loss:" + command_str();
        }
        return "?";
    }

    std::string command_str() const {
        std::ostringstream os;
        os << '{';
        for (size_t i = 0; i < command.size(); ++i) {
            if (i) os << ',';
            os << command[i];
        }
        os << '}';
        return os.str();
    }

    // Inverse of str(). Accepts plain names and the in:/out:/loss:/cmd_*:{}
    // forms produced by str().
    static EventLabel parse(const std::string& s) {
        auto starts = [&](const char* p) {
            return s.rfind(p, 0) == 0;
        };
        auto parse_set = [&](size_t off) {
            if (s.size() < off + 2 || s[off] != '{' || s.back() != '}')
                throw Error(ErrorCode::PARSE_ERROR, "bad command label: " + s);
            std::vector<std::string> out;
            std::string body = s.substr(off + 1, s.size() - off - 2);
            std::istringstream is(body);
            std::string item;
            while (std::getline(is, item, ','))
                if (!item.empty()) out.push_back(item);
            if (out.empty())
                throw Error(ErrorCode::PARSE_ERROR, "empty command label: " + s);
            return out;
        };
        if (starts("cmd_in:")) return cmd_in(parse_set(7));
        if (starts("cmd_out:")) return cmd_out(parse_set(8));
        if (starts("cmd_loss:")) return cmd_loss(parse_set(9));
        if (starts("in:")) return obs_in(s.substr(3));
        if (starts("out:")) return obs_out(s.substr(4));
        if (starts("loss:")) return obs_loss(s.substr(5));
        if (s.empty()) throw Error(ErrorCode::PARSE_ERROR, "empty event label");
        return plain(s);
    }
};

using LabelSet = std::set<EventLabel>;

// All nonempty subsets of sigma_c, i.e. the command alphabet Gamma, in a
// fixed deterministic order.
inline std::vector<std::vector<std::string>> all_commands(const std::set<std::string>& sigma_c) {
    std::vector<std::string> base(sigma_c.begin(), sigma_c.end());
    std::vector<std::vector<std::string>> out;
    const size_t n = base.size();
    for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
        std::vector<std::string> cmd;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t{1} << i)) cmd.push_back(base[i]);
        out.push_back(std::move(cmd));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace netsup

#endif
