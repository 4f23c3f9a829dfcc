#ifndef NETSUP_SIM_HPP
#define NETSUP_SIM_HPP

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netsup/automaton.hpp"
#include "netsup/channels.hpp"

namespace netsup {

// splitmix64: tiny, portable, identical streams for identical seeds on
// every platform. Used instead of <random> engines because the standard
// does not pin down distribution outputs across implementations.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// A system ready to simulate: an automaton whose states carry channel
// annotations and a bad flag. Built either from a transformed plant alone
// or from a supervisor composed with one.
struct AnnotatedSystem {
    Automaton automaton;
    std::vector<StateAnnotation> annotations;
    std::vector<char> bad;
    ChannelParams params;
    bool check_invariant = false; // only meaningful with the S^k counter composed
};

inline AnnotatedSystem make_annotated_system(const TransformedPlant& tp,
                                             const std::set<int>& bad_states) {
    if (tp.annotations.size() != static_cast<size_t>(tp.automaton.num_states()))
        throw Error(ErrorCode::MISSING_ANNOTATIONS, "transformed plant lacks state annotations");
    AnnotatedSystem sys;
    sys.automaton = tp.automaton;
    sys.annotations = tp.annotations;
    sys.params = tp.params;
    sys.check_invariant = tp.with_counters;
    sys.bad.assign(tp.automaton.num_states(), 0);
    for (int b : bad_states) {
        if (b < 0 || b >= tp.automaton.num_states())
            throw Error(ErrorCode::INVALID_PARAMS, "bad state out of range");
        sys.bad[b] = 1;
    }
    return sys;
}

// Closed loop supervisor || transformed plant; annotations and bad flags
// are pulled from the plant component.
inline AnnotatedSystem make_annotated_system(const Automaton& sup, const TransformedPlant& tp,
                                             const std::set<int>& bad_states) {
    if (tp.annotations.size() != static_cast<size_t>(tp.automaton.num_states()))
        throw Error(ErrorCode::MISSING_ANNOTATIONS, "transformed plant lacks state annotations");
    auto prod = sync_product_with_origins({sup, tp.automaton});
    AnnotatedSystem sys;
    sys.automaton = prod.automaton;
    sys.params = tp.params;
    sys.check_invariant = tp.with_counters;
    sys.bad.assign(prod.automaton.num_states(), 0);
    for (const auto& t : prod.origins) sys.annotations.push_back(tp.annotations[t[1]]);
    for (size_t s = 0; s < prod.origins.size(); ++s)
        if (bad_states.count(prod.origins[s][1])) sys.bad[s] = 1;
    return sys;
}

struct SimConfig {
    uint64_t seed = 0;
    int steps = 0;
    double loss_bias = 0.5; // weight multiplier on loss transitions
    bool trace = false;
};

struct Violation {
    int step = -1; // simulation step, or visited state for exhaustive checks
    std::string monitor;
    std::string detail;
};

struct MonitorReport {
    int steps_executed = 0;
    std::vector<Violation> violations;
    int max_queue_seen = 0;     // max l_CC over visited states
    int max_obs_in_flight = 0;  // max l_OC over visited states
    int max_loss_run = 0;       // longest run of consecutive command losses
    int deadlocked_at = -1;     // unmarked state with no outgoing transition
    std::string trace;

    bool clean() const { return violations.empty() && deadlocked_at < 0; }

    std::string summary() const {
        std::ostringstream os;
        os << "steps=" << steps_executed << " violations=" << violations.size()
           << " max_queue=" << max_queue_seen << " max_obs_in_flight=" << max_obs_in_flight
           << " max_loss_run=" << max_loss_run;
        if (deadlocked_at >= 0) os << " deadlocked_at=" << deadlocked_at;
        os << "\n";
        for (const auto& v : violations)
            os << "violation step=" << v.step << " monitor=" << v.monitor << " " << v.detail
               << "\n";
        return os.str();
    }
};

namespace detail {

// Per-state channel monitors. `loss_run` is the consecutive-command-loss
// count upon entering the state.
inline void run_state_monitors(const AnnotatedSystem& sys, int state, int step, int loss_run,
                               MonitorReport& rep) {
    const auto& an = sys.annotations[state];
    const auto& p = sys.params;
    auto violate = [&](const char* monitor, const std::string& detail) {
        rep.violations.push_back({step, monitor, detail});
    };
    if (sys.bad[state]) violate("bad-state", "state " + std::to_string(state));
    if (an.l_oc > p.num_o + 1)
        violate("obs-channel-bound", "l_OC=" + std::to_string(an.l_oc));
    const int cap = (p.num_o + p.num_c + 2) * p.k();
    if (an.l_cc > cap) violate("control-queue-bound", "l_CC=" + std::to_string(an.l_cc));
    // Inductive invariant relating both channels to the command counter;
    // only meaningful when the S^k counter is part of the composition.
    if (sys.check_invariant &&
        an.l_cc + (an.l_oc + an.m_ttl) * p.k() > (p.num_o + p.num_c + 1) * p.k() + an.sk)
        violate("queue-invariant",
                "l_CC=" + std::to_string(an.l_cc) + " l_OC=" + std::to_string(an.l_oc) +
                    " m_ttl=" + std::to_string(an.m_ttl) + " sk=" + std::to_string(an.sk));
    if (loss_run > p.m)
        violate("consecutive-loss", "run=" + std::to_string(loss_run));
    rep.max_queue_seen = std::max(rep.max_queue_seen, an.l_cc);
    rep.max_obs_in_flight = std::max(rep.max_obs_in_flight, an.l_oc);
    rep.max_loss_run = std::max(rep.max_loss_run, loss_run);
}

} // namespace detail

// Seeded random walk with runtime monitors. Loss transitions are taken with
// weight loss_bias relative to the others. A marked dead end terminates the
// walk normally; an unmarked one is reported as a deadlock.
inline MonitorReport simulate(const AnnotatedSystem& sys, const SimConfig& cfg) {
    if (sys.annotations.size() != static_cast<size_t>(sys.automaton.num_states()))
        throw Error(ErrorCode::MISSING_ANNOTATIONS, "system lacks state annotations");
    SplitMix64 rng(cfg.seed);
    MonitorReport rep;
    std::ostringstream trace;
    int state = sys.automaton.initial;
    int loss_run = 0;
    detail::run_state_monitors(sys, state, 0, loss_run, rep);
    for (int step = 0; step < cfg.steps; ++step) {
        // Flatten the outgoing transitions with their weights.
        std::vector<std::pair<EventLabel, int>> out;
        std::vector<double> weight;
        double total = 0.0;
        for (const auto& [lbl, dsts] : sys.automaton.trans[state])
            for (int d : dsts) {
                out.emplace_back(lbl, d);
                double w = lbl.is_loss() ? cfg.loss_bias : 1.0;
                weight.push_back(w);
                total += w;
            }
        if (out.empty()) {
            if (!sys.automaton.marked.count(state)) rep.deadlocked_at = state;
            break;
        }
        double r = rng.uniform() * total;
        size_t pick = 0;
        for (; pick + 1 < out.size(); ++pick) {
            if (r < weight[pick]) break;
            r -= weight[pick];
        }
        const auto& [lbl, dst] = out[pick];
        loss_run = (lbl.kind == EventKind::CMD_LOSS) ? loss_run + 1
                   : (lbl.kind == EventKind::CMD_OUT) ? 0
                                                      : loss_run;
        if (cfg.trace) {
            const auto& an = sys.annotations[dst];
            trace << "step " << step << " " << state << " --" << lbl.str() << "--> " << dst
                  << " | " << an.l_cc << " " << an.l_oc << " " << an.m_ttl << " " << an.sk
                  << "\n";
        }
        state = dst;
        ++rep.steps_executed;
        detail::run_state_monitors(sys, state, step + 1, loss_run, rep);
    }
    rep.trace = trace.str();
    return rep;
}

// Exhaustive variant of the monitors: sweep every reachable state for the
// bound and invariant checks, and explore (state, loss-run) pairs for the
// consecutive-loss monitor. max_queue_seen then reports the exact maximum
// of l_CC over the reachable states.
inline MonitorReport exhaustive_check(const AnnotatedSystem& sys) {
    if (sys.annotations.size() != static_cast<size_t>(sys.automaton.num_states()))
        throw Error(ErrorCode::MISSING_ANNOTATIONS, "system lacks state annotations");
    MonitorReport rep;
    const Automaton& a = sys.automaton;
    std::vector<int> order;
    {
        std::vector<char> seen(a.num_states(), 0);
        seen[a.initial] = 1;
        order.push_back(a.initial);
        for (size_t head = 0; head < order.size(); ++head)
            for (const auto& [lbl, dsts] : a.trans[order[head]])
                for (int d : dsts)
                    if (!seen[d]) {
                        seen[d] = 1;
                        order.push_back(d);
                    }
    }
    for (int q : order) {
        detail::run_state_monitors(sys, q, q, 0, rep);
        bool dead = true;
        for (const auto& [lbl, dsts] : a.trans[q])
            if (!dsts.empty()) {
                dead = false;
                break;
            }
        if (dead && !a.marked.count(q) && rep.deadlocked_at < 0) rep.deadlocked_at = q;
    }
    rep.steps_executed = static_cast<int>(order.size());
    // Consecutive-loss runs over (state, run-length) pairs. Runs above m are
    // a violation; the search caps them at m+1 so it terminates.
    std::set<std::pair<int, int>> seen{{a.initial, 0}};
    std::vector<std::pair<int, int>> queue{{a.initial, 0}};
    for (size_t head = 0; head < queue.size(); ++head) {
        auto [q, run] = queue[head];
        rep.max_loss_run = std::max(rep.max_loss_run, run);
        if (run > sys.params.m) {
            rep.violations.push_back(
                {q, "consecutive-loss", "run=" + std::to_string(run)});
            continue;
        }
        for (const auto& [lbl, dsts] : a.trans[q]) {
            int nrun = (lbl.kind == EventKind::CMD_LOSS) ? run + 1
                       : (lbl.kind == EventKind::CMD_OUT) ? 0
                                                          : run;
            for (int d : dsts)
                if (seen.insert({d, nrun}).second) queue.emplace_back(d, nrun);
        }
    }
    return rep;
}

} // namespace netsup

#endif
