#ifndef NETSUP_CHANNELS_HPP
#define NETSUP_CHANNELS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netsup/alphabet.hpp"
#include "netsup/automaton.hpp"

namespace netsup {

enum class CommandMechanism {
    FIRST_WINS, // the first command received within a time step is kept
    LAST_WINS,  // the most recently received command overwrites
};

// Delay / loss parameters of the two channels. k is fixed to m+1 so that at
// least one of the k commands sent per observation survives m consecutive
// losses. The control-queue capacity defaults to the (num_o+num_c+2)k bound,
// which the composed system can reach but never exceed.
struct ChannelParams {
    int num_o = 0; // observation-channel delay bound, in time steps
    int num_c = 0; // control-channel delay bound
    int m = 0;     // max consecutive control-message losses
    std::optional<int> capacity_override;
    CommandMechanism mechanism = CommandMechanism::FIRST_WINS;

    int k() const { return m + 1; }
    int cc_capacity() const {
        if (capacity_override) return *capacity_override;
        return (num_o + num_c + 2) * k();
    }

    void validate() const {
        if (num_o < 0 || num_c < 0 || m < 0)
            throw Error(ErrorCode::INVALID_PARAMS, "channel parameters must be nonnegative");
        if (capacity_override && *capacity_override < 1)
            throw Error(ErrorCode::INVALID_CAPACITY, "control-channel capacity must be >= 1");
    }
};

// Relabel a plant over the base alphabet: observable events become sigma^in,
// unobservable events stay plain. State set, marking and initial are kept.
inline Automaton relabel_plant(const Automaton& g, const AlphabetSpec& alph) {
    g.validate();
    alph.validate();
    Automaton out;
    out.trans.resize(g.num_states());
    out.initial = g.initial;
    out.marked = g.marked;
    for (const auto& e : alph.sigma_uo()) out.alphabet.insert(EventLabel::plain(e));
    for (const auto& e : alph.sigma_o) out.alphabet.insert(EventLabel::obs_in(e));
    for (int q = 0; q < g.num_states(); ++q)
        for (const auto& [lbl, dsts] : g.trans[q]) {
            if (lbl.kind != EventKind::PLAIN || !alph.sigma.count(lbl.base))
                throw Error(ErrorCode::UNKNOWN_EVENT, "plant event not in alphabet: " + lbl.str());
            EventLabel nl = alph.observable(lbl.base) ? EventLabel::obs_in(lbl.base)
                                                      : EventLabel::plain(lbl.base);
            for (int d : dsts) out.add_transition(q, nl, d);
        }
    return out;
}

struct ObservationChannel {
    Automaton automaton;     // all states marked
    std::vector<int> l_oc;   // messages in flight, per state
};

// Observation channel OC, built directly on channel contents so only states
// with multiplicity-1 messages and pairwise-distinct time-to-leaves ever
// materialize. Non-FIFO: any message may leave regardless of its ttl; a
// message with ttl 0 must leave before the next time step.
inline ObservationChannel build_observation_channel(const AlphabetSpec& alph, int num_o) {
    alph.validate();
    if (num_o < 0) throw Error(ErrorCode::INVALID_PARAMS, "num_o must be >= 0");

    using Content = std::vector<std::pair<int, std::string>>; // (ttl, event), sorted
    auto check_invariants = [](const Content& c) {
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i].first == c[i - 1].first)
                throw Error(ErrorCode::MALFORMED_AUTOMATON,
                            "observation channel state with duplicate time-to-leave");
    };
    auto min_ttl_ok = [](const Content& c) { return c.empty() || c.front().first >= 1; };
    auto tick = [](const Content& c) {
        Content out;
        for (const auto& [ttl, e] : c) out.emplace_back(ttl - 1, e);
        return out;
    };

    ObservationChannel oc;
    for (const auto& e : alph.sigma_uo()) oc.automaton.alphabet.insert(EventLabel::plain(e));
    for (const auto& e : alph.sigma_o) {
        oc.automaton.alphabet.insert(EventLabel::obs_in(e));
        oc.automaton.alphabet.insert(EventLabel::obs_out(e));
    }
    for (const auto& e : alph.sigma_ol) oc.automaton.alphabet.insert(EventLabel::obs_loss(e));

    std::map<Content, int> id_of;
    std::vector<Content> states{Content{}};
    id_of[states[0]] = 0;
    oc.automaton.add_state(true);

    auto intern = [&](const Content& c) {
        auto [it, fresh] = id_of.try_emplace(c, static_cast<int>(states.size()));
        if (fresh) {
            check_invariants(c);
            states.push_back(c);
            oc.automaton.add_state(true);
        }
        return it->second;
    };

    for (size_t head = 0; head < states.size(); ++head) {
        const Content cur = states[head];
        for (const auto& lbl : oc.automaton.alphabet) {
            switch (lbl.kind) {
                case EventKind::PLAIN: { // rule 2: a time step
                    if (!min_ttl_ok(cur)) break;
                    oc.automaton.add_transition(static_cast<int>(head), lbl, intern(tick(cur)));
                    break;
                }
                case EventKind::OBS_IN: { // rule 1a: time step + enqueue at num_o
                    if (!min_ttl_ok(cur)) break;
                    Content next = tick(cur);
                    next.emplace_back(num_o, lbl.base);
                    std::sort(next.begin(), next.end());
                    oc.automaton.add_transition(static_cast<int>(head), lbl, intern(next));
                    break;
                }
                case EventKind::OBS_OUT:  // rule 1b: any matching message leaves
                case EventKind::OBS_LOSS: { // rule 1c: any matching message is lost
                    for (size_t i = 0; i < cur.size(); ++i) {
                        if (cur[i].second != lbl.base) continue;
                        Content next = cur;
                        next.erase(next.begin() + static_cast<long>(i));
                        oc.automaton.add_transition(static_cast<int>(head), lbl, intern(next));
                    }
                    break;
                }
                default:
                    break;
            }
        }
    }
    for (const auto& c : states) oc.l_oc.push_back(static_cast<int>(c.size()));
    return oc;
}

struct ControlChannel {
    Automaton automaton;      // all states marked
    std::vector<int> queue_len;
    std::vector<int> min_ttl; // 0 when the queue is empty
};

// Control channel CC, FIFO, capacity-bounded. When num_c = 0 a sent command
// is delivered within the same step: the channel holds at most the message
// in delivery, no further send is possible until it leaves, and the channel
// is lossless (the num_c = 0 reachable-state count is then 2^{|Sigma_c|}).
// When num_c >= 1 sends are unrestricted up to capacity and commands may be
// lost anywhere in the queue.
inline ControlChannel build_control_channel(const AlphabetSpec& alph, int num_c, int capacity,
                                            std::optional<bool> lossy_opt = std::nullopt) {
    alph.validate();
    if (capacity < 1) throw Error(ErrorCode::INVALID_CAPACITY, "capacity must be >= 1");
    if (num_c < 0) throw Error(ErrorCode::INVALID_PARAMS, "num_c must be >= 0");
    if (alph.sigma_c.empty())
        throw Error(ErrorCode::INVALID_PARAMS, "control channel needs a nonempty sigma_c");
    const bool lossy = lossy_opt.value_or(num_c >= 1) && num_c >= 1;

    using Queue = std::vector<std::pair<std::vector<std::string>, int>>; // (command, ttl)
    auto min_ttl = [](const Queue& q) {
        int mt = q.empty() ? 0 : q.front().second;
        for (const auto& [cmd, ttl] : q) mt = std::min(mt, ttl);
        return mt;
    };
    auto tick_ok = [&](const Queue& q) { return q.empty() || min_ttl(q) >= 1; };
    auto tick = [](const Queue& q) {
        Queue out;
        for (const auto& [cmd, ttl] : q) out.emplace_back(cmd, ttl - 1);
        return out;
    };

    ControlChannel cc;
    const auto commands = all_commands(alph.sigma_c);
    for (const auto& e : alph.sigma_uo()) cc.automaton.alphabet.insert(EventLabel::plain(e));
    for (const auto& e : alph.sigma_o) cc.automaton.alphabet.insert(EventLabel::obs_in(e));
    for (const auto& g : commands) {
        cc.automaton.alphabet.insert(EventLabel::cmd_in(g));
        cc.automaton.alphabet.insert(EventLabel::cmd_out(g));
        if (lossy) cc.automaton.alphabet.insert(EventLabel::cmd_loss(g));
    }

    std::map<Queue, int> id_of;
    std::vector<Queue> states{Queue{}};
    id_of[states[0]] = 0;
    cc.automaton.add_state(true);
    auto intern = [&](const Queue& q) {
        auto [it, fresh] = id_of.try_emplace(q, static_cast<int>(states.size()));
        if (fresh) {
            states.push_back(q);
            cc.automaton.add_state(true);
        }
        return it->second;
    };

    for (size_t head = 0; head < states.size(); ++head) {
        const Queue cur = states[head];
        for (const auto& lbl : cc.automaton.alphabet) {
            switch (lbl.kind) {
                case EventKind::PLAIN:
                case EventKind::OBS_IN: { // rules 2/3: a time step
                    if (!tick_ok(cur)) break;
                    cc.automaton.add_transition(static_cast<int>(head), lbl, intern(tick(cur)));
                    break;
                }
                case EventKind::CMD_IN: { // rule 1a: append at the tail
                    if (static_cast<int>(cur.size()) >= capacity) break;
                    if (num_c == 0 && !cur.empty()) break; // zero-delay rendezvous
                    Queue next = cur;
                    next.emplace_back(lbl.command, num_c);
                    cc.automaton.add_transition(static_cast<int>(head), lbl, intern(next));
                    break;
                }
                case EventKind::CMD_OUT: { // rule 1b: pop the head (FIFO)
                    if (cur.empty() || cur.front().first != lbl.command) break;
                    Queue next(cur.begin() + 1, cur.end());
                    cc.automaton.add_transition(static_cast<int>(head), lbl, intern(next));
                    break;
                }
                case EventKind::CMD_LOSS: { // rule 1c: lose any matching message
                    for (size_t i = 0; i < cur.size(); ++i) {
                        if (cur[i].first != lbl.command) continue;
                        Queue next = cur;
                        next.erase(next.begin() + static_cast<long>(i));
                        cc.automaton.add_transition(static_cast<int>(head), lbl, intern(next));
                    }
                    break;
                }
                default:
                    break;
            }
        }
    }
    for (const auto& q : states) {
        cc.queue_len.push_back(static_cast<int>(q.size()));
        cc.min_ttl.push_back(min_ttl(q));
    }
    return cc;
}

// Command execution automaton CE: waits for a command, then lets exactly the
// enabled controllable events plus all uncontrollable events fire. Observable
// firings return to the wait state; unobservable ones keep the command.
inline Automaton build_command_execution(const AlphabetSpec& alph,
                                         CommandMechanism mechanism = CommandMechanism::FIRST_WINS) {
    alph.validate();
    Automaton ce;
    const auto commands = all_commands(alph.sigma_c);
    const auto sigma_uo = alph.sigma_uo();
    for (const auto& e : sigma_uo) ce.alphabet.insert(EventLabel::plain(e));
    for (const auto& e : alph.sigma_o) ce.alphabet.insert(EventLabel::obs_in(e));
    for (const auto& g : commands) ce.alphabet.insert(EventLabel::cmd_out(g));

    const int q_wait = ce.add_state(true);
    std::map<std::vector<std::string>, int> q_of_cmd;
    for (const auto& g : commands) q_of_cmd[g] = ce.add_state(true);

    // rules 1-2: uncontrollable events self-loop while waiting
    for (const auto& e : alph.sigma_uc()) {
        EventLabel lbl = alph.observable(e) ? EventLabel::obs_in(e) : EventLabel::plain(e);
        ce.add_transition(q_wait, lbl, q_wait);
    }
    for (const auto& g : commands) {
        const int qg = q_of_cmd[g];
        // rule 3: receive a command
        ce.add_transition(q_wait, EventLabel::cmd_out(g), qg);
        // rule 4 / 4': further commands within the same step
        for (const auto& g2 : commands) {
            int dst = (mechanism == CommandMechanism::FIRST_WINS) ? qg : q_of_cmd[g2];
            ce.add_transition(qg, EventLabel::cmd_out(g2), dst);
        }
        // rules 5-6: events in gamma plus the uncontrollable ones may fire
        for (const auto& e : alph.sigma) {
            bool enabled = !alph.controllable(e) ||
                           std::binary_search(g.begin(), g.end(), e);
            if (!enabled) continue;
            if (alph.observable(e))
                ce.add_transition(qg, EventLabel::obs_in(e), q_wait);
            else
                ce.add_transition(qg, EventLabel::plain(e), qg);
        }
    }
    return ce;
}

// S^k counter: at most k commands sent per received observation.
inline Automaton build_sk_counter(int k, const AlphabetSpec& alph) {
    alph.validate();
    if (k < 1) throw Error(ErrorCode::INVALID_PARAMS, "k must be >= 1");
    Automaton sk;
    const auto commands = all_commands(alph.sigma_c);
    for (const auto& g : commands) sk.alphabet.insert(EventLabel::cmd_in(g));
    for (const auto& e : alph.sigma_o) sk.alphabet.insert(EventLabel::obs_out(e));
    for (int i = 0; i <= k; ++i) sk.add_state(true);
    for (int i = 0; i <= k; ++i) {
        for (const auto& g : commands)
            if (i < k) sk.add_transition(i, EventLabel::cmd_in(g), i + 1);
        for (const auto& e : alph.sigma_o) sk.add_transition(i, EventLabel::obs_out(e), 0);
    }
    return sk;
}

// A^m counter: at most m consecutive control-message losses.
inline Automaton build_am_counter(int m, const AlphabetSpec& alph) {
    alph.validate();
    if (m < 0) throw Error(ErrorCode::INVALID_PARAMS, "m must be >= 0");
    Automaton am;
    const auto commands = all_commands(alph.sigma_c);
    for (const auto& g : commands) {
        am.alphabet.insert(EventLabel::cmd_loss(g));
        am.alphabet.insert(EventLabel::cmd_out(g));
    }
    for (int i = 0; i <= m; ++i) am.add_state(true);
    for (int i = 0; i <= m; ++i)
        for (const auto& g : commands) {
            if (i < m) am.add_transition(i, EventLabel::cmd_loss(g), i + 1);
            am.add_transition(i, EventLabel::cmd_out(g), 0);
        }
    return am;
}

// Per-state annotation of the transformed plant, used by the inductive
// queue-invariant monitor.
struct StateAnnotation {
    int l_cc = 0;   // control-queue length
    int l_oc = 0;   // observation messages in flight
    int m_ttl = 0;  // min control-queue ttl, 0 when empty
    int sk = 0;     // S^k counter value (0 when S^k is not composed)
    int g_state = 0;
};

struct TransformedPlant {
    Automaton automaton;
    std::vector<StateAnnotation> annotations;
    ChannelParams params;
    AlphabetSpec alph;
    // True when S^k/A^m are part of the composition; the queue invariant
    // only holds in that case.
    bool with_counters = false;
};

// Transformed plant: OC || CC || CE || G for the zero-delay lossless control
// channel, otherwise OC || CC@capacity || A^m || CE || G || S^k with k = m+1.
// `g` must already be relabelled.
inline TransformedPlant build_transformed_plant(const Automaton& g, const AlphabetSpec& alph,
                                                const ChannelParams& p,
                                                bool force_counters = false) {
    alph.validate();
    p.validate();
    g.validate();
    for (const auto& lbl : g.alphabet)
        if (lbl.kind != EventKind::PLAIN && lbl.kind != EventKind::OBS_IN)
            throw Error(ErrorCode::INVALID_PARAMS,
                        "transformed plant needs a relabelled g, found label " + lbl.str());

    const bool degenerate_gamma = alph.sigma_c.empty();
    ObservationChannel oc = build_observation_channel(alph, p.num_o);
    TransformedPlant tp;
    tp.params = p;
    tp.alph = alph;

    if (degenerate_gamma) {
        // Gamma is empty: CC/CE/S^k/A^m collapse; compose OC with g only.
        auto ce = build_command_execution(alph, p.mechanism);
        auto prod = sync_product_with_origins({oc.automaton, ce, g});
        tp.automaton = prod.automaton;
        for (const auto& t : prod.origins)
            tp.annotations.push_back({0, oc.l_oc[t[0]], 0, 0, t[2]});
        return tp;
    }

    const bool with_counters = force_counters || !(p.num_c == 0 && p.m == 0);
    ControlChannel cc = build_control_channel(alph, p.num_c, p.cc_capacity(),
                                              p.num_c >= 1 && p.m >= 1);
    Automaton ce = build_command_execution(alph, p.mechanism);

    if (!with_counters) {
        auto prod = sync_product_with_origins({oc.automaton, cc.automaton, ce, g});
        tp.automaton = prod.automaton;
        for (const auto& t : prod.origins)
            tp.annotations.push_back(
                {cc.queue_len[t[1]], oc.l_oc[t[0]], cc.min_ttl[t[1]], 0, t[3]});
        return tp;
    }

    Automaton am = build_am_counter(p.m, alph);
    if (p.num_c == 0 || p.m == 0) {
        // Lossless control channel: loss events stay in the alphabet but
        // must never fire.
        for (auto& row : am.trans)
            for (auto it = row.begin(); it != row.end();)
                it = (it->first.kind == EventKind::CMD_LOSS) ? row.erase(it) : std::next(it);
    }
    Automaton sk = build_sk_counter(p.k(), alph);
    auto prod = sync_product_with_origins({oc.automaton, cc.automaton, am, ce, g, sk});
    tp.automaton = prod.automaton;
    tp.with_counters = true;
    for (const auto& t : prod.origins)
        tp.annotations.push_back({cc.queue_len[t[1]], oc.l_oc[t[0]], cc.min_ttl[t[1]], t[5], t[4]});
    return tp;
}

struct TightnessWitness {
    Automaton plant_mod; // already relabelled
    AlphabetSpec alph;
    int expected_max_queue; // (num_o + num_c + 2) * k
};

// A plant realizing the control-channel queue bound exactly: a chain of
// num_o+num_c+1 uncontrollable observable non-lossy events into a marked
// sink, with one controllable event reserved for the command alphabet.
inline TightnessWitness build_tightness_witness(const ChannelParams& p) {
    p.validate();
    if (p.num_c < 1)
        throw Error(ErrorCode::INVALID_PARAMS, "tightness witness needs num_c >= 1");
    TightnessWitness w;
    w.alph.sigma = {"s", "c"};
    w.alph.sigma_o = {"s"};
    w.alph.sigma_c = {"c"};
    w.expected_max_queue = (p.num_o + p.num_c + 2) * p.k();

    const int len = p.num_o + p.num_c + 1;
    Automaton base;
    base.alphabet.insert(EventLabel::plain("s"));
    for (int i = 0; i <= len; ++i) base.add_state(i == len);
    for (int i = 0; i < len; ++i) base.add_transition(i, EventLabel::plain("s"), i + 1);
    w.plant_mod = relabel_plant(base, w.alph);
    return w;
}

} // namespace netsup

#endif
