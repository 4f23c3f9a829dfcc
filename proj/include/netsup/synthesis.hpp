#ifndef NETSUP_SYNTHESIS_HPP
#define NETSUP_SYNTHESIS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netsup/alphabet.hpp"
#include "netsup/automaton.hpp"

namespace netsup {

// Control constraint over the lifted alphabet. Normality-based synthesis
// requires every controllable label to be observable.
struct ControlConstraint {
    LabelSet controllable;
    LabelSet observable;

    void validate() const {
        if (!std::includes(observable.begin(), observable.end(), controllable.begin(),
                           controllable.end()))
            throw Error(ErrorCode::CONSTRAINT_VIOLATION,
                        "controllable labels must be observable");
    }
};

// The canonical constraint for a transformed networked plant: the
// supervisor controls the command sends and observes them plus the
// delivered observation messages.
inline ControlConstraint networked_control_constraint(const AlphabetSpec& alph) {
    ControlConstraint c;
    for (const auto& g : all_commands(alph.sigma_c)) {
        c.controllable.insert(EventLabel::cmd_in(g));
        c.observable.insert(EventLabel::cmd_in(g));
    }
    for (const auto& e : alph.sigma_o) c.observable.insert(EventLabel::obs_out(e));
    return c;
}

struct SynthesisProblem {
    Automaton plant;
    ControlConstraint constraint;
    std::set<int> bad; // plant states to avoid

    void validate() const {
        plant.validate();
        constraint.validate();
        for (const auto& lbl : constraint.observable)
            if (!plant.alphabet.count(lbl))
                throw Error(ErrorCode::CONSTRAINT_VIOLATION,
                            "observable label not in plant alphabet: " + lbl.str());
        for (int b : bad)
            if (b < 0 || b >= plant.num_states())
                throw Error(ErrorCode::CONSTRAINT_VIOLATION, "bad state out of range");
    }
};

// Deterministic observer-cell supervisor. Labels outside the observable set
// self-loop at every state; all states are marked.
struct Supervisor {
    Automaton automaton;
    std::vector<std::vector<int>> cells; // plant-state estimate per state

    // Transition count over the observable labels only (the cell structure,
    // without the unobservable self-loops).
    int num_observable_transitions(const ControlConstraint& c) const {
        int n = 0;
        for (const auto& row : automaton.trans)
            for (const auto& [lbl, dsts] : row)
                if (c.observable.count(lbl)) n += static_cast<int>(dsts.size());
        return n;
    }
};

struct SynthesisResult {
    std::optional<Supervisor> supervisor;
    std::string empty_reason; // set when supervisor is empty
    bool empty() const { return !supervisor.has_value(); }
};

namespace detail {

enum class ForbidReason { None, BadContainment, UncontrollableReach, Blocking };

inline const char* forbid_reason_name(ForbidReason r) {
    switch (r) {
        case ForbidReason::None: return "none";
        case ForbidReason::BadContainment: return "bad-containment";
        case ForbidReason::UncontrollableReach: return "uncontrollable-reach";
        case ForbidReason::Blocking: return "blocking";
    }
    return "?";
}

// The cell-level view of a synthesis problem: the plant's observer plus the
// partition of observable labels into controllable and uncontrollable.
struct CellSystem {
    const Automaton* plant = nullptr;
    SubsetResult obs;
    LabelSet O, C;
    std::set<int> bad;

    int num_cells() const { return static_cast<int>(obs.cells.size()); }

    bool cell_has_bad(int c) const {
        for (int q : obs.cells[c])
            if (bad.count(q)) return true;
        return false;
    }

    int cell_target(int c, const EventLabel& lbl) const {
        if (const auto* s = obs.automaton.successors(c, lbl); s && !s->empty()) return (*s)[0];
        return -1;
    }
};

inline CellSystem make_cell_system(const SynthesisProblem& problem) {
    CellSystem cs;
    cs.plant = &problem.plant;
    cs.obs = observer(problem.plant, problem.constraint.observable);
    cs.O = problem.constraint.observable;
    cs.C = problem.constraint.controllable;
    cs.bad = problem.bad;
    return cs;
}

// A control policy assigns each cell a set of enabled controllable labels.
using PolicyFn = std::function<bool(int cell, const EventLabel& lbl)>;

// Cells reachable in the closed loop under a policy (uncontrollable
// observable labels cannot be disabled).
inline std::vector<char> policy_reachable_cells(const CellSystem& cs, const PolicyFn& enabled) {
    std::vector<char> reach(cs.num_cells(), 0);
    std::vector<int> queue{0};
    reach[0] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
        int c = queue[head];
        for (const auto& [lbl, dsts] : cs.obs.automaton.trans[c]) {
            if (cs.C.count(lbl) && !enabled(c, lbl)) continue;
            for (int d : dsts)
                if (!reach[d]) {
                    reach[d] = 1;
                    queue.push_back(d);
                }
        }
    }
    return reach;
}

inline bool policy_safe(const CellSystem& cs, const PolicyFn& enabled) {
    auto reach = policy_reachable_cells(cs, enabled);
    for (int c = 0; c < cs.num_cells(); ++c)
        if (reach[c] && cs.cell_has_bad(c)) return false;
    return true;
}

// Nonblocking check over (cell, plant-state) pairs of the closed loop.
// When blocking_cells is given it receives every cell that contains a
// blocking configuration, so callers can prune them all at once.
inline bool policy_nonblocking(const CellSystem& cs, const PolicyFn& enabled,
                               std::vector<int>* blocking_cells = nullptr) {
    auto reach = policy_reachable_cells(cs, enabled);
    const Automaton& plant = *cs.plant;
    const int nx = plant.num_states();
    // Pairs are encoded flat as cell * nx + plant_state.
    std::vector<int> id_of(static_cast<size_t>(cs.num_cells()) * nx, -1);
    std::vector<int> pairs;
    auto intern = [&](int c, int x) {
        int code = c * nx + x;
        if (id_of[code] < 0) {
            id_of[code] = static_cast<int>(pairs.size());
            pairs.push_back(code);
        }
        return id_of[code];
    };
    intern(0, plant.initial);
    std::vector<std::vector<int>> succ;
    for (size_t head = 0; head < pairs.size(); ++head) {
        int c = pairs[head] / nx, x = pairs[head] % nx;
        succ.emplace_back();
        for (const auto& [lbl, dsts] : plant.trans[x]) {
            if (cs.O.count(lbl)) {
                int c2 = cs.cell_target(c, lbl);
                if (c2 < 0 || !reach[c2]) continue;
                if (cs.C.count(lbl) && !enabled(c, lbl)) continue;
                for (int d : dsts) succ[head].push_back(intern(c2, d));
            } else {
                for (int d : dsts) succ[head].push_back(intern(c, d));
            }
        }
    }
    std::vector<char> coreach(pairs.size(), 0);
    std::vector<std::vector<int>> preds(pairs.size());
    std::vector<int> queue;
    for (size_t i = 0; i < pairs.size(); ++i) {
        for (int s : succ[i]) preds[s].push_back(static_cast<int>(i));
        if (plant.marked.count(pairs[i] % nx)) {
            coreach[i] = 1;
            queue.push_back(static_cast<int>(i));
        }
    }
    for (size_t head = 0; head < queue.size(); ++head)
        for (int p : preds[queue[head]])
            if (!coreach[p]) {
                coreach[p] = 1;
                queue.push_back(p);
            }
    bool ok = true;
    std::set<int> cells;
    for (size_t i = 0; i < pairs.size(); ++i)
        if (!coreach[i]) {
            ok = false;
            if (!blocking_cells) return false;
            cells.insert(pairs[i] / nx);
        }
    if (blocking_cells) blocking_cells->assign(cells.begin(), cells.end());
    return ok;
}

struct Fixpoint {
    std::vector<ForbidReason> status; // per cell
    std::vector<char> reach;          // final reachable surviving cells
    bool empty = false;

    bool ok(int c) const { return status[c] == ForbidReason::None; }

    // The supremal policy: a controllable label is enabled at a surviving
    // cell iff its target cell survives.
    PolicyFn policy(const CellSystem& cs) const {
        return [this, &cs](int c, const EventLabel& lbl) {
            int t = cs.cell_target(c, lbl);
            return t >= 0 && ok(t);
        };
    }
};

// Iterated pruning: bad-containment, uncontrollable reach of forbidden
// cells, then blocking configurations, to fixpoint.
inline Fixpoint run_fixpoint(const CellSystem& cs) {
    Fixpoint fp;
    fp.status.assign(cs.num_cells(), ForbidReason::None);
    for (int c = 0; c < cs.num_cells(); ++c)
        if (cs.cell_has_bad(c)) fp.status[c] = ForbidReason::BadContainment;

    for (;;) {
        // Backward closure over uncontrollable observable labels.
        bool changed = true;
        while (changed) {
            changed = false;
            for (int c = 0; c < cs.num_cells(); ++c) {
                if (!fp.ok(c)) continue;
                for (const auto& [lbl, dsts] : cs.obs.automaton.trans[c]) {
                    if (cs.C.count(lbl)) continue;
                    for (int d : dsts)
                        if (!fp.ok(d)) {
                            fp.status[c] = ForbidReason::UncontrollableReach;
                            changed = true;
                            break;
                        }
                    if (!fp.ok(c)) break;
                }
            }
        }
        if (!fp.ok(0)) {
            fp.empty = true;
            return fp;
        }
        // Reachability over surviving cells only.
        std::vector<char> reach(cs.num_cells(), 0);
        std::vector<int> queue{0};
        reach[0] = 1;
        for (size_t head = 0; head < queue.size(); ++head)
            for (const auto& [lbl, dsts] : cs.obs.automaton.trans[queue[head]])
                for (int d : dsts)
                    if (fp.ok(d) && !reach[d]) {
                        reach[d] = 1;
                        queue.push_back(d);
                    }
        // Blocking configurations force their whole cell away.
        std::vector<int> blocking;
        auto enabled = fp.policy(cs);
        if (policy_nonblocking(cs, enabled, &blocking)) {
            fp.reach = std::move(reach);
            return fp;
        }
        for (int c : blocking) fp.status[c] = ForbidReason::Blocking;
    }
}

// Build the supervisor automaton for a policy: surviving reachable cells,
// observable transitions per the policy, self-loops on every other plant
// label, all states marked, canonical numbering.
inline Supervisor build_policy_supervisor(const CellSystem& cs, const PolicyFn& enabled) {
    auto reach = policy_reachable_cells(cs, enabled);
    Automaton sup;
    sup.alphabet = cs.plant->alphabet;
    sup.trans.resize(cs.num_cells());
    sup.initial = 0;
    for (int c = 0; c < cs.num_cells(); ++c) {
        if (!reach[c]) continue;
        sup.marked.insert(c);
        for (const auto& lbl : cs.plant->alphabet)
            if (!cs.O.count(lbl)) sup.add_transition(c, lbl, c);
        for (const auto& [lbl, dsts] : cs.obs.automaton.trans[c]) {
            if (cs.C.count(lbl) && !enabled(c, lbl)) continue;
            for (int d : dsts)
                if (reach[d]) sup.add_transition(c, lbl, d);
        }
    }
    std::vector<int> old_of_new;
    Supervisor out;
    out.automaton = reachable(sup, &old_of_new);
    for (int old : old_of_new) out.cells.push_back(cs.obs.cells[old]);
    return out;
}

} // namespace detail

// Supremal nonblocking, controllable, normal supervisor with bad-state
// avoidance, over a possibly non-deterministic plant. Returns EMPTY (no
// supervisor) when the initial cell is pruned.
inline SynthesisResult synthesize_supremal(const SynthesisProblem& problem) {
    problem.validate();
    auto cs = detail::make_cell_system(problem);
    auto fp = detail::run_fixpoint(cs);
    SynthesisResult res;
    if (fp.empty) {
        std::ostringstream os;
        os << "initial cell pruned (" << detail::forbid_reason_name(fp.status[0]) << "), cell = {";
        for (size_t i = 0; i < cs.obs.cells[0].size(); ++i)
            os << (i ? "," : "") << cs.obs.cells[0][i];
        os << "}";
        res.empty_reason = os.str();
        return res;
    }
    res.supervisor = detail::build_policy_supervisor(cs, fp.policy(cs));
    return res;
}

struct ControllabilityResult {
    bool controllable = true;
    int closed_loop_state = -1; // index in the on-the-fly product walk
    std::optional<EventLabel> label;
};

// State controllability of the closed loop sup || plant: every
// uncontrollable label the plant offers must be accepted by the supervisor.
inline ControllabilityResult check_controllability(const Automaton& sup, const Automaton& plant,
                                                   const ControlConstraint& constraint) {
    sup.validate();
    plant.validate();
    constraint.validate();
    std::map<std::pair<int, int>, int> id_of;
    std::vector<std::pair<int, int>> pairs{{sup.initial, plant.initial}};
    id_of[pairs[0]] = 0;
    for (size_t head = 0; head < pairs.size(); ++head) {
        auto [s, x] = pairs[head];
        for (const auto& [lbl, xdsts] : plant.trans[x]) {
            const std::vector<int>* sdsts = nullptr;
            if (sup.alphabet.count(lbl)) {
                sdsts = sup.successors(s, lbl);
                if (!sdsts) {
                    if (!constraint.controllable.count(lbl))
                        return {false, static_cast<int>(head), lbl};
                    continue; // disabled controllable label
                }
            }
            std::vector<int> sups = sdsts ? *sdsts : std::vector<int>{s};
            for (int s2 : sups)
                for (int x2 : xdsts) {
                    auto [it, fresh] =
                        id_of.try_emplace(std::make_pair(s2, x2), static_cast<int>(pairs.size()));
                    if (fresh) pairs.emplace_back(s2, x2);
                }
        }
    }
    return {};
}

struct NormalityResult {
    bool normal = true;
    std::vector<EventLabel> witness_a, witness_b; // equal projections, different decisions
};

// State normality: the supervisor's control decision must be a function of
// the observer cell of the observation string.
inline NormalityResult check_normality(const Automaton& sup, const Automaton& plant,
                                       const ControlConstraint& constraint) {
    sup.validate();
    plant.validate();
    constraint.validate();
    // A supervisor must be deterministic over the observable labels and
    // self-loop everything else; violations are normality failures with an
    // empty-projection witness.
    for (int s = 0; s < sup.num_states(); ++s)
        for (const auto& [lbl, dsts] : sup.trans[s]) {
            bool obs = constraint.observable.count(lbl) != 0;
            if (obs && dsts.size() > 1) return {false, {lbl}, {lbl}};
            if (!obs && (dsts.size() != 1 || dsts[0] != s)) return {false, {lbl}, {lbl}};
        }

    auto obs = observer(plant, constraint.observable);
    auto decision = [&](int s) {
        LabelSet enabled;
        for (const auto& lbl : constraint.controllable)
            if (sup.has_transition(s, lbl)) enabled.insert(lbl);
        return enabled;
    };
    // Walk (sup state, cell) pairs of the closed loop's projection.
    std::map<std::pair<int, int>, std::vector<EventLabel>> path_of;
    std::vector<std::pair<int, int>> queue{{sup.initial, 0}};
    path_of[queue[0]] = {};
    std::map<int, std::pair<int, std::vector<EventLabel>>> rep; // cell -> (sup state, path)
    for (size_t head = 0; head < queue.size(); ++head) {
        auto [s, c] = queue[head];
        const auto& path = path_of[{s, c}];
        auto it = rep.find(c);
        if (it == rep.end()) {
            rep[c] = {s, path};
        } else if (decision(it->second.first) != decision(s)) {
            return {false, it->second.second, path};
        }
        for (const auto& [lbl, cdsts] : obs.automaton.trans[c]) {
            const auto* sdsts = sup.successors(s, lbl);
            if (!sdsts) continue;
            for (int s2 : *sdsts)
                for (int c2 : cdsts) {
                    if (path_of.count({s2, c2})) continue;
                    auto p = path;
                    p.push_back(lbl);
                    path_of[{s2, c2}] = std::move(p);
                    queue.emplace_back(s2, c2);
                }
        }
    }
    return {};
}

struct SafetyResult {
    bool safe = true;
    std::vector<EventLabel> path; // to a bad plant state
};

// No bad plant state is reachable in sup || plant.
inline SafetyResult check_safety(const Automaton& sup, const Automaton& plant,
                                 const std::set<int>& bad) {
    sup.validate();
    plant.validate();
    auto prod = sync_product_with_origins({sup, plant});
    for (size_t s = 0; s < prod.origins.size(); ++s)
        if (bad.count(prod.origins[s][1])) {
            // Recover a path by BFS in the product.
            std::vector<int> parent(prod.automaton.num_states(), -1);
            std::vector<EventLabel> via(prod.automaton.num_states());
            std::vector<char> seen(prod.automaton.num_states(), 0);
            std::vector<int> queue{prod.automaton.initial};
            seen[prod.automaton.initial] = 1;
            for (size_t head = 0; head < queue.size(); ++head) {
                int q = queue[head];
                if (q == static_cast<int>(s)) break;
                for (const auto& [lbl, dsts] : prod.automaton.trans[q])
                    for (int d : dsts)
                        if (!seen[d]) {
                            seen[d] = 1;
                            parent[d] = q;
                            via[d] = lbl;
                            queue.push_back(d);
                        }
            }
            SafetyResult res;
            res.safe = false;
            for (int q = static_cast<int>(s); parent[q] >= 0 || q != prod.automaton.initial;
                 q = parent[q]) {
                res.path.push_back(via[q]);
                if (parent[q] < 0) break;
            }
            std::reverse(res.path.begin(), res.path.end());
            return res;
        }
    return {};
}

struct BruteForceLimits {
    int max_states = 8;
    int max_labels = 4;
    int max_policy_bits = 22;
};

// Exhaustive oracle: enumerate every cell-to-enabled-command map, keep the
// ones whose closed loop is safe, controllable, normal and nonblocking, and
// return the supremal one. Test-sized problems only.
inline SynthesisResult brute_force_supremal(const SynthesisProblem& problem,
                                            const BruteForceLimits& limits = {}) {
    problem.validate();
    if (problem.plant.num_states() > limits.max_states ||
        static_cast<int>(problem.plant.alphabet.size()) > limits.max_labels)
        throw Error(ErrorCode::LIMIT_EXCEEDED, "plant too large for brute force");
    auto cs = detail::make_cell_system(problem);

    // Decision points: (cell, controllable label) with a defined observer move.
    std::vector<std::pair<int, EventLabel>> points;
    for (int c = 0; c < cs.num_cells(); ++c)
        for (const auto& [lbl, dsts] : cs.obs.automaton.trans[c])
            if (cs.C.count(lbl)) points.emplace_back(c, lbl);
    if (static_cast<int>(points.size()) > limits.max_policy_bits)
        throw Error(ErrorCode::LIMIT_EXCEEDED, "too many control decision points");

    auto policy_of_mask = [&](uint64_t mask) {
        return [&, mask](int c, const EventLabel& lbl) {
            for (size_t i = 0; i < points.size(); ++i)
                if (points[i].first == c && points[i].second == lbl)
                    return (mask >> i & 1) != 0;
            return true; // not a decision point: nothing to disable
        };
    };

    std::vector<uint64_t> passing;
    for (uint64_t mask = 0; mask < (uint64_t{1} << points.size()); ++mask) {
        auto pol = policy_of_mask(mask);
        if (!detail::policy_safe(cs, pol)) continue;
        if (!detail::policy_nonblocking(cs, pol)) continue;
        passing.push_back(mask);
    }
    SynthesisResult res;
    if (passing.empty()) {
        res.empty_reason = "no control policy is safe and nonblocking";
        return res;
    }
    // Closed-loop inclusion: every enabled decision at a reachable cell of
    // the smaller policy must be enabled in the larger one.
    auto included = [&](uint64_t a, uint64_t b) {
        auto reach = detail::policy_reachable_cells(cs, policy_of_mask(a));
        for (size_t i = 0; i < points.size(); ++i)
            if ((a >> i & 1) && !(b >> i & 1) && reach[points[i].first]) return false;
        return true;
    };
    uint64_t best = passing[0];
    for (uint64_t m : passing)
        if (included(best, m)) best = m;
    for (uint64_t m : passing)
        if (!included(m, best))
            throw Error(ErrorCode::CONSTRAINT_VIOLATION,
                        "no supremal policy among passing candidates");
    res.supervisor = detail::build_policy_supervisor(cs, policy_of_mask(best));
    return res;
}

// Local maximality: no single disabled control decision of the supervisor
// can be re-enabled (continuing supremally afterwards) without breaking
// safety, controllability, normality or nonblocking.
inline bool check_local_maximality(const Supervisor& sup, const SynthesisProblem& problem) {
    problem.validate();
    auto cs = detail::make_cell_system(problem);
    auto fp = detail::run_fixpoint(cs);

    // Map supervisor states to observer cells by a joint walk, recording
    // which cells the supervisor covers and which decisions it enables.
    std::vector<char> is_sup_cell(cs.num_cells(), 0);
    std::set<std::pair<int, EventLabel>> sup_on;
    std::vector<std::pair<int, int>> queue{{sup.automaton.initial, 0}};
    std::set<std::pair<int, int>> seen{queue[0]};
    while (!queue.empty()) {
        auto [s, c] = queue.back();
        queue.pop_back();
        is_sup_cell[c] = 1;
        for (const auto& lbl : cs.C)
            if (sup.automaton.has_transition(s, lbl)) sup_on.insert({c, lbl});
        for (const auto& [lbl, cdsts] : cs.obs.automaton.trans[c]) {
            const auto* sdsts = sup.automaton.successors(s, lbl);
            if (!sdsts) continue;
            for (int s2 : *sdsts)
                for (int c2 : cdsts)
                    if (seen.insert({s2, c2}).second) queue.emplace_back(s2, c2);
        }
    }
    auto supremal = fp.empty ? detail::PolicyFn([](int, const EventLabel&) { return false; })
                             : fp.policy(cs);

    for (int c = 0; c < cs.num_cells(); ++c) {
        if (!is_sup_cell[c]) continue;
        for (const auto& [lbl, dsts] : cs.obs.automaton.trans[c]) {
            if (!cs.C.count(lbl)) continue;
            if (sup_on.count({c, lbl})) continue;
            // Candidate: the supervisor's own decisions, this one decision
            // re-enabled, supremal continuation elsewhere.
            auto candidate = [&](int cc, const EventLabel& l) {
                if (cc == c && l == lbl) return true;
                if (is_sup_cell[cc]) return sup_on.count({cc, l}) != 0;
                return supremal(cc, l);
            };
            if (detail::policy_safe(cs, candidate) && detail::policy_nonblocking(cs, candidate))
                return false;
        }
    }
    return true;
}

struct EventualObservabilityResult {
    bool eventually_observable = true;
    int src = -1, dst = -1;        // the violating lossy transition
    std::string event;
    std::vector<std::string> string; // uncontrollable continuation witness
};

// Eventual observability of the original (un-relabelled) plant: after every
// lossy observable transition, every maximal uncontrollable continuation
// must contain an uncontrollable, observable, non-lossy event.
inline EventualObservabilityResult check_eventual_observability(const Automaton& g,
                                                                const AlphabetSpec& alph) {
    g.validate();
    alph.validate();
    auto qualifying = [&](const std::string& e) {
        return !alph.controllable(e) && alph.observable(e) && !alph.lossy(e);
    };
    auto uncontrollable = [&](const std::string& e) { return !alph.controllable(e); };

    // Per state: uncontrollable successors, split into qualifying and not.
    const int n = g.num_states();
    std::vector<std::vector<std::pair<std::string, int>>> unc(n), nonqual(n);
    std::vector<char> has_unc(n, 0), has_qual(n, 0);
    for (int q = 0; q < n; ++q)
        for (const auto& [lbl, dsts] : g.trans[q]) {
            if (lbl.kind != EventKind::PLAIN)
                throw Error(ErrorCode::INVALID_PARAMS, "expected an un-relabelled plant");
            if (!uncontrollable(lbl.base)) continue;
            has_unc[q] = 1;
            for (int d : dsts) {
                unc[q].emplace_back(lbl.base, d);
                if (qualifying(lbl.base))
                    has_qual[q] = 1;
                else
                    nonqual[q].emplace_back(lbl.base, d);
            }
        }

    for (int q = 0; q < n; ++q)
        for (const auto& [lbl, dsts] : g.trans[q]) {
            if (lbl.kind != EventKind::PLAIN || !alph.lossy(lbl.base)) continue;
            for (int start : dsts) {
                // (1) some uncontrollable string from start hits a qualifying event
                std::vector<char> seen(n, 0);
                std::vector<int> stack{start};
                seen[start] = 1;
                bool cond1 = false;
                while (!stack.empty() && !cond1) {
                    int s = stack.back();
                    stack.pop_back();
                    if (has_qual[s]) cond1 = true;
                    for (const auto& [e, d] : unc[s])
                        if (!seen[d]) {
                            seen[d] = 1;
                            stack.push_back(d);
                        }
                }
                // (2) explore the non-qualifying uncontrollable subgraph: a
                // reachable dead end (no uncontrollable move at all) or a
                // cycle inside it is a maximal continuation that never
                // produces a reliable observation.
                std::vector<int> parent(n, -2);
                std::vector<std::string> via(n);
                std::vector<char> color(n, 0); // 0 new, 1 on the DFS path, 2 done
                parent[start] = -1;
                int bad_state = -1;
                bool cycle = false;
                std::vector<std::pair<int, size_t>> dfs{{start, 0}};
                color[start] = 1;
                while (!dfs.empty() && bad_state < 0 && !cycle) {
                    auto& [s, idx] = dfs.back();
                    if (!has_unc[s]) {
                        bad_state = s;
                        break;
                    }
                    if (idx == nonqual[s].size()) {
                        color[s] = 2;
                        dfs.pop_back();
                        continue;
                    }
                    const auto& [e, d] = nonqual[s][idx++];
                    if (color[d] == 1) { // back edge: a genuine cycle
                        cycle = true;
                        bad_state = d;
                    } else if (color[d] == 0) {
                        color[d] = 1;
                        parent[d] = s;
                        via[d] = e;
                        dfs.emplace_back(d, 0);
                    }
                }
                if (cond1 && bad_state < 0) continue;
                EventualObservabilityResult res;
                res.eventually_observable = false;
                res.src = q;
                res.dst = start;
                res.event = lbl.base;
                if (bad_state >= 0)
                    for (int s = bad_state; parent[s] >= 0; s = parent[s])
                        res.string.push_back(via[s]);
                std::reverse(res.string.begin(), res.string.end());
                return res;
            }
        }
    return {};
}

} // namespace netsup

#endif
