#ifndef NETSUP_AUTOMATON_HPP
#define NETSUP_AUTOMATON_HPP

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "netsup/errors.hpp"
#include "netsup/event.hpp"

namespace netsup {

// Finite automaton, possibly non-deterministic. Transitions are stored as a
// sorted adjacency map per state; duplicate triples cannot be represented.
// All constructions in this library emit automata whose states are numbered
// in BFS order from the initial state, with transitions expanded in the
// fixed total order on EventLabel; reachable() re-establishes that order.
struct Automaton {
    LabelSet alphabet;
    std::vector<std::map<EventLabel, std::vector<int>>> trans;
    int initial = 0;
    std::set<int> marked;

    int num_states() const { return static_cast<int>(trans.size()); }

    int num_transitions() const {
        int n = 0;
        for (const auto& row : trans)
            for (const auto& [lbl, dsts] : row) n += static_cast<int>(dsts.size());
        return n;
    }

    int add_state(bool mark = false) {
        trans.emplace_back();
        int id = num_states() - 1;
        if (mark) marked.insert(id);
        return id;
    }

    void add_transition(int src, const EventLabel& lbl, int dst) {
        auto& dsts = trans[src][lbl];
        auto it = std::lower_bound(dsts.begin(), dsts.end(), dst);
        if (it != dsts.end() && *it == dst) return;
        dsts.insert(it, dst);
    }

    bool has_transition(int src, const EventLabel& lbl) const {
        auto it = trans[src].find(lbl);
        return it != trans[src].end() && !it->second.empty();
    }

    const std::vector<int>* successors(int src, const EventLabel& lbl) const {
        auto it = trans[src].find(lbl);
        if (it == trans[src].end()) return nullptr;
        return &it->second;
    }

    bool deterministic() const {
        for (const auto& row : trans)
            for (const auto& [lbl, dsts] : row)
                if (dsts.size() > 1) return false;
        return true;
    }

    void validate() const {
        if (trans.empty())
            throw Error(ErrorCode::MALFORMED_AUTOMATON, "automaton has no states");
        if (initial < 0 || initial >= num_states())
            throw Error(ErrorCode::MALFORMED_AUTOMATON, "initial state out of range");
        for (int q = 0; q < num_states(); ++q)
            for (const auto& [lbl, dsts] : trans[q]) {
                if (!alphabet.count(lbl))
                    throw Error(ErrorCode::MALFORMED_AUTOMATON,
                                "transition label not in alphabet: " + lbl.str());
                for (int d : dsts)
                    if (d < 0 || d >= num_states())
                        throw Error(ErrorCode::MALFORMED_AUTOMATON, "transition target out of range");
            }
        for (int m : marked)
            if (m < 0 || m >= num_states())
                throw Error(ErrorCode::MALFORMED_AUTOMATON, "marked state out of range");
    }

    friend bool operator==(const Automaton& a, const Automaton& b) = default;
};

// Restriction to the states reachable from the initial state, renumbered
// canonically. Marking is preserved on survivors.
inline Automaton reachable(const Automaton& a, std::vector<int>* old_of_new = nullptr) {
    a.validate();
    std::vector<int> new_id(a.num_states(), -1);
    std::vector<int> order;
    order.reserve(a.num_states());
    std::deque<int> queue;
    new_id[a.initial] = 0;
    order.push_back(a.initial);
    queue.push_back(a.initial);
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (const auto& [lbl, dsts] : a.trans[q])
            for (int d : dsts)
                if (new_id[d] < 0) {
                    new_id[d] = static_cast<int>(order.size());
                    order.push_back(d);
                    queue.push_back(d);
                }
    }
    Automaton out;
    out.alphabet = a.alphabet;
    out.trans.resize(order.size());
    out.initial = 0;
    for (size_t i = 0; i < order.size(); ++i) {
        int q = order[i];
        if (a.marked.count(q)) out.marked.insert(static_cast<int>(i));
        for (const auto& [lbl, dsts] : a.trans[q])
            for (int d : dsts) out.add_transition(static_cast<int>(i), lbl, new_id[d]);
    }
    if (old_of_new) *old_of_new = order;
    return out;
}

struct ProductResult {
    Automaton automaton;
    // origins[s] = component state tuple of product state s
    std::vector<std::vector<int>> origins;
};

// Standard synchronous product: a label shared by several component
// alphabets requires joint transitions; a private label moves only its
// owner. Only the reachable part is built; marking is the product of
// markings.
inline ProductResult sync_product_with_origins(const std::vector<Automaton>& components) {
    if (components.empty())
        throw Error(ErrorCode::EMPTY_LIST, "sync_product of no components");
    for (const auto& c : components) {
        if (c.trans.empty() && c.alphabet.empty())
            throw Error(ErrorCode::MALFORMED_AUTOMATON, "component with no states and empty alphabet");
        c.validate();
    }
    const size_t n = components.size();
    LabelSet alphabet;
    for (const auto& c : components) alphabet.insert(c.alphabet.begin(), c.alphabet.end());

    std::map<std::vector<int>, int> id_of;
    std::vector<std::vector<int>> states;
    ProductResult res;
    res.automaton.alphabet = alphabet;

    std::vector<int> init(n);
    for (size_t i = 0; i < n; ++i) init[i] = components[i].initial;
    id_of[init] = 0;
    states.push_back(init);
    res.automaton.add_state();

    for (size_t head = 0; head < states.size(); ++head) {
        const std::vector<int> cur = states[head];
        for (const auto& lbl : alphabet) {
            // Collect per-component successor lists; a component not owning
            // the label stays put.
            std::vector<const std::vector<int>*> moves(n, nullptr);
            bool enabled = true;
            for (size_t i = 0; i < n && enabled; ++i) {
                if (!components[i].alphabet.count(lbl)) continue;
                moves[i] = components[i].successors(cur[i], lbl);
                if (!moves[i]) enabled = false;
            }
            if (!enabled) continue;
            // Expand the (usually singleton) cartesian product of moves.
            std::vector<std::vector<int>> joint{cur};
            for (size_t i = 0; i < n; ++i) {
                if (!moves[i]) continue;
                std::vector<std::vector<int>> next;
                for (const auto& tuple : joint)
                    for (int d : *moves[i]) {
                        auto t = tuple;
                        t[i] = d;
                        next.push_back(std::move(t));
                    }
                joint = std::move(next);
            }
            for (auto& dst : joint) {
                auto [it, fresh] = id_of.try_emplace(dst, static_cast<int>(states.size()));
                if (fresh) {
                    states.push_back(dst);
                    res.automaton.add_state();
                }
                res.automaton.add_transition(static_cast<int>(head), lbl, it->second);
            }
        }
    }
    for (size_t s = 0; s < states.size(); ++s) {
        bool all_marked = true;
        for (size_t i = 0; i < n; ++i)
            if (!components[i].marked.count(states[s][i])) {
                all_marked = false;
                break;
            }
        if (all_marked) res.automaton.marked.insert(static_cast<int>(s));
    }
    res.origins = std::move(states);
    // BFS insertion order above follows sorted labels, so numbering is
    // already canonical; no renumber pass needed.
    return res;
}

inline Automaton sync_product(const std::vector<Automaton>& components) {
    return sync_product_with_origins(components).automaton;
}

struct NonblockingResult {
    bool nonblocking = true;
    int blocking_state = -1;
    std::vector<EventLabel> path; // from initial to the blocking state
};

// True iff every reachable state can reach some marked state.
inline NonblockingResult is_nonblocking(const Automaton& a) {
    a.validate();
    const int n = a.num_states();
    // Backward reachability from the marked set.
    std::vector<std::vector<int>> preds(n);
    for (int q = 0; q < n; ++q)
        for (const auto& [lbl, dsts] : a.trans[q])
            for (int d : dsts) preds[d].push_back(q);
    std::vector<char> coreach(n, 0);
    std::deque<int> queue;
    for (int m : a.marked) {
        coreach[m] = 1;
        queue.push_back(m);
    }
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int p : preds[q])
            if (!coreach[p]) {
                coreach[p] = 1;
                queue.push_back(p);
            }
    }
    // Forward BFS with parent tracking for the witness path.
    std::vector<int> parent(n, -1);
    std::vector<EventLabel> via(n);
    std::vector<char> seen(n, 0);
    seen[a.initial] = 1;
    std::deque<int> fq{a.initial};
    while (!fq.empty()) {
        int q = fq.front();
        fq.pop_front();
        if (!coreach[q]) {
            NonblockingResult res;
            res.nonblocking = false;
            res.blocking_state = q;
            for (int s = q; s != a.initial; s = parent[s]) res.path.push_back(via[s]);
            std::reverse(res.path.begin(), res.path.end());
            return res;
        }
        for (const auto& [lbl, dsts] : a.trans[q])
            for (int d : dsts)
                if (!seen[d]) {
                    seen[d] = 1;
                    parent[d] = q;
                    via[d] = lbl;
                    fq.push_back(d);
                }
    }
    return {};
}

struct SubsetResult {
    Automaton automaton;               // deterministic, over the mapped labels
    std::vector<std::vector<int>> cells; // cells[s] = sorted source-state set
};

// Generic subset construction. `mapper` renames a label (projection) or
// erases it (nullopt -> the label is swallowed into the cell closure).
// A cell is marked iff it contains a marked source state.
inline SubsetResult subset_construction(
    const Automaton& a,
    const std::function<std::optional<EventLabel>(const EventLabel&)>& mapper) {
    a.validate();
    auto closure = [&](std::vector<int> states) {
        std::set<int> seen(states.begin(), states.end());
        std::deque<int> queue(states.begin(), states.end());
        while (!queue.empty()) {
            int q = queue.front();
            queue.pop_front();
            for (const auto& [lbl, dsts] : a.trans[q]) {
                if (mapper(lbl)) continue;
                for (int d : dsts)
                    if (seen.insert(d).second) queue.push_back(d);
            }
        }
        return std::vector<int>(seen.begin(), seen.end());
    };

    SubsetResult res;
    for (const auto& lbl : a.alphabet)
        if (auto m = mapper(lbl)) res.automaton.alphabet.insert(*m);

    std::map<std::vector<int>, int> id_of;
    std::vector<int> c0 = closure({a.initial});
    id_of[c0] = 0;
    res.cells.push_back(c0);
    res.automaton.add_state();

    for (size_t head = 0; head < res.cells.size(); ++head) {
        const std::vector<int> cell = res.cells[head];
        std::map<EventLabel, std::set<int>> moves;
        for (int q : cell)
            for (const auto& [lbl, dsts] : a.trans[q])
                if (auto m = mapper(lbl)) moves[*m].insert(dsts.begin(), dsts.end());
        for (const auto& [mlbl, dstset] : moves) {
            std::vector<int> dst = closure({dstset.begin(), dstset.end()});
            auto [it, fresh] = id_of.try_emplace(dst, static_cast<int>(res.cells.size()));
            if (fresh) {
                res.cells.push_back(dst);
                res.automaton.add_state();
            }
            res.automaton.add_transition(static_cast<int>(head), mlbl, it->second);
        }
    }
    for (size_t s = 0; s < res.cells.size(); ++s)
        for (int q : res.cells[s])
            if (a.marked.count(q)) {
                res.automaton.marked.insert(static_cast<int>(s));
                break;
            }
    return res;
}

// Observer (subset construction) w.r.t. an observable label set. Cells are
// unobservable-closure sets of a's states.
inline SubsetResult observer(const Automaton& a, const LabelSet& observable) {
    for (const auto& lbl : observable)
        if (!a.alphabet.count(lbl))
            throw Error(ErrorCode::INVALID_PARAMS, "observable label not in alphabet: " + lbl.str());
    return subset_construction(a, [&](const EventLabel& lbl) -> std::optional<EventLabel> {
        if (observable.count(lbl)) return lbl;
        return std::nullopt;
    });
}

enum class LanguageMode { Closed, Marked };

// L(a) included in L(b) for deterministic automata; returns a witness
// string on failure. Closed mode compares prefix-closed languages, Marked
// mode the marked languages.
inline std::optional<std::vector<EventLabel>> dfa_inclusion_witness(const Automaton& a,
                                                                    const Automaton& b,
                                                                    LanguageMode mode) {
    struct Node {
        int qa;
        int qb; // -1 = outside L(b)'s closed language
    };
    std::map<std::pair<int, int>, std::pair<std::pair<int, int>, EventLabel>> parent;
    std::set<std::pair<int, int>> seen;
    std::deque<Node> queue;
    auto witness = [&](std::pair<int, int> at) {
        std::vector<EventLabel> w;
        while (parent.count(at)) {
            auto& [prev, lbl] = parent[at];
            w.push_back(lbl);
            at = prev;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };
    Node start{a.initial, b.initial};
    seen.insert({start.qa, start.qb});
    queue.push_back(start);
    while (!queue.empty()) {
        Node cur = queue.front();
        queue.pop_front();
        bool outside = cur.qb < 0;
        if (mode == LanguageMode::Closed && outside) return witness({cur.qa, cur.qb});
        if (mode == LanguageMode::Marked && a.marked.count(cur.qa) &&
            (outside || !b.marked.count(cur.qb)))
            return witness({cur.qa, cur.qb});
        for (const auto& [lbl, dsts] : a.trans[cur.qa]) {
            for (int da : dsts) {
                int db = -1;
                if (!outside)
                    if (const auto* s = b.successors(cur.qb, lbl); s && !s->empty()) db = (*s)[0];
                if (seen.insert({da, db}).second) {
                    parent[{da, db}] = {{cur.qa, cur.qb}, lbl};
                    queue.push_back({da, db});
                }
            }
        }
    }
    return std::nullopt;
}

inline bool language_included(const Automaton& a, const Automaton& b, LanguageMode mode) {
    return !dfa_inclusion_witness(a, b, mode).has_value();
}

inline bool language_equal(const Automaton& a, const Automaton& b, LanguageMode mode) {
    return language_included(a, b, mode) && language_included(b, a, mode);
}

// Determinize with an optional per-label projection; convenience wrapper
// used for language comparisons of non-deterministic automata.
inline Automaton determinize_project(
    const Automaton& a,
    const std::function<std::optional<EventLabel>(const EventLabel&)>& mapper) {
    return subset_construction(a, mapper).automaton;
}

inline Automaton determinize(const Automaton& a) {
    return determinize_project(a, [](const EventLabel& l) { return std::optional<EventLabel>(l); });
}

// Moore partition refinement on a deterministic automaton; undefined moves
// behave as a rejecting sink. Preserves both the closed and the marked
// language; the result is reachable and canonically numbered.
inline Automaton minimize_dfa(const Automaton& a) {
    a.validate();
    if (!a.deterministic())
        throw Error(ErrorCode::MALFORMED_AUTOMATON, "minimize_dfa needs a deterministic automaton");
    const int n = a.num_states();
    std::vector<EventLabel> labels(a.alphabet.begin(), a.alphabet.end());
    std::vector<int> cls(n);
    for (int q = 0; q < n; ++q) cls[q] = a.marked.count(q) ? 1 : 0;
    for (;;) {
        std::map<std::vector<int>, int> sig_id;
        std::vector<int> next(n);
        for (int q = 0; q < n; ++q) {
            std::vector<int> sig{cls[q]};
            for (const auto& l : labels) {
                const auto* s = a.successors(q, l);
                sig.push_back(s && !s->empty() ? cls[(*s)[0]] : -1);
            }
            next[q] = sig_id.try_emplace(sig, static_cast<int>(sig_id.size())).first->second;
        }
        bool stable = true;
        std::map<int, int> m1;
        for (int q = 0; q < n && stable; ++q) {
            auto [it, fresh] = m1.try_emplace(cls[q], next[q]);
            if (!fresh && it->second != next[q]) stable = false;
        }
        cls = std::move(next);
        if (stable) break;
    }
    Automaton out;
    out.alphabet = a.alphabet;
    out.trans.resize(1 + *std::max_element(cls.begin(), cls.end()));
    out.initial = cls[a.initial];
    for (int q = 0; q < n; ++q) {
        if (a.marked.count(q)) out.marked.insert(cls[q]);
        for (const auto& [lbl, dsts] : a.trans[q])
            for (int d : dsts) out.add_transition(cls[q], lbl, cls[d]);
    }
    return reachable(out);
}

} // namespace netsup

#endif
