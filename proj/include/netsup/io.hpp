#ifndef NETSUP_IO_HPP
#define NETSUP_IO_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netsup/alphabet.hpp"
#include "netsup/automaton.hpp"
#include "netsup/channels.hpp"

namespace netsup {

// Text automaton format, UTF-8, LF line endings, '#' comments:
//
//   alphabet
//   12 col          # base event with flags: c(ontrollable) o(bservable) l(ossy)
//   14 -            # base event, no flags
//   in:16           # structured (lifted) label, never flagged
//   states 4
//   initial 0
//   marked 3
//   trans
//   0 12 1
//
// Flags are only meaningful on plain labels; when at least one flagged line
// is present the file also defines an AlphabetSpec.
struct AutomatonFile {
    Automaton automaton;
    std::optional<AlphabetSpec> alph;
};

namespace detail {

inline std::vector<std::string> tokenize(std::string line) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

inline int parse_int(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::PARSE_ERROR, std::string("expected an integer ") + what + ": " + s);
    }
}

} // namespace detail

inline AutomatonFile parse_automaton_file(std::istream& in) {
    AutomatonFile out;
    enum class Section { None, Alphabet, Trans } section = Section::None;
    bool have_states = false, any_flags = false;
    AlphabetSpec alph;
    std::set<std::string> plain_names;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorCode::PARSE_ERROR, "line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        if (head == "alphabet") {
            section = Section::Alphabet;
        } else if (head == "states") {
            section = Section::None;
            if (toks.size() != 2) fail("states needs one count");
            int n = detail::parse_int(toks[1], "state count");
            if (n < 1) fail("automaton needs at least one state");
            out.automaton.trans.resize(static_cast<size_t>(n));
            have_states = true;
        } else if (head == "initial") {
            section = Section::None;
            if (toks.size() != 2) fail("initial needs one state");
            out.automaton.initial = detail::parse_int(toks[1], "initial state");
        } else if (head == "marked") {
            section = Section::None;
            for (size_t i = 1; i < toks.size(); ++i)
                out.automaton.marked.insert(detail::parse_int(toks[i], "marked state"));
        } else if (head == "trans") {
            section = Section::Trans;
            if (!have_states) fail("trans before states");
        } else if (section == Section::Alphabet) {
            if (toks.size() > 2) fail("alphabet line has too many tokens");
            EventLabel lbl = EventLabel::parse(head);
            if (!out.automaton.alphabet.insert(lbl).second) fail("duplicate alphabet entry: " + head);
            if (lbl.kind == EventKind::PLAIN) plain_names.insert(lbl.base);
            if (toks.size() == 2 && toks[1] != "-") {
                if (lbl.kind != EventKind::PLAIN) fail("flags on a structured label: " + head);
                for (char f : toks[1]) {
                    if (f == 'c')
                        alph.sigma_c.insert(lbl.base);
                    else if (f == 'o')
                        alph.sigma_o.insert(lbl.base);
                    else if (f == 'l')
                        alph.sigma_ol.insert(lbl.base);
                    else
                        fail(std::string("unknown flag '") + f + "'");
                }
                any_flags = true;
            } else if (toks.size() == 2) {
                any_flags = true;
            }
        } else if (section == Section::Trans) {
            if (toks.size() != 3) fail("transition needs: src label dst");
            int src = detail::parse_int(toks[0], "source state");
            int dst = detail::parse_int(toks[2], "target state");
            EventLabel lbl = EventLabel::parse(toks[1]);
            if (src < 0 || src >= out.automaton.num_states()) fail("source state out of range");
            if (dst < 0 || dst >= out.automaton.num_states()) fail("target state out of range");
            if (!out.automaton.alphabet.count(lbl)) fail("transition label not in alphabet: " + toks[1]);
            const auto* existing = out.automaton.successors(src, lbl);
            if (existing && std::binary_search(existing->begin(), existing->end(), dst))
                fail("duplicate transition");
            out.automaton.add_transition(src, lbl, dst);
        } else {
            fail("unexpected line: " + head);
        }
    }
    if (!have_states) throw Error(ErrorCode::PARSE_ERROR, "missing states section");
    out.automaton.validate();
    if (any_flags) {
        alph.sigma = plain_names;
        alph.validate();
        out.alph = alph;
    }
    return out;
}

inline AutomatonFile read_automaton_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open " + path);
    try {
        return parse_automaton_file(in);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

// Canonical serialization: fixed section order, sorted alphabet, sorted
// transitions. parse(serialize(a)) == a for any valid automaton.
inline std::string serialize_automaton(const Automaton& a, const AlphabetSpec* alph = nullptr) {
    a.validate();
    std::ostringstream os;
    os << "alphabet\n";
    for (const auto& lbl : a.alphabet) {
        os << lbl.str();
        if (alph && lbl.kind == EventKind::PLAIN) {
            std::string flags;
            if (alph->controllable(lbl.base)) flags += 'c';
            if (alph->observable(lbl.base)) flags += 'o';
            if (alph->lossy(lbl.base)) flags += 'l';
            os << ' ' << (flags.empty() ? "-" : flags);
        }
        os << "\n";
    }
    os << "states " << a.num_states() << "\n";
    os << "initial " << a.initial << "\n";
    if (!a.marked.empty()) {
        os << "marked";
        for (int m : a.marked) os << ' ' << m;
        os << "\n";
    }
    os << "trans\n";
    for (int q = 0; q < a.num_states(); ++q)
        for (const auto& [lbl, dsts] : a.trans[q])
            for (int d : dsts) os << q << ' ' << lbl.str() << ' ' << d << "\n";
    return os.str();
}

inline void write_automaton_file(const std::string& path, const Automaton& a,
                                 const AlphabetSpec* alph = nullptr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    out << serialize_automaton(a, alph);
}

// Problem file: plant components, channel parameters, and the bad-state
// specification. Paths are relative to the problem file's directory.
//
//   plant v1.aut v2.aut
//   num_o 1
//   num_c 0
//   m 0
//   capacity 6          # optional, defaults to the queue bound
//   mechanism first     # first | last
//   bad collision 1 2   # or: bad 3 5 7
struct ProblemFile {
    std::vector<std::string> plant_paths;
    ChannelParams params;
    bool collision = false;
    std::vector<int> bad;
};

inline ProblemFile parse_problem_file(std::istream& in) {
    ProblemFile pf;
    std::string line;
    int lineno = 0;
    bool have_plant = false, have_bad = false;
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorCode::PARSE_ERROR, "line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        if (head == "plant") {
            if (toks.size() < 2) fail("plant needs at least one file");
            pf.plant_paths.assign(toks.begin() + 1, toks.end());
            have_plant = true;
        } else if (head == "num_o" || head == "num_c" || head == "m" || head == "capacity") {
            if (toks.size() != 2) fail(head + " needs one value");
            int v = detail::parse_int(toks[1], head.c_str());
            if (head == "num_o")
                pf.params.num_o = v;
            else if (head == "num_c")
                pf.params.num_c = v;
            else if (head == "m")
                pf.params.m = v;
            else
                pf.params.capacity_override = v;
        } else if (head == "mechanism") {
            if (toks.size() != 2 || (toks[1] != "first" && toks[1] != "last"))
                fail("mechanism must be first or last");
            pf.params.mechanism =
                toks[1] == "first" ? CommandMechanism::FIRST_WINS : CommandMechanism::LAST_WINS;
        } else if (head == "bad") {
            size_t i = 1;
            if (toks.size() > 1 && toks[1] == "collision") {
                pf.collision = true;
                i = 2;
            }
            for (; i < toks.size(); ++i) pf.bad.push_back(detail::parse_int(toks[i], "bad state"));
            have_bad = true;
        } else {
            fail("unexpected keyword: " + head);
        }
    }
    if (!have_plant) throw Error(ErrorCode::PARSE_ERROR, "missing plant line");
    if (!have_bad) throw Error(ErrorCode::PARSE_ERROR, "missing bad line");
    pf.params.validate();
    return pf;
}

// A problem resolved against the filesystem: the composed base plant, the
// merged alphabet, and bad states expressed on the composed plant.
struct LoadedProblem {
    Automaton base_plant; // plain labels, product of the components
    AlphabetSpec alph;
    ChannelParams params;
    std::set<int> base_bad;
};

inline LoadedProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open " + path);
    ProblemFile pf;
    try {
        pf = parse_problem_file(in);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
    LoadedProblem lp;
    lp.params = pf.params;
    std::vector<Automaton> components;
    const auto dir = std::filesystem::path(path).parent_path();
    for (const auto& rel : pf.plant_paths) {
        auto f = read_automaton_file((dir / rel).string());
        if (!f.alph)
            throw Error(ErrorCode::PARSE_ERROR, rel + ": plant component lacks event flags");
        for (const auto& e : f.alph->sigma) {
            if (lp.alph.sigma.count(e)) {
                bool same = lp.alph.controllable(e) == f.alph->controllable(e) &&
                            lp.alph.observable(e) == f.alph->observable(e) &&
                            lp.alph.lossy(e) == f.alph->lossy(e);
                if (!same)
                    throw Error(ErrorCode::ALPHABET_CONFLICT,
                                "conflicting flags for event " + e + " in " + rel);
            }
        }
        lp.alph.sigma.insert(f.alph->sigma.begin(), f.alph->sigma.end());
        lp.alph.sigma_c.insert(f.alph->sigma_c.begin(), f.alph->sigma_c.end());
        lp.alph.sigma_o.insert(f.alph->sigma_o.begin(), f.alph->sigma_o.end());
        lp.alph.sigma_ol.insert(f.alph->sigma_ol.begin(), f.alph->sigma_ol.end());
        components.push_back(std::move(f.automaton));
    }
    lp.alph.validate();
    auto prod = sync_product_with_origins(components);
    lp.base_plant = prod.automaton;
    if (pf.collision) {
        if (components.size() != 2)
            throw Error(ErrorCode::INVALID_PARAMS, "collision bad states need exactly 2 components");
        std::set<int> sections(pf.bad.begin(), pf.bad.end());
        for (size_t s = 0; s < prod.origins.size(); ++s)
            if (prod.origins[s][0] == prod.origins[s][1] && sections.count(prod.origins[s][0]))
                lp.base_bad.insert(static_cast<int>(s));
    } else {
        for (int b : pf.bad) {
            if (b < 0 || b >= lp.base_plant.num_states())
                throw Error(ErrorCode::INVALID_PARAMS, "bad state out of range");
            lp.base_bad.insert(b);
        }
    }
    return lp;
}

// Lift bad states of the base plant to the transformed plant through the
// per-state plant-component annotation.
inline std::set<int> lift_bad_states(const TransformedPlant& tp, const std::set<int>& base_bad) {
    std::set<int> out;
    for (size_t s = 0; s < tp.annotations.size(); ++s)
        if (base_bad.count(tp.annotations[s].g_state)) out.insert(static_cast<int>(s));
    return out;
}

} // namespace netsup

#endif
