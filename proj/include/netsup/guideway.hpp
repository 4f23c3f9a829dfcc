#ifndef NETSUP_GUIDEWAY_HPP
#define NETSUP_GUIDEWAY_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "netsup/alphabet.hpp"
#include "netsup/automaton.hpp"
#include "netsup/channels.hpp"

namespace netsup {

// Two-train guideway benchmark: stations A and B joined by a one-way track
// with two sections T1, T2. Each train moves A -> T1 -> T2 -> B; entering T1
// is controllable, observable and lossy, the T1 -> T2 move is unobservable,
// and arriving at B is reliably observed. A collision is both trains
// occupying the same section.
struct GuidewayModel {
    Automaton v1, v2;          // base train models, plain labels, states A=0 T1=1 T2=2 B=3
    AlphabetSpec alph;         // sigma = {12,14,16,22,24,26}
    ChannelParams params;      // num_o = 1, num_c = 0, m = 0
    std::set<int> sections{1, 2};

    // Conventional external numbering of the lifted events, for reports and
    // interop with tools that need flat event names.
    std::map<std::string, std::string> external_names() const {
        return {
            {"cmd_in:{12}", "31"},      {"cmd_in:{22}", "33"},      {"cmd_in:{12,22}", "35"},
            {"cmd_out:{12}", "32"},     {"cmd_out:{22}", "34"},     {"cmd_out:{12,22}", "36"},
            {"out:12", "42"},           {"out:22", "52"},           {"out:16", "46"},
            {"out:26", "56"},           {"loss:12", "18"},          {"loss:22", "28"},
        };
    }
};

inline GuidewayModel build_guideway() {
    GuidewayModel gw;
    gw.alph.sigma = {"12", "14", "16", "22", "24", "26"};
    gw.alph.sigma_c = {"12", "22"};
    gw.alph.sigma_o = {"12", "16", "22", "26"};
    gw.alph.sigma_ol = {"12", "22"};
    gw.params.num_o = 1;
    gw.params.num_c = 0;
    gw.params.m = 0;

    auto train = [](const char* enter, const char* mid, const char* exit) {
        Automaton v;
        v.alphabet = {EventLabel::plain(enter), EventLabel::plain(mid), EventLabel::plain(exit)};
        for (int i = 0; i <= 3; ++i) v.add_state(i == 3);
        v.add_transition(0, EventLabel::plain(enter), 1);
        v.add_transition(1, EventLabel::plain(mid), 2);
        v.add_transition(2, EventLabel::plain(exit), 3);
        return v;
    };
    gw.v1 = train("12", "14", "16");
    gw.v2 = train("22", "24", "26");
    return gw;
}

// Collision states of the composed base plant: both trains in the same
// track section.
inline std::set<int> guideway_collision_states(const GuidewayModel& gw,
                                               const ProductResult& base_product) {
    std::set<int> bad;
    for (size_t s = 0; s < base_product.origins.size(); ++s) {
        const auto& t = base_product.origins[s];
        if (t[0] == t[1] && gw.sections.count(t[0])) bad.insert(static_cast<int>(s));
    }
    return bad;
}

} // namespace netsup

#endif
