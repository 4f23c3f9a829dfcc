// Command-line front end: generate channel automata, compose plants,
// synthesize supervisors, verify properties, and run monitored simulations.
//
// Exit codes: 0 ok, 1 verification failure, 2 empty synthesis result,
// 3 input error.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netsup/netsup.hpp"

namespace {

using namespace netsup;

std::set<std::string> split_set(const std::string& csv) {
    std::set<std::string> out;
    std::istringstream is(csv);
    std::string item;
    while (std::getline(is, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

void emit(const Automaton& a, const std::string& out, const AlphabetSpec* alph = nullptr) {
    if (out.empty())
        std::cout << serialize_automaton(a, alph);
    else
        write_automaton_file(out, a, alph);
}

struct GenOpts {
    std::string sigma, sigma_c, sigma_o, sigma_ol;
    int num_o = 0, num_c = 0, m = 0, k = 1;
    int capacity = -1;
    std::string mechanism = "first";
    std::string out;
    std::string out_dir = ".";
};

AlphabetSpec gen_alphabet(const GenOpts& o) {
    AlphabetSpec alph;
    alph.sigma_c = split_set(o.sigma_c);
    alph.sigma_o = split_set(o.sigma_o);
    alph.sigma_ol = split_set(o.sigma_ol);
    alph.sigma = split_set(o.sigma);
    alph.sigma.insert(alph.sigma_c.begin(), alph.sigma_c.end());
    alph.sigma.insert(alph.sigma_o.begin(), alph.sigma_o.end());
    alph.validate();
    return alph;
}

ChannelParams gen_params(const GenOpts& o) {
    ChannelParams p;
    p.num_o = o.num_o;
    p.num_c = o.num_c;
    p.m = o.m;
    if (o.capacity >= 0) p.capacity_override = o.capacity;
    p.mechanism = o.mechanism == "last" ? CommandMechanism::LAST_WINS
                                        : CommandMechanism::FIRST_WINS;
    p.validate();
    return p;
}

int cmd_gen(const std::string& kind, const GenOpts& o) {
    if (kind == "guideway") {
        auto gw = build_guideway();
        const std::string d = o.out_dir + "/";
        write_automaton_file(d + "v1.aut", gw.v1, &gw.alph);
        write_automaton_file(d + "v2.aut", gw.v2, &gw.alph);
        write_automaton_file(d + "oc.aut",
                             build_observation_channel(gw.alph, gw.params.num_o).automaton);
        write_automaton_file(
            d + "cc.aut",
            build_control_channel(gw.alph, gw.params.num_c, gw.params.cc_capacity()).automaton);
        write_automaton_file(d + "ce.aut",
                             build_command_execution(gw.alph, gw.params.mechanism));
        std::ofstream prob(d + "guideway.prob");
        prob << "plant v1.aut v2.aut\n"
             << "num_o " << gw.params.num_o << "\nnum_c " << gw.params.num_c << "\nm "
             << gw.params.m << "\nmechanism first\nbad collision";
        for (int s : gw.sections) prob << ' ' << s;
        prob << "\n";
        std::cout << "wrote v1.aut v2.aut oc.aut cc.aut ce.aut guideway.prob to " << o.out_dir
                  << "\n";
        std::cout << "external event names:\n";
        for (const auto& [lifted, ext] : gw.external_names())
            std::cout << "  " << ext << " = " << lifted << "\n";
        return 0;
    }
    auto alph = gen_alphabet(o);
    auto params = gen_params(o);
    if (kind == "oc")
        emit(build_observation_channel(alph, o.num_o).automaton, o.out);
    else if (kind == "cc")
        emit(build_control_channel(alph, o.num_c, params.cc_capacity()).automaton, o.out);
    else if (kind == "ce")
        emit(build_command_execution(alph, params.mechanism), o.out);
    else if (kind == "sk")
        emit(build_sk_counter(o.k, alph), o.out);
    else if (kind == "am")
        emit(build_am_counter(o.m, alph), o.out);
    else
        throw Error(ErrorCode::INVALID_PARAMS, "unknown generator kind: " + kind);
    return 0;
}

int cmd_compose(const std::vector<std::string>& files, const std::string& out) {
    std::vector<Automaton> parts;
    for (const auto& f : files) parts.push_back(read_automaton_file(f).automaton);
    auto prod = sync_product(parts);
    std::cout << "states=" << prod.num_states() << " transitions=" << prod.num_transitions()
              << "\n";
    if (!out.empty()) write_automaton_file(out, prod);
    return 0;
}

struct BuiltProblem {
    TransformedPlant tp;
    SynthesisProblem prob;
};

BuiltProblem build_problem(const std::string& path) {
    auto lp = load_problem(path);
    BuiltProblem bp;
    bp.tp = build_transformed_plant(relabel_plant(lp.base_plant, lp.alph), lp.alph, lp.params);
    bp.prob.plant = bp.tp.automaton;
    bp.prob.constraint = networked_control_constraint(lp.alph);
    bp.prob.bad = lift_bad_states(bp.tp, lp.base_bad);
    return bp;
}

int cmd_synthesize(const std::string& problem_path, const std::string& out) {
    auto bp = build_problem(problem_path);
    std::cout << "plant states=" << bp.prob.plant.num_states()
              << " transitions=" << bp.prob.plant.num_transitions() << " bad=" << bp.prob.bad.size()
              << "\n";
    auto res = synthesize_supremal(bp.prob);
    if (res.empty()) {
        std::cout << "EMPTY: " << res.empty_reason << "\n";
        return 2;
    }
    const auto& sup = *res.supervisor;
    std::cout << "supervisor states=" << sup.automaton.num_states()
              << " transitions=" << sup.automaton.num_transitions() << " observable-transitions="
              << sup.num_observable_transitions(bp.prob.constraint) << "\n";
    auto ctrl = check_controllability(sup.automaton, bp.prob.plant, bp.prob.constraint);
    auto norm = check_normality(sup.automaton, bp.prob.plant, bp.prob.constraint);
    auto safe = check_safety(sup.automaton, bp.prob.plant, bp.prob.bad);
    auto nb = is_nonblocking(sync_product({sup.automaton, bp.prob.plant}));
    std::cout << "controllable=" << (ctrl.controllable ? "yes" : "no")
              << " normal=" << (norm.normal ? "yes" : "no")
              << " safe=" << (safe.safe ? "yes" : "no")
              << " nonblocking=" << (nb.nonblocking ? "yes" : "no") << "\n";
    if (!out.empty()) write_automaton_file(out, sup.automaton);
    return 0;
}

int cmd_verify(const std::string& problem_path, const std::string& sup_path,
               const std::string& checks_csv) {
    auto bp = build_problem(problem_path);
    auto sup = read_automaton_file(sup_path).automaton;
    auto checks = split_set(checks_csv);
    bool fail = false;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << name << ": " << (ok ? "pass" : "FAIL");
        if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        fail = fail || !ok;
    };
    auto path_str = [](const std::vector<EventLabel>& p) {
        std::string s;
        for (const auto& l : p) s += (s.empty() ? "" : " ") + l.str();
        return s;
    };
    if (checks.count("safety")) {
        auto r = check_safety(sup, bp.prob.plant, bp.prob.bad);
        report("safety", r.safe, "collision path: " + path_str(r.path));
    }
    if (checks.count("controllability")) {
        auto r = check_controllability(sup, bp.prob.plant, bp.prob.constraint);
        report("controllability", r.controllable,
               r.label ? "rejected uncontrollable label " + r.label->str() : "");
    }
    if (checks.count("normality")) {
        auto r = check_normality(sup, bp.prob.plant, bp.prob.constraint);
        report("normality", r.normal,
               "witnesses: [" + path_str(r.witness_a) + "] vs [" + path_str(r.witness_b) + "]");
    }
    if (checks.count("nonblocking")) {
        auto r = is_nonblocking(sync_product({sup, bp.prob.plant}));
        report("nonblocking", r.nonblocking,
               "blocking state " + std::to_string(r.blocking_state));
    }
    if (checks.count("queue-bound") || checks.count("inductive-invariant")) {
        auto sys = make_annotated_system(sup, bp.tp, bp.prob.bad);
        auto rep = exhaustive_check(sys);
        if (checks.count("queue-bound"))
            report("queue-bound",
                   rep.max_queue_seen <= bp.tp.params.cc_capacity() &&
                       rep.max_obs_in_flight <= bp.tp.params.num_o + 1,
                   "max_queue=" + std::to_string(rep.max_queue_seen));
        if (checks.count("inductive-invariant")) {
            bool ok = true;
            for (const auto& v : rep.violations)
                if (v.monitor == "queue-invariant") ok = false;
            report("inductive-invariant", ok);
        }
    }
    if (checks.count("eventual-obs")) {
        auto lp = load_problem(problem_path);
        auto r = check_eventual_observability(lp.base_plant, lp.alph);
        report("eventual-obs", r.eventually_observable,
               "after lossy " + r.event + " at state " + std::to_string(r.src));
    }
    return fail ? 1 : 0;
}

int cmd_simulate(const std::string& problem_path, const std::string& sup_path, uint64_t seed,
                 int steps, double loss_bias, bool trace) {
    auto bp = build_problem(problem_path);
    SimConfig cfg;
    cfg.seed = seed;
    cfg.steps = steps;
    cfg.loss_bias = loss_bias;
    cfg.trace = trace;
    AnnotatedSystem sys =
        sup_path.empty()
            ? make_annotated_system(bp.tp, bp.prob.bad)
            : make_annotated_system(read_automaton_file(sup_path).automaton, bp.tp, bp.prob.bad);
    auto rep = simulate(sys, cfg);
    if (trace) std::cout << rep.trace;
    std::cout << rep.summary();
    return rep.clean() ? 0 : 1;
}

int cmd_stats(const std::string& path) {
    auto f = read_automaton_file(path);
    const auto& a = f.automaton;
    std::cout << "states=" << a.num_states() << " transitions=" << a.num_transitions()
              << " marked=" << a.marked.size()
              << " deterministic=" << (a.deterministic() ? "yes" : "no") << "\n";
    auto nb = is_nonblocking(a);
    std::cout << "nonblocking=" << (nb.nonblocking ? "yes" : "no") << "\n";
    std::map<std::string, int> kinds;
    for (const auto& lbl : a.alphabet) {
        switch (lbl.kind) {
            case EventKind::PLAIN: ++kinds["plain"]; break;
            case EventKind::OBS_IN: ++kinds["in"]; break;
            case EventKind::OBS_OUT: ++kinds["out"]; break;
            case EventKind::OBS_LOSS: ++kinds["loss"]; break;
            case EventKind::CMD_IN: ++kinds["cmd_in"]; break;
            case EventKind::CMD_OUT: ++kinds["cmd_out"]; break;
            case EventKind::CMD_LOSS: ++kinds["cmd_loss"]; break;
        }
    }
    std::cout << "alphabet=" << a.alphabet.size();
    for (const auto& [k, n] : kinds) std::cout << " " << k << "=" << n;
    std::cout << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"networked supervisor synthesis toolkit"};
    app.require_subcommand(1);

    GenOpts go;
    std::string gen_kind;
    auto* gen = app.add_subcommand("gen", "generate a channel automaton or the guideway models");
    gen->add_option("kind", gen_kind, "oc | cc | ce | sk | am | guideway")->required();
    gen->add_option("--sigma", go.sigma, "extra base events (comma separated)");
    gen->add_option("--sigma-c", go.sigma_c, "controllable events");
    gen->add_option("--sigma-o", go.sigma_o, "observable events");
    gen->add_option("--sigma-ol", go.sigma_ol, "lossy observable events");
    gen->add_option("--num-o", go.num_o, "observation-channel delay bound");
    gen->add_option("--num-c", go.num_c, "control-channel delay bound");
    gen->add_option("--m", go.m, "max consecutive command losses");
    gen->add_option("--k", go.k, "commands per observation (sk)");
    gen->add_option("--capacity", go.capacity, "control-queue capacity override");
    gen->add_option("--mechanism", go.mechanism, "first | last")
        ->check(CLI::IsMember({"first", "last"}));
    gen->add_option("--out", go.out, "output file (default: stdout)");
    gen->add_option("--out-dir", go.out_dir, "output directory for gen guideway");

    std::vector<std::string> compose_files;
    std::string compose_out;
    auto* compose = app.add_subcommand("compose", "synchronous product of automaton files");
    compose->add_option("files", compose_files, "input automaton files")->required();
    compose->add_option("--out", compose_out, "output file");

    std::string syn_problem, syn_out;
    auto* synth = app.add_subcommand("synthesize", "supremal supervisor for a problem file");
    synth->add_option("problem", syn_problem, "problem file")->required();
    synth->add_option("--out", syn_out, "supervisor output file");

    std::string ver_problem, ver_sup;
    std::string ver_checks =
        "safety,controllability,normality,nonblocking,queue-bound,inductive-invariant,eventual-obs";
    auto* verify = app.add_subcommand("verify", "check supervisor properties");
    verify->add_option("problem", ver_problem, "problem file")->required();
    verify->add_option("--supervisor", ver_sup, "supervisor automaton file")->required();
    verify->add_option("--checks", ver_checks, "comma-separated subset of the checks");

    std::string sim_problem, sim_sup;
    uint64_t sim_seed = 0;
    int sim_steps = 1000;
    double sim_loss_bias = 0.5;
    bool sim_trace = false;
    auto* sim = app.add_subcommand("simulate", "seeded monitored random walk");
    sim->add_option("problem", sim_problem, "problem file")->required();
    sim->add_option("--supervisor", sim_sup, "supervisor file (omit to walk the raw plant)");
    sim->add_option("--seed", sim_seed, "random seed");
    sim->add_option("--steps", sim_steps, "number of steps")->check(CLI::PositiveNumber);
    sim->add_option("--loss-bias", sim_loss_bias, "weight multiplier on loss transitions");
    sim->add_flag("--trace", sim_trace, "print one line per step");

    std::string stats_file;
    auto* stats = app.add_subcommand("stats", "print automaton statistics");
    stats->add_option("file", stats_file, "automaton file")->required();

    try {
        app.parse(argc, argv);
        if (*gen) return cmd_gen(gen_kind, go);
        if (*compose) return cmd_compose(compose_files, compose_out);
        if (*synth) return cmd_synthesize(syn_problem, syn_out);
        if (*verify) return cmd_verify(ver_problem, ver_sup, ver_checks);
        if (*sim)
            return cmd_simulate(sim_problem, sim_sup, sim_seed, sim_steps, sim_loss_bias,
                                sim_trace);
        if (*stats) return cmd_stats(stats_file);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    } catch (const netsup::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
