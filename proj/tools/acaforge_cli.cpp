#include <acaforge/algebra.hpp>
#include <acaforge/circuits.hpp>
#include <acaforge/compilers.hpp>
#include <acaforge/engine.hpp>
#include <acaforge/io.hpp>
#include <acaforge/manifest.hpp>
#include <acaforge/oneway.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace acaforge;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    std::cout << "wrote " << path.string() << "\n";
}

std::vector<State> word_of(const std::string& s) {
    std::vector<State> v;
    for (char c : s) {
        if (c < '0' || c > '9') throw Error(std::string("bad state '") + c + "' in word " + s);
        v.push_back(static_cast<State>(c - '0'));
    }
    return v;
}

struct Flags {
    std::string rule, schedule, out;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    double alpha = 0.5;
    std::size_t window = 0;
};

void add_common(CLI::App* c, Flags& f) {
    c->add_option("--rule", f.rule, "rule spec: Wolfram code, rule-x, smv3q(110), file.table ...");
    c->add_option("--steps", f.steps, "number of steps");
    c->add_option("--schedule", f.schedule, "synchronous, alpha, fair-random, sweep-<order>");
    c->add_option("--seed", f.seed, "random seed");
    c->add_option("--alpha", f.alpha, "update probability for the alpha schedule");
    c->add_option("--window", f.window, "fairness window (0 = box size)");
    c->add_option("--out", f.out, "output file or directory");
}

// ------------------------------------------------------------------ run

int cmd_run(const std::string& manifest_path, const std::string& init, Flags& f, CLI::App* sub) {
    ExperimentManifest m;
    if (!manifest_path.empty()) m = ExperimentManifest::parse(slurp(manifest_path));
    if (sub->count("--rule")) m.rule = f.rule;
    if (sub->count("--steps")) m.steps = f.steps;
    if (sub->count("--schedule")) m.schedule.kind = f.schedule;
    if (sub->count("--seed")) m.schedule.seed = f.seed;
    if (sub->count("--alpha")) m.schedule.alpha = f.alpha;
    if (sub->count("--window")) m.schedule.window = f.window;
    if (!init.empty()) m.init = init;
    if (!f.out.empty()) {
        fs::path dir(f.out);
        if (m.spacetime.empty()) m.spacetime = (dir / "spacetime.txt").string();
        if (m.history.empty()) m.history = (dir / "history.txt").string();
        if (m.render.empty()) m.render = (dir / "spacetime.pgm").string();
    }

    auto rule = parse_rule_spec(m.rule);
    auto c0 = parse_init_spec(m.init, rule, m.origin);
    auto sched = m.schedule.build();
    auto st = run_schedule(rule, c0, sched, m.steps);
    std::size_t changed = 0;
    if (!st.frames.empty())
        for (std::size_t i = 0; i < st.frames.back().size(); ++i) changed += st.frames.back()[i] != st.frames.front()[i];
    std::cout << "rule " << m.rule << ", " << rule.states() << " states, schedule " << sched.describe() << ", "
              << m.steps << " steps, " << changed << " cells differ from the start\n";
    if (!m.spacetime.empty()) write_file(m.spacetime, render_spacetime(st, RenderStyle::Text));
    if (!m.render.empty()) write_file(m.render, render_spacetime(st, RenderStyle::Pgm));
    if (!m.history.empty()) write_file(m.history, render_history(extract_history(rule, c0, sched, m.steps)));
    if (manifest_path.empty() && !f.out.empty()) write_file(fs::path(f.out) / "manifest.txt", m.write());
    return 0;
}

// ---------------------------------------------------------------- check

int cmd_check(const std::string& spec) {
    auto rule = parse_rule_spec(spec);
    struct Item {
        const char* yes;
        Verdict v;
    };
    Item items[] = {{"commutative", check_commutativity(rule)},
                    {"monotonic", check_monotonicity(rule)},
                    {"no-adjacent-active", check_no_adjacent_active(rule)}};
    std::string line;
    for (const auto& it : items) {
        if (!line.empty()) line += "; ";
        line += it.v.holds ? it.yes : std::string("not ") + it.yes;
    }
    std::cout << line << "\n";
    for (const auto& it : items)
        if (!it.v.holds && it.v.witness) std::cout << "  " << it.yes << " witness: " << it.v.witness->describe() << "\n";
    return 0;
}

// -------------------------------------------------------------- compile

int cmd_compile(const std::string& guest_spec, const std::string& construction, const Flags& f) {
    auto c = construction_from_string(construction);
    if (!c) throw Error("unknown construction '" + construction + "' (soldiers, mv4q, smv3q, pack2)");
    auto guest = parse_rule_spec(guest_spec);
    auto compiled = compile(*c, guest);
    ContractManifest cm;
    cm.guest = guest_spec;
    cm.construction = *c;
    cm.host_states = compiled.host.states();
    cm.k = compiled.contract.k;
    cm.l = compiled.contract.l;
    std::cout << "host: " << cm.host_states << " states (" << construction << " of " << guest_spec << "), k=" << cm.k
              << " l=" << cm.l << ", translation (" << compiled.contract.translation.x << ","
              << compiled.contract.translation.y << ")\n";
    if (!f.out.empty()) {
        fs::path dir(f.out);
        cm.host_table = "host.table";
        compiled.host.set_name(std::string(to_string(*c)) + "-" + guest_spec);
        write_file(dir / "host.table", export_rule_table(compiled.host));
        write_file(dir / "contract.txt", cm.write());
    } else {
        std::cout << cm.write();
    }
    return 0;
}

// --------------------------------------------------------------- verify

int cmd_verify(const std::string& path, std::size_t schedules, std::size_t width, const Flags& f, CLI::App* sub) {
    auto cm = ContractManifest::parse(slurp(path));
    auto guest = parse_rule_spec(cm.guest);
    auto compiled = compile(cm.construction, guest);
    if (compiled.host.states() != cm.host_states && cm.host_states != 0)
        throw Error("contract expects " + std::to_string(cm.host_states) + " host states, compiler produced " +
                    std::to_string(compiled.host.states()));
    std::size_t steps = sub->count("--steps") ? f.steps : 4 * cm.k;
    std::mt19937_64 rng(f.seed);
    const auto w = static_cast<std::int64_t>(width);
    Configuration c0;
    Box box;
    if (guest.dimension() == 1) {
        std::vector<State> v(width);
        for (auto& s : v) s = static_cast<State>(rng() % static_cast<unsigned>(guest.states()));
        c0 = Configuration(Background::periodic_1d(v));
        box = Box::line(0, w);
    } else {
        std::vector<State> v(width * width);
        for (auto& s : v) s = static_cast<State>(rng() % static_cast<unsigned>(guest.states()));
        c0 = Configuration(Background::periodic_2d(w, w, v));
        box = Box{0, 0, w, w};
    }
    std::vector<UpdateSchedule> scheds;
    if (sub->count("--schedule")) {
        ScheduleSpec s;
        s.kind = f.schedule;
        s.seed = f.seed;
        s.alpha = f.alpha;
        s.window = f.window;
        scheds.push_back(s.build());
    } else {
        for (std::size_t i = 0; i < schedules; ++i)
            scheds.push_back(UpdateSchedule::fair_random(f.seed + i, f.window, 0.02 * double(i % 5)));
    }
    auto rep = verify_invariant_simulation(guest, compiled, c0, box, scheds, steps);
    std::cout << rep.summary() << "\n";
    return rep.agreed ? 0 : 1;
}

// --------------------------------------------------------------- oneway

int cmd_oneway(const std::string& spec, const std::string& left, const std::string& right,
               const std::vector<std::string>& words) {
    auto rule = parse_rule_spec(spec);
    auto pl = word_of(left), pr = word_of(right);
    const int q = rule.states();
    std::cout << "pf table (row = left neighbour, column = cell):\n";
    for (int a = 0; a < q; ++a) {
        std::cout << "  ";
        for (int s = 0; s < q; ++s)
            std::cout << pseudo_fixed_point(rule, static_cast<State>(a), static_cast<State>(s)) << (s + 1 < q ? " " : "");
        std::cout << "\n";
    }
    auto sa = extract_semiautomaton(rule, pr);
    std::cout << "semiautomaton delta (columns 0.." << q - 1 << ", #):\n";
    for (int x = 0; x < q; ++x) {
        std::cout << "  ";
        for (int s = 0; s <= q; ++s) std::cout << sa.step(static_cast<State>(x), s) << (s < q ? " " : "");
        std::cout << "\n";
    }
    std::vector<std::vector<State>> ws;
    for (const auto& w : words) ws.push_back(word_of(w));
    auto rep = verify_fsm_equivalence(rule, pl, pr, ws);
    std::cout << rep.equal << "/" << rep.words << " words match the semiautomaton; max pf iterations "
              << rep.max_pf_iterations << "\n";
    for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
    return rep.ok() ? 0 : 1;
}

// -------------------------------------------------------------- circuit

CircuitNetlist netlist_of(const std::string& spec) {
    if (spec == "nand") return build_nand_netlist();
    if (spec == "fanout") return build_fanout_netlist();
    if (spec == "xor") return build_xor_netlist();
    if (spec.rfind("step(", 0) == 0 && spec.back() == ')')
        return build_rule_step_circuit(parse_rule_spec(spec.substr(5, spec.size() - 6)));
    return read_netlist(slurp(spec));
}

std::vector<bool> bools_of(const std::string& s) {
    std::vector<bool> v;
    for (char c : s) {
        if (c == 'T' || c == 't' || c == '1') v.push_back(true);
        else if (c == 'F' || c == 'f' || c == '0') v.push_back(false);
        else throw Error(std::string("bad input '") + c + "', use T/F or 1/0");
    }
    return v;
}

std::vector<ActivePolicy> policies_for(std::size_t n, std::uint64_t seed) {
    if (n >= 4) return standard_policies(n - 4, seed);
    std::vector<ActivePolicy> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(standard_policies(i + 1, seed).back());
    return v;
}

std::string show(const std::vector<bool>& v) {
    std::string s;
    for (bool b : v) s += std::string(s.empty() ? "" : " ") + (b ? "T" : "F");
    return s;
}

int cmd_circuit(const std::string& spec, const std::string& inputs, std::size_t schedules, const Flags& f) {
    auto net = netlist_of(spec);
    auto placed = place_and_route(net);
    auto census = net.census();
    std::cout << "circuit " << net.name << ": " << net.gates.size() << " gates (";
    bool first = true;
    for (auto [k, n] : census) {
        std::cout << (first ? "" : ", ") << n << " " << to_string(k);
        first = false;
    }
    std::cout << "), " << placed.box.w << "x" << placed.box.h << " grid, " << placed.live_cells() << " live cells\n";
    auto pol = policies_for(std::max<std::size_t>(schedules, 1), f.seed == 0 ? 1 : f.seed);
    if (!inputs.empty()) {
        auto e = evaluate_circuit(placed, bools_of(inputs), pol);
        std::cout << (e.outputs.size() == 1 ? "output: " : "outputs: ") << show(e.outputs) << " (unanimous across "
                  << e.runs << " schedules)\n";
    } else {
        const std::size_t n = net.inputs.size();
        for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
            std::vector<bool> in;
            for (std::size_t i = 0; i < n; ++i) in.push_back(((m >> (n - 1 - i)) & 1) != 0);
            auto e = evaluate_circuit(placed, in, pol);
            std::cout << show(in) << " -> " << show(e.outputs) << "\n";
        }
        std::cout << "unanimous across " << pol.size() << " schedules\n";
    }
    if (!f.out.empty()) {
        auto pat = pattern_from(placed.configuration(), placed.box);
        pat.rule = "rule-x";
        write_file(f.out, write_pattern(pat));
    }
    return 0;
}

// --------------------------------------------------------------- export

int cmd_export(const std::string& kind, const std::string& target, const std::string& circuit,
               const std::string& gate, const Flags& f) {
    if (kind == "rule-table") {
        auto r = parse_rule_spec(f.rule.empty() ? "rule-x" : f.rule);
        if (r.name().empty()) r.set_name(f.rule);
        write_file(target, export_rule_table(r));
    } else if (kind == "netlist") {
        write_file(target, write_netlist(netlist_of(circuit.empty() ? "nand" : circuit)));
    } else if (kind == "circuit") {
        auto placed = place_and_route(netlist_of(circuit.empty() ? "nand" : circuit));
        auto pat = pattern_from(placed.configuration(), placed.box);
        pat.rule = "rule-x";
        write_file(target, write_pattern(pat));
    } else if (kind == "gate") {
        auto g = gate_pattern(gate_kind_from(gate.empty() ? "FORK" : gate));
        auto c = Configuration::zeros(2);
        for (const auto& [cell, s] : g.footprint) c.set(cell, s);
        auto pat = pattern_from(c, Box{0, 0, g.width, g.height});
        pat.rule = "rule-x";
        write_file(target, write_pattern(pat));
    } else if (kind == "manifest") {
        ExperimentManifest m;
        if (!f.rule.empty()) m.rule = f.rule;
        write_file(target, m.write());
    } else {
        throw Error("unknown export kind '" + kind + "' (rule-table, netlist, circuit, gate, manifest)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acaforge: asynchronous cellular automata toolkit"};
    app.require_subcommand(1);
    Flags f;

    std::string manifest, init;
    auto* run = app.add_subcommand("run", "run a rule under a schedule and write renderings");
    run->add_option("manifest", manifest, "experiment manifest (key = value lines)");
    run->add_option("--init", init, "initial configuration: word:0110, ring:..., random:W:SEED, rle:PATH");
    add_common(run, f);

    std::string spec;
    auto* check = app.add_subcommand("check", "commutativity, monotonicity and adjacent-activity verdicts");
    check->add_option("rule", spec, "rule spec")->required();

    std::string guest, construction;
    auto* comp = app.add_subcommand("compile", "compile a guest rule into an asynchronous host");
    comp->add_option("guest", guest, "guest rule spec")->required();
    comp->add_option("construction", construction, "soldiers, mv4q, smv3q or pack2")->required();
    add_common(comp, f);

    std::string contract;
    std::size_t schedules = 10, width = 32;
    auto* ver = app.add_subcommand("verify", "check a compiled host against its synchronous guest");
    ver->add_option("contract", contract, "contract manifest written by compile")->required();
    ver->add_option("--schedules", schedules, "number of fair-random schedules");
    ver->add_option("--width", width, "guest ring width (torus side for 2D guests)");
    add_common(ver, f);

    std::string left, right;
    std::vector<std::string> words;
    auto* ow = app.add_subcommand("oneway", "pseudo-fixed points and semiautomaton of a one-way rule");
    ow->add_option("rule", spec, "one-way rule spec, e.g. oneway(2:0110)")->required();
    ow->add_option("words", words, "input words");
    ow->add_option("--left", left, "left period p_L")->required();
    ow->add_option("--right", right, "right period p_R")->required();

    std::string circ, inputs;
    std::size_t circuit_schedules = 100;
    auto* cir = app.add_subcommand("circuit", "place a dual-rail circuit in rule X and evaluate it");
    cir->add_option("netlist", circ, "nand, fanout, xor, step(RULE) or a netlist file")->required();
    cir->add_option("--inputs", inputs, "input values, e.g. TF; all combinations when omitted");
    cir->add_option("--schedules", circuit_schedules, "schedules per evaluation (4 sweeps, then fair-random)");
    add_common(cir, f);

    std::string kind, target, gate;
    auto* exp = app.add_subcommand("export", "write a rule table, netlist, placed circuit, gate or manifest");
    exp->add_option("kind", kind, "rule-table, netlist, circuit, gate, manifest")->required();
    exp->add_option("target", target, "output path")->required();
    exp->add_option("--circuit", circ, "netlist spec for netlist and circuit exports");
    exp->add_option("--gate", gate, "gate kind for gate exports");
    add_common(exp, f);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(manifest, init, f, run);
        if (*check) return cmd_check(spec);
        if (*comp) return cmd_compile(guest, construction, f);
        if (*ver) return cmd_verify(contract, schedules, width, f, ver);
        if (*ow) return cmd_oneway(spec, left, right, words);
        if (*cir) return cmd_circuit(circ, inputs, circuit_schedules, f);
        if (*exp) return cmd_export(kind, target, circ, gate, f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
