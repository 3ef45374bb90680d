// One line per acceptance criterion. Exit status is the number of failures.

#include <acaforge/algebra.hpp>
#include <acaforge/circuits.hpp>
#include <acaforge/compilers.hpp>
#include <acaforge/engine.hpp>
#include <acaforge/fan.hpp>
#include <acaforge/io.hpp>
#include <acaforge/oneway.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace acaforge;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Collects the first failure; later ones only bump the count.
struct Tally {
    std::size_t checks = 0, failed = 0;
    std::string first;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (cond) return;
        if (failed++ == 0) first = what;
    }
    Outcome done(const std::string& summary) const {
        if (failed == 0) return {true, summary};
        return {false, std::to_string(failed) + "/" + std::to_string(checks) + " checks failed, first: " + first};
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Configuration random_ring(std::mt19937_64& rng, std::int64_t w, int q) {
    std::vector<State> v(static_cast<std::size_t>(w));
    for (auto& s : v) s = static_cast<State>(rng() % static_cast<unsigned>(q));
    return Configuration(Background::periodic_1d(v));
}

Configuration random_torus(std::mt19937_64& rng, std::int64_t w, std::int64_t h, int q) {
    std::vector<State> v(static_cast<std::size_t>(w * h));
    for (auto& s : v) s = static_cast<State>(rng() % static_cast<unsigned>(q));
    return Configuration(Background::periodic_2d(w, h, v));
}

std::vector<UpdateSchedule> fair_schedules(std::size_t n, std::uint64_t seed) {
    std::vector<UpdateSchedule> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(UpdateSchedule::fair_random(seed + i, 0, 0.02 * double(i % 5)));
    return v;
}

RuleTable parity_vn(int q) {
    return RuleTable::from_function(2, q, nbhd::von_neumann(), [q](std::span<const State> t) {
        int s = 0;
        for (State v : t) s += v;
        return static_cast<State>(s % q);
    });
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---------------------------------------------------------------------------

Outcome fan_invariance() {
    std::mt19937_64 rng(101);
    Tally t;
    for (int n = 0; n < 50; ++n) {
        FlipNetwork net;
        const std::size_t nodes = 2 + rng() % 29;
        for (std::size_t i = 0; i < nodes; ++i) net.add_node(static_cast<State>(rng() % 3));
        for (std::size_t i = 0; i < nodes; ++i)
            for (std::size_t j = i + 1; j < nodes; ++j)
                if (rng() % 4 == 0) net.add_edge(i, j, rng() % 2 ? i : j);
        const std::uint64_t salt = rng();
        net.set_flip(flip_all([salt](std::size_t v, State own, std::span<const State> nb) {
            std::uint64_t s = salt ^ (own + 7 * v);
            for (auto x : nb) s = s * 3 + x;
            return static_cast<State>(s % 3);
        }));
        auto ref = fan_history(net, UpdateSchedule::synchronous(), 200);
        for (std::uint64_t k = 0; k < 10; ++k) {
            auto h = fan_history(net, UpdateSchedule::fair_random(rng(), 0, 0.1 * double(k % 5)), 200);
            t.expect(ref.agrees_with(h), "network " + std::to_string(n) + " schedule " + std::to_string(k));
        }
    }
    return t.done("50 networks x 10 fair schedules x 200 steps, histories identical");
}

Outcome rule212_duality() {
    auto r = RuleTable::wolfram(212);
    Tally t;
    t.expect(static_cast<bool>(check_no_adjacent_active(r)), "no-adjacent-active fails for 212");
    auto fan = build_dual_fan(r);
    std::mt19937_64 rng(212);
    const Box box = Box::line(0, 24);
    const Domain d{box, Boundary::periodic()};
    for (int k = 0; k < 100; ++k) {
        auto c = random_ring(rng, 24, 2);
        auto sched = k % 2 ? UpdateSchedule::alpha(0.2 + 0.6 * double(k % 3) / 2, rng())
                           : UpdateSchedule::fair_random(rng(), 0, 0.1 * double(k % 4));
        auto ref = extract_history(r, c, UpdateSchedule::synchronous(), 100, d);
        t.expect(ref.agrees_with(extract_history(r, c, sched, 100, d)), "history differs on pair " + std::to_string(k));
        auto rep = check_duality(r, fan, c, box, sched, 60);
        t.expect(rep.commutes, "projection does not commute on pair " + std::to_string(k) + ": " + rep.failure);
    }
    return t.done("adjacent activity excluded; 100 pairs with identical histories and commuting projection");
}

Outcome algebra_ground_truth() {
    Tally t;
    auto t0 = Clock::now();
    auto r212 = RuleTable::wolfram(212);
    t.expect(check_commutativity(r212) && check_monotonicity(r212), "212 not commutative+monotonic");
    auto r150 = RuleTable::wolfram(150);
    auto c = check_commutativity(r150);
    bool witness = !c && c.witness;
    if (witness) {
        std::vector<State> ctx;
        for (auto& [cell, s] : c.witness->context) ctx.push_back(s);
        witness = ctx == std::vector<State>{1, 0, 0, 1};
    }
    t.expect(witness, "150 commutativity witness is not (1,0,0,1)");
    auto m = check_monotonicity(r150);
    t.expect(!m && m.witness, "150 has no monotonicity witness");
    std::mt19937_64 rng(4);
    for (int q = 2; q <= 4; ++q) {
        std::vector<State> tab(static_cast<std::size_t>(q * q * q));
        for (auto& s : tab) s = static_cast<State>(rng() % static_cast<unsigned>(q));
        RuleTable r(1, q, nbhd::first_neighbors(), tab);
        (void)check_commutativity(r);
        (void)check_monotonicity(r);
        (void)check_no_adjacent_active(r);
    }
    double small = seconds_since(t0);
    t.expect(small < 1.0, "small-rule checks took " + std::to_string(small) + " s (limit 1 s)");

    auto t1 = Clock::now();
    auto host = compile_marching_soldiers(r150).host;
    t.expect(host.states() == 12, "soldiers host does not have 12 states");
    t.expect(static_cast<bool>(check_commutativity(host)), "soldiers(150) host is not commutative");
    double big = seconds_since(t1);
    t.expect(big < 60.0, "12-state check took " + std::to_string(big) + " s (limit 60 s)");
    char buf[160];
    std::snprintf(buf, sizeof buf, "212 commutative+monotonic, 150 witnesses found, soldiers(150) commutative (%.3f s, %.3f s)",
                  small, big);
    return t.done(buf);
}

Outcome marching_soldiers() {
    Tally t;
    auto guest = RuleTable::wolfram(150);
    auto c = compile_marching_soldiers(guest);
    t.expect(c.host.states() == 12, "host has " + std::to_string(c.host.states()) + " states");
    std::mt19937_64 rng(150);
    auto rep = verify_invariant_simulation(guest, c, random_ring(rng, 64, 2), Box::line(0, 64), fair_schedules(20, 1), 64);
    t.expect(rep.agreed, rep.summary());
    return t.done("12 states; " + rep.summary());
}

Outcome mountain_valley() {
    Tally t;
    auto guest = parity_vn(2);
    auto c = compile_mountain_valley(guest);
    t.expect(c.host.states() == 8, "host has " + std::to_string(c.host.states()) + " states, want 4q = 8");
    t.expect(c.contract.k == 1 && c.contract.l == 1, "contract is not k=l=1");
    std::mt19937_64 rng(45);
    auto rep = verify_invariant_simulation(guest, c, random_torus(rng, 16, 16, 2), Box{0, 0, 16, 16},
                                           fair_schedules(10, 7), 10);
    t.expect(rep.agreed, rep.summary());
    return t.done("8 states, k=l=1; " + rep.summary());
}

Outcome shifting_mv() {
    Tally t;
    auto guest = RuleTable::wolfram(110);
    auto c = compile_shifting_mv(guest);
    t.expect(c.host.states() == 6, "host has " + std::to_string(c.host.states()) + " states");
    t.expect(c.contract.k == 2 && c.contract.l == 3, "contract ratio is not (2,3)");
    t.expect(c.contract.translation == Cell{-2, 0}, "drift per application is not two cells");
    std::mt19937_64 rng(46);
    auto rep = verify_invariant_simulation(guest, c, random_ring(rng, 64, 2), Box::line(0, 64), fair_schedules(20, 11), 40);
    t.expect(rep.agreed, rep.summary());
    return t.done("6 states, (k,l)=(2,3), drift 2 per application; " + rep.summary());
}

Outcome one_way_packing() {
    Tally t;
    auto guest = RuleTable::wolfram(150);
    auto c = compile_one_way_packing(guest);
    t.expect(c.host.states() == 4, "host has " + std::to_string(c.host.states()) + " states");
    t.expect(c.contract.translation.x > 0, "no right drift");
    std::mt19937_64 rng(47);
    auto rep = verify_invariant_simulation(guest, c, random_ring(rng, 64, 2), Box::line(0, 64),
                                           {UpdateSchedule::synchronous()}, 20);
    t.expect(rep.agreed, rep.summary());
    return t.done("4 states, right drift; " + rep.summary());
}

Outcome one_way_machinery() {
    Tally t;
    std::mt19937_64 rng(63);
    std::size_t worst = 0, words = 0;
    for (int k = 0; k < 10; ++k) {
        const int q = 2 + static_cast<int>(rng() % 2);
        std::vector<State> tab(static_cast<std::size_t>(q * q));
        for (auto& s : tab) s = static_cast<State>(rng() % static_cast<unsigned>(q));
        auto r = one_way_rule(q, tab);
        for (int a = 0; a < q; ++a)
            for (int s = 0; s < q; ++s) {
                auto pf = pseudo_fixed_point_trace(r, static_cast<State>(a), static_cast<State>(s));
                worst = std::max(worst, pf.iterations);
                t.expect(pf.iterations <= static_cast<std::size_t>(q + 1), "pf exceeded q+1 iterations");
            }
        auto word = [&](std::size_t max_len) {
            std::vector<State> w(rng() % (max_len + 1));
            for (auto& s : w) s = static_cast<State>(rng() % static_cast<unsigned>(q));
            return w;
        };
        std::vector<std::vector<State>> ws;
        for (int i = 0; i < 10; ++i) ws.push_back(word(12));
        auto pl = word(2);
        pl.push_back(0);
        auto rep = verify_fsm_equivalence(r, pl, {static_cast<State>(q - 1)}, ws);
        words += rep.words;
        t.expect(rep.ok(), "rule " + std::to_string(k) + ": " + (rep.failures.empty() ? "" : rep.failures.front()));
        t.expect(rep.max_pf_iterations <= static_cast<std::size_t>(q + 1), "pf exceeded q+1 in the band");
        worst = std::max(worst, rep.max_pf_iterations);
    }
    return t.done(std::to_string(words) + " words match the semiautomaton; max pf iterations " + std::to_string(worst));
}

Outcome fsm_embedding() {
    Tally t;
    std::mt19937_64 rng(64);
    std::size_t runs = 0;
    for (int n = 0; n < 50; ++n) {
        Dfa dfa;
        dfa.states = 1 + static_cast<int>(rng() % 4);
        dfa.letters = 1 + static_cast<int>(rng() % 3);
        dfa.delta.resize(static_cast<std::size_t>(dfa.states * dfa.letters));
        for (auto& d : dfa.delta) d = static_cast<int>(rng() % static_cast<unsigned>(dfa.states));
        dfa.start = static_cast<int>(rng() % static_cast<unsigned>(dfa.states));
        dfa.accepting.assign(static_cast<std::size_t>(dfa.states), false);
        auto e = embed_fsm(dfa);
        for (int k = 0; k < 4; ++k) {
            std::vector<int> w(1 + rng() % 10);
            for (auto& a : w) a = static_cast<int>(rng() % static_cast<unsigned>(dfa.letters));
            const auto len = static_cast<std::int64_t>(w.size());
            const Box box = Box::line(0, len + 2);
            Window win(e.rule, e.encode(w, dfa.start), box);
            auto cur = UpdateSchedule::fair_random(rng(), 0, 0.1 * double(k)).start(box);
            std::vector<std::size_t> D;
            bool exclusive = true;
            std::size_t steps = 0;
            for (; steps < 100000; ++steps) {
                auto act = win.active_cells();
                if (act.size() > 1) exclusive = false;
                if (act.empty()) break;
                cur.next(D);
                win.apply(D);
            }
            ++runs;
            const std::string id = "dfa " + std::to_string(n) + " word " + std::to_string(k);
            t.expect(exclusive, id + ": two cells active at once");
            t.expect(steps < 100000, id + ": no limit reached");
            auto trace = dfa.trace(w);
            for (std::int64_t i = 1; i <= len; ++i) {
                State s = win.at(Cell{i, 0});
                bool good = e.is_tuple(s) && e.tuple_state(s) == trace[static_cast<std::size_t>(i)] &&
                            e.tuple_letter(s) == w[static_cast<std::size_t>(i - 1)];
                t.expect(good, id + ": cell " + std::to_string(i) + " differs from the DFA");
            }
        }
    }
    return t.done(std::to_string(runs) + " runs reach the DFA trace with at most one active cell");
}

std::vector<UpdateSchedule> engine_schedules(std::size_t randoms) {
    std::vector<UpdateSchedule> v;
    for (auto o : {SweepOrder::LeftToRight, SweepOrder::RightToLeft, SweepOrder::BottomToTop, SweepOrder::TopToBottom})
        v.push_back(UpdateSchedule::sweep(o));
    for (std::size_t i = 0; i < randoms; ++i) v.push_back(UpdateSchedule::fair_random(500 + i, 0, 0.01 * double(i % 7)));
    return v;
}

Outcome rule_x_gates() {
    Tally t;
    struct Case {
        const char* name;
        TrackProgram program;
        std::vector<bool> in, out;
    };
    const std::vector<Case> cases{
        {"WIRE", {1, {}}, {true}, {true}},
        {"FORK", {1, {{TrackOp::Fork, 0}}}, {true}, {true, true}},
        {"DUAL", {2, {{TrackOp::Dual, 0}}}, {true, true}, {true}},
        {"DUAL", {2, {{TrackOp::Dual, 0}}}, {true, false}, {false}},
        {"MERGE", {2, {{TrackOp::Merge, 0}}}, {true, false}, {true}},
        {"MERGE", {2, {{TrackOp::Merge, 0}}}, {false, true}, {true}},
        {"CROSS", {2, {{TrackOp::Cross, 0}}}, {true, false}, {false, true}},
        {"CROSS", {2, {{TrackOp::Cross, 0}}}, {false, true}, {true, false}},
    };
    const auto scheds = engine_schedules(100);
    for (const auto& c : cases) {
        auto p = place_and_route(track_netlist(c.name, c.program));
        for (const auto& s : scheds) {
            auto run = run_tracks_engine(p, c.in, s);
            const std::string id = std::string(c.name) + " under " + s.describe();
            t.expect(run.quiescent, id + ": no quiescence");
            t.expect(run.violations.empty(), id + ": " + (run.violations.empty() ? "" : run.violations.front()));
            t.expect(run.fired == c.out, id + ": wrong outputs");
        }
    }
    // monitors are live: a MERGE fed on both arms is reported
    {
        auto p = place_and_route(track_netlist("merge", TrackProgram{2, {{TrackOp::Merge, 0}}}));
        t.expect(!run_tracks(p, {true, true}, ActivePolicy::sweep(SweepOrder::LeftToRight)).violations.empty(),
                 "double delivery into MERGE went unnoticed");
    }

    auto nand = build_nand_netlist();
    auto census = nand.census();
    t.expect(census[GateKind::Merge] == 2 && census[GateKind::Fork] == 4 && census[GateKind::Dual] == 4 &&
                 census[GateKind::Cross] == 12,
             "NAND census differs from {2 MERGE, 4 FORK, 4 DUAL, 12 CROSS}");
    auto placed = place_and_route(nand);
    auto pol = standard_policies(100);
    std::size_t rows = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            // evaluate_circuit throws on disagreement or on a monitor violation
            auto e = evaluate_circuit(placed, {a == 1, b == 1}, pol);
            bool good = e.outputs == std::vector<bool>{!(a && b)} && e.runs == pol.size();
            rows += good;
            t.expect(good, "NAND(" + std::to_string(a) + "," + std::to_string(b) + ") wrong");
        }
    auto fan = place_and_route(build_fanout_netlist());
    t.expect(evaluate_circuit(fan, {true}, pol).outputs == std::vector<bool>{true, true}, "fan-out of T");
    t.expect(evaluate_circuit(fan, {false}, pol).outputs == std::vector<bool>{false, false}, "fan-out of F");
    return t.done("gates hold under " + std::to_string(scheds.size()) + " schedules; NAND " + std::to_string(rows) +
                  "/4 unanimous across " + std::to_string(pol.size()) +
                  " schedules; census 2 MERGE 4 FORK 4 DUAL 12 CROSS; fan-out ok; no simultaneous arrivals");
}

Outcome rule_step_blocks() {
    Tally t;
    auto pol = standard_policies(4);
    std::string sizes;
    for (unsigned code : {110u, 150u}) {
        auto guest = RuleTable::wolfram(code);
        auto p = place_and_route(build_rule_step_circuit(guest));
        std::size_t good = 0;
        for (unsigned i = 0; i < 8; ++i) {
            auto e = evaluate_circuit(p, {(i & 4) != 0, (i & 2) != 0, (i & 1) != 0}, pol);
            bool ok = e.outputs == std::vector<bool>{guest.at(i) == 1};
            good += ok;
            t.expect(ok, "rule " + std::to_string(code) + " neighborhood " + std::to_string(i));
        }
        sizes += (sizes.empty() ? "" : ", ") + std::string("rule ") + std::to_string(code) + " " +
                 std::to_string(good) + "/8 (" + std::to_string(p.gates.size()) + " gates)";
    }
    return t.done(sizes + " across " + std::to_string(pol.size()) + " schedules");
}

Outcome format_round_trips() {
    Tally t;
    std::size_t n = 0;
    for (const auto& e : std::filesystem::directory_iterator(ACAFORGE_GOLDEN_DIR)) {
        const auto ext = e.path().extension();
        if (ext != ".rle" && ext != ".table") continue;
        auto text = slurp(e.path());
        std::string back;
        try {
            back = ext == ".rle" ? write_pattern(read_pattern(text)) : export_rule_table(import_rule_table(text));
        } catch (const std::exception& ex) {
            back = ex.what();
        }
        t.expect(back == text, e.path().filename().string() + " is not byte-exact");
        ++n;
    }
    t.expect(n >= 6, "golden corpus has only " + std::to_string(n) + " files");
    return t.done(std::to_string(n) + " golden files byte-exact");
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const Criterion all[] = {
        {1, "fan-schedule-invariance", 10, fan_invariance},
        {2, "rule212-duality", 10, rule212_duality},
        {3, "algebra-ground-truth", 61, algebra_ground_truth},
        {4, "marching-soldiers", 60, marching_soldiers},
        {5, "mountain-valley-4q", 120, mountain_valley},
        {6, "shifting-mountain-valley", 120, shifting_mv},
        {7, "one-way-packing", 10, one_way_packing},
        {8, "one-way-machinery", 60, one_way_machinery},
        {9, "fsm-embedding", 60, fsm_embedding},
        {10, "rule-x-gates", 300, rule_x_gates},
        {11, "rule-step-blocks", 300, rule_step_blocks},
        {12, "format-round-trips", 5, format_round_trips},
    };
    int failures = 0;
    for (const auto& c : all) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double s = seconds_since(t0);
        bool in_time = s < c.limit_s;
        bool pass = o.ok && in_time;
        if (!in_time && o.ok) o.detail = "too slow";
        failures += !pass;
        std::printf("%s %2d %-26s %8.2f s (limit %3.0f s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, s, c.limit_s,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
