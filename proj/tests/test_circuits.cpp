#include <gtest/gtest.h>

#include <array>

#include "acaforge/circuits.hpp"
#include "acaforge/engine.hpp"
#include "acaforge/io.hpp"

using namespace acaforge;

namespace {

CircuitNetlist single(TrackOp op, std::size_t tracks) {
    return track_netlist(std::string("gate"), TrackProgram{tracks, {{op, 0}}});
}

std::vector<UpdateSchedule> engine_schedules(std::size_t randoms) {
    std::vector<UpdateSchedule> v;
    for (auto o : {SweepOrder::LeftToRight, SweepOrder::RightToLeft, SweepOrder::BottomToTop, SweepOrder::TopToBottom})
        v.push_back(UpdateSchedule::sweep(o));
    for (std::size_t i = 0; i < randoms; ++i) v.push_back(UpdateSchedule::fair_random(100 + i, 0, 0.01 * (i % 7)));
    return v;
}

// Every schedule must reach quiescence with the expected outputs and no
// monitor complaint.
void expect_contract(const PlacedCircuit& p, const std::vector<bool>& in, const std::vector<bool>& out,
                     std::size_t randoms) {
    for (const auto& s : engine_schedules(randoms)) {
        auto run = run_tracks_engine(p, in, s);
        ASSERT_TRUE(run.quiescent) << s.describe();
        EXPECT_TRUE(run.violations.empty()) << run.violations.front();
        EXPECT_EQ(run.fired, out) << s.describe();
    }
    for (const auto& s : standard_policies(randoms)) {
        auto run = run_tracks(p, in, s);
        ASSERT_TRUE(run.quiescent) << s.describe();
        EXPECT_TRUE(run.violations.empty()) << run.violations.front();
        EXPECT_EQ(run.fired, out) << s.describe();
    }
}

}  // namespace

TEST(RuleX, ShapeAndInertBackground) {
    auto r = build_rule_x();
    EXPECT_EQ(r.states(), 3);
    EXPECT_EQ(r.dimension(), 2);
    EXPECT_EQ(r.neighborhood(), nbhd::von_neumann());
    std::array<State, 5> zero{0, 0, 0, 0, 0};
    EXPECT_EQ(r(zero), 0);
}

TEST(RuleX, AddedTransitions) {
    auto r = build_rule_x();
    // tuple order E, N, C, W, S
    EXPECT_EQ(r(std::array<State, 5>{2, 1, 0, 1, 1}), 1);  // CROSS, left signal
    EXPECT_EQ(r(std::array<State, 5>{2, 1, 0, 2, 2}), 2);  // CROSS, bottom signal
    EXPECT_EQ(r(std::array<State, 5>{2, 1, 0, 2, 1}), 0);  // CROSS at rest
    EXPECT_EQ(r(std::array<State, 5>{1, 1, 1, 1, 0}), 2);  // MERGE, top signal
    EXPECT_EQ(r(std::array<State, 5>{1, 2, 1, 2, 0}), 2);  // MERGE, left signal
    EXPECT_EQ(r(std::array<State, 5>{1, 2, 1, 1, 0}), 1);  // MERGE at rest
}

TEST(RuleX, WireCarriesSignalRight) {
    auto r = build_rule_x();
    // source stub toggled: 2 1 1 1 1
    auto c0 = Configuration::zeros(2);
    State row[] = {2, 1, 1, 1, 1};
    for (std::int64_t x = 0; x < 5; ++x) c0.set({x, 0}, row[x]);
    Box box{-1, -1, 7, 3};
    Window w(r, c0, box);
    for (int step = 1; step <= 4; ++step) {
        auto act = w.active_cells();
        ASSERT_EQ(act.size(), 1u);
        EXPECT_EQ(box.cell(act[0]), (Cell{step, 0}));
        w.apply(act);
    }
    EXPECT_TRUE(w.active_cells().empty());
}

TEST(RuleX, AllZeroNeverActive) {
    Window w(build_rule_x(), Configuration::zeros(2), Box{0, 0, 8, 8});
    EXPECT_TRUE(w.active_cells().empty());
}

TEST(GatePattern, PanelsAndPorts) {
    for (auto k : {GateKind::Fork, GateKind::Dual, GateKind::Merge, GateKind::Cross, GateKind::Bend}) {
        auto g = gate_pattern(k);
        EXPECT_EQ(g.width, 5);
        for (const auto& p : g.ports) {
            bool edge = p.cell.x == 0 || p.cell.y == 0 || p.cell.x == 4 || p.cell.y == 4;
            EXPECT_TRUE(edge) << to_string(k) << " " << p.name;
            EXPECT_NE(g.at(p.cell), 0) << to_string(k) << " " << p.name;
        }
    }
    auto merge = gate_pattern(GateKind::Merge);
    EXPECT_EQ(merge.at({2, 1}), 1);
    EXPECT_EQ(merge.at({2, 2}), 2);
    EXPECT_EQ(merge.at({2, 0}), 0);
    auto fork = gate_pattern(GateKind::Fork);
    EXPECT_EQ(fork.ports.size(), 3u);
    auto wire = gate_pattern(GateKind::WireH, 7);
    EXPECT_EQ(wire.footprint.size(), 7u);
    for (const auto& [c, s] : wire.footprint) EXPECT_EQ(s, 1);
    EXPECT_THROW(gate_kind_from("latch"), CircuitError);
    EXPECT_EQ(gate_kind_from("cross"), GateKind::Cross);
}

TEST(GatePattern, DrawnSignalsAreTheOnlyActiveCells) {
    auto r = build_rule_x();
    for (auto k : {GateKind::Fork, GateKind::Dual, GateKind::Merge, GateKind::Cross, GateKind::Bend}) {
        auto g = gate_pattern(k);
        auto c = Configuration::zeros(2);
        for (const auto& [cell, s] : g.footprint) c.set(cell, s);
        Window w(r, c, Box{0, 0, 5, 5});
        std::vector<Cell> act;
        for (auto i : w.active_cells()) act.push_back(w.box().cell(i));
        std::sort(act.begin(), act.end());
        auto want = g.signals;
        std::sort(want.begin(), want.end());
        // Panel boundaries cut wires, so only interior cells are compared.
        std::erase_if(act, [](Cell x) { return x.x == 0 || x.y == 0 || x.x == 4 || x.y == 4; });
        EXPECT_EQ(act, want) << to_string(k);
    }
}

TEST(Layout, SingleWire) {
    auto p = place_and_route(track_netlist("wire", TrackProgram{1, {}}));
    EXPECT_TRUE(audit_layout(p).empty());
    ASSERT_EQ(p.input_cells.size(), 1u);
    ASSERT_EQ(p.output_cells.size(), 1u);
    EXPECT_EQ(p.input_cells[0].y, p.output_cells[0].y);
    for (std::int64_t x = p.input_cells[0].x; x <= p.output_cells[0].x; ++x)
        EXPECT_EQ(p.at({x, p.input_cells[0].y}), 1);
    expect_contract(p, {true}, {true}, 20);
    expect_contract(p, {false}, {false}, 2);
}

TEST(Layout, PlacedGatesMatchPanels) {
    auto p = place_and_route(build_nand_netlist());
    ASSERT_EQ(p.gates.size(), 22u);
    for (const auto& g : p.gates) {
        auto q = gate_pattern(g.kind).quiescent();
        bool same = true, flipped = true;
        for (std::int64_t dy = 0; dy < 5; ++dy)
            for (std::int64_t dx = 0; dx < 5; ++dx) {
                State want = q.count({dx, dy}) ? q.at({dx, dy}) : 0;
                State got = p.at(g.panel_origin + Cell{dx, dy});
                same = same && got == want;
                flipped = flipped && got == (want == 0 ? 0 : 3 - want);
            }
        bool fixed = g.kind == GateKind::Merge || g.kind == GateKind::Cross;
        EXPECT_TRUE(same || (!fixed && flipped)) << to_string(g.kind) << " #" << g.id;
    }
}

TEST(Gates, ForkCopies) {
    auto p = place_and_route(single(TrackOp::Fork, 1));
    expect_contract(p, {true}, {true, true}, 100);
}

TEST(Gates, DualNeedsBoth) {
    auto p = place_and_route(single(TrackOp::Dual, 2));
    expect_contract(p, {true, true}, {true}, 100);
    expect_contract(p, {true, false}, {false}, 10);
    expect_contract(p, {false, true}, {false}, 10);
}

TEST(Gates, MergeEither) {
    auto p = place_and_route(single(TrackOp::Merge, 2));
    expect_contract(p, {true, false}, {true}, 100);
    expect_contract(p, {false, true}, {true}, 100);
    expect_contract(p, {false, false}, {false}, 2);
}

TEST(Gates, CrossSwaps) {
    auto p = place_and_route(single(TrackOp::Cross, 2));
    expect_contract(p, {true, false}, {false, true}, 100);
    expect_contract(p, {false, true}, {true, false}, 100);
}

TEST(Gates, MergeMonitorFlagsDoubleDelivery) {
    auto p = place_and_route(single(TrackOp::Merge, 2));
    auto run = run_tracks(p, {true, true}, ActivePolicy::sweep(SweepOrder::LeftToRight));
    EXPECT_FALSE(run.violations.empty());
}

TEST(Netlist, NandCensus) {
    auto n = build_nand_netlist();
    auto c = n.census();
    EXPECT_EQ(c[GateKind::Merge], 2u);
    EXPECT_EQ(c[GateKind::Fork], 4u);
    EXPECT_EQ(c[GateKind::Dual], 4u);
    EXPECT_EQ(c[GateKind::Cross], 12u);
    EXPECT_NO_THROW(n.validate());
}

TEST(Netlist, CycleRejected) {
    auto n = build_nand_netlist();
    // feed the last gate's output back into the first gate
    for (auto& net : n.nets)
        if (net.to == NetEnd{0, 0}) net.from = {n.gates.size() - 1, 0};
    EXPECT_THROW(
        {
            try {
                n.validate();
            } catch (const CircuitError& e) {
                EXPECT_NE(std::string(e.what()).find("cycle"), std::string::npos) << e.what();
                throw;
            }
        },
        CircuitError);
    EXPECT_THROW(place_and_route(n), CircuitError);
}

TEST(Netlist, TextRoundTrip) {
    auto n = build_nand_netlist();
    auto text = write_netlist(n);
    auto m = read_netlist(text);
    EXPECT_EQ(write_netlist(m), text);
    EXPECT_EQ(m.nets, n.nets);
    EXPECT_THROW(read_netlist("inputs a\nfrob 0\n"), CircuitError);
}

TEST(Circuit, NandTruthTable) {
    auto p = place_and_route(build_nand_netlist());
    auto pol = standard_policies(100);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            auto e = evaluate_circuit(p, {a == 1, b == 1}, pol);
            EXPECT_EQ(e.outputs, std::vector<bool>{!(a && b)}) << a << b;
            EXPECT_EQ(e.runs, 104u);
        }
}

TEST(Circuit, FanoutDuplicatesBothRails) {
    auto p = place_and_route(build_fanout_netlist());
    auto pol = standard_policies(100);
    EXPECT_EQ(evaluate_circuit(p, {true}, pol).outputs, (std::vector<bool>{true, true}));
    EXPECT_EQ(evaluate_circuit(p, {false}, pol).outputs, (std::vector<bool>{false, false}));
}

TEST(Circuit, XorFromNands) {
    auto p = place_and_route(build_xor_netlist());
    auto pol = standard_policies(12);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            EXPECT_EQ(evaluate_circuit(p, {a == 1, b == 1}, pol).outputs, std::vector<bool>{a != b});
}

TEST(Circuit, EvaluateRejectsWrongArity) {
    auto p = place_and_route(build_nand_netlist());
    EXPECT_THROW(evaluate_circuit(p, {true}, standard_policies(1)), CircuitError);
}

TEST(Circuit, TinyBudgetTimesOut) {
    auto p = place_and_route(build_nand_netlist());
    auto run = run_tracks(p, {true, false, true, false}, ActivePolicy::sweep(SweepOrder::LeftToRight), 10);
    EXPECT_FALSE(run.quiescent);
}

TEST(Formula, MinimalFormulasComputeTheirTable) {
    for (unsigned t = 1; t < 255; ++t) {
        auto f = minimal_formula(static_cast<std::uint8_t>(t));
        EXPECT_EQ(f.truth_table(), t);
    }
    EXPECT_EQ(minimal_formula(0xF0 & 0xCC ^ 0xFF).nands(), 1u);
    EXPECT_THROW(minimal_formula(0), CircuitError);
}

TEST(RuleStep, Rule110And150AllNeighborhoods) {
    for (unsigned code : {110u, 150u}) {
        auto guest = RuleTable::wolfram(code);
        auto p = place_and_route(build_rule_step_circuit(guest));
        auto pol = standard_policies(4);
        for (unsigned i = 0; i < 8; ++i) {
            auto e = evaluate_circuit(p, {(i & 4) != 0, (i & 2) != 0, (i & 1) != 0}, pol);
            EXPECT_EQ(e.outputs, std::vector<bool>{guest.at(i) == 1}) << code << " " << i;
        }
    }
}

TEST(RuleStep, ConstantRules) {
    for (unsigned code : {0u, 255u}) {
        auto n = build_rule_step_circuit(RuleTable::wolfram(code));
        EXPECT_LE(n.gates.size(), 6u);
        auto p = place_and_route(n);
        for (unsigned i = 0; i < 8; ++i) {
            auto e = evaluate_circuit(p, {(i & 4) != 0, (i & 2) != 0, (i & 1) != 0}, standard_policies(2));
            EXPECT_EQ(e.outputs, std::vector<bool>{code == 255}) << code << " " << i;
        }
    }
}

TEST(Layout, ExportsAsRle) {
    auto p = place_and_route(build_nand_netlist());
    auto pat = pattern_from(p.configuration(), p.box);
    pat.rule = "rule-x";
    auto back = read_pattern(write_pattern(pat));
    EXPECT_EQ(back, pat);
}

TEST(Layout, AuditCatchesCrowding) {
    auto p = place_and_route(build_nand_netlist());
    EXPECT_TRUE(audit_layout(p).empty());
    // a lone cell two rows under the first input wire
    Cell c = p.input_cells[0] + Cell{3, -2};
    p.grid[p.box.index(c)] = 1;
    p.wires[p.box.index(c)] = static_cast<std::uint32_t>(p.wire_names.size());
    auto problems = audit_layout(p);
    ASSERT_FALSE(problems.empty());
    EXPECT_NE(problems.front().find("within 2 cells"), std::string::npos) << problems.front();
}

TEST(RuleStep, CircuitSizes) {
    for (unsigned code : {110u, 150u, 30u}) {
        auto n = build_rule_step_circuit(RuleTable::wolfram(code));
        EXPECT_NO_THROW(n.validate());
        EXPECT_EQ(n.inputs.size(), 3u);
        EXPECT_EQ(n.outputs.size(), 1u);
    }
    EXPECT_THROW(build_rule_step_circuit(build_rule_x()), CircuitError);
}
