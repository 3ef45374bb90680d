#include <gtest/gtest.h>

#include "acaforge/algebra.hpp"
#include "acaforge/compilers.hpp"

using namespace acaforge;

namespace {

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

std::vector<UpdateSchedule> fair(std::size_t n, std::uint64_t seed) {
    std::vector<UpdateSchedule> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(UpdateSchedule::fair_random(seed + i, 0, 0.02 * double(i % 5)));
    return v;
}

RuleTable parity2d(int q = 2) {
    return RuleTable::from_function(2, q, nbhd::von_neumann(), [q](std::span<const State> t) {
        int s = 0;
        for (State v : t) s += v;
        return static_cast<State>(s % q);
    });
}

}  // namespace

TEST(Soldiers, StateCountAndContract) {
    auto c = compile_marching_soldiers(RuleTable::wolfram(150));
    EXPECT_EQ(c.host.states(), 12);
    EXPECT_EQ(c.contract.k, 1u);
    EXPECT_EQ(c.contract.l, 1u);
    auto one = compile_marching_soldiers(RuleTable::identity(1, 1, nbhd::first_neighbors()));
    EXPECT_EQ(one.host.states(), 3);
    EXPECT_THROW(compile_marching_soldiers(RuleTable::identity(1, 2, nbhd::one_way())), IneligibleRule);
}

TEST(Soldiers, ActiveCenterComputesXor) {
    auto c = compile_marching_soldiers(RuleTable::wolfram(150));
    auto st = [](int prev, int cur, int t) { return static_cast<State>(((prev * 2) + cur) * 3 + t - 1); };
    State tup[3] = {st(0, 1, 2), st(1, 1, 2), st(0, 0, 2)};
    EXPECT_EQ(c.host(tup), st(1, 0, 3));
    // Neighbor ahead contributes its previous state.
    State ahead[3] = {st(0, 1, 3), st(1, 1, 2), st(0, 0, 2)};
    EXPECT_EQ(c.host(ahead), st(1, 1, 3));
    // Neighbor behind blocks.
    State behind[3] = {st(1, 0, 1), st(1, 1, 2), st(0, 0, 2)};
    EXPECT_EQ(c.host(behind), behind[1]);
}

TEST(Soldiers, AgreesWithOracle) {
    std::mt19937_64 rng(1);
    auto guest = RuleTable::wolfram(150);
    auto c = compile_marching_soldiers(guest);
    auto rep = verify_invariant_simulation(guest, c, random_ring(rng, 32, 2), Box::line(0, 32), fair(10, 3), 32);
    EXPECT_TRUE(rep.agreed) << rep.summary();
    auto sync = verify_invariant_simulation(guest, c, random_ring(rng, 32, 2), Box::line(0, 32),
                                            {UpdateSchedule::synchronous()}, 20);
    EXPECT_TRUE(sync.agreed) << sync.summary();
}

TEST(Soldiers, SeveralGuests) {
    std::mt19937_64 rng(2);
    for (unsigned code : {110u, 30u, 90u}) {
        auto guest = RuleTable::wolfram(code);
        auto rep = verify_invariant_simulation(guest, compile_marching_soldiers(guest), random_ring(rng, 32, 2),
                                               Box::line(0, 32), fair(10, code), 16);
        EXPECT_TRUE(rep.agreed) << code << " " << rep.summary();
    }
}

TEST(Soldiers, CorruptedHostIsCaught) {
    std::mt19937_64 rng(4);
    auto guest = RuleTable::wolfram(150);
    auto c = compile_marching_soldiers(guest);
    auto t = c.host.table();
    // Flip the guest output of the all-zero, equal-timer neighborhood.
    auto st = [](int prev, int cur, int tm) { return static_cast<State>(((prev * 2) + cur) * 3 + tm - 1); };
    State z[3] = {st(0, 0, 1), st(0, 0, 1), st(0, 0, 1)};
    t[c.host.index_of(z)] = st(0, 1, 2);
    c.host = RuleTable(1, 12, nbhd::first_neighbors(), t);
    auto rep = verify_invariant_simulation(guest, c, random_ring(rng, 32, 2), Box::line(0, 32), fair(2, 1), 8);
    EXPECT_FALSE(rep.agreed);
    ASSERT_TRUE(rep.first_mismatch.has_value());
    EXPECT_EQ(rep.first_mismatch->guest_step, 1u);
}

TEST(MountainValley, StateCountAndTransitions) {
    auto c = compile_mountain_valley(parity2d());
    EXPECT_EQ(c.host.states(), 8);
    EXPECT_EQ(compile_mountain_valley(parity2d(3)).host.states(), 12);
    // E-node whose O-neighbors all equal its own state: f sees zero differences.
    auto g = parity2d();
    for (int s = 0; s < 2; ++s) {
        State t[5] = {static_cast<State>(s * 4 + 3), static_cast<State>(s * 4 + 3), static_cast<State>(s * 4 + 2),
                      static_cast<State>(s * 4 + 3), static_cast<State>(s * 4 + 3)};
        State z[5] = {0, 0, static_cast<State>(s), 0, 0};
        EXPECT_EQ(c.host(t), g(z) * 4 + 0);
    }
    EXPECT_THROW(compile_mountain_valley(RuleTable::wolfram(110)), IneligibleRule);
}

TEST(MountainValley, AgreesWithOracle) {
    std::mt19937_64 rng(8);
    auto guest = parity2d();
    auto c = compile_mountain_valley(guest);
    auto rep = verify_invariant_simulation(guest, c, random_torus(rng, 16, 16, 2), Box{0, 0, 16, 16}, fair(3, 9), 10);
    EXPECT_TRUE(rep.agreed) << rep.summary();
}

TEST(MountainValley, OFillIsIrrelevant) {
    std::mt19937_64 rng(12);
    auto guest = parity2d(3);
    auto c = compile_mountain_valley(guest);
    auto g0 = random_torus(rng, 6, 6, 3);
    Box hb = host_box(c.contract, Box{0, 0, 6, 6});
    Domain d{hb, Boundary::periodic()};
    auto a = extract_invariant_step(c.host, encode_guest_config(c.contract, g0, 0), d);
    auto b = extract_invariant_step(c.host, encode_guest_config(c.contract, g0, 2), d);
    for (std::int64_t y = 0; y < 6; ++y)
        for (std::int64_t x = 0; x < 6; ++x) {
            State ea = a.next.at({2 * x, 2 * y}), eb = b.next.at({2 * x, 2 * y});
            EXPECT_EQ(ea, eb);
            EXPECT_EQ(ea % 4, 0u);
        }
}

TEST(MountainValley, InvariantStepAdvancesTimers) {
    std::mt19937_64 rng(13);
    auto guest = parity2d();
    auto c = compile_mountain_valley(guest);
    auto g0 = random_torus(rng, 8, 8, 2);
    Box hb = host_box(c.contract, Box{0, 0, 8, 8});
    Domain d{hb, Boundary::periodic()};
    auto h0 = encode_guest_config(c.contract, g0);
    auto s1 = extract_invariant_step(c.host, h0, d);
    // Odd-odd O-cells never move.
    EXPECT_EQ(s1.stalled.size(), 64u);
    auto s2 = extract_invariant_step(c.host, s1.next, d);
    for (std::int64_t y = 0; y < 8; ++y)
        for (std::int64_t x = 0; x < 8; ++x) {
            EXPECT_EQ(h0.at({2 * x, 2 * y}) % 4, 2u);
            EXPECT_EQ(s1.next.at({2 * x, 2 * y}) % 4, 0u);
        }
    (void)s2;
}

TEST(ShiftingMV, StateCountAndFirstTransition) {
    auto c = compile_shifting_mv(RuleTable::wolfram(110));
    EXPECT_EQ(c.host.states(), 6);
    EXPECT_EQ(c.contract.k, 2u);
    EXPECT_EQ(c.contract.l, 3u);
    EXPECT_EQ(c.contract.translation, (Cell{-2, 0}));
    auto enc = [](int s, int t) { return static_cast<State>(s * 3 + t - 1); };
    State t[3] = {enc(1, 2), enc(0, 1), enc(1, 2)};
    EXPECT_EQ(c.host(t), enc(0, 3));
}

TEST(ShiftingMV, TimerLandscapeShiftsLeft) {
    auto guest = RuleTable::wolfram(110);
    auto c = compile_shifting_mv(guest);
    std::mt19937_64 rng(3);
    auto g0 = random_ring(rng, 16, 2);
    Window w(c.host, encode_guest_config(c.contract, g0), Box::line(0, 32), Boundary::periodic());
    auto timers = [&] {
        std::vector<int> row;
        for (std::size_t x = 0; x < 32; ++x) row.push_back(w.at(x) % 3 + 1);
        return row;
    };
    auto t0 = timers();
    for (std::size_t x = 0; x < 32; ++x) EXPECT_EQ(t0[x], x % 2 == 0 ? 2 : 1);
    // One stage = every active cell fires once.
    for (int round = 1; round <= 4; ++round) {
        for (int stage = 0; stage < 3; ++stage) {
            auto act = w.active_cells();
            ASSERT_EQ(act.size(), 16u);
            w.apply(act);
        }
        auto t = timers();
        for (std::size_t x = 0; x < 32; ++x) EXPECT_EQ(t[x], t0[(x + static_cast<std::size_t>(round)) % 32]);
    }
}

TEST(ShiftingMV, AgreesWithOracle) {
    std::mt19937_64 rng(21);
    for (unsigned code : {110u, 150u, 54u}) {
        auto guest = RuleTable::wolfram(code);
        auto c = compile_shifting_mv(guest);
        auto rep = verify_invariant_simulation(guest, c, random_ring(rng, 32, 2), Box::line(0, 32), fair(10, code), 20);
        EXPECT_TRUE(rep.agreed) << code << " " << rep.summary();
    }
}

TEST(ShiftingMV, ThreeStateGuest) {
    std::mt19937_64 rng(22);
    auto guest = RuleTable::from_function(1, 3, nbhd::first_neighbors(), [](std::span<const State> t) {
        return static_cast<State>((t[0] + 2 * t[1] * t[2] + 1) % 3);
    });
    auto c = compile_shifting_mv(guest);
    EXPECT_EQ(c.host.states(), 9);
    auto rep = verify_invariant_simulation(guest, c, random_ring(rng, 32, 3), Box::line(0, 32), fair(10, 5), 12);
    EXPECT_TRUE(rep.agreed) << rep.summary();
}

TEST(Packing, HostTransitionAndOracle) {
    auto guest = RuleTable::wolfram(150);
    auto c = compile_one_way_packing(guest);
    EXPECT_EQ(c.host.states(), 4);
    State t[2] = {1 * 2 + 0, 0 * 2 + 1};
    EXPECT_EQ(c.host(t), 1 * 2 + 1);
    std::mt19937_64 rng(6);
    auto rep = verify_invariant_simulation(guest, c, random_ring(rng, 32, 2), Box::line(0, 32),
                                           {UpdateSchedule::synchronous()}, 20);
    EXPECT_TRUE(rep.agreed) << rep.summary();
    auto id = compile_one_way_packing(RuleTable::identity(1, 2, nbhd::first_neighbors()));
    for (State a = 0; a < 4; ++a)
        for (State b = 0; b < 4; ++b) {
            State p[2] = {a, b};
            // Identity up to the one-slot drift: (a0 a1),(b0 b1) -> (a1 b0).
            EXPECT_EQ(id.host(p), (a % 2) * 2 + b / 2);
        }
}

TEST(Encoding, RoundTrip) {
    std::mt19937_64 rng(30);
    for (auto con : {Construction::MarchingSoldiers, Construction::ShiftingMV, Construction::OneWayPacking}) {
        auto c = compile(con, RuleTable::wolfram(110));
        for (int k = 0; k < 20; ++k) {
            Configuration g = Configuration::zeros(1);
            for (std::int64_t x = -6; x < 6; ++x) g.set({x, 0}, static_cast<State>(rng() % 2));
            auto h = encode_guest_config(c.contract, g);
            for (std::int64_t x = -10; x < 10; ++x) {
                if (con == Construction::OneWayPacking) {
                    State pair = h.at({x / 2 - (x < 0 && x % 2 ? 1 : 0), 0});
                    State v = (x % 2 == 0) ? pair / 2 : pair % 2;
                    EXPECT_EQ(v, g.at({x, 0}));
                } else {
                    EXPECT_EQ(c.contract.decode(h.at(c.contract.host_cell({x, 0}, 0))), g.at({x, 0}));
                }
            }
        }
    }
}

TEST(Encoding, PeriodicBackgroundEncodesPeriodically) {
    auto c = compile_shifting_mv(RuleTable::wolfram(110));
    Configuration g(Background::periodic_1d({1, 0, 0}));
    auto h = encode_guest_config(c.contract, g);
    for (std::int64_t x = -30; x < 30; ++x) EXPECT_EQ(h.at({x, 0}), h.at({x + 6, 0}));
}

TEST(HostsAreEligible, AdjacencyOnValidEncodings) {
    // Mountain-valley and shifting hosts never show two adjacent active cells
    // on configurations reached from valid encodings.
    std::mt19937_64 rng(40);
    auto guest = RuleTable::wolfram(110);
    auto c = compile_shifting_mv(guest);
    auto g0 = random_ring(rng, 16, 2);
    Window w(c.host, encode_guest_config(c.contract, g0), Box::line(0, 32), Boundary::periodic());
    auto cur = UpdateSchedule::fair_random(3, 0, 0.1).start(w.box());
    std::vector<std::size_t> D;
    for (int t = 0; t < 2000; ++t) {
        for (std::size_t i = 0; i < 32; ++i) ASSERT_FALSE(w.active(i) && w.active((i + 1) % 32));
        cur.next(D);
        w.apply(D);
    }
}

TEST(Fsm, ParityExample) {
    Dfa parity{2, 2, {0, 1, 1, 0}, 0, {false, true}};
    auto e = embed_fsm(parity);
    auto c0 = e.encode({1, 1, 0, 1}, parity.start);
    Domain d{Box::line(0, 6)};
    Window w(e.rule, c0, d.box);
    auto cur = UpdateSchedule::fair_random(1).start(d.box);
    std::vector<std::size_t> D;
    for (int t = 0; t < 200; ++t) {
        cur.next(D);
        w.apply(D);
    }
    State last = w.at(Cell{4, 0});
    ASSERT_TRUE(e.is_tuple(last));
    EXPECT_EQ(e.tuple_state(last), 1);
    EXPECT_EQ(e.tuple_letter(last), 1);
}
