#include "acaforge/compilers.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace acaforge {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t m) {
    std::int64_t q = a / m;
    return (a % m != 0 && (a < 0) != (m < 0)) ? q - 1 : q;
}
std::int64_t floor_mod(std::int64_t a, std::int64_t m) { return a - floor_div(a, m) * m; }

int timer_next(int t) { return t % 3 + 1; }

void require_symmetric(const RuleTable& g) {
    if (g.center_index() < 0) throw IneligibleRule("neighborhood must contain the zero offset");
    for (const Cell& n : g.neighborhood())
        if (std::find(g.neighborhood().begin(), g.neighborhood().end(), -n) == g.neighborhood().end())
            throw IneligibleRule("marching soldiers needs a symmetric neighborhood");
}

}  // namespace

const char* to_string(Construction c) {
    switch (c) {
        case Construction::MarchingSoldiers: return "soldiers";
        case Construction::MountainValley: return "mv4q";
        case Construction::ShiftingMV: return "smv3q";
        case Construction::OneWayPacking: return "pack2";
    }
    return "?";
}

std::optional<Construction> construction_from_string(const std::string& s) {
    for (auto c : {Construction::MarchingSoldiers, Construction::MountainValley, Construction::ShiftingMV,
                   Construction::OneWayPacking})
        if (s == to_string(c)) return c;
    return std::nullopt;
}

State SimulationContract::decode(State h) const {
    auto q = static_cast<State>(guest_states);
    switch (construction) {
        case Construction::MarchingSoldiers: return static_cast<State>((h / 3) % q);
        case Construction::MountainValley: return static_cast<State>(h / 4);
        case Construction::ShiftingMV: return static_cast<State>(h / 3);
        case Construction::OneWayPacking: return static_cast<State>(h / q);
    }
    return 0;
}

Cell SimulationContract::host_cell(Cell g, std::size_t applications) const {
    auto j = static_cast<std::int64_t>(applications);
    return {g.x * unpack[0] + translation.x * j, g.y * unpack[1] + translation.y * j};
}

CompiledHost compile_marching_soldiers(const RuleTable& guest) {
    require_symmetric(guest);
    const int q = guest.states();
    const int hq = 3 * q * q;
    const auto ci = static_cast<std::size_t>(guest.center_index());
    const std::size_t k = guest.arity();
    auto host = RuleTable::from_function(guest.dimension(), hq, guest.neighborhood(), [&](std::span<const State> t) {
        auto prev = [&](State s) { return (s / 3) / q; };
        auto cur = [&](State s) { return (s / 3) % q; };
        auto tim = [&](State s) { return s % 3 + 1; };
        const State c = t[ci];
        const int t0 = tim(c);
        std::vector<State> g(k);
        for (std::size_t a = 0; a < k; ++a) {
            if (a == ci) {
                g[a] = static_cast<State>(cur(c));
                continue;
            }
            int tn = tim(t[a]);
            if (tn == t0)
                g[a] = static_cast<State>(cur(t[a]));
            else if (tn == timer_next(t0))
                g[a] = static_cast<State>(prev(t[a]));
            else
                return c;
        }
        int nc = guest(g);
        return static_cast<State>((cur(c) * q + nc) * 3 + (timer_next(t0) - 1));
    });
    host.set_name("soldiers(" + guest.name() + ")");
    SimulationContract sc;
    sc.construction = Construction::MarchingSoldiers;
    sc.dimension = guest.dimension();
    sc.guest_states = q;
    sc.host_states = hq;
    sc.psi.resize(static_cast<std::size_t>(q));
    for (int s = 0; s < hq; ++s) sc.psi[static_cast<std::size_t>((s / 3) % q)].push_back(static_cast<State>(s));
    return {std::move(host), sc};
}

CompiledHost compile_mountain_valley(const RuleTable& guest) {
    if (guest.dimension() != 2 || guest.neighborhood() != nbhd::von_neumann())
        throw IneligibleRule("mountain-valley needs a 2D von Neumann guest in canonical order");
    const int q = guest.states();
    auto host = RuleTable::from_function(2, 4 * q, nbhd::von_neumann(), [&](std::span<const State> t) {
        const State c = t[2];
        const int s = c / 4, tm = c % 4;
        const std::size_t nb[4] = {0, 1, 3, 4};
        if (tm % 2 == 0) {
            for (auto a : nb)
                if (t[a] % 4 != (tm + 1) % 4) return c;
            State g[5];
            for (std::size_t a = 0; a < 5; ++a)
                g[a] = a == 2 ? static_cast<State>(s) : static_cast<State>(((t[a] / 4) - s + q) % q);
            return static_cast<State>(guest(g) * 4 + (tm + 2) % 4);
        }
        int sum = 0;
        bool any_even = false;
        for (auto a : nb) {
            int tn = t[a] % 4;
            if ((tn + 1) % 4 == tm) return c;
            if (tn % 2 == 0) {
                any_even = true;
                sum += t[a] / 4;
            }
        }
        if (!any_even) return c;
        return static_cast<State>((sum % q) * 4 + (tm + 2) % 4);
    });
    host.set_name("mv4q(" + guest.name() + ")");
    SimulationContract sc;
    sc.construction = Construction::MountainValley;
    sc.dimension = 2;
    sc.guest_states = q;
    sc.host_states = 4 * q;
    sc.unpack = {2, 2};
    sc.psi.resize(static_cast<std::size_t>(q));
    for (int s = 0; s < q; ++s)
        for (int tm = 0; tm < 4; ++tm) sc.psi[static_cast<std::size_t>(s)].push_back(static_cast<State>(s * 4 + tm));
    return {std::move(host), sc};
}

CompiledHost compile_shifting_mv(const RuleTable& guest) {
    if (guest.dimension() != 1 || guest.neighborhood() != nbhd::first_neighbors())
        throw IneligibleRule("shifting mountain-valley needs a 1D first-neighbors guest");
    const int q = guest.states();
    auto host = RuleTable::from_function(1, 3 * q, nbhd::first_neighbors(), [&](std::span<const State> t) {
        int sl = t[0] / 3, s0 = t[1] / 3, sr = t[2] / 3;
        int tl = t[0] % 3 + 1, t0 = t[1] % 3 + 1, tr = t[2] % 3 + 1;
        auto enc = [](int s, int tm) { return static_cast<State>(s * 3 + tm - 1); };
        if (tl == 2 && t0 == 1 && tr == 2) return enc((sl + sr) % q, 3);
        if (tl == 3 && t0 == 2 && tr == 3) {
            State g[3] = {static_cast<State>((sl - s0 + q) % q), static_cast<State>(s0),
                          static_cast<State>((sr - s0 + q) % q)};
            return enc(guest(g), 1);
        }
        if (tl == 1 && t0 == 3 && tr == 1) return enc(sr, 2);
        return t[1];
    });
    host.set_name("smv3q(" + guest.name() + ")");
    SimulationContract sc;
    sc.construction = Construction::ShiftingMV;
    sc.guest_states = q;
    sc.host_states = 3 * q;
    sc.unpack = {2, 1};
    sc.translation = {-2, 0};
    sc.k = 2;
    sc.l = 3;
    sc.psi.resize(static_cast<std::size_t>(q));
    for (int s = 0; s < q; ++s)
        for (int tm = 0; tm < 3; ++tm) sc.psi[static_cast<std::size_t>(s)].push_back(static_cast<State>(s * 3 + tm));
    return {std::move(host), sc};
}

CompiledHost compile_one_way_packing(const RuleTable& guest) {
    if (guest.dimension() != 1 || guest.neighborhood() != nbhd::first_neighbors())
        throw IneligibleRule("one-way packing needs a 1D first-neighbors guest");
    const int q = guest.states();
    auto host = RuleTable::from_function(1, q * q, nbhd::one_way(), [&](std::span<const State> t) {
        State a = static_cast<State>(t[0] / q), b = static_cast<State>(t[0] % q);
        State c = static_cast<State>(t[1] / q), d = static_cast<State>(t[1] % q);
        State l[3] = {a, b, c}, r[3] = {b, c, d};
        return static_cast<State>(guest(l) * q + guest(r));
    });
    host.set_name("pack2(" + guest.name() + ")");
    SimulationContract sc;
    sc.construction = Construction::OneWayPacking;
    sc.guest_states = q;
    sc.host_states = q * q;
    sc.unpack = {2, 1};
    sc.translation = {1, 0};
    sc.synchronous_host = true;
    sc.psi.resize(static_cast<std::size_t>(q));
    for (int s = 0; s < q * q; ++s) sc.psi[static_cast<std::size_t>(s / q)].push_back(static_cast<State>(s));
    return {std::move(host), sc};
}

CompiledHost compile(Construction c, const RuleTable& guest) {
    switch (c) {
        case Construction::MarchingSoldiers: return compile_marching_soldiers(guest);
        case Construction::MountainValley: return compile_mountain_valley(guest);
        case Construction::ShiftingMV: return compile_shifting_mv(guest);
        case Construction::OneWayPacking: return compile_one_way_packing(guest);
    }
    throw Error("unknown construction");
}

Box host_box(const SimulationContract& sc, const Box& g) {
    Box b{g.x0 * sc.unpack[0], g.y0 * sc.unpack[1], g.w * sc.unpack[0], g.h * sc.unpack[1]};
    if (sc.construction == Construction::OneWayPacking) b = {floor_div(g.x0, 2), 0, (g.w + 1) / 2, 1};
    if (sc.dimension == 1) b.y0 = 0, b.h = 1;
    return b;
}

Configuration encode_guest_config(const SimulationContract& sc, const Configuration& guest, State o_fill) {
    if (guest.dimension() != sc.dimension) throw Error("guest configuration has the wrong dimension");
    guest.validate(sc.guest_states);
    const auto q = static_cast<State>(sc.guest_states);
    const auto mx = sc.unpack[0];
    const auto my = sc.dimension == 2 ? sc.unpack[1] : 1;
    auto block_value = [&](const auto& src, Cell h) -> State {
        Cell g{floor_div(h.x, mx), floor_div(h.y, my)};
        Cell local{h.x - g.x * mx, h.y - g.y * my};
        switch (sc.construction) {
            case Construction::MarchingSoldiers: {
                State c = src(g);
                return static_cast<State>((c * q + c) * 3);
            }
            case Construction::MountainValley:
                return local == Cell{0, 0} ? static_cast<State>(src(g) * 4 + 2) : static_cast<State>(o_fill * 4 + 1);
            case Construction::ShiftingMV: return static_cast<State>(src(g) * 3 + (local.x == 0 ? 1 : 0));
            case Construction::OneWayPacking:
                return static_cast<State>(src(Cell{2 * h.x, 0}) * q + src(Cell{2 * h.x + 1, 0}));
        }
        return 0;
    };
    if (sc.construction == Construction::MountainValley && o_fill >= q) throw Error("O-cell fill out of range");
    const Background& gb = guest.background();
    std::array<AxisTiling, 2> axes{};
    for (int a = 0; a < 2; ++a) {
        const auto& t = gb.axis(a);
        auto m = a == 0 ? mx : my;
        axes[static_cast<std::size_t>(a)] = {t.lo * m, t.hi * m + m - 1, t.lo_period * m, t.hi_period * m};
    }
    if (sc.construction == Construction::OneWayPacking) {
        // Host cell h holds guest cells 2h and 2h+1.
        const auto& t = gb.axis(0);
        axes[0] = {floor_div(t.lo, 2), floor_div(t.hi, 2), t.lo_period, t.hi_period};
    }
    auto bg_src = [&](Cell g) { return gb.at(g); };
    auto full_src = [&](Cell g) { return guest.at(g); };
    Configuration host(Background::tiled(sc.dimension, axes, [&](Cell h) { return block_value(bg_src, h); }));
    for (const auto& [g, s] : guest.overrides()) {
        if (sc.construction == Construction::OneWayPacking) {
            Cell h{floor_div(g.x, 2), 0};
            host.set(h, block_value(full_src, h));
            continue;
        }
        for (std::int64_t dy = 0; dy < my; ++dy)
            for (std::int64_t dx = 0; dx < mx; ++dx) {
                Cell h{g.x * mx + dx, g.y * my + dy};
                host.set(h, block_value(full_src, h));
            }
    }
    return host;
}

InvariantStep extract_invariant_step(const RuleTable& host, const Configuration& c, const Domain& domain,
                                     std::size_t budget_blocks) {
    const std::size_t n = domain.box.size();
    std::vector<UpdateHistory> hs;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Window w(host, c, domain.box, domain.boundary);
        auto cur = UpdateSchedule::fair_random(seed * 7919, 0, seed == 1 ? 0.0 : 0.05 * static_cast<double>(seed))
                       .start(domain.box);
        hs.push_back(run_to_depth(w, cur, 1, budget_blocks * n).history);
    }
    for (std::size_t s = 1; s < hs.size(); ++s) {
        if (auto d = hs[0].first_disagreement(hs[s])) {
            std::ostringstream o;
            o << "histories differ at (" << d->first.x << "," << d->first.y << ") depth " << d->second;
            throw InvarianceViolation(o.str());
        }
    }
    InvariantStep out{c, {}};
    for (std::size_t i = 0; i < n; ++i) {
        Cell cell = domain.box.cell(i);
        std::optional<State> v;
        for (const auto& h : hs)
            if (h.depth(i) >= 1) v = h.of(i)[1];
        if (v)
            out.next.set(cell, *v);
        else
            out.stalled.push_back(cell);
    }
    return out;
}

std::string VerifyReport::summary() const {
    std::ostringstream o;
    o << (agreed ? "agreement" : "MISMATCH") << ": " << schedules_run << " schedules, " << frames_checked
      << " guest frames checked, histories " << (invariant_histories ? "invariant" : "NOT invariant");
    if (first_mismatch) {
        const auto& m = *first_mismatch;
        o << "; first mismatch schedule " << m.schedule << " guest step " << m.guest_step << " cell (" << m.cell.x
          << "," << m.cell.y << ") expected " << m.expected << " got " << m.got;
        if (!m.note.empty()) o << " (" << m.note << ")";
    }
    return o.str();
}

VerifyReport verify_invariant_simulation(const RuleTable& guest, const CompiledHost& compiled,
                                         const Configuration& guest_c0, const Box& gbox,
                                         const std::vector<UpdateSchedule>& schedules, std::size_t guest_steps) {
    const auto& sc = compiled.contract;
    if (guest_steps % sc.k != 0) throw Error("guest step count must be a multiple of the contract's k");
    if (sc.construction == Construction::OneWayPacking && gbox.w % 2 != 0)
        throw Error("packing needs an even guest width");
    VerifyReport rep;

    std::vector<std::vector<State>> oracle;
    {
        Window gw(guest, guest_c0, gbox, Boundary::periodic());
        std::vector<std::size_t> all(gbox.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        oracle.push_back(gw.snapshot());
        for (std::size_t t = 0; t < guest_steps; ++t) {
            gw.apply(all);
            oracle.push_back(gw.snapshot());
        }
    }

    const Configuration hc0 = encode_guest_config(sc, guest_c0);
    const Box hb = host_box(sc, gbox);
    auto wrap = [&](Cell h) {
        return Cell{hb.x0 + floor_mod(h.x - hb.x0, hb.w), hb.y0 + floor_mod(h.y - hb.y0, hb.h)};
    };
    auto mismatch = [&](SimulationMismatch m) {
        rep.agreed = false;
        if (!rep.first_mismatch) rep.first_mismatch = std::move(m);
    };

    const std::size_t J = guest_steps / sc.k;
    std::vector<std::size_t> targets;
    if (!sc.synchronous_host) {
        std::set<std::size_t> t;
        for (std::size_t j = 0; j <= J; ++j)
            for (std::size_t i = 0; i < gbox.size(); ++i) t.insert(hb.index(wrap(sc.host_cell(gbox.cell(i), j))));
        targets.assign(t.begin(), t.end());
    }

    std::optional<UpdateHistory> reference;
    for (std::size_t si = 0; si < schedules.size(); ++si) {
        ++rep.schedules_run;
        Window w(compiled.host, hc0, hb, Boundary::periodic());
        auto cursor = schedules[si].start(hb);
        if (sc.synchronous_host) {
            std::vector<std::size_t> D;
            for (std::size_t t = 0; t <= guest_steps; ++t) {
                if (t > 0) {
                    cursor.next(D);
                    w.apply(D);
                    ++rep.host_steps;
                }
                for (std::size_t i = 0; i < gbox.size(); ++i) {
                    auto slot = floor_mod(static_cast<std::int64_t>(i) + static_cast<std::int64_t>(t), gbox.w);
                    State pair = w.at(Cell{hb.x0 + slot / 2, 0});
                    auto q = static_cast<State>(sc.guest_states);
                    State got = slot % 2 == 0 ? static_cast<State>(pair / q) : static_cast<State>(pair % q);
                    if (got != oracle[t][i]) mismatch({si, t, gbox.cell(i), oracle[t][i], got, ""});
                }
                ++rep.frames_checked;
            }
            continue;
        }
        const std::size_t depth = sc.l * J;
        const std::size_t cap = (depth + 4) * hb.size() * 64;
        auto run = run_to_depth(w, cursor, depth, cap, targets);
        rep.host_steps += run.steps;
        if (!run.reached) {
            mismatch({si, 0, {}, 0, 0, "host stalled before reaching history depth " + std::to_string(depth)});
            continue;
        }
        if (!reference)
            reference = run.history;
        else if (!reference->agrees_with(run.history)) {
            rep.invariant_histories = false;
            auto d = reference->first_disagreement(run.history);
            mismatch({si, 0, d->first, 0, 0, "host histories differ between schedules"});
        }
        for (std::size_t j = 0; j <= J; ++j) {
            for (std::size_t i = 0; i < gbox.size(); ++i) {
                Cell h = wrap(sc.host_cell(gbox.cell(i), j));
                State got = sc.decode(run.history.of(h)[sc.l * j]);
                State want = oracle[sc.k * j][i];
                if (got != want) mismatch({si, sc.k * j, gbox.cell(i), want, got, ""});
            }
            ++rep.frames_checked;
        }
    }
    return rep;
}

std::vector<int> Dfa::trace(const std::vector<int>& word) const {
    std::vector<int> out{start};
    for (int a : word) out.push_back(step(out.back(), a));
    return out;
}

State FsmEmbedding::tuple(int q, std::optional<int> x) const {
    return static_cast<State>(letters + q * (letters + 1) + (x ? *x : letters));
}

std::optional<int> FsmEmbedding::tuple_letter(State s) const {
    int x = (s - letters) % (letters + 1);
    if (x == letters) return std::nullopt;
    return x;
}

Configuration FsmEmbedding::encode(const std::vector<int>& word, int start) const {
    Configuration c(Background::uniform(1, tuple(start, std::nullopt)));
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (word[i] < 0 || word[i] >= letters) throw Error("letter out of range");
        c.set({static_cast<std::int64_t>(i) + 1, 0}, letter(word[i]));
    }
    return c;
}

FsmEmbedding embed_fsm(const Dfa& fsm) {
    if (fsm.states < 1 || fsm.letters < 1 ||
        fsm.delta.size() != static_cast<std::size_t>(fsm.states * fsm.letters))
        throw Error("DFA transition table is not total");
    for (int d : fsm.delta)
        if (d < 0 || d >= fsm.states) throw Error("DFA transition target out of range");
    FsmEmbedding e;
    e.letters = fsm.letters;
    e.fsm_states = fsm.states;
    const int total = fsm.letters + fsm.states * (fsm.letters + 1);
    e.rule = RuleTable::from_function(1, total, nbhd::one_way(), [&](std::span<const State> t) {
        State left = t[0], self = t[1];
        if (e.is_tuple(left) && !e.is_tuple(self))
            return e.tuple(fsm.step(e.tuple_state(left), self), static_cast<int>(self));
        return self;
    });
    e.rule.set_name("fsm-embedding");
    return e;
}

}  // namespace acaforge
