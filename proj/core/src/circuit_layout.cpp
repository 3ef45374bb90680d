#include <acaforge/circuits.hpp>

#include <algorithm>
#include <unordered_map>

namespace acaforge {

namespace {

constexpr std::int64_t kPitch = 6;

std::int64_t row_of(std::size_t k) { return -static_cast<std::int64_t>(k) * kPitch; }

struct CellHash {
    std::size_t operator()(Cell c) const noexcept {
        return std::hash<std::int64_t>{}(c.x * 0x9E3779B97F4A7C15LL ^ c.y);
    }
};

struct Rec {
    State s;
    std::uint32_t wire;
};

struct Head {
    Cell at;
    State s;
    std::uint32_t wire;
};

/// Paths are drawn cell by cell. Moving right or up keeps the state,
/// moving left or down flips it, so every indicator points upstream.
class Canvas {
public:
    std::unordered_map<Cell, Rec, CellHash> cells;
    std::vector<std::string> wire_names;

    std::uint32_t new_wire(std::string name) {
        wire_names.push_back(std::move(name));
        return static_cast<std::uint32_t>(wire_names.size());
    }

    void put(Cell c, State s, std::uint32_t wire) {
        if (!cells.emplace(c, Rec{s, wire}).second)
            throw RoutingError(wire_names[wire - 1] + " collides at (" + std::to_string(c.x) + "," +
                               std::to_string(c.y) + ")");
    }

    static State next_state(State s, Cell d) { return (d.x == 1 || d.y == 1) ? s : static_cast<State>(3 - s); }

    void step(Head& h, Cell next) {
        Cell d = next - h.at;
        h.s = next_state(h.s, d);
        put(next, h.s, h.wire);
        h.at = next;
    }

    void run_to(Head& h, Cell target) {
        if (h.at.x != target.x && h.at.y != target.y)
            throw RoutingError(wire_names[h.wire - 1] + " cannot route diagonally");
        while (h.at != target) {
            Cell d{target.x > h.at.x ? 1 : target.x < h.at.x ? -1 : 0,
                   target.y > h.at.y ? 1 : target.y < h.at.y ? -1 : 0};
            step(h, h.at + d);
        }
    }

    /// Final move onto a cell that another input already drew.
    void join(Head& h, Cell target) {
        const auto& r = cells.at(target);
        if (next_state(h.s, target - h.at) != r.s)
            throw RoutingError(wire_names[h.wire - 1] + " arrives out of phase at (" + std::to_string(target.x) +
                               "," + std::to_string(target.y) + ")");
    }

    void expect(const Head& h, State s) const {
        if (h.s != s)
            throw RoutingError(wire_names[h.wire - 1] + " reaches (" + std::to_string(h.at.x) + "," +
                               std::to_string(h.at.y) + ") in the wrong state");
    }
};

}  // namespace

State PlacedCircuit::at(Cell c) const { return box.contains(c) ? grid[box.index(c)] : State{0}; }

Configuration PlacedCircuit::configuration() const {
    auto c = Configuration::zeros(2);
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] != 0) c.set(box.cell(i), grid[i]);
    return c;
}

std::size_t PlacedCircuit::live_cells() const {
    return static_cast<std::size_t>(std::count_if(grid.begin(), grid.end(), [](State s) { return s != 0; }));
}

namespace {

struct Layout {
    Canvas canvas;
    std::vector<Head> tracks;
    std::vector<PlacedGate> gates;
    std::vector<std::vector<std::uint32_t>> gate_wires;
    std::vector<Cell> inputs;
    std::int64_t x = 0;  // every head sits on column x - 1

    void straight(std::int64_t to) {
        for (auto& h : tracks)
            if (h.at.x < to) canvas.run_to(h, {to, h.at.y});
    }

    /// Parity bump over columns x..x+4; the track leaves at x+4.
    void zone(Head& h, bool bump) {
        const std::int64_t r = h.at.y;
        if (bump) {
            canvas.run_to(h, {x, r});
            canvas.run_to(h, {x, r + 1});
            canvas.run_to(h, {x + 2, r + 1});
            canvas.run_to(h, {x + 2, r});
        }
        canvas.run_to(h, {x + 4, r});
    }

    std::uint32_t wire(GateKind k, std::size_t id, int port) {
        return canvas.new_wire(std::string("net ") + to_string(k) + "#" + std::to_string(id) + "." +
                               std::to_string(port));
    }

    void gate(const TrackStep& st, std::size_t id) {
        const std::size_t t = st.track;
        if (st.op == TrackOp::End) {
            tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(t));
            straight(x + 2);
            x += 3;
            return;
        }
        bool two = st.op != TrackOp::Fork;
        std::vector<bool> bump(tracks.size(), false);
        const State up_in = tracks[t].s;
        if (st.op == TrackOp::Dual) bump[t + 1] = tracks[t + 1].s != up_in;
        if (st.op == TrackOp::Merge || st.op == TrackOp::Cross) {
            bump[t] = tracks[t].s != 1;
            bump[t + 1] = tracks[t + 1].s != 1;
        }
        for (std::size_t k = 0; k < tracks.size(); ++k) zone(tracks[k], bump[k]);

        const std::int64_t g = x + 5;
        const std::int64_t y = tracks[t].at.y;
        const std::int64_t yl = y - kPitch;
        PlacedGate pg{};
        pg.id = id;
        std::vector<std::uint32_t> ws{tracks[t].wire};
        if (two) ws.push_back(tracks[t + 1].wire);
        std::int64_t end = 0;
        auto& c = canvas;

        switch (st.op) {
            case TrackOp::Fork: {
                pg.kind = GateKind::Fork;
                Cell J{g + 2, y};
                auto& in = tracks[t];
                c.run_to(in, J);
                pg.center = J;
                pg.panel_origin = J - Cell{3, 2};
                pg.input_arms = {J - Cell{2, 0}};
                end = J.x + 3;
                Head up{J, in.s, wire(pg.kind, id, 0)}, dn{J, in.s, wire(pg.kind, id, 1)};
                c.run_to(up, {J.x, y + 3});
                c.run_to(up, {end, y + 3});
                c.run_to(dn, {J.x, y - 3});
                c.run_to(dn, {end, y - 3});
                ws.push_back(up.wire);
                ws.push_back(dn.wire);
                tracks[t] = up;
                tracks.insert(tracks.begin() + static_cast<std::ptrdiff_t>(t + 1), dn);
                break;
            }
            case TrackOp::Dual: {
                pg.kind = GateKind::Dual;
                Cell J{g + 2, y};
                c.run_to(tracks[t], J);
                auto& lo = tracks[t + 1];
                c.run_to(lo, {J.x, yl});
                c.run_to(lo, {J.x, y - 1});
                c.join(lo, J);
                pg.center = J;
                pg.panel_origin = J - Cell{2, 3};
                pg.input_arms = {J - Cell{2, 0}, J - Cell{0, 2}};
                end = J.x + 3;
                Head out{J, tracks[t].s, wire(pg.kind, id, 0)};
                c.run_to(out, {end, y});
                ws.push_back(out.wire);
                tracks[t] = out;
                tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(t + 1));
                break;
            }
            case TrackOp::Merge: {
                pg.kind = GateKind::Merge;
                Cell C{g + 2, yl};
                auto& lo = tracks[t + 1];
                c.run_to(lo, C);
                c.expect(lo, 1);
                auto& up = tracks[t];
                c.run_to(up, {C.x, y});
                c.run_to(up, {C.x, yl + 1});
                c.expect(up, 2);
                c.join(up, C);
                pg.center = C;
                pg.panel_origin = C - Cell{2, 1};
                pg.input_arms = {C + Cell{0, 2}, C - Cell{2, 0}};
                end = C.x + 3;
                Head out{C, 1, wire(pg.kind, id, 0)};
                c.run_to(out, {end, yl});
                ws.push_back(out.wire);
                tracks[t] = out;
                tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(t + 1));
                break;
            }
            case TrackOp::Cross: {
                pg.kind = GateKind::Cross;
                const std::int64_t yc = y - 3;
                Cell X{g + 3, yc};
                auto& up = tracks[t];
                c.run_to(up, {g, y});
                c.run_to(up, {g, yc});
                c.run_to(up, {X.x - 1, yc});
                c.expect(up, 2);
                auto& lo = tracks[t + 1];
                c.run_to(lo, {X.x, yl});
                c.run_to(lo, {X.x, yc - 1});
                c.expect(lo, 1);
                pg.center = X;
                pg.panel_origin = X - Cell{2, 2};
                pg.input_arms = {X - Cell{2, 0}, X - Cell{0, 2}};
                end = X.x + 4;
                Head n{X + Cell{0, 1}, 1, wire(pg.kind, id, 0)};
                c.put(n.at, n.s, n.wire);
                c.run_to(n, {X.x, y});
                c.run_to(n, {end, y});
                Head e{X + Cell{1, 0}, 2, wire(pg.kind, id, 1)};
                c.put(e.at, e.s, e.wire);
                c.run_to(e, {X.x + 3, yc});
                c.run_to(e, {X.x + 3, yl});
                c.run_to(e, {end, yl});
                ws.push_back(n.wire);
                ws.push_back(e.wire);
                tracks[t] = n;
                tracks[t + 1] = e;
                break;
            }
            case TrackOp::End: break;
        }
        straight(end);
        gates.push_back(pg);
        gate_wires.push_back(ws);
        x = end + 1;
    }

    /// Returns tracks to pitch rows, one jog column every 3 cells.
    void reflow() {
        std::vector<std::size_t> moving;
        for (std::size_t k = 0; k < tracks.size(); ++k)
            if (tracks[k].at.y != row_of(k)) moving.push_back(k);
        if (moving.empty()) return;
        bool down = row_of(moving.front()) < tracks[moving.front()].at.y;
        for (auto k : moving)
            if ((row_of(k) < tracks[k].at.y) != down) throw RoutingError("mixed reflow directions");
        if (down) std::reverse(moving.begin(), moving.end());
        std::int64_t col = x;
        for (auto k : moving) {
            auto& h = tracks[k];
            canvas.run_to(h, {col, h.at.y});
            canvas.run_to(h, {col, row_of(k)});
            col += 3;
        }
        straight(col - 2);
        x = col - 1;
    }
};

}  // namespace

PlacedCircuit place_and_route(const CircuitNetlist& netlist) {
    netlist.validate();
    Layout L;
    const std::size_t n_in = netlist.program.inputs;
    for (std::size_t k = 0; k < n_in; ++k) {
        std::string nm = netlist.dual_rail ? netlist.inputs[k / 2] + (k % 2 ? ".false" : ".true")
                                           : netlist.inputs[k];
        Head h{{0, row_of(k)}, 1, L.canvas.new_wire("net input " + nm)};
        L.canvas.put(h.at, h.s, h.wire);
        L.canvas.run_to(h, {1, row_of(k)});
        L.tracks.push_back(h);
        L.inputs.push_back({0, row_of(k)});
    }
    L.x = 2;
    std::size_t id = 0;
    for (const auto& st : netlist.program.steps) {
        L.gate(st, st.op == TrackOp::End ? 0 : id);
        if (st.op != TrackOp::End) ++id;
        L.reflow();
    }
    std::vector<Cell> outs;
    for (auto& h : L.tracks) {
        L.canvas.run_to(h, {L.x + 2, h.at.y});
        outs.push_back(h.at);
    }

    PlacedCircuit p;
    p.netlist = netlist;
    std::int64_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool first = true;
    for (const auto& [c, r] : L.canvas.cells) {
        if (first) {
            x0 = x1 = c.x;
            y0 = y1 = c.y;
            first = false;
        }
        x0 = std::min(x0, c.x);
        x1 = std::max(x1, c.x);
        y0 = std::min(y0, c.y);
        y1 = std::max(y1, c.y);
    }
    p.box = {x0 - 1, y0 - 1, x1 - x0 + 3, y1 - y0 + 3};
    p.grid.assign(p.box.size(), 0);
    p.wires.assign(p.box.size(), 0);
    for (const auto& [c, r] : L.canvas.cells) {
        p.grid[p.box.index(c)] = r.s;
        p.wires[p.box.index(c)] = r.wire;
    }
    p.wire_names = L.canvas.wire_names;
    p.input_cells = L.inputs;
    p.output_cells = outs;
    p.gates = L.gates;
    for (std::size_t i = 0; i < p.gates.size(); ++i) p.gates[i].wires = L.gate_wires[i];

    auto problems = audit_layout(p);
    if (!problems.empty()) throw RoutingError(problems.front());
    return p;
}

std::vector<std::string> audit_layout(const PlacedCircuit& p) {
    std::vector<std::string> out;
    const Box& b = p.box;
    auto where = [](Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; };
    auto name = [&](std::uint32_t w) {
        return w == 0 || w > p.wire_names.size() ? std::string("unnamed net") : p.wire_names[w - 1];
    };

    // Gate windows, so cells of incident nets may sit close together.
    std::unordered_map<std::size_t, std::vector<std::size_t>> window;
    for (std::size_t g = 0; g < p.gates.size(); ++g)
        for (std::int64_t dy = 0; dy < 5; ++dy)
            for (std::int64_t dx = 0; dx < 5; ++dx) {
                Cell c = p.gates[g].panel_origin + Cell{dx, dy};
                if (b.contains(c)) window[b.index(c)].push_back(g);
            }
    auto shared_gate = [&](std::size_t i, std::size_t j, std::uint32_t wi, std::uint32_t wj) {
        auto a = window.find(i), c = window.find(j);
        if (a == window.end() || c == window.end()) return false;
        for (auto g : a->second) {
            if (std::find(c->second.begin(), c->second.end(), g) == c->second.end()) continue;
            const auto& ws = p.gates[g].wires;
            if (std::find(ws.begin(), ws.end(), wi) != ws.end() && std::find(ws.begin(), ws.end(), wj) != ws.end())
                return true;
        }
        return false;
    };

    std::map<Cell, GateKind> centers;
    for (const auto& g : p.gates)
        if (g.kind == GateKind::Cross || g.kind == GateKind::Merge) centers[g.center] = g.kind;

    static const RuleTable rx = build_rule_x();
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        Cell c = b.cell(i);
        State s = p.grid[i];
        if (s > 2) out.push_back("state out of range at " + where(c));
        State e = p.at(c + Cell{1, 0}), n = p.at(c + Cell{0, 1}), w = p.at(c - Cell{1, 0}), so = p.at(c - Cell{0, 1});
        const std::array<State, 5> tup{e, n, s, w, so};
        if (rx(tup) != s) out.push_back("cell " + where(c) + " is active at rest");
        auto it = centers.find(c);
        if (s == 0 && e && n && w && so && (it == centers.end() || it->second != GateKind::Cross))
            out.push_back("stray crossing pattern at " + where(c));
        if (s != 0 && n && w && e && !so && (it == centers.end() || it->second != GateKind::Merge))
            out.push_back("stray merge pattern at " + where(c));
        if (s == 0) continue;
        for (std::int64_t dy = -2; dy <= 2; ++dy)
            for (std::int64_t dx = -2; dx <= 2; ++dx) {
                Cell d = c + Cell{dx, dy};
                if (!b.contains(d)) continue;
                std::size_t j = b.index(d);
                if (j <= i || p.grid[j] == 0 || p.wires[j] == p.wires[i]) continue;
                if (shared_gate(i, j, p.wires[i], p.wires[j])) continue;
                out.push_back(name(p.wires[i]) + " passes within 2 cells of " + name(p.wires[j]) + " at " + where(c));
            }
    }
    return out;
}

}  // namespace acaforge
