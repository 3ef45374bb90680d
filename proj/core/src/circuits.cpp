#include <acaforge/circuits.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <sstream>

namespace acaforge {

namespace {

// Tuple slots in von Neumann order.
constexpr std::size_t kE = 0, kN = 1, kC = 2, kW = 3, kS = 4;

State rule_x_local(std::span<const State> t) {
    const State c = t[kC], n = t[kN], e = t[kE], s = t[kS], w = t[kW];
    if (c == 0) {
        // CROSS: left signal (W arm flipped to 1) or bottom signal (S arm flipped to 2).
        if (n == 1 && w == 1 && e == 2 && s == 1) return 1;
        if (n == 1 && w == 2 && e == 2 && s == 2) return 2;
        return 0;
    }
    // MERGE: signal from the top (N arm now 1) or from the left (W arm now 2).
    if (c == 1 && s == 0 && e == 1 && ((n == 1 && w == 1) || (n == 2 && w == 2))) return 2;

    int degree = 0;
    bool all_in = true;
    if (e != 0) {
        ++degree;
        all_in = all_in && c == e;
    }
    if (n != 0) {
        ++degree;
        all_in = all_in && c == n;
    }
    if (w != 0) {
        ++degree;
        all_in = all_in && w != c;
    }
    if (s != 0) {
        ++degree;
        all_in = all_in && s != c;
    }
    if (degree == 0) return c;
    if (degree == 1) {
        // Dangling ends only accept a signal from the left or from below.
        if ((w != 0 && w != c) || (s != 0 && s != c)) return static_cast<State>(3 - c);
        return c;
    }
    return all_in ? static_cast<State>(3 - c) : c;
}

struct Panel {
    GateKind kind;
    std::array<const char*, 5> rows;  // top row first
    std::vector<Cell> signals, sources;
    std::vector<Port> ports;
};

const std::vector<Panel>& panels() {
    static const std::vector<Panel> p = {
        {GateKind::Bend,
         {"00000", "21110", "00020", "00010", "00020"},
         {{1, 3}},
         {{0, 3}},
         {{"in", {0, 3}, true, 'W'}, {"out", {3, 0}, false, 'S'}}},
        {GateKind::Fork,
         {"00010", "00010", "21110", "00020", "00010"},
         {{1, 2}},
         {{0, 2}},
         {{"in", {0, 2}, true, 'W'}, {"out_n", {3, 4}, false, 'N'}, {"out_s", {3, 0}, false, 'S'}}},
        {GateKind::Dual,
         {"00000", "21111", "00100", "00100", "00200"},
         {{1, 3}, {2, 1}},
         {{0, 3}, {2, 0}},
         {{"in_w", {0, 3}, true, 'W'}, {"in_s", {2, 0}, true, 'S'}, {"out", {4, 3}, false, 'E'}}},
        {GateKind::Cross,
         {"00100", "00100", "22022", "00100", "00100"},
         {},
         {},
         {{"in_w", {0, 2}, true, 'W'},
          {"in_s", {2, 0}, true, 'S'},
          {"out_n", {2, 4}, false, 'N'},
          {"out_e", {4, 2}, false, 'E'}}},
        {GateKind::Merge,
         {"00200", "00100", "00200", "11111", "00000"},
         {},
         {},
         {{"in_n", {2, 4}, true, 'N'}, {"in_w", {0, 1}, true, 'W'}, {"out", {4, 1}, false, 'E'}}},
    };
    return p;
}

}  // namespace

RuleTable build_rule_x() {
    auto r = RuleTable::from_function(2, 3, nbhd::von_neumann(), rule_x_local);
    r.set_name("rule-x");
    return r;
}

const char* to_string(GateKind k) {
    switch (k) {
        case GateKind::WireH: return "WIRE-H";
        case GateKind::WireV: return "WIRE-V";
        case GateKind::Fork: return "FORK";
        case GateKind::Dual: return "DUAL";
        case GateKind::Merge: return "MERGE";
        case GateKind::Cross: return "CROSS";
        case GateKind::Bend: return "BEND";
    }
    return "?";
}

GateKind gate_kind_from(const std::string& name) {
    std::string up;
    for (char ch : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (auto k : {GateKind::WireH, GateKind::WireV, GateKind::Fork, GateKind::Dual, GateKind::Merge,
                   GateKind::Cross, GateKind::Bend})
        if (up == to_string(k)) return k;
    throw CircuitError("unknown gate kind '" + name + "'");
}

State GatePattern::at(Cell c) const {
    auto it = footprint.find(c);
    return it == footprint.end() ? State{0} : it->second;
}

std::map<Cell, State> GatePattern::quiescent() const {
    auto q = footprint;
    for (auto c : signal_sources) q[c] = static_cast<State>(3 - q.at(c));
    return q;
}

const Port& GatePattern::port(const std::string& name) const {
    for (const auto& p : ports)
        if (p.name == name) return p;
    throw CircuitError(std::string(to_string(kind)) + " has no port '" + name + "'");
}

GatePattern gate_pattern(GateKind kind, std::size_t length) {
    GatePattern g;
    g.kind = kind;
    if (kind == GateKind::WireH || kind == GateKind::WireV) {
        if (length == 0) throw CircuitError("wire length must be positive");
        auto n = static_cast<std::int64_t>(length);
        bool h = kind == GateKind::WireH;
        g.width = h ? n : 1;
        g.height = h ? 1 : n;
        for (std::int64_t i = 0; i < n; ++i) g.footprint[h ? Cell{i, 0} : Cell{0, i}] = 1;
        g.ports = {{"in", {0, 0}, true, h ? 'W' : 'S'}, {"out", h ? Cell{n - 1, 0} : Cell{0, n - 1}, false, h ? 'E' : 'N'}};
        return g;
    }
    for (const auto& p : panels()) {
        if (p.kind != kind) continue;
        g.width = g.height = 5;
        for (std::int64_t row = 0; row < 5; ++row)
            for (std::int64_t x = 0; x < 5; ++x) {
                char ch = p.rows[static_cast<std::size_t>(row)][x];
                if (ch != '0') g.footprint[{x, 4 - row}] = static_cast<State>(ch - '0');
            }
        g.signals = p.signals;
        g.signal_sources = p.sources;
        g.ports = p.ports;
        return g;
    }
    throw CircuitError("no pattern for gate kind");
}

// ---------------------------------------------------------------- netlists

namespace {

std::size_t in_arity(GateKind k) {
    return (k == GateKind::Dual || k == GateKind::Merge || k == GateKind::Cross) ? 2 : 1;
}
std::size_t out_arity(GateKind k) { return (k == GateKind::Fork || k == GateKind::Cross) ? 2 : 1; }

GateKind kind_of(TrackOp op) {
    switch (op) {
        case TrackOp::Fork: return GateKind::Fork;
        case TrackOp::Dual: return GateKind::Dual;
        case TrackOp::Merge: return GateKind::Merge;
        case TrackOp::Cross: return GateKind::Cross;
        case TrackOp::End: break;
    }
    throw CircuitError("END is not a gate");
}

void derive(const TrackProgram& prog, std::vector<NetGate>& gates, std::vector<Net>& nets) {
    gates.clear();
    nets.clear();
    std::vector<NetEnd> src;
    for (std::size_t i = 0; i < prog.inputs; ++i) src.push_back({NetEnd::npos, i});
    for (const auto& st : prog.steps) {
        bool two = st.op == TrackOp::Dual || st.op == TrackOp::Merge || st.op == TrackOp::Cross;
        if (st.track >= src.size() || (two && st.track + 1 >= src.size()))
            throw CircuitError("track " + std::to_string(st.track) + " out of range");
        if (st.op == TrackOp::End) {
            src.erase(src.begin() + static_cast<std::ptrdiff_t>(st.track));
            continue;
        }
        std::size_t g = gates.size();
        gates.push_back({kind_of(st.op), g});
        nets.push_back({src[st.track], {g, 0}});
        auto at = src.begin() + static_cast<std::ptrdiff_t>(st.track);
        switch (st.op) {
            case TrackOp::Fork:
                *at = {g, 0};
                src.insert(at + 1, {g, 1});
                break;
            case TrackOp::Dual:
            case TrackOp::Merge:
                nets.push_back({src[st.track + 1], {g, 1}});
                *at = {g, 0};
                src.erase(at + 1);
                break;
            case TrackOp::Cross:
                nets.push_back({src[st.track + 1], {g, 1}});
                // port 0 exits north and carries the lower input
                src[st.track] = {g, 0};
                src[st.track + 1] = {g, 1};
                break;
            case TrackOp::End: break;
        }
    }
    for (std::size_t k = 0; k < src.size(); ++k) nets.push_back({src[k], {NetEnd::npos, k}});
}

std::vector<TrackStep> parse_steps(const char* text) {
    std::vector<TrackStep> v;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        TrackOp op = tok[0] == 'F' ? TrackOp::Fork : tok[0] == 'D' ? TrackOp::Dual
                     : tok[0] == 'M' ? TrackOp::Merge : TrackOp::Cross;
        v.push_back({op, std::stoul(tok.substr(1))});
    }
    return v;
}

const std::vector<TrackStep>& nand_steps() {
    static const auto s = parse_steps("F0 C1 C0 F0 C1 C0 C2 C0 C2 C0 F4 C0 D3 C2 F5 C4 D3 M2 D2 C2 D1 M0");
    return s;
}

// [A, nA, B, nB] -> [B, nB, A, nA]: decode into minterm rails, then rebuild.
const std::vector<TrackStep>& swap_steps() {
    static const std::vector<TrackStep> s = [] {
        auto v = parse_steps("F0 F2 F4 F6 C5 D3 C3 D2 C1 C2 D3 C0 C1 C3 D2");
        auto r = parse_steps("F1 F4 C3 F4 M5 C2 M1 C0 F1 M2 C2 M1 C2");
        v.insert(v.end(), r.begin(), r.end());
        return v;
    }();
    return s;
}

}  // namespace

std::size_t TrackProgram::outputs() const {
    std::size_t n = inputs;
    for (const auto& st : steps) {
        bool two = st.op == TrackOp::Dual || st.op == TrackOp::Merge || st.op == TrackOp::Cross;
        if (st.track >= n || (two && st.track + 1 >= n))
            throw CircuitError("track " + std::to_string(st.track) + " out of range");
        if (st.op == TrackOp::Fork) ++n;
        if (st.op == TrackOp::Dual || st.op == TrackOp::Merge || st.op == TrackOp::End) --n;
    }
    return n;
}

CircuitNetlist CircuitNetlist::from_program(std::string name, TrackProgram program,
                                            std::vector<std::string> inputs,
                                            std::vector<std::string> outputs) {
    CircuitNetlist n;
    n.name = std::move(name);
    n.program = std::move(program);
    n.inputs = std::move(inputs);
    n.outputs = std::move(outputs);
    if (n.program.inputs != 2 * n.inputs.size())
        throw CircuitError("program has " + std::to_string(n.program.inputs) + " input tracks for " +
                           std::to_string(n.inputs.size()) + " dual-rail inputs");
    if (n.program.outputs() != 2 * n.outputs.size())
        throw CircuitError("program has " + std::to_string(n.program.outputs()) + " output tracks for " +
                           std::to_string(n.outputs.size()) + " dual-rail outputs");
    derive(n.program, n.gates, n.nets);
    return n;
}

CircuitNetlist track_netlist(std::string name, TrackProgram program) {
    CircuitNetlist n;
    n.name = std::move(name);
    n.program = std::move(program);
    n.dual_rail = false;
    for (std::size_t i = 0; i < n.program.inputs; ++i) n.inputs.push_back("t" + std::to_string(i));
    for (std::size_t i = 0, m = n.program.outputs(); i < m; ++i) n.outputs.push_back("o" + std::to_string(i));
    derive(n.program, n.gates, n.nets);
    return n;
}

std::map<GateKind, std::size_t> CircuitNetlist::census() const {
    std::map<GateKind, std::size_t> c;
    for (const auto& g : gates) ++c[g.kind];
    return c;
}

void CircuitNetlist::validate() const {
    const std::size_t G = gates.size();
    for (std::size_t i = 0; i < G; ++i)
        if (gates[i].id != i) throw CircuitError("gate ids must be dense and ordered");

    // Kahn over gate-to-gate nets.
    std::vector<std::vector<std::size_t>> succ(G);
    std::vector<std::size_t> indeg(G, 0);
    for (const auto& n : nets) {
        if (n.from.gate != NetEnd::npos && n.from.gate >= G) throw CircuitError("net from unknown gate");
        if (n.to.gate != NetEnd::npos && n.to.gate >= G) throw CircuitError("net to unknown gate");
        if (n.from.gate != NetEnd::npos && n.to.gate != NetEnd::npos) {
            succ[n.from.gate].push_back(n.to.gate);
            ++indeg[n.to.gate];
        }
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < G; ++i)
        if (indeg[i] == 0) ready.push_back(i);
    std::size_t seen = 0;
    while (!ready.empty()) {
        auto g = ready.back();
        ready.pop_back();
        ++seen;
        for (auto s : succ[g])
            if (--indeg[s] == 0) ready.push_back(s);
    }
    if (seen != G) {
        for (std::size_t i = 0; i < G; ++i)
            if (indeg[i] != 0)
                throw CircuitError("netlist has a cycle through " + std::string(to_string(gates[i].kind)) +
                                   " #" + std::to_string(i));
    }

    const std::size_t ins = dual_rail ? 2 * inputs.size() : inputs.size();
    const std::size_t outs = dual_rail ? 2 * outputs.size() : outputs.size();
    std::map<std::pair<std::size_t, std::size_t>, int> driven, used;
    for (const auto& n : nets) {
        if (n.from.gate == NetEnd::npos ? n.from.port >= ins : n.from.port >= out_arity(gates[n.from.gate].kind))
            throw CircuitError("net leaves a missing port");
        if (n.to.gate == NetEnd::npos ? n.to.port >= outs : n.to.port >= in_arity(gates[n.to.gate].kind))
            throw CircuitError("net enters a missing port");
        if (++used[{n.from.gate, n.from.port}] > 1) throw CircuitError("an output port drives two nets");
        if (++driven[{n.to.gate, n.to.port}] > 1) throw CircuitError("an input port is driven twice");
    }
    for (std::size_t i = 0; i < G; ++i)
        for (std::size_t p = 0; p < in_arity(gates[i].kind); ++p)
            if (!driven.count({i, p}))
                throw CircuitError(std::string(to_string(gates[i].kind)) + " #" + std::to_string(i) +
                                   " has an undriven input");
    for (std::size_t p = 0; p < outs; ++p)
        if (!driven.count({NetEnd::npos, p})) throw CircuitError("output track " + std::to_string(p) + " undriven");

    if (program.inputs != ins) throw CircuitError("program input count disagrees with the port bindings");
    std::vector<NetGate> g2;
    std::vector<Net> n2;
    derive(program, g2, n2);
    bool same = g2.size() == G && n2 == nets;
    for (std::size_t i = 0; same && i < G; ++i) same = g2[i].kind == gates[i].kind;
    if (!same) throw CircuitError("nets are not realised by the planar track order");
    if (program.outputs() != outs) throw CircuitError("program output count disagrees with the port bindings");
}

TrackProgram expand(std::size_t variables, const std::vector<VarStep>& ops) {
    TrackProgram p;
    p.inputs = 2 * variables;
    std::size_t vars = variables;
    auto need = [&](std::size_t v, std::size_t span) {
        if (v + span > vars) throw CircuitError("variable " + std::to_string(v) + " out of range");
    };
    auto add = [&](const std::vector<TrackStep>& block, std::size_t off) {
        for (auto s : block) p.steps.push_back({s.op, s.track + off});
    };
    for (const auto& op : ops) {
        const std::size_t t = 2 * op.var;
        switch (op.op) {
            case VarOp::Fanout:
                need(op.var, 1);
                add({{TrackOp::Fork, 0}, {TrackOp::Fork, 2}, {TrackOp::Cross, 1}}, t);
                ++vars;
                break;
            case VarOp::Not:
                need(op.var, 1);
                p.steps.push_back({TrackOp::Cross, t});
                break;
            case VarOp::Nand:
                need(op.var, 2);
                add(nand_steps(), t);
                --vars;
                break;
            case VarOp::Swap:
                need(op.var, 2);
                add(swap_steps(), t);
                break;
            case VarOp::Drop:
                need(op.var, 1);
                p.steps.push_back({TrackOp::End, t});
                p.steps.push_back({TrackOp::End, t});
                --vars;
                break;
        }
    }
    return p;
}

CircuitNetlist build_nand_netlist() {
    return CircuitNetlist::from_program("nand", expand(2, {{VarOp::Nand, 0}}), {"A", "B"}, {"nand"});
}

CircuitNetlist build_fanout_netlist() {
    return CircuitNetlist::from_program("fanout", expand(1, {{VarOp::Fanout, 0}}), {"I"}, {"I1", "I2"});
}

// ------------------------------------------------------------ formulas

std::uint8_t Formula::truth_table() const {
    switch (kind) {
        case Kind::Var: return std::array<std::uint8_t, 3>{0xF0, 0xCC, 0xAA}[var];
        case Kind::Not: return static_cast<std::uint8_t>(~args[0].truth_table());
        case Kind::Nand: return static_cast<std::uint8_t>(~(args[0].truth_table() & args[1].truth_table()));
    }
    return 0;
}

std::size_t Formula::nands() const {
    std::size_t n = kind == Kind::Nand ? 1 : 0;
    for (const auto& a : args) n += a.nands();
    return n;
}

std::string Formula::describe() const {
    switch (kind) {
        case Kind::Var: return std::string(1, "lcr"[var]);
        case Kind::Not: return "!" + args[0].describe();
        case Kind::Nand: return "(" + args[0].describe() + " nand " + args[1].describe() + ")";
    }
    return "?";
}

namespace {

std::size_t leaves(const Formula& f) {
    if (f.kind == Formula::Kind::Var) return 1;
    std::size_t n = 0;
    for (const auto& a : f.args) n += leaves(a);
    return n;
}

Formula negate(const Formula& f) {
    if (f.kind == Formula::Kind::Not) return f.args[0];
    Formula n;
    n.kind = Formula::Kind::Not;
    n.args = {f};
    return n;
}

}  // namespace

Formula minimal_formula(std::uint8_t table) {
    if (table == 0x00 || table == 0xFF) throw CircuitError("constant function has no NAND formula");
    static const std::array<std::optional<Formula>, 256> best = [] {
        std::array<std::optional<Formula>, 256> b;
        std::array<std::size_t, 256> cost{}, lv{};
        auto offer = [&](const Formula& f, std::size_t c) {
            auto t = f.truth_table();
            auto l = leaves(f);
            if (!b[t] || c < cost[t] || (c == cost[t] && l < lv[t])) {
                b[t] = f;
                cost[t] = c;
                lv[t] = l;
            }
        };
        for (std::size_t v = 0; v < 3; ++v) {
            Formula x;
            x.var = v;
            offer(x, 0);
            offer(negate(x), 0);
        }
        for (std::size_t c = 1; c < 16; ++c) {
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t a = 0; a < 256; ++a)
                for (std::size_t d = a; d < 256; ++d)
                    if (b[a] && b[d] && cost[a] + cost[d] + 1 == c) pairs.emplace_back(a, d);
            for (auto [a, d] : pairs) {
                Formula n;
                n.kind = Formula::Kind::Nand;
                n.args = {*b[a], *b[d]};
                offer(n, c);
                offer(negate(n), c);
            }
            bool done = true;
            for (std::size_t t = 1; t < 255; ++t) done = done && b[t].has_value();
            if (done) break;
        }
        return b;
    }();
    if (!best[table]) throw CircuitError("formula search did not reach the table");
    return *best[table];
}

namespace {

/// Stack machine: inputs stay at the bottom, temporaries on top.
struct FormulaCompiler {
    struct Slot {
        bool input;
        std::size_t var;
    };
    std::vector<Slot> stack;
    std::array<std::size_t, 3> uses{};
    std::vector<VarStep> ops;

    void count(const Formula& f) {
        if (f.kind == Formula::Kind::Var)
            ++uses[f.var];
        else
            for (const auto& a : f.args) count(a);
    }

    std::size_t find(std::size_t v) const {
        for (std::size_t i = 0; i < stack.size(); ++i)
            if (stack[i].input && stack[i].var == v) return i;
        throw CircuitError("input consumed twice");
    }

    void emit(const Formula& f) {
        switch (f.kind) {
            case Formula::Kind::Var: {
                std::size_t p = find(f.var);
                std::size_t at = p;
                if (uses[f.var] > 1) {
                    ops.push_back({VarOp::Fanout, p});
                    stack.insert(stack.begin() + static_cast<std::ptrdiff_t>(p + 1), Slot{false, 0});
                    at = p + 1;
                } else {
                    stack[p] = {false, 0};
                }
                --uses[f.var];
                for (std::size_t q = at; q + 1 < stack.size(); ++q) {
                    ops.push_back({VarOp::Swap, q});
                    std::swap(stack[q], stack[q + 1]);
                }
                break;
            }
            case Formula::Kind::Not:
                emit(f.args[0]);
                ops.push_back({VarOp::Not, stack.size() - 1});
                break;
            case Formula::Kind::Nand:
                emit(f.args[0]);
                emit(f.args[1]);
                ops.push_back({VarOp::Nand, stack.size() - 2});
                stack.pop_back();
                break;
        }
    }

    std::vector<VarStep> compile(const Formula& f, std::size_t nvars) {
        for (std::size_t v = 0; v < nvars; ++v) stack.push_back({true, v});
        count(f);
        for (std::size_t v = nvars; v-- > 0;)
            if (uses[v] == 0) {
                ops.push_back({VarOp::Drop, v});
                stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(v));
            }
        emit(f);
        if (stack.size() != 1) throw CircuitError("formula left inputs on the stack");
        return ops;
    }
};

}  // namespace

CircuitNetlist build_xor_netlist() {
    auto f = minimal_formula(0xF0 ^ 0xCC);
    auto ops = FormulaCompiler{}.compile(f, 2);
    return CircuitNetlist::from_program("xor", expand(2, ops), {"A", "B"}, {"xor"});
}

CircuitNetlist build_rule_step_circuit(const RuleTable& guest) {
    if (guest.states() != 2 || guest.dimension() != 1 || guest.neighborhood() != nbhd::first_neighbors())
        throw CircuitError("guest must be a 2-state first-neighbors rule");
    std::uint8_t tt = 0;
    for (std::size_t i = 0; i < 8; ++i)
        if (guest.at(i) != 0) tt = static_cast<std::uint8_t>(tt | (1u << i));
    std::string name = guest.name().empty() ? "step" : "step(" + guest.name() + ")";

    if (tt == 0x00 || tt == 0xFF) {
        // One rail always fires (MERGE of l's rails), the other never (DUAL of them).
        auto p = expand(3, {{VarOp::Drop, 2}, {VarOp::Drop, 1}});
        auto tail = parse_steps("F0 F2 C1 M0 D1");
        p.steps.insert(p.steps.end(), tail.begin(), tail.end());
        if (tt == 0x00) p.steps.push_back({TrackOp::Cross, 0});
        return CircuitNetlist::from_program(name, p, {"l", "c", "r"}, {"f"});
    }
    auto ops = FormulaCompiler{}.compile(minimal_formula(tt), 3);
    return CircuitNetlist::from_program(name, expand(3, ops), {"l", "c", "r"}, {"f"});
}

// ---------------------------------------------------------- text format

namespace {

const char* op_name(TrackOp op) {
    switch (op) {
        case TrackOp::Fork: return "fork";
        case TrackOp::Dual: return "dual";
        case TrackOp::Merge: return "merge";
        case TrackOp::Cross: return "cross";
        case TrackOp::End: return "end";
    }
    return "?";
}

}  // namespace

std::string write_netlist(const CircuitNetlist& n) {
    std::ostringstream out;
    out << "circuit " << (n.name.empty() ? "unnamed" : n.name) << "\n";
    out << "rails " << (n.dual_rail ? "dual" : "single") << "\n";
    out << "inputs";
    for (const auto& s : n.inputs) out << ' ' << s;
    out << "\noutputs";
    for (const auto& s : n.outputs) out << ' ' << s;
    out << "\n";
    for (const auto& st : n.program.steps) out << op_name(st.op) << ' ' << st.track << "\n";
    return out.str();
}

CircuitNetlist read_netlist(const std::string& text) {
    std::istringstream in(text);
    std::string line, name = "unnamed";
    bool dual = true;
    std::vector<std::string> ins, outs;
    TrackProgram prog;
    std::size_t lineno = 0;
    bool have_inputs = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        auto fail = [&](const std::string& why) {
            throw CircuitError("netlist line " + std::to_string(lineno) + ": " + why);
        };
        if (key == "circuit") {
            if (!(ls >> name)) fail("missing name");
        } else if (key == "rails") {
            std::string r;
            ls >> r;
            if (r != "dual" && r != "single") fail("rails must be dual or single");
            dual = r == "dual";
        } else if (key == "inputs" || key == "outputs") {
            auto& v = key == "inputs" ? ins : outs;
            for (std::string s; ls >> s;) v.push_back(s);
            have_inputs = have_inputs || key == "inputs";
        } else {
            std::size_t t = 0;
            if (!(ls >> t)) fail("missing track index");
            TrackOp op;
            if (key == "fork") op = TrackOp::Fork;
            else if (key == "dual") op = TrackOp::Dual;
            else if (key == "merge") op = TrackOp::Merge;
            else if (key == "cross") op = TrackOp::Cross;
            else if (key == "end") op = TrackOp::End;
            else fail("unknown keyword '" + key + "'");
            prog.steps.push_back({op, t});
        }
    }
    if (!have_inputs) throw CircuitError("netlist declares no inputs");
    prog.inputs = dual ? 2 * ins.size() : ins.size();
    if (dual) return CircuitNetlist::from_program(name, prog, ins, outs);
    auto n = track_netlist(name, prog);
    if (!outs.empty() && outs.size() != n.outputs.size()) throw CircuitError("output count disagrees with the program");
    n.inputs = ins;
    if (!outs.empty()) n.outputs = outs;
    return n;
}

}  // namespace acaforge
