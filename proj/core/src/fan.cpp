#include "acaforge/fan.hpp"

#include <algorithm>
#include <sstream>

namespace acaforge {

std::size_t FlipNetwork::add_node(State s) {
    state_.push_back(s);
    inc_.emplace_back();
    return state_.size() - 1;
}

std::size_t FlipNetwork::add_edge(std::size_t u, std::size_t v, std::size_t toward) {
    if (u == v || u >= nodes() || v >= nodes()) throw InvalidConfiguration("bad edge");
    if (toward != u && toward != v) throw InvalidConfiguration("edge must point at an endpoint");
    Edge e{std::min(u, v), std::max(u, v), toward == std::max(u, v)};
    edges_.push_back(e);
    inc_[u].push_back(edges_.size() - 1);
    inc_[v].push_back(edges_.size() - 1);
    return edges_.size() - 1;
}

bool FlipNetwork::applicable(std::size_t v) const {
    for (auto e : inc_.at(v))
        if (edges_[e].points_to() != v) return false;
    return true;
}

std::vector<std::size_t> FlipNetwork::applicable_nodes() const {
    std::vector<std::size_t> r;
    for (std::size_t v = 0; v < nodes(); ++v)
        if (applicable(v)) r.push_back(v);
    return r;
}

void FlipNetwork::apply(std::span<const std::size_t> D) {
    if (!flip_) throw Error("flip network has no flip function");
    std::vector<std::pair<std::size_t, Update>> ups;
    ups.reserve(D.size());
    for (auto v : D) {
        if (v >= nodes()) throw InvalidConfiguration("node out of range");
        if (!applicable(v)) throw ContractViolation("node " + std::to_string(v) + " is not applicable");
        if (std::any_of(ups.begin(), ups.end(), [&](auto& p) { return p.first == v; })) continue;
        auto u = flip_(*this, v);
        if (u.flip.size() != inc_[v].size()) throw Error("flip mask size mismatch");
        ups.emplace_back(v, std::move(u));
    }
    for (auto& [v, u] : ups) {
        state_[v] = u.state;
        for (std::size_t k = 0; k < u.flip.size(); ++k)
            if (u.flip[k]) edges_[inc_[v][k]].toward_larger = !edges_[inc_[v][k]].toward_larger;
    }
}

std::string FlipNetwork::dump() const {
    std::ostringstream os;
    os << "states";
    for (auto s : state_) os << ' ' << s;
    os << '\n';
    for (auto& e : edges_) {
        auto to = e.points_to();
        os << (to == e.a ? e.b : e.a) << " -> " << to << '\n';
    }
    return os.str();
}

bool FlipNetwork::operator==(const FlipNetwork& o) const {
    if (state_ != o.state_ || edges_.size() != o.edges_.size()) return false;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].a != o.edges_[i].a || edges_[i].b != o.edges_[i].b ||
            edges_[i].toward_larger != o.edges_[i].toward_larger)
            return false;
    return true;
}

FlipNetwork::FlipFn flip_all(std::function<State(std::size_t, State, std::span<const State>)> g) {
    return [g = std::move(g)](const FlipNetwork& net, std::size_t v) {
        std::vector<State> nb;
        for (auto e : net.incident(v)) nb.push_back(net.state(net.other(e, v)));
        return FlipNetwork::Update{g(v, net.state(v), nb), std::vector<bool>(nb.size(), true)};
    };
}

FlipNetwork five_node_network() {
    FlipNetwork n;
    for (int i = 0; i < 5; ++i) n.add_node(1);
    for (std::size_t s = 1; s <= 4; ++s) n.add_edge(0, s, 0);
    n.add_edge(2, 1, 1);
    n.add_edge(2, 4, 4);
    n.add_edge(3, 1, 1);
    n.add_edge(3, 4, 4);
    n.set_flip(flip_all([](std::size_t, State own, std::span<const State> nb) {
        unsigned sum = own;
        for (auto s : nb) sum += s;
        return static_cast<State>(sum % 3);
    }));
    return n;
}

UpdateHistory fan_history(FlipNetwork net, const UpdateSchedule& schedule, std::size_t T) {
    Box box = Box::line(0, static_cast<std::int64_t>(net.nodes()));
    UpdateHistory h(box, net.states());
    auto cur = schedule.start(box);
    std::vector<std::size_t> D, fire;
    for (std::size_t t = 0; t < T; ++t) {
        cur.next(D);
        fire.clear();
        for (auto v : D)
            if (net.applicable(v)) fire.push_back(v);
        net.apply(fire);
        for (auto v : fire) h.record(v, net.state(v));
    }
    return h;
}

namespace {

struct Axes {
    int center = -1;
    std::vector<int> pos, neg;  // neighborhood slot per axis
    std::vector<Cell> unit;
};

Axes axes_of(const RuleTable& rule) {
    Axes a;
    a.center = rule.center_index();
    std::vector<Cell> units = rule.dimension() == 1 ? std::vector<Cell>{{1, 0}} : std::vector<Cell>{{1, 0}, {0, 1}};
    const auto& N = rule.neighborhood();
    if (N.size() != 2 * units.size() + 1 || a.center < 0)
        throw IneligibleRule("dual FAN needs the first-neighbors or von Neumann neighborhood");
    for (auto u : units) {
        auto p = std::find(N.begin(), N.end(), u);
        auto m = std::find(N.begin(), N.end(), Cell{0, 0} - u);
        if (p == N.end() || m == N.end())
            throw IneligibleRule("dual FAN needs the first-neighbors or von Neumann neighborhood");
        a.pos.push_back(static_cast<int>(p - N.begin()));
        a.neg.push_back(static_cast<int>(m - N.begin()));
        a.unit.push_back(u);
    }
    return a;
}

}  // namespace

G3 build_g3(const RuleTable& rule) {
    auto ax = axes_of(rule);
    G3 g;
    g.axes = static_cast<int>(ax.unit.size());
    g.states = rule.states();
    auto q = static_cast<std::size_t>(rule.states());
    // [axis][s][copy]: bit 1 copy -> S, bit 2 S -> copy
    std::vector<std::vector<std::vector<int>>> want(ax.unit.size(),
                                                    std::vector<std::vector<int>>(q, std::vector<int>(q, 0)));
    for (std::size_t idx = 0; idx < rule.table_size(); ++idx) {
        auto t = rule.tuple_of(idx);
        State s = t[static_cast<std::size_t>(ax.center)];
        if (rule.at(idx) == s) continue;
        for (std::size_t k = 0; k < ax.unit.size(); ++k) {
            // edge from s to its +axis neighbor points at s
            want[k][s][t[static_cast<std::size_t>(ax.pos[k])]] |= 1;
            // edge from the -axis neighbor to s points at s
            want[k][t[static_cast<std::size_t>(ax.neg[k])]][s] |= 2;
        }
    }
    for (std::size_t k = 0; k < ax.unit.size(); ++k)
        for (State s = 0; s < q; ++s)
            for (State c = 0; c < q; ++c) {
                int w = want[k][s][c];
                G3::Arc arc{static_cast<int>(k), s, c, !(w & 1)};
                g.arcs.push_back(arc);
                if (w == 3) {
                    G3::Arc lost = arc;
                    lost.s_to_copy = true;
                    g.conflicts.emplace_back(arc, lost);
                }
            }
    return g;
}

DualFanAssignment build_dual_fan(const RuleTable& rule) {
    axes_of(rule);
    auto v = check_no_adjacent_active(rule);
    if (!v.holds)
        throw IneligibleRule("two neighboring cells can be active together: " +
                             (v.witness ? v.witness->describe() : std::string("?")));
    DualFanAssignment a;
    a.provenance = build_g3(rule);
    if (!a.provenance.conflicts.empty()) throw IneligibleRule("G3 has a bidirectional pair");
    a.axes = a.provenance.axes;
    a.states = a.provenance.states;
    auto q = static_cast<std::size_t>(a.states);
    a.points_up.assign(static_cast<std::size_t>(a.axes), std::vector<std::vector<bool>>(q, std::vector<bool>(q, true)));
    for (auto& arc : a.provenance.arcs)
        a.points_up[static_cast<std::size_t>(arc.axis)][arc.s][arc.copy] = arc.s_to_copy;
    return a;
}

FlipNetwork project(const RuleTable& rule, const DualFanAssignment& fan, const Window& w, bool periodic) {
    auto ax = axes_of(rule);
    const Box& box = w.box();
    FlipNetwork net;
    for (std::size_t i = 0; i < w.size(); ++i) net.add_node(w.at(i));
    // per node: incident edge slot -> (axis, node is the lower end)
    for (std::size_t i = 0; i < w.size(); ++i) {
        Cell c = box.cell(i);
        for (std::size_t k = 0; k < ax.unit.size(); ++k) {
            Cell d = c + ax.unit[k];
            if (!box.contains(d)) {
                if (!periodic) continue;
                d = {box.x0 + ((d.x - box.x0) % box.w), box.y0 + ((d.y - box.y0) % box.h)};
            }
            std::size_t j = box.index(d);
            if (j == i) continue;
            bool up = fan.toward_positive(static_cast<int>(k), w.at(i), w.at(j));
            net.add_edge(i, j, up ? j : i);
        }
    }
    // Incident edges in rule-slot order for the flip function.
    std::vector<std::vector<std::pair<std::size_t, bool>>> role(w.size());  // (axis, lower)
    for (std::size_t v = 0; v < net.nodes(); ++v)
        for (auto e : net.incident(v)) {
            auto o = net.other(e, v);
            Cell c = box.cell(v), d = box.cell(o);
            std::size_t axis = 0;
            bool lower = true;
            for (std::size_t k = 0; k < ax.unit.size(); ++k) {
                Cell up = c + ax.unit[k];
                Cell upw{box.x0 + ((up.x - box.x0) % box.w + box.w) % box.w,
                         box.y0 + ((up.y - box.y0) % box.h + box.h) % box.h};
                if (upw == d) { axis = k; lower = true; break; }
                Cell dn = c - ax.unit[k];
                Cell dnw{box.x0 + ((dn.x - box.x0) % box.w + box.w) % box.w,
                         box.y0 + ((dn.y - box.y0) % box.h + box.h) % box.h};
                if (dnw == d) { axis = k; lower = false; break; }
            }
            role[v].emplace_back(axis, lower);
        }
    net.set_flip([rule, fan, role, ax](const FlipNetwork& n, std::size_t v) {
        std::vector<State> t(rule.arity(), n.state(v));
        const auto& inc = n.incident(v);
        for (std::size_t k = 0; k < inc.size(); ++k) {
            auto [axis, lower] = role[v][k];
            t[static_cast<std::size_t>(lower ? ax.pos[axis] : ax.neg[axis])] = n.state(n.other(inc[k], v));
        }
        State s = rule(t);
        FlipNetwork::Update u{s, std::vector<bool>(inc.size(), false)};
        for (std::size_t k = 0; k < inc.size(); ++k) {
            auto [axis, lower] = role[v][k];
            State o = n.state(n.other(inc[k], v));
            int a = static_cast<int>(axis);
            bool before = lower ? fan.toward_positive(a, n.state(v), o) : fan.toward_positive(a, o, n.state(v));
            bool after = lower ? fan.toward_positive(a, s, o) : fan.toward_positive(a, o, s);
            u.flip[k] = before != after;
        }
        return u;
    });
    return net;
}

DualityReport check_duality(const RuleTable& rule, const DualFanAssignment& fan, const Configuration& c0,
                            const Box& box, const UpdateSchedule& schedule, std::size_t T) {
    DualityReport r;
    Window w(rule, c0, box, Boundary::periodic());
    auto net = project(rule, fan, w, true);
    auto cur = schedule.start(box);
    std::vector<std::size_t> D, fire;
    for (std::size_t t = 0; t < T; ++t) {
        cur.next(D);
        fire.clear();
        for (auto i : D) {
            bool act = w.active(i);
            bool app = net.applicable(i);
            if (act && !app) {
                r.commutes = false;
                r.failure = "active cell " + std::to_string(i) + " not applicable at step " + std::to_string(t);
                return r;
            }
            if (app) fire.push_back(i);
        }
        w.apply(D);
        net.apply(fire);
        auto expect = project(rule, fan, w, true);
        if (!(expect == net)) {
            r.commutes = false;
            r.failure = "projection differs after step " + std::to_string(t);
            return r;
        }
        ++r.steps;
    }
    return r;
}

}  // namespace acaforge
