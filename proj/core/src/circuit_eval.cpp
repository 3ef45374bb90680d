#include <acaforge/circuits.hpp>
#include <acaforge/parallel.hpp>
#include <acaforge/window.hpp>

#include <random>
#include <set>

namespace acaforge {

ActivePolicy ActivePolicy::sweep(SweepOrder o) {
    ActivePolicy p;
    p.kind = Kind::Sweep;
    p.order = o;
    return p;
}

ActivePolicy ActivePolicy::fair_random(std::uint64_t seed, double density, std::size_t window) {
    if (!(density > 0.0 && density <= 1.0)) throw Error("density must lie in (0, 1]");
    if (window == 0) throw Error("fairness window must be positive");
    ActivePolicy p;
    p.kind = Kind::FairRandom;
    p.seed = seed;
    p.density = density;
    p.window = window;
    return p;
}

std::string ActivePolicy::describe() const {
    if (kind == Kind::Sweep) return std::string("sweep(") + to_string(order) + ")";
    return "fair-random(seed=" + std::to_string(seed) + ", density=" + std::to_string(density) +
           ", window=" + std::to_string(window) + ")";
}

std::vector<ActivePolicy> standard_policies(std::size_t randoms, std::uint64_t seed) {
    std::vector<ActivePolicy> v;
    for (auto o : {SweepOrder::LeftToRight, SweepOrder::RightToLeft, SweepOrder::BottomToTop, SweepOrder::TopToBottom})
        v.push_back(ActivePolicy::sweep(o));
    static constexpr double densities[] = {0.05, 0.25, 0.5, 0.9};
    for (std::size_t i = 0; i < randoms; ++i)
        v.push_back(ActivePolicy::fair_random(seed + i, densities[i % 4], 4 + 4 * (i % 5)));
    return v;
}

namespace {

const RuleTable& rule_x() {
    static const RuleTable r = build_rule_x();
    return r;
}

std::vector<State> injected(const PlacedCircuit& p, const std::vector<bool>& inject) {
    if (inject.size() != p.input_cells.size())
        throw CircuitError("expected " + std::to_string(p.input_cells.size()) + " input tracks, got " +
                           std::to_string(inject.size()));
    auto g = p.grid;
    for (std::size_t k = 0; k < inject.size(); ++k)
        if (inject[k]) {
            auto i = p.box.index(p.input_cells[k]);
            g[i] = static_cast<State>(3 - g[i]);
        }
    return g;
}

void finish(const PlacedCircuit& p, const std::vector<std::uint32_t>& flips, TrackRun& run) {
    const Box& b = p.box;
    for (std::size_t i = 0; i < flips.size(); ++i)
        if (flips[i] > 1) {
            Cell c = b.cell(i);
            run.violations.push_back("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") flipped " +
                                     std::to_string(flips[i]) + " times");
        }
    for (const auto& g : p.gates) {
        if (g.kind != GateKind::Merge && g.kind != GateKind::Cross) continue;
        std::size_t hit = 0;
        for (auto a : g.input_arms) hit += flips[b.index(a)] > 0;
        if (hit > 1)
            run.violations.push_back(std::string(to_string(g.kind)) + " #" + std::to_string(g.id) +
                                     " received signals on both inputs");
    }
    for (auto c : p.output_cells) run.fired.push_back(flips[b.index(c)] > 0);
}

}  // namespace

TrackRun run_tracks(const PlacedCircuit& p, const std::vector<bool>& inject, const ActivePolicy& policy,
                    std::size_t budget) {
    const RuleTable& rx = rule_x();
    const Box& b = p.box;
    const auto W = static_cast<std::size_t>(b.w), H = static_cast<std::size_t>(b.h);
    auto g = injected(p, inject);
    if (budget == 0) budget = 50 * p.live_cells();

    auto next = [&](std::size_t i) {
        std::size_t x = i % W, y = i / W;
        std::size_t e = x + 1 < W ? g[i + 1] : 0, n = y + 1 < H ? g[i + W] : 0;
        std::size_t w = x > 0 ? g[i - 1] : 0, s = y > 0 ? g[i - W] : 0;
        return rx.at((((e * 3 + n) * 3 + g[i]) * 3 + w) * 3 + s);
    };
    auto rank = [&](std::size_t i) -> std::size_t {
        std::size_t x = i % W, y = i / W;
        switch (policy.order) {
            case SweepOrder::LeftToRight: return x * H + y;
            case SweepOrder::RightToLeft: return (W - 1 - x) * H + (H - 1 - y);
            case SweepOrder::BottomToTop: return y * W + x;
            case SweepOrder::TopToBottom: return (H - 1 - y) * W + (W - 1 - x);
        }
        return i;
    };
    auto unrank = [&](std::size_t r) -> std::size_t {
        switch (policy.order) {
            case SweepOrder::LeftToRight: return (r % H) * W + r / H;
            case SweepOrder::RightToLeft: return (H - 1 - r % H) * W + (W - 1 - r / H);
            case SweepOrder::BottomToTop: return r;
            case SweepOrder::TopToBottom: return (H - 1 - r / W) * W + (W - 1 - r % W);
        }
        return r;
    };

    const bool sweep = policy.kind == ActivePolicy::Kind::Sweep;
    std::set<std::size_t> ranked;
    std::vector<std::size_t> list;
    std::vector<std::int64_t> pos(g.size(), -1);
    std::vector<std::size_t> since(g.size(), 0);
    std::size_t t = 0;

    auto refresh = [&](std::size_t i) {
        bool a = next(i) != g[i];
        if (sweep) {
            if (a)
                ranked.insert(rank(i));
            else
                ranked.erase(rank(i));
            return;
        }
        if (a && pos[i] < 0) {
            pos[i] = static_cast<std::int64_t>(list.size());
            list.push_back(i);
            since[i] = t;
        } else if (!a && pos[i] >= 0) {
            auto last = list.back();
            list[static_cast<std::size_t>(pos[i])] = last;
            pos[last] = pos[i];
            list.pop_back();
            pos[i] = -1;
        }
    };
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] != 0 || (i % W + 1 < W && g[i + 1]) || (i % W > 0 && g[i - 1]) || (i + W < g.size() && g[i + W]) ||
            (i >= W && g[i - W]))
            refresh(i);

    std::mt19937_64 rng(policy.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<std::uint32_t> flips(g.size(), 0);
    std::vector<std::size_t> D;
    std::vector<State> nv;
    std::size_t cursor = 0;
    TrackRun run;

    while (sweep ? !ranked.empty() : !list.empty()) {
        if (t >= budget) break;
        D.clear();
        if (sweep) {
            auto it = ranked.lower_bound(cursor);
            if (it == ranked.end()) it = ranked.begin();
            D.push_back(unrank(*it));
            cursor = *it + 1;
        } else {
            for (auto i : list)
                if (t - since[i] >= policy.window || U(rng) < policy.density) D.push_back(i);
            if (D.empty()) D.push_back(list[std::uniform_int_distribution<std::size_t>(0, list.size() - 1)(rng)]);
        }
        nv.clear();
        for (auto i : D) nv.push_back(next(i));
        for (std::size_t k = 0; k < D.size(); ++k)
            if (nv[k] != g[D[k]]) {
                g[D[k]] = nv[k];
                ++flips[D[k]];
                ++run.flips;
            }
        ++t;
        for (auto i : D) {
            refresh(i);
            if (i % W + 1 < W) refresh(i + 1);
            if (i % W > 0) refresh(i - 1);
            if (i + W < g.size()) refresh(i + W);
            if (i >= W) refresh(i - W);
        }
    }
    run.steps = t;
    run.quiescent = sweep ? ranked.empty() : list.empty();
    finish(p, flips, run);
    return run;
}

TrackRun run_tracks_engine(const PlacedCircuit& p, const std::vector<bool>& inject, const UpdateSchedule& schedule,
                           std::size_t budget) {
    auto g = injected(p, inject);
    auto c0 = Configuration::zeros(2);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] != 0) c0.set(p.box.cell(i), g[i]);
    Window w(rule_x(), c0, p.box, Boundary::frozen());
    if (budget == 0) budget = p.box.size() * (p.live_cells() + 1);

    std::vector<char> active(w.size(), 0);
    std::size_t n_active = 0;
    for (auto i : w.active_cells()) {
        active[i] = 1;
        ++n_active;
    }
    auto cur = schedule.start(p.box);
    std::vector<std::size_t> D, changed;
    std::vector<std::uint32_t> flips(w.size(), 0);
    TrackRun run;
    std::size_t t = 0;
    while (n_active > 0 && t < budget) {
        cur.next(D);
        w.apply(D, changed);
        ++t;
        for (auto i : changed) {
            ++flips[i];
            ++run.flips;
        }
        auto touch = [&](std::size_t i) {
            char a = w.active(i) ? 1 : 0;
            if (a != active[i]) {
                n_active = a ? n_active + 1 : n_active - 1;
                active[i] = a;
            }
        };
        for (auto i : changed) {
            touch(i);
            for (auto d : w.dependents(i)) touch(d);
        }
    }
    run.steps = t;
    run.quiescent = n_active == 0;
    finish(p, flips, run);
    return run;
}

CircuitEvaluation evaluate_circuit(const PlacedCircuit& placed, const std::vector<bool>& inputs,
                                   const std::vector<ActivePolicy>& policies) {
    const auto& net = placed.netlist;
    if (!net.dual_rail) throw CircuitError("evaluate_circuit needs a dual-rail netlist");
    if (inputs.size() != net.inputs.size())
        throw CircuitError("expected " + std::to_string(net.inputs.size()) + " inputs, got " +
                           std::to_string(inputs.size()));
    if (policies.empty()) throw CircuitError("no schedules given");
    std::vector<bool> inject;
    for (bool v : inputs) {
        inject.push_back(v);
        inject.push_back(!v);
    }
    std::vector<std::vector<bool>> decoded(policies.size());
    std::vector<std::size_t> steps(policies.size(), 0);
    parallel_for(policies.size(), [&](std::size_t k) {
        auto run = run_tracks(placed, inject, policies[k]);
        const std::string who = " under " + policies[k].describe();
        if (!run.violations.empty()) throw CircuitError(run.violations.front() + who);
        if (!run.quiescent) throw CircuitTimeout("step budget exhausted" + who);
        std::vector<bool> out;
        for (std::size_t j = 0; j < net.outputs.size(); ++j) {
            bool t = run.fired[2 * j], f = run.fired[2 * j + 1];
            if (t && f) throw CircuitError("output " + net.outputs[j] + " fired both rails" + who);
            if (!t && !f) throw CircuitError("output " + net.outputs[j] + " never fired" + who);
            out.push_back(t);
        }
        decoded[k] = out;
        steps[k] = run.steps;
    });
    for (std::size_t k = 1; k < decoded.size(); ++k)
        if (decoded[k] != decoded[0])
            throw CircuitError("schedules disagree: " + policies[0].describe() + " vs " + policies[k].describe());
    CircuitEvaluation e;
    e.outputs = decoded[0];
    e.runs = policies.size();
    for (auto s : steps) e.max_steps = std::max(e.max_steps, s);
    return e;
}

}  // namespace acaforge
