#include "acaforge/oneway.hpp"

#include <map>

namespace acaforge {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

void require_one_way(const RuleTable& rule) {
    if (rule.dimension() != 1 || rule.neighborhood() != nbhd::one_way())
        throw InvalidConfiguration("rule must use the one-way neighborhood (-1, 0)");
}

State apply2(const RuleTable& rule, State left, State c) {
    std::array<State, 2> t{left, c};
    return rule(t);
}

}  // namespace

PfTrace pseudo_fixed_point_trace(const RuleTable& rule, State left, State s) {
    require_one_way(rule);
    std::vector<bool> seen(static_cast<std::size_t>(rule.states()), false);
    PfTrace t;
    State cur = s;
    while (!seen[cur]) {
        seen[cur] = true;
        cur = apply2(rule, left, cur);
        ++t.iterations;
    }
    t.value = cur;
    return t;
}

State pseudo_fixed_point(const RuleTable& rule, State left, State s) {
    return pseudo_fixed_point_trace(rule, left, s).value;
}

std::vector<State> SemiAutomaton::trace(State start, std::span<const State> word) const {
    std::vector<State> out;
    State x = start;
    for (auto s : word) {
        x = step(x, s);
        out.push_back(x);
    }
    return out;
}

void OneWayInstance::validate() const {
    require_one_way(rule);
    if (p_left.empty() || p_right.empty()) throw InvalidConfiguration("periodic words must be non-empty");
    auto check = [&](const std::vector<State>& w) {
        for (auto s : w)
            if (s >= rule.states()) throw InvalidConfiguration("state out of range");
    };
    check(p_left);
    check(p_right);
    check(word);
}

Configuration OneWayInstance::c0() const {
    validate();
    auto split = r();
    auto nl = static_cast<std::int64_t>(p_left.size());
    // rotate so that cell l carries the last letter of p_L
    std::vector<State> rot(p_left.size());
    for (std::int64_t k = 0; k < nl; ++k)
        rot[static_cast<std::size_t>(k)] = p_left[static_cast<std::size_t>(floor_mod(k + split - 1, nl))];
    Configuration c(Background::two_sided(rot, p_right, split));
    for (std::size_t i = 0; i < word.size(); ++i) c.set({static_cast<std::int64_t>(i) + 1, 0}, word[i]);
    return c;
}

namespace {

std::int64_t left_width(const OneWayInstance& inst) {
    auto p = static_cast<std::int64_t>(inst.p_left.size());
    std::int64_t pow = 1;
    for (std::int64_t i = 0; i < p; ++i) {
        pow *= inst.rule.states();
        if (pow > (1 << 20)) throw Error("left period too long for an exact left window");
    }
    return p * pow + p;
}

Boundary left_repeat(std::int64_t period) {
    Boundary b;
    b.x.lo = Edge::Repeat;
    b.x.lo_period = period;
    return b;
}

}  // namespace

LeftRegion left_region_pfp(const OneWayInstance& inst) {
    auto c0 = inst.c0();
    LeftRegion lr;
    lr.width = left_width(inst);
    Box box = Box::line(inst.l() - lr.width + 1, lr.width);
    Window w(inst.rule, c0, box, left_repeat(static_cast<std::int64_t>(inst.p_left.size())));
    std::vector<std::size_t> all(w.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::map<std::vector<State>, std::size_t> seen;
    std::vector<State> cell_l;
    for (std::size_t t = 0;; ++t) {
        auto snap = w.snapshot();
        auto [it, fresh] = seen.emplace(snap, t);
        if (!fresh) {
            lr.preperiod = it->second;
            lr.period = t - it->second;
            lr.x_l = cell_l[lr.preperiod];
            return lr;
        }
        cell_l.push_back(snap.back());
        if (t > static_cast<std::size_t>(lr.width) * static_cast<std::size_t>(inst.rule.states()) + 1)
            throw Error("left region did not recur");  // unreachable by pigeonhole
        w.apply(all);
    }
}

AdversarialSchedule build_adversarial_schedule(const OneWayInstance& inst, std::size_t rounds) {
    auto lr = left_region_pfp(inst);
    const auto& rule = inst.rule;
    AdversarialSchedule out;
    std::int64_t wr = 2 * static_cast<std::int64_t>(inst.p_right.size()) + 2;
    Box box{inst.l() - lr.width + 1, 0, lr.width + static_cast<std::int64_t>(inst.word.size()) + wr, 1};
    out.domain = Domain{box, left_repeat(static_cast<std::int64_t>(inst.p_left.size()))};

    out.x.push_back(lr.x_l);
    for (auto s : inst.word) {
        auto t = pseudo_fixed_point_trace(rule, out.x.back(), s);
        out.max_pf_iterations = std::max(out.max_pf_iterations, t.iterations);
        out.x.push_back(t.value);
    }

    Window w(rule, inst.c0(), box, out.domain.boundary);
    std::vector<Cell> left_set, right_set;
    for (std::int64_t x = box.x0; x <= inst.l(); ++x) left_set.push_back({x, 0});
    for (std::int64_t x = inst.r(); x < box.x0 + box.w; ++x) right_set.push_back({x, 0});
    std::vector<std::vector<Cell>> script;
    std::size_t cap = static_cast<std::size_t>(rule.states()) * static_cast<std::size_t>(lr.width) + 1;

    auto step = [&](const std::vector<Cell>& set) {
        std::vector<std::size_t> D;
        for (auto c : set) D.push_back(box.index(c));
        w.apply(D);
        script.push_back(set);
    };
    auto until = [&](const std::vector<Cell>& set, Cell watch, State target) {
        std::size_t n = 0;
        do {
            step(set);
            if (++n > cap) throw Error("until loop exceeded its cap at cell " + std::to_string(watch.x));
        } while (w.at(watch) != target);
    };

    for (std::size_t k = 0; k < rounds; ++k) {
        until(left_set, {inst.l(), 0}, lr.x_l);
        for (std::size_t j = 1; j < out.x.size(); ++j) {
            Cell c{inst.l() + static_cast<std::int64_t>(j), 0};
            until({c}, c, out.x[j]);
        }
        step(right_set);
        out.iteration_ends.push_back(script.size());
    }
    out.schedule = UpdateSchedule::scripted(std::move(script), true);
    return out;
}

SemiAutomaton extract_semiautomaton(const RuleTable& rule, const std::vector<State>& p_right) {
    require_one_way(rule);
    if (p_right.empty()) throw InvalidConfiguration("p_R must be non-empty");
    SemiAutomaton b;
    b.states = rule.states();
    auto q = static_cast<State>(rule.states());
    for (State x = 0; x < q; ++x) {
        for (State s = 0; s < q; ++s) b.delta.push_back(pseudo_fixed_point(rule, x, s));
        b.delta.push_back(pseudo_fixed_point(rule, x, p_right[0]));
    }
    return b;
}

OneWayReport verify_fsm_equivalence(const RuleTable& rule, const std::vector<State>& p_left,
                                    const std::vector<State>& p_right, const std::vector<std::vector<State>>& words) {
    auto b = extract_semiautomaton(rule, p_right);
    OneWayReport rep;
    for (const auto& word : words) {
        ++rep.words;
        OneWayInstance inst{rule, p_left, p_right, word};
        auto adv = build_adversarial_schedule(inst);
        rep.max_pf_iterations = std::max(rep.max_pf_iterations, adv.max_pf_iterations);
        State xl = left_region_pfp(inst).x_l;
        std::vector<State> expect{xl};
        for (auto s : b.trace(xl, word)) expect.push_back(s);
        auto st = run_schedule(rule, inst.c0(), adv.schedule, adv.iteration_ends.back(), adv.domain);
        bool good = true;
        for (auto end : adv.iteration_ends) {
            auto c = st.configuration(end);
            for (std::size_t j = 0; j < expect.size(); ++j)
                if (c.at({inst.l() + static_cast<std::int64_t>(j), 0}) != expect[j]) good = false;
        }
        if (good)
            ++rep.equal;
        else {
            std::string w;
            for (auto s : word) w += std::to_string(s);
            rep.failures.push_back("band differs for word " + w);
        }
    }
    return rep;
}

RuleTable one_way_rule(int states, const std::vector<State>& table) {
    return RuleTable(1, states, nbhd::one_way(), table);
}

}  // namespace acaforge
