#include "acaforge/algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace acaforge {

const char* to_string(OverlapWitness::Kind k) {
    switch (k) {
        case OverlapWitness::Kind::Commutativity: return "commutativity-violation";
        case OverlapWitness::Kind::Monotonicity: return "monotonicity-violation";
        case OverlapWitness::Kind::AdjacentActive: return "adjacent-active-pair";
    }
    return "?";
}

std::string OverlapWitness::describe() const {
    std::ostringstream o;
    auto cell = [&](Cell c) {
        std::ostringstream s;
        s << "(" << c.x << "," << c.y << ")";
        return s.str();
    };
    o << to_string(kind) << " cells " << cell(first) << " " << cell(second);
    if (kind == Kind::Monotonicity) o << " updated " << cell(updated);
    o << " context ";
    for (std::size_t i = 0; i < context.size(); ++i) o << (i ? "," : "") << context[i].second;
    return o.str();
}

Configuration OverlapWitness::as_configuration(int dimension, State background) const {
    Configuration c(Background::uniform(dimension, background));
    for (const auto& [cell, s] : context) c.set(cell, s);
    return c;
}

std::vector<ActiveTransition> active_transitions(const RuleTable& rule) {
    if (rule.center_index() < 0) throw Error("algebra checks need the zero offset in the neighborhood");
    auto ci = static_cast<std::size_t>(rule.center_index());
    std::vector<ActiveTransition> out;
    for (std::size_t i = 0; i < rule.table_size(); ++i) {
        auto t = rule.tuple_of(i);
        if (rule.at(i) != t[ci]) out.push_back({i, std::move(t), rule.at(i)});
    }
    return out;
}

std::vector<Cell> overlap_placements(const RuleTable& rule) {
    std::vector<Cell> d;
    for (const Cell& n : rule.neighborhood()) {
        if (n == Cell{0, 0}) continue;
        d.push_back(n);
        d.push_back(-n);
    }
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
}

namespace {

enum class Mode { Commute, Monotone, Adjacent };

// Pairs an active transition at cell 0 with one at cell d > 0 that agrees on
// the shared cells. Visits pairs in (d, second tuple, first tuple) order and
// stops at the first violation.
std::optional<OverlapWitness> scan(const RuleTable& rule, Mode mode) {
    const auto& N = rule.neighborhood();
    const auto ci = static_cast<std::size_t>(rule.center_index());
    const auto act = active_transitions(rule);
    auto pos = [&](Cell c) -> int {
        auto it = std::find(N.begin(), N.end(), c);
        return it == N.end() ? -1 : static_cast<int>(it - N.begin());
    };
    std::vector<Cell> placements;
    for (Cell d : overlap_placements(rule))
        if (d > Cell{0, 0}) placements.push_back(d);

    for (Cell d : placements) {
        // Shared cells u: u in N and u - d in N.
        std::vector<std::pair<std::size_t, std::size_t>> shared;
        for (std::size_t a = 0; a < N.size(); ++a) {
            int b = pos(N[a] - d);
            if (b >= 0) shared.push_back({a, static_cast<std::size_t>(b)});
        }
        const int second_in_first = pos(d);   // where cell d sits in cell 0's tuple
        const int first_in_second = pos(-d);  // where cell 0 sits in cell d's tuple

        std::map<std::vector<State>, std::vector<const ActiveTransition*>> by_key;
        for (const auto& a : act) {
            std::vector<State> k;
            for (auto [ia, ib] : shared) k.push_back(a.tuple[ia]);
            by_key[k].push_back(&a);
        }
        for (const auto& b : act) {
            std::vector<State> k;
            for (auto [ia, ib] : shared) k.push_back(b.tuple[ib]);
            auto it = by_key.find(k);
            if (it == by_key.end()) continue;
            for (const ActiveTransition* a : it->second) {
                // a at cell 0, b at cell d.
                auto after_second = [&] {
                    auto t = a->tuple;
                    if (second_in_first >= 0) t[static_cast<std::size_t>(second_in_first)] = b.result;
                    return rule(t);
                };
                auto after_first = [&] {
                    auto t = b.tuple;
                    if (first_in_second >= 0) t[static_cast<std::size_t>(first_in_second)] = a->result;
                    return rule(t);
                };
                bool bad = false;
                Cell updated{};
                switch (mode) {
                    case Mode::Adjacent: bad = true; break;
                    case Mode::Commute: bad = after_second() != a->result || after_first() != b.result; break;
                    case Mode::Monotone:
                        if (after_second() == a->tuple[ci]) {
                            bad = true;
                            updated = d;
                        } else if (after_first() == b.tuple[ci]) {
                            bad = true;
                            updated = {0, 0};
                        }
                        break;
                }
                if (!bad) continue;
                OverlapWitness w;
                w.kind = mode == Mode::Commute    ? OverlapWitness::Kind::Commutativity
                         : mode == Mode::Monotone ? OverlapWitness::Kind::Monotonicity
                                                  : OverlapWitness::Kind::AdjacentActive;
                w.first = {0, 0};
                w.second = d;
                w.updated = updated;
                std::map<Cell, State> ctx;
                for (std::size_t i = 0; i < N.size(); ++i) {
                    ctx[N[i]] = a->tuple[i];
                    ctx[N[i] + d] = b.tuple[i];
                }
                w.context.assign(ctx.begin(), ctx.end());
                return w;
            }
        }
    }
    return std::nullopt;
}

Verdict verdict(std::optional<OverlapWitness> w) { return {!w.has_value(), std::move(w)}; }

}  // namespace

Verdict check_commutativity(const RuleTable& rule) { return verdict(scan(rule, Mode::Commute)); }
Verdict check_monotonicity(const RuleTable& rule) { return verdict(scan(rule, Mode::Monotone)); }
Verdict check_no_adjacent_active(const RuleTable& rule) { return verdict(scan(rule, Mode::Adjacent)); }

}  // namespace acaforge
