#include "acaforge/engine.hpp"

#include <algorithm>

namespace acaforge {

Domain Domain::covering(const RuleTable& rule, const Configuration& c0, std::size_t T) {
    auto e = c0.extent();
    auto mx = rule.radius_x() * static_cast<std::int64_t>(T) + rule.radius_x();
    auto my = rule.radius_y() * static_cast<std::int64_t>(T) + rule.radius_y();
    Box b{e[0][0] - mx, e[1][0] - my, e[0][1] - e[0][0] + 1 + 2 * mx, e[1][1] - e[1][0] + 1 + 2 * my};
    if (rule.dimension() == 1) b.y0 = 0, b.h = 1;
    return {b, Boundary::frozen()};
}

Configuration SpaceTime::configuration(std::size_t t) const {
    Configuration c = initial;
    const auto& f = frames.at(t);
    for (std::size_t i = 0; i < f.size(); ++i) c.set(box.cell(i), f[i]);
    return c;
}

UpdateHistory::UpdateHistory(Box box, std::span<const State> initial) : box_(box) {
    seq_.reserve(initial.size());
    for (State s : initial) seq_.push_back({s});
}

std::optional<State> UpdateHistory::at(Cell c, std::size_t depth) const {
    if (!box_.contains(c)) return std::nullopt;
    const auto& v = seq_[box_.index(c)];
    if (depth >= v.size()) return std::nullopt;
    return v[depth];
}

std::size_t UpdateHistory::min_depth() const {
    std::size_t m = SIZE_MAX;
    for (const auto& v : seq_) m = std::min(m, v.size() - 1);
    return seq_.empty() ? 0 : m;
}

std::size_t UpdateHistory::max_depth() const {
    std::size_t m = 0;
    for (const auto& v : seq_) m = std::max(m, v.size() - 1);
    return m;
}

std::optional<std::pair<Cell, std::size_t>> UpdateHistory::first_disagreement(const UpdateHistory& o) const {
    if (!(box_ == o.box_)) return std::pair{box_.cell(0), std::size_t{0}};
    for (std::size_t i = 0; i < seq_.size(); ++i) {
        const auto &a = seq_[i], &b = o.seq_[i];
        std::size_t n = std::min(a.size(), b.size());
        for (std::size_t d = 0; d < n; ++d)
            if (a[d] != b[d]) return std::pair{box_.cell(i), d};
    }
    return std::nullopt;
}

namespace {
State local_value(const RuleTable& rule, const Configuration& c, Cell i) {
    std::size_t idx = 0;
    for (const Cell& n : rule.neighborhood()) idx = idx * static_cast<std::size_t>(rule.states()) + c.at(i + n);
    return rule.at(idx);
}
}  // namespace

Configuration apply_update_set(const RuleTable& rule, const Configuration& c, std::span<const Cell> D) {
    c.validate(rule.states());
    Configuration out = c;
    for (const Cell& i : D) {
        if (rule.dimension() == 1 && i.y != 0) throw InvalidConfiguration("1D update set with y != 0");
        out.set(i, local_value(rule, c, i));
    }
    return out;
}

UpdateHistory record_history(Window& w, ScheduleCursor& cursor, std::size_t T) {
    UpdateHistory h(w.box(), w.snapshot());
    std::vector<std::size_t> D, changed;
    for (std::size_t t = 0; t < T; ++t) {
        cursor.next(D);
        w.apply(D, changed);
        for (auto i : changed) h.record(i, w.at(i));
    }
    return h;
}

SpaceTime run_schedule(const RuleTable& rule, const Configuration& c0, const UpdateSchedule& schedule,
                       std::size_t T, std::optional<Domain> domain, RunOptions opt) {
    Domain dom = domain ? *domain : Domain::covering(rule, c0, T);
    for (const auto& [c, s] : c0.overrides())
        if (!dom.box.contains(c)) throw Error("active window does not cover all overrides");
    Window w(rule, c0, dom.box, dom.boundary);
    auto cursor = schedule.start(dom.box);
    if (opt.assert_fair) cursor.require_fair();
    SpaceTime st{dom.box, c0, {}, schedule.describe()};
    st.frames.reserve(T + 1);
    st.frames.push_back(w.snapshot());
    std::vector<std::size_t> D;
    for (std::size_t t = 0; t < T; ++t) {
        cursor.next(D);
        w.apply(D);
        st.frames.push_back(w.snapshot());
    }
    return st;
}

UpdateHistory extract_history(const RuleTable& rule, const Configuration& c0, const UpdateSchedule& schedule,
                              std::size_t T, std::optional<Domain> domain, RunOptions opt) {
    Domain dom = domain ? *domain : Domain::covering(rule, c0, T);
    for (const auto& [c, s] : c0.overrides())
        if (!dom.box.contains(c)) throw Error("active window does not cover all overrides");
    Window w(rule, c0, dom.box, dom.boundary);
    auto cursor = schedule.start(dom.box);
    if (opt.assert_fair) cursor.require_fair();
    return record_history(w, cursor, T);
}

std::vector<Cell> active_cells(const RuleTable& rule, const Configuration& c, const Box& within) {
    c.validate(rule.states());
    std::vector<Cell> out;
    for (std::size_t k = 0; k < within.size(); ++k) {
        Cell i = within.cell(k);
        if (local_value(rule, c, i) != c.at(i)) out.push_back(i);
    }
    return out;
}

std::vector<Cell> active_cells(const RuleTable& rule, const Configuration& c) {
    auto e = c.extent();
    Box b{e[0][0] - rule.radius_x(), e[1][0] - rule.radius_y(), e[0][1] - e[0][0] + 1 + 2 * rule.radius_x(),
          e[1][1] - e[1][0] + 1 + 2 * rule.radius_y()};
    if (rule.dimension() == 1) b.y0 = 0, b.h = 1;
    return active_cells(rule, c, b);
}

bool background_active(const RuleTable& rule, const Background& bg) {
    return !active_cells(rule, Configuration(bg)).empty();
}

std::optional<std::size_t> detect_pattern(const UpdateHistory& h, const HaltingPattern& p) {
    if (p.entries.empty()) return std::nullopt;
    std::size_t horizon = h.max_depth();
    for (std::size_t delta = 0; delta <= horizon; ++delta) {
        bool ok = true;
        for (const auto& e : p.entries) {
            auto v = h.at(e.cell, e.depth + delta);
            if (!v || *v != e.state) {
                ok = false;
                break;
            }
        }
        if (ok) return delta;
    }
    return std::nullopt;
}

DepthRun run_to_depth(Window& w, ScheduleCursor& cursor, std::size_t depth, std::size_t max_steps,
                      std::span<const std::size_t> targets) {
    DepthRun r{UpdateHistory(w.box(), w.snapshot()), 0, false};
    std::vector<char> is_target(w.size(), targets.empty() ? 1 : 0);
    for (auto i : targets) is_target[i] = 1;
    std::size_t need = targets.empty() ? w.size() : targets.size();
    std::size_t done = 0;
    if (depth == 0) {
        r.reached = true;
        return r;
    }
    std::vector<std::size_t> D, changed;
    while (r.steps < max_steps) {
        cursor.next(D);
        w.apply(D, changed);
        ++r.steps;
        for (auto i : changed) {
            r.history.record(i, w.at(i));
            if (is_target[i] && r.history.depth(i) == depth) ++done;
        }
        if (done == need) {
            r.reached = true;
            break;
        }
    }
    return r;
}

}  // namespace acaforge
