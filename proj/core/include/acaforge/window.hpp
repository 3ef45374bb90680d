#pragma once

#include <span>
#include <unordered_map>

#include "acaforge/config.hpp"

namespace acaforge {

/// Finite active region [x0, x0+w) x [y0, y0+h).
struct Box {
    std::int64_t x0 = 0, y0 = 0;
    std::int64_t w = 1, h = 1;

    static Box line(std::int64_t x0, std::int64_t w) { return {x0, 0, w, 1}; }
    std::size_t size() const { return static_cast<std::size_t>(w * h); }
    bool contains(Cell c) const { return c.x >= x0 && c.x < x0 + w && c.y >= y0 && c.y < y0 + h; }
    std::size_t index(Cell c) const { return static_cast<std::size_t>((c.y - y0) * w + (c.x - x0)); }
    Cell cell(std::size_t i) const {
        auto ii = static_cast<std::int64_t>(i);
        return {x0 + ii % w, y0 + ii / w};
    }
    bool operator==(const Box&) const = default;
};

enum class Edge { Frozen, Wrap, Repeat };

/// What a neighbor outside the box reads. Frozen reads the initial
/// configuration; Wrap is a torus on that axis; Repeat copies the cell one
/// or more periods back inside the box on that side.
struct AxisBoundary {
    Edge lo = Edge::Frozen;
    Edge hi = Edge::Frozen;
    std::int64_t lo_period = 0;
    std::int64_t hi_period = 0;
};

struct Boundary {
    AxisBoundary x, y;
    static Boundary frozen() { return {}; }
    static Boundary periodic() { return {{Edge::Wrap, Edge::Wrap}, {Edge::Wrap, Edge::Wrap}}; }
};

/// Dense simulation grid with a halo. Not thread safe; one per run.
class Window {
public:
    Window(const RuleTable& rule, const Configuration& c0, Box box, Boundary b = Boundary::frozen());

    const Box& box() const { return box_; }
    const RuleTable& rule() const { return rule_; }
    std::size_t size() const { return box_.size(); }

    State at(std::size_t i) const { return cells_[pad_[i]]; }
    State at(Cell c) const;
    void set(std::size_t i, State s);

    State next_value(std::size_t i) const { return rule_.at(table_index(i)); }
    bool active(std::size_t i) const { return next_value(i) != at(i); }

    /// G_D: all reads happen before any write. Duplicate entries are harmless.
    void apply(std::span<const std::size_t> D);
    /// Applies D and reports cells whose value changed.
    void apply(std::span<const std::size_t> D, std::vector<std::size_t>& changed);

    /// Interior cells whose neighborhood reads cell i (including through the halo).
    const std::vector<std::size_t>& dependents(std::size_t i) const { return deps_[i]; }

    std::vector<State> snapshot() const;
    void load(std::span<const State> values);
    Configuration to_configuration() const;
    std::vector<std::size_t> active_cells() const;

    std::size_t table_index(std::size_t i) const {
        std::size_t idx = 0;
        std::size_t p = pad_[i];
        for (auto off : lin_) idx = idx * q_ + cells_[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + off)];
        return idx;
    }

private:
    RuleTable rule_;
    Configuration c0_;
    Box box_;
    std::size_t q_;
    std::int64_t rx_, ry_, pw_, ph_;
    std::vector<State> cells_;
    std::vector<std::size_t> pad_;
    std::vector<std::ptrdiff_t> lin_;
    std::unordered_map<std::size_t, std::vector<std::size_t>> images_;
    std::vector<std::vector<std::size_t>> deps_;
    std::vector<State> scratch_;
};

}  // namespace acaforge
