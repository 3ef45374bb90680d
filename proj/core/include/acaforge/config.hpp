#pragma once

#include <array>
#include <map>
#include <vector>

#include "acaforge/rule.hpp"

namespace acaforge {

/// Periodic continuation on one axis. Inside [lo, hi] values are explicit;
/// beyond hi they repeat with period hi_period, below lo with lo_period.
struct AxisTiling {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t lo_period = 1;
    std::int64_t hi_period = 1;

    std::int64_t reduce(std::int64_t i) const;
    std::int64_t core_lo() const { return lo - lo_period; }
    std::int64_t core_hi() const { return hi + hi_period; }
    std::int64_t core_len() const { return core_hi() - core_lo() + 1; }
    bool operator==(const AxisTiling&) const = default;
};

/// Ultimately periodic background: a finite core plus per-axis periodic tails.
class Background {
public:
    Background() : Background(uniform(1, 0)) {}

    static Background uniform(int dimension, State s);
    /// Symmetric threshold k with one period per axis; core(cell) supplies
    /// values for |i_j| <= k + r_j.
    static Background symmetric(int dimension, std::int64_t k, std::array<std::int64_t, 2> periods,
                                const std::function<State(Cell)>& core);
    /// ... p_L p_L | p_R p_R ... with p_R starting at cell `split`.
    static Background two_sided(const std::vector<State>& p_left, const std::vector<State>& p_right,
                                std::int64_t split = 0);
    /// General form: explicit tilings per axis, values from `core` over the
    /// core range of each axis.
    static Background tiled(int dimension, std::array<AxisTiling, 2> axes, const std::function<State(Cell)>& core);
    /// A 1D word repeated forever in both directions, word[0] at cell 0.
    static Background periodic_1d(const std::vector<State>& word);
    /// w x h torus tile, values row-major with (0,0) first.
    static Background periodic_2d(std::int64_t w, std::int64_t h, const std::vector<State>& values);

    int dimension() const { return dim_; }
    State at(Cell c) const;
    const AxisTiling& axis(int a) const { return axes_[static_cast<std::size_t>(a)]; }
    State max_state() const;

    bool operator==(const Background& o) const {
        return dim_ == o.dim_ && axes_ == o.axes_ && core_ == o.core_;
    }

private:
    Background(int dim, std::array<AxisTiling, 2> axes, std::vector<State> core)
        : dim_(dim), axes_(axes), core_(std::move(core)) {}
    std::size_t core_index(Cell reduced) const;

    int dim_ = 1;
    std::array<AxisTiling, 2> axes_{};
    std::vector<State> core_;
};

/// Background plus a finite set of overrides. Overrides equal to the
/// background are dropped, so equality is representation independent.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(Background bg) : bg_(std::move(bg)) {}

    static Configuration zeros(int dimension) { return Configuration(Background::uniform(dimension, 0)); }
    /// 1D word on a zero background with word[0] at cell `origin`.
    static Configuration from_word(const std::vector<State>& word, std::int64_t origin = 0,
                                   State background = 0);

    int dimension() const { return bg_.dimension(); }
    const Background& background() const { return bg_; }
    const std::map<Cell, State>& overrides() const { return ov_; }

    State at(Cell c) const;
    void set(Cell c, State s);

    /// Throws InvalidConfiguration if any stored state is >= q.
    void validate(int q) const;

    /// Axis-aligned hull of threshold regions and overrides, per axis [lo, hi].
    std::array<std::array<std::int64_t, 2>, 2> extent() const;

    bool operator==(const Configuration& o) const;

private:
    Background bg_;
    std::map<Cell, State> ov_;
};

}  // namespace acaforge
