#include "acaforge/config.hpp"

#include <algorithm>
#include <numeric>

namespace acaforge {

namespace {
std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}
}  // namespace

std::int64_t AxisTiling::reduce(std::int64_t i) const {
    if (i > hi) return hi + 1 + floor_mod(i - hi - 1, hi_period);
    if (i < lo) return lo - 1 - floor_mod(lo - 1 - i, lo_period);
    return i;
}

Background Background::uniform(int dimension, State s) {
    if (dimension != 1 && dimension != 2) throw Error("dimension must be 1 or 2");
    std::array<AxisTiling, 2> axes{AxisTiling{0, 0, 1, 1}, AxisTiling{0, 0, 1, 1}};
    std::size_t n = dimension == 2 ? 9 : 3;
    return Background(dimension, axes, std::vector<State>(n, s));
}

Background Background::symmetric(int dimension, std::int64_t k, std::array<std::int64_t, 2> periods,
                                 const std::function<State(Cell)>& core) {
    if (k < 0 || periods[0] < 1 || periods[1] < 1) throw Error("bad background threshold or period");
    return tiled(dimension, {AxisTiling{-k, k, periods[0], periods[0]}, AxisTiling{-k, k, periods[1], periods[1]}},
                 core);
}

Background Background::tiled(int dimension, std::array<AxisTiling, 2> axes,
                              const std::function<State(Cell)>& core) {
    if (dimension != 1 && dimension != 2) throw Error("dimension must be 1 or 2");
    for (int a = 0; a < dimension; ++a) {
        const auto& t = axes[static_cast<std::size_t>(a)];
        if (t.lo > t.hi || t.lo_period < 1 || t.hi_period < 1) throw Error("bad axis tiling");
    }
    if (dimension == 1) axes[1] = AxisTiling{0, 0, 1, 1};
    Background b(dimension, axes, {});
    std::int64_t nx = axes[0].core_len();
    std::int64_t ny = dimension == 2 ? axes[1].core_len() : 1;
    b.core_.resize(static_cast<std::size_t>(nx * ny));
    for (std::int64_t y = 0; y < ny; ++y)
        for (std::int64_t x = 0; x < nx; ++x) {
            Cell c{axes[0].core_lo() + x, dimension == 2 ? axes[1].core_lo() + y : 0};
            b.core_[static_cast<std::size_t>(y * nx + x)] = core(c);
        }
    return b;
}

Background Background::two_sided(const std::vector<State>& p_left, const std::vector<State>& p_right,
                                 std::int64_t split) {
    if (p_left.empty() || p_right.empty()) throw Error("periodic words must be non-empty");
    auto nl = static_cast<std::int64_t>(p_left.size());
    auto nr = static_cast<std::int64_t>(p_right.size());
    AxisTiling ax{split - nl, split + nr - 1, nl, nr};
    std::array<AxisTiling, 2> axes{ax, AxisTiling{0, 0, 1, 1}};
    Background b(1, axes, {});
    b.core_.resize(static_cast<std::size_t>(ax.core_len()));
    for (std::int64_t x = ax.core_lo(); x <= ax.core_hi(); ++x) {
        State s = x < split ? p_left[static_cast<std::size_t>(floor_mod(x - split, nl))]
                            : p_right[static_cast<std::size_t>(floor_mod(x - split, nr))];
        b.core_[static_cast<std::size_t>(x - ax.core_lo())] = s;
    }
    return b;
}

Background Background::periodic_1d(const std::vector<State>& word) {
    if (word.empty()) throw Error("periodic word must be non-empty");
    auto n = static_cast<std::int64_t>(word.size());
    return symmetric(1, 0, {n, 1}, [&](Cell c) { return word[static_cast<std::size_t>(floor_mod(c.x, n))]; });
}

Background Background::periodic_2d(std::int64_t w, std::int64_t h, const std::vector<State>& values) {
    if (w < 1 || h < 1 || values.size() != static_cast<std::size_t>(w * h)) throw Error("bad periodic tile");
    return symmetric(2, 0, {w, h}, [&](Cell c) {
        return values[static_cast<std::size_t>(floor_mod(c.y, h) * w + floor_mod(c.x, w))];
    });
}

std::size_t Background::core_index(Cell r) const {
    std::int64_t nx = axes_[0].core_len();
    std::int64_t x = r.x - axes_[0].core_lo();
    std::int64_t y = dim_ == 2 ? r.y - axes_[1].core_lo() : 0;
    return static_cast<std::size_t>(y * nx + x);
}

State Background::at(Cell c) const {
    Cell r{axes_[0].reduce(c.x), dim_ == 2 ? axes_[1].reduce(c.y) : 0};
    return core_[core_index(r)];
}

State Background::max_state() const { return *std::max_element(core_.begin(), core_.end()); }

Configuration Configuration::from_word(const std::vector<State>& word, std::int64_t origin, State background) {
    Configuration c(Background::uniform(1, background));
    for (std::size_t i = 0; i < word.size(); ++i) c.set({origin + static_cast<std::int64_t>(i), 0}, word[i]);
    return c;
}

State Configuration::at(Cell c) const {
    if (dimension() == 1) c.y = 0;
    auto it = ov_.find(c);
    return it == ov_.end() ? bg_.at(c) : it->second;
}

void Configuration::set(Cell c, State s) {
    if (dimension() == 1 && c.y != 0) throw InvalidConfiguration("1D configuration addressed with y != 0");
    if (bg_.at(c) == s)
        ov_.erase(c);
    else
        ov_[c] = s;
}

void Configuration::validate(int q) const {
    if (bg_.max_state() >= q) throw InvalidConfiguration("background state out of range");
    for (const auto& [c, s] : ov_)
        if (s >= q)
            throw InvalidConfiguration("state " + std::to_string(s) + " at (" + std::to_string(c.x) + "," +
                                       std::to_string(c.y) + ") out of range");
}

std::array<std::array<std::int64_t, 2>, 2> Configuration::extent() const {
    std::array<std::array<std::int64_t, 2>, 2> e{};
    for (int a = 0; a < 2; ++a) e[a] = {bg_.axis(a).core_lo(), bg_.axis(a).core_hi()};
    if (dimension() == 1) e[1] = {0, 0};
    for (const auto& [c, s] : ov_) {
        e[0][0] = std::min(e[0][0], c.x);
        e[0][1] = std::max(e[0][1], c.x);
        e[1][0] = std::min(e[1][0], c.y);
        e[1][1] = std::max(e[1][1], c.y);
    }
    return e;
}

bool Configuration::operator==(const Configuration& o) const {
    if (dimension() != o.dimension()) return false;
    if (bg_ == o.bg_) return ov_ == o.ov_;
    // Beyond both thresholds both sides repeat with the lcm period, so one
    // full lcm period past the hull decides equality.
    std::array<std::array<std::int64_t, 2>, 2> box{};
    auto ea = extent(), eb = o.extent();
    for (int a = 0; a < dimension(); ++a) {
        const auto &ta = bg_.axis(a), &tb = o.bg_.axis(a);
        std::int64_t lo_l = std::lcm(ta.lo_period, tb.lo_period);
        std::int64_t hi_l = std::lcm(ta.hi_period, tb.hi_period);
        box[a] = {std::min(ea[a][0], eb[a][0]) - lo_l, std::max(ea[a][1], eb[a][1]) + hi_l};
    }
    if (dimension() == 1) box[1] = {0, 0};
    for (std::int64_t y = box[1][0]; y <= box[1][1]; ++y)
        for (std::int64_t x = box[0][0]; x <= box[0][1]; ++x)
            if (at({x, y}) != o.at({x, y})) return false;
    return true;
}

}  // namespace acaforge
