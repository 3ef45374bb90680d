#include "acaforge/window.hpp"

#include <algorithm>

namespace acaforge {

namespace {

// Maps a relative coordinate to [0, n) or returns false if it stays outside.
bool resolve_axis(std::int64_t& u, std::int64_t n, const AxisBoundary& b) {
    if (u >= 0 && u < n) return true;
    Edge e = u < 0 ? b.lo : b.hi;
    if (e == Edge::Frozen) return false;
    if (e == Edge::Wrap) {
        u %= n;
        if (u < 0) u += n;
        return true;
    }
    std::int64_t p = u < 0 ? b.lo_period : b.hi_period;
    if (p <= 0 || p > n) throw Error("repeat boundary period must be in 1..width");
    if (u < 0)
        u += ((-u + p - 1) / p) * p;
    else
        u -= ((u - n) / p + 1) * p;
    return true;
}

}  // namespace

Window::Window(const RuleTable& rule, const Configuration& c0, Box box, Boundary b)
    : rule_(rule), c0_(c0), box_(box), q_(static_cast<std::size_t>(rule.states())) {
    if (box.w < 1 || box.h < 1) throw Error("window must be non-empty");
    if (rule.dimension() != c0.dimension()) throw Error("rule and configuration dimensions differ");
    if (rule.dimension() == 1 && (box.h != 1 || box.y0 != 0)) throw Error("1D window must have height 1 at y=0");
    c0.validate(rule.states());
    rx_ = rule.radius_x();
    ry_ = rule.radius_y();
    pw_ = box.w + 2 * rx_;
    ph_ = box.h + 2 * ry_;
    cells_.assign(static_cast<std::size_t>(pw_ * ph_), 0);
    pad_.resize(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
        Cell c = box.cell(i);
        pad_[i] = static_cast<std::size_t>((c.y - box.y0 + ry_) * pw_ + (c.x - box.x0 + rx_));
        cells_[pad_[i]] = c0.at(c);
    }
    std::vector<std::ptrdiff_t> src(cells_.size(), -1);
    for (std::int64_t py = 0; py < ph_; ++py)
        for (std::int64_t px = 0; px < pw_; ++px) {
            std::int64_t u = px - rx_, v = py - ry_;
            auto p = static_cast<std::size_t>(py * pw_ + px);
            if (u >= 0 && u < box.w && v >= 0 && v < box.h) {
                src[p] = static_cast<std::ptrdiff_t>(box.index({box.x0 + u, box.y0 + v}));
                continue;
            }
            std::int64_t ru = u, rv = v;
            bool inx = resolve_axis(ru, box.w, b.x);
            bool iny = resolve_axis(rv, box.h, b.y);
            if (inx && iny) {
                std::size_t j = box.index({box.x0 + ru, box.y0 + rv});
                images_[j].push_back(p);
                cells_[p] = cells_[pad_[j]];
                src[p] = static_cast<std::ptrdiff_t>(j);
            } else {
                cells_[p] = c0.at({box.x0 + u, box.y0 + v});
            }
        }
    for (const Cell& n : rule.neighborhood()) lin_.push_back(static_cast<std::ptrdiff_t>(n.y * pw_ + n.x));
    deps_.resize(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
        for (auto off : lin_) {
            auto s = src[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(pad_[i]) + off)];
            if (s >= 0) deps_[static_cast<std::size_t>(s)].push_back(i);
        }
    for (auto& d : deps_) {
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
    }
}

State Window::at(Cell c) const {
    if (box_.contains(c)) return at(box_.index(c));
    std::int64_t u = c.x - box_.x0, v = c.y - box_.y0;
    if (u >= -rx_ && u < box_.w + rx_ && v >= -ry_ && v < box_.h + ry_)
        return cells_[static_cast<std::size_t>((v + ry_) * pw_ + (u + rx_))];
    return c0_.at(c);
}

void Window::set(std::size_t i, State s) {
    cells_[pad_[i]] = s;
    if (!images_.empty()) {
        auto it = images_.find(i);
        if (it != images_.end())
            for (auto p : it->second) cells_[p] = s;
    }
}

void Window::apply(std::span<const std::size_t> D) {
    if (D.size() == 1) {
        set(D[0], next_value(D[0]));
        return;
    }
    scratch_.resize(D.size());
    for (std::size_t k = 0; k < D.size(); ++k) scratch_[k] = next_value(D[k]);
    for (std::size_t k = 0; k < D.size(); ++k) set(D[k], scratch_[k]);
}

void Window::apply(std::span<const std::size_t> D, std::vector<std::size_t>& changed) {
    changed.clear();
    scratch_.resize(D.size());
    for (std::size_t k = 0; k < D.size(); ++k) scratch_[k] = next_value(D[k]);
    for (std::size_t k = 0; k < D.size(); ++k) {
        if (at(D[k]) != scratch_[k]) {
            set(D[k], scratch_[k]);
            changed.push_back(D[k]);
        }
    }
}

std::vector<State> Window::snapshot() const {
    std::vector<State> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = at(i);
    return out;
}

void Window::load(std::span<const State> values) {
    if (values.size() != size()) throw Error("snapshot size mismatch");
    for (std::size_t i = 0; i < size(); ++i) set(i, values[i]);
}

Configuration Window::to_configuration() const {
    Configuration c = c0_;
    for (std::size_t i = 0; i < size(); ++i) c.set(box_.cell(i), at(i));
    return c;
}

std::vector<std::size_t> Window::active_cells() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (active(i)) out.push_back(i);
    return out;
}

}  // namespace acaforge
