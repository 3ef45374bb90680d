#include "acaforge/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace acaforge {

const char* to_string(SweepOrder o) {
    switch (o) {
        case SweepOrder::LeftToRight: return "left-to-right";
        case SweepOrder::RightToLeft: return "right-to-left";
        case SweepOrder::BottomToTop: return "bottom-to-top";
        case SweepOrder::TopToBottom: return "top-to-bottom";
    }
    return "?";
}

UpdateSchedule UpdateSchedule::synchronous() { return {}; }

UpdateSchedule UpdateSchedule::alpha(double p, std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0)) throw Error("alpha must be in (0, 1]");
    UpdateSchedule s;
    s.kind_ = Kind::Alpha;
    s.p_ = p;
    s.seed_ = seed;
    s.fair_ = false;
    return s;
}

UpdateSchedule UpdateSchedule::fair_random(std::uint64_t seed, std::size_t window, double density) {
    if (density < 0.0 || density > 1.0) throw Error("density must be in [0, 1]");
    UpdateSchedule s;
    s.kind_ = Kind::FairRandom;
    s.seed_ = seed;
    s.window_ = window;
    s.p_ = density;
    return s;
}

UpdateSchedule UpdateSchedule::sweep(SweepOrder order) {
    UpdateSchedule s;
    s.kind_ = Kind::Sweep;
    s.order_ = order;
    return s;
}

UpdateSchedule UpdateSchedule::scripted(std::vector<std::vector<Cell>> sets, bool fair) {
    if (sets.empty()) throw Error("scripted schedule needs at least one update set");
    UpdateSchedule s;
    s.kind_ = Kind::Scripted;
    s.script_ = std::move(sets);
    s.fair_ = fair;
    return s;
}

std::string UpdateSchedule::describe() const {
    std::ostringstream o;
    switch (kind_) {
        case Kind::Synchronous: o << "synchronous"; break;
        case Kind::Alpha: o << "alpha(p=" << p_ << ",seed=" << seed_ << ")"; break;
        case Kind::FairRandom:
            o << "fair-random(seed=" << seed_ << ",window=" << window_ << ",density=" << p_ << ")";
            break;
        case Kind::Sweep: o << "sweep(" << to_string(order_) << ")"; break;
        case Kind::Scripted: o << "scripted(" << script_.size() << " sets" << (fair_ ? ",fair" : "") << ")"; break;
    }
    return o.str();
}

ScheduleCursor UpdateSchedule::start(const Box& box) const { return ScheduleCursor(*this, box); }

std::vector<std::size_t> sweep_order(const Box& box, SweepOrder o) {
    std::vector<std::size_t> idx(box.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto key = [&](std::size_t i) {
        Cell c = box.cell(i);
        switch (o) {
            case SweepOrder::LeftToRight: return std::pair{c.x, c.y};
            case SweepOrder::RightToLeft: return std::pair{-c.x, -c.y};
            case SweepOrder::BottomToTop: return std::pair{c.y, c.x};
            case SweepOrder::TopToBottom: return std::pair{-c.y, -c.x};
        }
        return std::pair{c.x, c.y};
    };
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    return idx;
}

ScheduleCursor::ScheduleCursor(const UpdateSchedule& s, const Box& box)
    : kind_(s.kind()),
      box_(box),
      n_(box.size()),
      rng_(s.seed()),
      p_(s.probability()),
      window_(s.fairness_window() == 0 ? box.size() : s.fairness_window()),
      fair_(s.declared_fair()) {
    if (kind_ == UpdateSchedule::Kind::Sweep) order_ = sweep_order(box, s.order());
    if (kind_ == UpdateSchedule::Kind::Scripted) {
        for (const auto& set : s.script()) {
            std::vector<std::size_t> d;
            for (const Cell& c : set) {
                if (!box.contains(c))
                    throw Error("scripted update set names a cell outside the active window");
                d.push_back(box.index(c));
            }
            script_.push_back(std::move(d));
        }
    }
}

bool ScheduleCursor::fair() const {
    switch (kind_) {
        case UpdateSchedule::Kind::Alpha: return false;
        case UpdateSchedule::Kind::Scripted: {
            if (!fair_) return false;
            std::vector<bool> seen(n_, false);
            for (const auto& d : script_)
                for (auto i : d) seen[i] = true;
            return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
        }
        default: return true;
    }
}

void ScheduleCursor::require_fair() const {
    if (!fair()) throw FairnessViolation("schedule does not update every active-window cell in its period");
}

void ScheduleCursor::refill_block() {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::shuffle(order_.begin(), order_.end(), rng_);
}

void ScheduleCursor::add_extras(std::vector<std::size_t>& D, double p) {
    if (p <= 0.0) return;
    if (p >= 1.0) {
        for (std::size_t i = 0; i < n_; ++i) D.push_back(i);
        return;
    }
    // Bernoulli(p) per cell via geometric gaps.
    std::geometric_distribution<std::size_t> gap(p);
    for (std::size_t i = gap(rng_); i < n_; i += 1 + gap(rng_)) D.push_back(i);
}

void ScheduleCursor::next(std::vector<std::size_t>& D) {
    D.clear();
    switch (kind_) {
        case UpdateSchedule::Kind::Synchronous:
            D.resize(n_);
            std::iota(D.begin(), D.end(), std::size_t{0});
            break;
        case UpdateSchedule::Kind::Alpha: add_extras(D, p_); break;
        case UpdateSchedule::Kind::FairRandom: {
            std::size_t j = t_ % window_;
            if (j == 0) refill_block();
            std::size_t lo = j * n_ / window_, hi = (j + 1) * n_ / window_;
            for (std::size_t k = lo; k < hi; ++k) D.push_back(order_[k]);
            add_extras(D, p_);
            std::sort(D.begin(), D.end());
            D.erase(std::unique(D.begin(), D.end()), D.end());
            break;
        }
        case UpdateSchedule::Kind::Sweep: D.push_back(order_[t_ % n_]); break;
        case UpdateSchedule::Kind::Scripted: D = script_[t_ % script_.size()]; break;
    }
    ++t_;
}

}  // namespace acaforge
