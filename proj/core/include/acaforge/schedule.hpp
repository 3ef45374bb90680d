#pragma once

#include <random>

#include "acaforge/window.hpp"

namespace acaforge {

struct FairnessViolation : Error {
    using Error::Error;
};

enum class SweepOrder { LeftToRight, RightToLeft, BottomToTop, TopToBottom };

const char* to_string(SweepOrder o);

class ScheduleCursor;

/// Immutable description of an update schedule; start() binds it to a box.
class UpdateSchedule {
public:
    enum class Kind { Synchronous, Alpha, FairRandom, Sweep, Scripted };

    static UpdateSchedule synchronous();
    static UpdateSchedule alpha(double p, std::uint64_t seed);
    /// Every block of `window` steps (0 = box size) updates each cell at least
    /// once, in a fresh random order; each cell is additionally updated with
    /// probability `density` per step.
    static UpdateSchedule fair_random(std::uint64_t seed, std::size_t window = 0, double density = 0.0);
    static UpdateSchedule sweep(SweepOrder order);
    /// Cycled list of explicit update sets. `fair` is the caller's claim.
    static UpdateSchedule scripted(std::vector<std::vector<Cell>> sets, bool fair);

    Kind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    double probability() const { return p_; }
    std::size_t fairness_window() const { return window_; }
    SweepOrder order() const { return order_; }
    const std::vector<std::vector<Cell>>& script() const { return script_; }
    bool declared_fair() const { return fair_; }
    std::string describe() const;

    ScheduleCursor start(const Box& box) const;

private:
    Kind kind_ = Kind::Synchronous;
    std::uint64_t seed_ = 0;
    double p_ = 0.0;
    std::size_t window_ = 0;
    SweepOrder order_ = SweepOrder::LeftToRight;
    std::vector<std::vector<Cell>> script_;
    bool fair_ = true;
};

/// Stateful iterator over D_0, D_1, ... Same schedule and box give the
/// same sequence.
class ScheduleCursor {
public:
    ScheduleCursor(const UpdateSchedule& s, const Box& box);

    /// Fills D with box indices for the next step.
    void next(std::vector<std::size_t>& D);
    std::size_t step() const { return t_; }

    /// True when every box cell occurs within each fairness block.
    bool fair() const;
    void require_fair() const;

private:
    void refill_block();
    void add_extras(std::vector<std::size_t>& D, double p);

    UpdateSchedule::Kind kind_;
    Box box_;
    std::size_t n_;
    std::size_t t_ = 0;
    std::mt19937_64 rng_;
    double p_;
    std::size_t window_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<std::size_t>> script_;
    bool fair_;
};

std::vector<std::size_t> sweep_order(const Box& box, SweepOrder o);

}  // namespace acaforge
