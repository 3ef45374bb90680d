#pragma once

#include "acaforge/engine.hpp"

namespace acaforge {

/// First state that repeats when a cell with fixed left value `left` is
/// updated over and over starting from `s`.
State pseudo_fixed_point(const RuleTable& rule, State left, State s);

struct PfTrace {
    State value = 0;
    std::size_t iterations = 0;  // rule applications until the repeat
};
PfTrace pseudo_fixed_point_trace(const RuleTable& rule, State left, State s);

/// B = (S, S + {#}, delta). Symbol q stands for #.
struct SemiAutomaton {
    int states = 1;
    std::vector<State> delta;  // states x (states + 1), row-major

    int hash_symbol() const { return states; }
    State step(State x, int symbol) const {
        return delta[static_cast<std::size_t>(x) * static_cast<std::size_t>(states + 1) + static_cast<std::size_t>(symbol)];
    }
    /// States after each symbol of `word`.
    std::vector<State> trace(State start, std::span<const State> word) const;
};

/// c0 = ... p_L p_L w p_R p_R ... with w on cells 1..|w|, so l = 0 and
/// r = |w| + 1.
struct OneWayInstance {
    RuleTable rule;
    std::vector<State> p_left, p_right, word;

    std::int64_t l() const { return 0; }
    std::int64_t r() const { return static_cast<std::int64_t>(word.size()) + 1; }
    Configuration c0() const;
    /// Throws InvalidConfiguration unless the rule is one-way and the words
    /// are non-empty and in range.
    void validate() const;
};

struct LeftRegion {
    State x_l = 0;
    std::size_t preperiod = 0;
    std::size_t period = 0;
    std::int64_t width = 0;  // W_L
};

/// Cell l's recurring state while {..., l} is updated as a block. x_l is
/// its value on entering the configuration cycle.
LeftRegion left_region_pfp(const OneWayInstance& inst);

struct AdversarialSchedule {
    UpdateSchedule schedule;
    Domain domain;
    std::vector<State> x;                     // x_l .. x_{r-1}
    std::vector<std::size_t> iteration_ends;  // step count after each round
    std::size_t max_pf_iterations = 0;
};

/// Scripted schedule made of `rounds` rounds: the left block until cell l
/// shows x_l, then each cell l+1..r-1 until it shows x_j, then the right
/// block once. Every "until" loop updates at least once.
AdversarialSchedule build_adversarial_schedule(const OneWayInstance& inst, std::size_t rounds = 3);

/// delta(q, s) = pf(q, s); delta(q, #) = pf(q, p_R[0]), the recurring state
/// of cell r when its left neighbor rests at q.
SemiAutomaton extract_semiautomaton(const RuleTable& rule, const std::vector<State>& p_right);

struct OneWayReport {
    std::size_t words = 0;
    std::size_t equal = 0;
    std::size_t max_pf_iterations = 0;
    std::vector<std::string> failures;
    bool ok() const { return equal == words; }
};

/// Replays each constructed schedule through the engine and compares the
/// band l..r-1 after every round with x_l followed by B's trace on w.
OneWayReport verify_fsm_equivalence(const RuleTable& rule, const std::vector<State>& p_left,
                                    const std::vector<State>& p_right, const std::vector<std::vector<State>>& words);

/// One-way rule f(l, c) from a q x q table indexed [l * q + c].
RuleTable one_way_rule(int states, const std::vector<State>& table);

}  // namespace acaforge
