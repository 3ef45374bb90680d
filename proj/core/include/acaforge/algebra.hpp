#pragma once

#include <optional>

#include "acaforge/config.hpp"

namespace acaforge {

struct OverlapWitness {
    enum class Kind { Commutativity, Monotonicity, AdjacentActive };
    Kind kind = Kind::Commutativity;
    Cell first{0, 0};
    Cell second{0, 0};
    /// Monotonicity only: the neighbor that was updated.
    Cell updated{0, 0};
    /// Joint assignment over both neighborhoods, sorted by cell.
    std::vector<std::pair<Cell, State>> context;

    std::string describe() const;
    /// Context embedded on a uniform background.
    Configuration as_configuration(int dimension, State background = 0) const;
};

const char* to_string(OverlapWitness::Kind k);

struct Verdict {
    bool holds = true;
    std::optional<OverlapWitness> witness;
    explicit operator bool() const { return holds; }
};

/// Table entries whose result differs from the center value.
struct ActiveTransition {
    std::size_t index;
    std::vector<State> tuple;
    State result;
};
std::vector<ActiveTransition> active_transitions(const RuleTable& rule);

/// Nonzero d with d or -d in N. Both signs; eight for Moore.
std::vector<Cell> overlap_placements(const RuleTable& rule);

/// Pairs of simultaneously active neighboring cells commute.
Verdict check_commutativity(const RuleTable& rule);
/// An active cell's pending result still differs from its state after an
/// active neighbor updates.
Verdict check_monotonicity(const RuleTable& rule);
Verdict check_no_adjacent_active(const RuleTable& rule);

}  // namespace acaforge
