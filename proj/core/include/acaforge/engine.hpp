#pragma once

#include <optional>

#include "acaforge/schedule.hpp"

namespace acaforge {

/// Active window plus what lies beyond it.
struct Domain {
    Box box;
    Boundary boundary = Boundary::frozen();

    /// Box covering the overrides and threshold core of c0 plus T steps of
    /// light cone on each side, frozen outside.
    static Domain covering(const RuleTable& rule, const Configuration& c0, std::size_t T);
};

struct RunOptions {
    bool assert_fair = false;
};

struct SpaceTime {
    Box box;
    Configuration initial;
    std::vector<std::vector<State>> frames;
    std::string provenance;

    std::size_t steps() const { return frames.empty() ? 0 : frames.size() - 1; }
    Configuration configuration(std::size_t t) const;
};

/// Per-cell sequence of distinct consecutive states.
class UpdateHistory {
public:
    UpdateHistory() = default;
    UpdateHistory(Box box, std::span<const State> initial);

    const Box& box() const { return box_; }
    void record(std::size_t i, State s) {
        auto& v = seq_[i];
        if (v.back() != s) v.push_back(s);
    }

    const std::vector<State>& of(std::size_t i) const { return seq_[i]; }
    const std::vector<State>& of(Cell c) const { return seq_[box_.index(c)]; }
    std::size_t depth(std::size_t i) const { return seq_[i].size() - 1; }
    std::optional<State> at(Cell c, std::size_t depth) const;
    std::size_t min_depth() const;
    std::size_t max_depth() const;
    std::size_t cells() const { return seq_.size(); }

    /// Cell-wise equality on the common prefix of each pair of sequences.
    bool agrees_with(const UpdateHistory& o) const { return !first_disagreement(o).has_value(); }
    /// (cell, depth) of the first mismatch, scanning cells in box order.
    std::optional<std::pair<Cell, std::size_t>> first_disagreement(const UpdateHistory& o) const;

    bool operator==(const UpdateHistory& o) const { return box_ == o.box_ && seq_ == o.seq_; }

private:
    Box box_;
    std::vector<std::vector<State>> seq_;
};

/// Finite (depth, cell) -> state template.
struct HaltingPattern {
    struct Entry {
        std::size_t depth;
        Cell cell;
        State state;
    };
    std::vector<Entry> entries;
};

Configuration apply_update_set(const RuleTable& rule, const Configuration& c, std::span<const Cell> D);

SpaceTime run_schedule(const RuleTable& rule, const Configuration& c0, const UpdateSchedule& schedule,
                       std::size_t T, std::optional<Domain> domain = std::nullopt, RunOptions opt = {});

UpdateHistory extract_history(const RuleTable& rule, const Configuration& c0, const UpdateSchedule& schedule,
                              std::size_t T, std::optional<Domain> domain = std::nullopt, RunOptions opt = {});

/// Active cells within the analysis box: the configuration's hull (threshold
/// core and overrides) widened by the neighborhood radius. Further cells are
/// periodic translates of ones reported here.
std::vector<Cell> active_cells(const RuleTable& rule, const Configuration& c);
std::vector<Cell> active_cells(const RuleTable& rule, const Configuration& c, const Box& within);
/// Whether any cell of the pure background is active.
bool background_active(const RuleTable& rule, const Background& bg);

/// Smallest delta with h_{t+delta}(i) = s for every entry, if observed.
std::optional<std::size_t> detect_pattern(const UpdateHistory& h, const HaltingPattern& p);

/// Steps `cursor` on `w` for T steps, recording history.
UpdateHistory record_history(Window& w, ScheduleCursor& cursor, std::size_t T);

struct DepthRun {
    UpdateHistory history;
    std::size_t steps = 0;
    bool reached = false;
};

/// Steps until every cell in `targets` (all cells if empty) has history
/// depth >= depth, or max_steps elapse.
DepthRun run_to_depth(Window& w, ScheduleCursor& cursor, std::size_t depth, std::size_t max_steps,
                      std::span<const std::size_t> targets = {});

}  // namespace acaforge
