#pragma once

#include <functional>

#include "acaforge/algebra.hpp"
#include "acaforge/engine.hpp"

namespace acaforge {

struct ContractViolation : Error {
    using Error::Error;
};

/// Automata network whose edges carry a direction indicator. A node may
/// fire only when every incident indicator points at it.
class FlipNetwork {
public:
    struct Edge {
        std::size_t a, b;  // a < b
        bool toward_larger;
        std::size_t points_to() const { return toward_larger ? b : a; }
    };
    struct Update {
        State state;
        std::vector<bool> flip;  // per incident edge, in incidence order
    };
    /// Reads the pre-state network; called only on applicable nodes.
    using FlipFn = std::function<Update(const FlipNetwork&, std::size_t node)>;

    std::size_t add_node(State s);
    /// Indicator initially points at `toward`.
    std::size_t add_edge(std::size_t u, std::size_t v, std::size_t toward);
    void set_flip(FlipFn f) { flip_ = std::move(f); }

    std::size_t nodes() const { return state_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    const std::vector<std::size_t>& incident(std::size_t v) const { return inc_.at(v); }
    std::size_t other(std::size_t e, std::size_t v) const { return edges_[e].a == v ? edges_[e].b : edges_[e].a; }
    State state(std::size_t v) const { return state_.at(v); }
    void set_state(std::size_t v, State s) { state_.at(v) = s; }
    const std::vector<State>& states() const { return state_; }

    bool applicable(std::size_t v) const;
    std::vector<std::size_t> applicable_nodes() const;
    /// Fires every node of D (reads before writes). Throws ContractViolation
    /// for a non-applicable node.
    void apply(std::span<const std::size_t> D);

    /// States followed by one line per edge, e.g. "0 -> 3".
    std::string dump() const;
    bool operator==(const FlipNetwork& o) const;

private:
    std::vector<State> state_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> inc_;
    FlipFn flip_;
};

/// Flip function that sets the state to g(own, neighbor states) and flips
/// every incident edge.
FlipNetwork::FlipFn flip_all(std::function<State(std::size_t node, State own, std::span<const State> nbrs)> g);

/// Five-node network: center 0, s1 upper-right 1, s2 lower-right 2, s3
/// upper-left 3, s4 lower-left 4, all in state 1. Nodes compute the closed
/// neighborhood sum mod 3 and flip all edges.
FlipNetwork five_node_network();

/// Runs `schedule` over node indices; scheduled nodes that are not
/// applicable are skipped.
UpdateHistory fan_history(FlipNetwork net, const UpdateSchedule& schedule, std::size_t T);

/// Tripartite graph on S, S^N, S^E. Component 0 is the first positive axis
/// ((1,0), or +1 in 1D), component 1 the second.
struct G3 {
    struct Arc {
        int axis;         // copy component
        State s;          // node in S
        State copy;       // node in the copy component
        bool s_to_copy;   // orientation
        bool operator==(const Arc&) const = default;
        bool operator<(const Arc& o) const {
            return std::tie(axis, s, copy, s_to_copy) < std::tie(o.axis, o.s, o.copy, o.s_to_copy);
        }
    };
    int axes = 1;
    int states = 1;
    std::vector<Arc> arcs;                         // one per (axis, s, copy)
    std::vector<std::pair<Arc, Arc>> conflicts;    // bidirectional demands
};

/// Orientation table for grid edges: points_up[axis][x][y] tells whether the
/// edge from a cell in state x to its +axis neighbor in state y points at
/// the neighbor.
struct DualFanAssignment {
    int axes = 1;
    int states = 1;
    std::vector<std::vector<std::vector<bool>>> points_up;
    G3 provenance;

    bool toward_positive(int axis, State x, State y) const {
        return points_up[static_cast<std::size_t>(axis)][x][y];
    }
};

/// Builds G3 for a 1D first-neighbors or 2D von Neumann rule. Edges forced
/// toward an active center win over edges forced away from one; every
/// clash is listed in `conflicts`. Missing pairs default to S -> copy.
G3 build_g3(const RuleTable& rule);

/// Throws IneligibleRule (with the adjacent-active witness) unless no two
/// neighboring cells can be active together.
DualFanAssignment build_dual_fan(const RuleTable& rule);

/// Grid network for a window (row-major nodes, wrap edges when periodic).
FlipNetwork project(const RuleTable& rule, const DualFanAssignment& fan, const Window& w, bool periodic);

struct DualityReport {
    bool commutes = true;
    std::size_t steps = 0;
    std::string failure;
};

/// Runs the ACA on a periodic window and the projected FAN side by side.
DualityReport check_duality(const RuleTable& rule, const DualFanAssignment& fan, const Configuration& c0,
                            const Box& box, const UpdateSchedule& schedule, std::size_t T);

}  // namespace acaforge
