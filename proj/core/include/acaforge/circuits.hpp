#pragma once

#include <acaforge/config.hpp>
#include <acaforge/rule.hpp>
#include <acaforge/schedule.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace acaforge {

struct CircuitError : Error {
    using Error::Error;
};
/// Routing or structural audit failure; the message names the net.
struct RoutingError : CircuitError {
    using CircuitError::CircuitError;
};
struct CircuitTimeout : CircuitError {
    using CircuitError::CircuitError;
};

/// Rule X: 3 states, von Neumann, tuple order (E, N, C, W, S).
RuleTable build_rule_x();

enum class GateKind { WireH, WireV, Fork, Dual, Merge, Cross, Bend };

const char* to_string(GateKind k);
GateKind gate_kind_from(const std::string& name);

struct Port {
    std::string name;
    Cell cell;
    bool input = true;
    char side = 'W';  // footprint edge the port sits on
};

/// Library footprint. Coordinates have y pointing up, origin bottom-left.
struct GatePattern {
    GateKind kind = GateKind::WireH;
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::map<Cell, State> footprint;  // non-zero cells only
    std::vector<Port> ports;
    /// Cells drawn carrying a signal, and the cell to toggle to remove it.
    std::vector<Cell> signals;
    std::vector<Cell> signal_sources;

    State at(Cell c) const;
    /// The footprint with every drawn signal withdrawn.
    std::map<Cell, State> quiescent() const;
    const Port& port(const std::string& name) const;
};

/// Wire kinds take a length; the rest ignore it.
GatePattern gate_pattern(GateKind kind, std::size_t length = 5);

// ---------------------------------------------------------------- netlists

/// One operation on a stack of parallel signal tracks, numbered top down.
/// Fork t: t -> (t, t+1). Dual/Merge t: (t, t+1) -> t. Cross t swaps
/// t and t+1. End t drops the track.
enum class TrackOp { Fork, Dual, Merge, Cross, End };

struct TrackStep {
    TrackOp op;
    std::size_t track;
    bool operator==(const TrackStep&) const = default;
};

struct TrackProgram {
    std::size_t inputs = 0;
    std::vector<TrackStep> steps;

    /// Track count after each prefix; throws CircuitError on a bad index.
    std::size_t outputs() const;
};

struct NetGate {
    GateKind kind;
    std::size_t id;
};

/// Endpoint of a net. gate == npos means a circuit input or output
/// track, numbered by port.
struct NetEnd {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t gate = npos;
    std::size_t port = 0;
    bool operator==(const NetEnd&) const = default;
};

struct Net {
    NetEnd from;
    NetEnd to;
    bool operator==(const Net&) const = default;
};

/// Dual-rail circuit. Variable i occupies tracks 2i (true) and 2i+1 (false).
struct CircuitNetlist {
    std::string name;
    TrackProgram program;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    /// False for raw track circuits: one name per track, no rail pairs.
    bool dual_rail = true;
    std::vector<NetGate> gates;
    std::vector<Net> nets;

    /// Builds gates and nets from the track program.
    static CircuitNetlist from_program(std::string name, TrackProgram program,
                                       std::vector<std::string> inputs,
                                       std::vector<std::string> outputs);

    std::map<GateKind, std::size_t> census() const;
    /// Throws CircuitError on arity problems, cycles, or nets that
    /// disagree with the track program.
    void validate() const;
};

/// Raw track netlist with no dual-rail reading: one name per track.
CircuitNetlist track_netlist(std::string name, TrackProgram program);

CircuitNetlist build_nand_netlist();
CircuitNetlist build_fanout_netlist();
CircuitNetlist build_xor_netlist();

/// Variable-level operations expanded into track steps.
enum class VarOp { Fanout, Not, Nand, Swap, Drop };
struct VarStep {
    VarOp op;
    std::size_t var;
};
TrackProgram expand(std::size_t variables, const std::vector<VarStep>& ops);

/// NAND/NOT formula over inputs x0, x1, x2 with the fewest NANDs.
struct Formula {
    enum class Kind { Var, Not, Nand } kind = Kind::Var;
    std::size_t var = 0;
    std::vector<Formula> args;

    std::uint8_t truth_table() const;
    std::size_t nands() const;
    std::string describe() const;
};
/// Truth table bit 4l+2c+r. Constant tables have no formula; throws.
Formula minimal_formula(std::uint8_t table);

/// One synchronous step of a 2-state first-neighbors rule, inputs l, c, r.
CircuitNetlist build_rule_step_circuit(const RuleTable& guest);

std::string write_netlist(const CircuitNetlist& n);
CircuitNetlist read_netlist(const std::string& text);

// ----------------------------------------------------------------- layout

struct PlacedGate {
    GateKind kind;
    std::size_t id;
    /// Junction or centre cell.
    Cell center;
    /// Lower-left corner of the matching library panel.
    Cell panel_origin;
    /// Input wire cells two steps from the centre. A flip there puts a
    /// signal on the arm, whether or not the gate can still take it.
    std::vector<Cell> input_arms;
    /// Ids of the nets entering or leaving the gate.
    std::vector<std::uint32_t> wires;
};

struct PlacedCircuit {
    CircuitNetlist netlist;
    Box box;
    std::vector<State> grid;  // row-major over box, zero background
    std::vector<Cell> input_cells;   // source end, per input track
    std::vector<Cell> output_cells;  // probe, per output track
    std::vector<PlacedGate> gates;
    /// Net id per cell (0 for empty) and the name of each id, from 1.
    std::vector<std::uint32_t> wires;
    std::vector<std::string> wire_names;

    State at(Cell c) const;
    Configuration configuration() const;
    std::size_t live_cells() const;
};

/// Raises RoutingError when a spacing or pattern audit fails.
PlacedCircuit place_and_route(const CircuitNetlist& netlist);

/// Spacing and stray-pattern audit of a placed grid; empty when clean.
std::vector<std::string> audit_layout(const PlacedCircuit& placed);

// ------------------------------------------------------------- evaluation

/// Scheduler over the active cells only. Sweep skips inactive cells in
/// scan order; FairRandom updates each active cell with the given
/// density and forces cells active for `window` steps.
struct ActivePolicy {
    enum class Kind { Sweep, FairRandom } kind = Kind::Sweep;
    SweepOrder order = SweepOrder::LeftToRight;
    std::uint64_t seed = 0;
    double density = 0.5;
    std::size_t window = 16;

    static ActivePolicy sweep(SweepOrder o);
    static ActivePolicy fair_random(std::uint64_t seed, double density = 0.5, std::size_t window = 16);
    std::string describe() const;
};

/// 4 sweep orders followed by `randoms` fair-random policies.
std::vector<ActivePolicy> standard_policies(std::size_t randoms, std::uint64_t seed = 1);

struct TrackRun {
    std::vector<bool> fired;  // per output track
    std::size_t steps = 0;
    std::size_t flips = 0;
    bool quiescent = false;
    std::vector<std::string> violations;
};

/// Inject on the chosen input tracks and run until no cell is active.
/// Budget 0 means 50 x live cells.
TrackRun run_tracks(const PlacedCircuit& placed, const std::vector<bool>& inject,
                    const ActivePolicy& policy, std::size_t budget = 0);

/// Same contract driven by a whole-box engine schedule.
TrackRun run_tracks_engine(const PlacedCircuit& placed, const std::vector<bool>& inject,
                           const UpdateSchedule& schedule, std::size_t budget = 0);

struct CircuitEvaluation {
    std::vector<bool> outputs;
    std::size_t runs = 0;
    std::size_t max_steps = 0;
};

/// Dual-rail evaluation across policies; throws CircuitError on a monitor
/// violation, a double-rail or silent output, or disagreement, and
/// CircuitTimeout on budget exhaustion.
CircuitEvaluation evaluate_circuit(const PlacedCircuit& placed, const std::vector<bool>& inputs,
                                   const std::vector<ActivePolicy>& policies);

}  // namespace acaforge
