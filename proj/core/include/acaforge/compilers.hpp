#pragma once

#include <optional>

#include "acaforge/engine.hpp"

namespace acaforge {

enum class Construction { MarchingSoldiers, MountainValley, ShiftingMV, OneWayPacking };

/// "soldiers", "mv4q", "smv3q", "pack2".
const char* to_string(Construction c);
std::optional<Construction> construction_from_string(const std::string& s);

struct InvarianceViolation : Error {
    using Error::Error;
};

/// How a host run encodes a guest run. One application of the contract is
/// k guest steps = l host history entries, with the guest picture moved by
/// `translation` host cells.
struct SimulationContract {
    Construction construction = Construction::MarchingSoldiers;
    int dimension = 1;
    int guest_states = 1;
    int host_states = 1;
    std::array<std::int64_t, 2> unpack{1, 1};
    Cell translation{0, 0};
    std::size_t k = 1;
    std::size_t l = 1;
    bool synchronous_host = false;
    /// psi[g] = host states that decode to guest state g.
    std::vector<std::vector<State>> psi;

    /// Guest state carried by a host state.
    State decode(State host) const;
    /// Host cell read for guest cell `g` after `applications` contract
    /// applications, for the history-based constructions.
    Cell host_cell(Cell g, std::size_t applications) const;
};

struct CompiledHost {
    RuleTable host;
    SimulationContract contract;
};

/// Host state (prev, cur, timer) flattened as ((prev*q)+cur)*3 + (timer-1).
CompiledHost compile_marching_soldiers(const RuleTable& guest);
/// Host state (s, t) flattened as s*4 + t.
CompiledHost compile_mountain_valley(const RuleTable& guest);
/// Host state (s, t) flattened as s*3 + (t-1).
CompiledHost compile_shifting_mv(const RuleTable& guest);
/// Host state (a, b) flattened as a*q + b. Synchronous one-way host.
CompiledHost compile_one_way_packing(const RuleTable& guest);
CompiledHost compile(Construction c, const RuleTable& guest);

/// o_m(psi(c)). O-cells of the mountain-valley encoding take state o_fill.
Configuration encode_guest_config(const SimulationContract& contract, const Configuration& guest, State o_fill = 0);

/// Host box for a guest box under the unpacking.
Box host_box(const SimulationContract& contract, const Box& guest_box);

struct InvariantStep {
    Configuration next;
    std::vector<Cell> stalled;
};

/// H^B on `domain`: every cell moves to the next entry of its history. The
/// entry is sampled under four fair schedules which must agree.
InvariantStep extract_invariant_step(const RuleTable& host, const Configuration& c, const Domain& domain,
                                     std::size_t budget_blocks = 16);

struct SimulationMismatch {
    std::size_t schedule = 0;
    std::size_t guest_step = 0;
    Cell cell{};
    State expected = 0;
    State got = 0;
    std::string note;
};

struct VerifyReport {
    bool agreed = true;
    bool invariant_histories = true;
    std::size_t schedules_run = 0;
    std::size_t frames_checked = 0;
    std::size_t host_steps = 0;
    std::optional<SimulationMismatch> first_mismatch;
    std::string summary() const;
};

/// Runs the host on the torus given by `guest_box` under every schedule and
/// compares decoded rows with the synchronous guest. guest_c0 must be
/// periodic with the box as its period. guest_steps must be a multiple of k.
VerifyReport verify_invariant_simulation(const RuleTable& guest, const CompiledHost& compiled,
                                         const Configuration& guest_c0, const Box& guest_box,
                                         const std::vector<UpdateSchedule>& schedules, std::size_t guest_steps);

/// Complete DFA over states 0..Q-1 and letters 0..L-1.
struct Dfa {
    int states = 1;
    int letters = 1;
    std::vector<int> delta;  // delta[q * letters + a]
    int start = 0;
    std::vector<bool> accepting;

    int step(int q, int a) const { return delta[static_cast<std::size_t>(q * letters + a)]; }
    /// States after each prefix, starting with `start`.
    std::vector<int> trace(const std::vector<int>& word) const;
    int run(const std::vector<int>& word) const { return trace(word).back(); }
};

/// One-way ACA for a DFA. Letters a encode as a; the tuple (q, x) with x a
/// letter or the blank |Sigma| encodes as |Sigma| + q*(|Sigma|+1) + x.
struct FsmEmbedding {
    RuleTable rule;
    int letters = 1;
    int fsm_states = 1;

    State letter(int a) const { return static_cast<State>(a); }
    State tuple(int q, std::optional<int> x) const;
    bool is_tuple(State s) const { return s >= letters; }
    int tuple_state(State s) const { return (s - letters) / (letters + 1); }
    /// Letter remembered by a tuple state, nullopt for the blank.
    std::optional<int> tuple_letter(State s) const;

    /// Word on cells 1..n, (q0, blank) elsewhere.
    Configuration encode(const std::vector<int>& word, int start) const;
};

FsmEmbedding embed_fsm(const Dfa& fsm);

}  // namespace acaforge
