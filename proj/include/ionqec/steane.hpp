#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ionqec/engine.hpp"

namespace ionqec {

enum class Basis { Plus, Zero };
enum class BackendKind { Tableau, Dense, Paths };
enum class RetriggerPolicy { Always, DirectCorrect };

/// The 7-qubit colour code. Plaquette and logical supports are bitmasks over
/// data qubits 1..7 (bit q-1); X- and Z-type checks share supports.
struct SteaneCode {
    std::array<uint8_t, 3> plaquette = {0x0F, 0x36, 0x6C};  // {1,2,3,4} {2,3,5,6} {3,4,6,7}
    uint8_t logical = 0x70;                                  // {5,6,7}

    static SteaneCode standard() { return {}; }

    /// 3-bit syndrome of an error support mask against the three checks.
    uint8_t syndrome(uint8_t err) const;
    /// Qubit (1..7) flipped by the minimum-weight correction, 0 for none.
    int correction_qubit(uint8_t syn) const;
    bool in_check_group(uint8_t mask) const;
    /// Minimum weight of a logical representative, by brute force.
    int distance() const;
    /// Canonical minimum-weight coset representative of an (x, z) data Pauli
    /// modulo the six checks, optionally extended by the logical X and/or Z
    /// operator (the stabiliser group of a prepared |+>_L / |0>_L state).
    std::pair<uint8_t, uint8_t> reduce(uint8_t x, uint8_t z, bool mod_logical_x = false,
                                       bool mod_logical_z = false) const;
    /// True when the Pauli is in the check group (acts trivially on any
    /// codeword).
    bool trivial(uint8_t x, uint8_t z) const;
};

/// One parallel flagged readout group: which stabiliser each ancilla
/// measures, whether it is X-type, and the interleaved CNOT time order.
struct FlagSchedule {
    std::array<uint8_t, 3> stab_mask;     // data support per ancilla
    std::array<bool, 3> x_type;           // X-type readout (ancilla is control)
    std::array<std::array<int, 4>, 3> qubit_order;  // data qubits, CNOT time order
    std::array<int, 12> interleave;       // ancilla index sequence
};

FlagSchedule group_a_schedule();
FlagSchedule group_b_schedule();

Circuit build_flag_group_circuit(const FlagSchedule& fs, const IonLayout& layout);

/// Parallel X- and Z-type readouts stay deterministic on a codeword only if
/// for every mixed ancilla pair the number of shared data qubits where the
/// X-type ancilla interacts first is even (the picked-up ancilla operators
/// then cancel pairwise). True when the schedule satisfies this.
bool flag_schedule_sound(const FlagSchedule& fs);

struct ProtocolCircuits {
    Circuit prep;       // flag verified encoding; classical bit 0 is the flag
    Circuit repump;     // repump every ion
    Circuit group_a;    // cbits 0..2 = Sx1, Sz2, Sz3
    Circuit group_b;    // cbits 0..2 = Sz1, Sx2, Sx3
    Circuit unflagged;  // cbits 0..5 = Sx1, Sz2, Sz3, Sz1, Sx2, Sx3
    Circuit readout;    // cbits 0..6 = data 1..7
};

/// MS-compiled circuits for one QEC round in the given basis.
ProtocolCircuits build_protocol_circuits(Basis basis, const IonLayout& layout);
/// Same, with explicit flagged-group schedules (ordering search / tests).
ProtocolCircuits build_protocol_circuits_with(Basis basis, const IonLayout& layout,
                                              const FlagSchedule& ga, const FlagSchedule& gb);

struct Correction {
    uint8_t x = 0, z = 0;  // data Pauli masks
    bool operator==(const Correction&) const = default;
};

/// Lookup decoder keyed on (6 first-round bits, 6 re-measured syndrome
/// bits), built by exhaustive single-fault enumeration of the flagged
/// circuits. Unknown keys fall back to plain syndrome decoding.
class DecodeTable {
public:
    DecodeTable() : entries_(1 << 12), known_(1 << 12, 0) {}

    Correction lookup(uint8_t bits1, uint8_t s2, const SteaneCode& code) const;
    Correction naive(uint8_t syn6, const SteaneCode& code) const;

    void insert(uint16_t key, const Correction& c) { entries_[key] = c; known_[key] = 1; }
    bool knows(uint16_t key) const { return known_[key] != 0; }
    const Correction& at(uint16_t key) const { return entries_[key]; }
    size_t num_known() const;

private:
    std::vector<Correction> entries_;
    std::vector<uint8_t> known_;
};

struct TrialOutcome {
    bool logical_failure = false;
    bool flags_raised = false;
    int rounds_run = 1;
    int prep_restarts = 0;
};

/// A fully lowered QEC-round experiment: compiled circuits, execution plans
/// for the chosen backend, and the decode table.
class SteaneExperiment {
public:
    SteaneExperiment(Basis basis, const NoiseParams& noise, BackendKind backend,
                     RetriggerPolicy retrigger = RetriggerPolicy::Always,
                     IonLayout layout = IonLayout::default_ten_ion(),
                     const ProtocolCircuits* circuits_override = nullptr);

    TrialOutcome run_trial(Rng& rng) const;

    /// Protocol segments for fault injection.
    enum Segment { SegPrep = 0, SegRepump = 1, SegGroupA = 2, SegGroupB = 3, SegUnflagged = 4, SegReadout = 5 };
    TrialOutcome run_trial_with_fault(Rng& rng, int segment, const FaultInjection& inj) const;

    Basis basis() const { return basis_; }
    BackendKind backend() const { return backend_; }
    const NoiseParams& noise() const { return noise_; }
    const SteaneCode& code() const { return code_; }
    const DecodeTable& table() const { return table_; }
    const IonLayout& layout() const { return layout_; }
    RetriggerPolicy retrigger() const { return retrigger_; }

    const ProtocolCircuits& circuits() const { return circuits_; }
    const ExecPlan& prep_plan() const { return prep_p_; }
    const ExecPlan& repump_plan() const { return repump_p_; }
    const ExecPlan& group_a_plan() const { return ga_p_; }
    const ExecPlan& group_b_plan() const { return gb_p_; }
    const ExecPlan& unflagged_plan() const { return unf_p_; }
    const ExecPlan& readout_plan() const { return ro_p_; }

    /// Classical decode of the transversal readout; true means logical
    /// failure.
    bool decode_readout(const std::vector<uint8_t>& bits) const;

    /// Apply a data-qubit Pauli to the simulator state (noiseless, used for
    /// the recovery operation; the final readout correction is classical).
    template <class Backend>
    void apply_correction(Backend& b, const Correction& c) const {
        b.sim.apply_pauli_xz(uint64_t(c.x) << 1, uint64_t(c.z) << 1);
    }

private:
    template <class Backend>
    TrialOutcome run_trial_impl(Rng& rng, int fault_segment, const FaultInjection* inj) const;

    Basis basis_;
    NoiseParams noise_;
    BackendKind backend_;
    RetriggerPolicy retrigger_;
    IonLayout layout_;
    SteaneCode code_;
    ProtocolCircuits circuits_;       // runtime circuits (refocussed if enabled)
    ProtocolCircuits table_circuits_; // standard circuits for table building
    ExecPlan prep_p_, repump_p_, ga_p_, gb_p_, unf_p_, ro_p_;
    DecodeTable table_;

    friend class PathEnumerator;
};

/// Build the lookup table by frame-propagating every single fault of the
/// flagged circuits. Throws if two faults share a signature but need
/// logically inequivalent corrections (the circuits would not be FT).
DecodeTable build_decode_table(const SteaneCode& code, Basis basis, const ExecPlan& prep,
                               const ExecPlan& group_a, const ExecPlan& group_b,
                               const ExecPlan& unflagged, const ExecPlan& readout);

/// All single-fault injections of a plan: every Pauli after every gate,
/// preparation flips and measurement flips.
std::vector<FaultInjection> enumerate_fault_set(const ExecPlan& plan);

struct FtCheckResult {
    size_t faults_checked = 0;
    size_t failures = 0;
};

/// Runs the full QEC round once per injected single fault (all circuit
/// locations of every segment) on the experiment's backend and counts
/// logical failures. With noiseless parameters this is the fault-tolerance
/// property check: the expected failure count is zero.
FtCheckResult exhaustive_single_fault_check(const SteaneExperiment& exp, uint64_t seed = 7);

}  // namespace ionqec
