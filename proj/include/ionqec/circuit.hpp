#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ionqec {

/// Ion string geometry with logical roles. Positions are 1-based along the
/// string; the default 10-ion layout places data qubits 1..7 at positions
/// 2..8 and ancillas a1, a2, a3 at positions 1, 9, 10.
struct IonLayout {
    int num_ions = 10;

    static IonLayout default_ten_ion();

    /// Position of data qubit d (1..7).
    int data_position(int d) const { return d + 1; }
    /// Position of ancilla a (1..3).
    int ancilla_position(int a) const { return a == 1 ? 1 : 7 + a; }

    bool adjacent(int p, int q) const { return p >= 1 && q >= 1 && p <= num_ions && q <= num_ions && (p == q + 1 || q == p + 1); }

    /// String neighbors of position p.
    std::vector<int> neighbors(int p) const;
    /// Spectator neighbors of a two-ion gate: union of string neighbors of
    /// both gate ions, excluding the gate ions themselves.
    std::vector<int> gate_neighbors(int i, int j) const;
    /// A spectator is "doubled" when it sits between the gate ions and is
    /// adjacent to both, so it sees residual light from both beams.
    bool is_doubled(int n, int i, int j) const { return adjacent(n, i) && adjacent(n, j); }
};

enum class EventKind { Rotation, Ms, Prepare0, MeasureZ, RepumpLeak, Barrier };

enum class RotAxis { X, Y, Z };

/// One timed circuit event on ion positions.
struct Event {
    EventKind kind;
    RotAxis axis = RotAxis::X;   // Rotation only
    double theta = 0.0;          // Rotation / Ms angle
    int a = 0;                   // first ion
    int b = 0;                   // second ion (Ms only)
    int cbit = -1;               // classical bit index (MeasureZ only)
    double duration_us = 0.0;    // filled by schedule()
    double start_us = -1.0;      // filled by schedule()
};

/// Operation durations in microseconds.
struct DurationTable {
    double ms_gate = 15.0;
    double one_qubit = 1.0;
    double measurement = 30.0;
    double reset = 10.0;
    double recool = 100.0;
    double repump = 20.0;

    void validate() const;
    /// Duration of one event; MS gates scale linearly with |theta| relative
    /// to the fully entangling pi/2 gate.
    double event_duration(const Event& e) const;
};

struct Circuit {
    int num_ions = 0;
    std::vector<Event> events;
    int num_cbits = 0;

    Circuit() = default;
    explicit Circuit(int ions) : num_ions(ions) {}

    void rotation(RotAxis ax, double theta, int ion);
    void ms(double theta, int i, int j);
    void prepare0(int ion);
    int measure_z(int ion);  // returns classical bit index
    void repump(int ion);
    void barrier();
    void append(const Circuit& other);

    /// Native compilation of CNOT(control, target) into one fully entangling
    /// MS gate plus single-qubit rotations. The MS sign is selectable so
    /// repeated couplings can alternate phase and echo out coherent
    /// crosstalk buildup.
    void cnot(int control, int target, bool ms_positive = true);

    std::string to_text() const;
    static Circuit from_text(const std::string& text);
};

/// Replace every MS(theta, i, j) by the four-step refocussing sequence:
/// MS(theta/2), Z(pi) on the spectator neighbors, MS(theta/2), Z(pi) again.
Circuit insert_refocussing(const Circuit& c, const IonLayout& layout);

/// Per-ion idle interval attached to the event that ends it.
struct IdleInterval {
    int ion;
    double dt_us;
    size_t before_event;  // index into events; events.size() means trailing idle
};

struct Schedule {
    double total_us = 0.0;
    std::vector<IdleInterval> idles;
    std::vector<double> start_us;     // per event
    std::vector<double> duration_us;  // per event
};

/// Assign deterministic start times: MS gates run sequentially, consecutive
/// one-qubit rotations on disjoint ions share a slot, preparations /
/// measurements / repumps issued back-to-back are batched, and a barrier
/// synchronises all ions. Idle gaps (including leading and trailing ones
/// within the circuit) are reported per ion.
Schedule schedule(const Circuit& c, const DurationTable& durations);

}  // namespace ionqec
