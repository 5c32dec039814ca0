#pragma once

#include <cstdint>
#include <stdexcept>

#include "ionqec/pauli.hpp"
#include "ionqec/rng.hpp"

namespace ionqec {

/// Clifford gates understood by the tableau backend. Rotation gates are the
/// pi/2 (quarter turn) and pi (half turn) cases only; anything else needs the
/// dense backend.
enum class CliffordGate {
    H, S, Sdg, X, Y, Z,
    RxPlus, RxMinus,   // Rx(+pi/2), Rx(-pi/2)
    RyPlus, RyMinus,
    RzPlus, RzMinus,
    CNOT, CZ,
    MsPlus, MsMinus,   // XX(+pi/2), XX(-pi/2)
};

/// Measurement result from the stabiliser backend.
struct MeasureResult {
    bool outcome;
    bool was_random;
};

/// CHP-style stabiliser tableau over at most 31 qubits.
///
/// Storage is column-major: per qubit one 64-bit word holds the X (resp. Z)
/// bits of all 2n+1 rows (n destabilisers, n stabilisers, one scratch row),
/// so conjugating a one- or two-qubit Clifford is a handful of word ops.
class StabilizerTableau {
public:
    static constexpr size_t kMaxQubits = 31;

    explicit StabilizerTableau(size_t n);

    size_t num_qubits() const { return n_; }

    void reset_all_zero();
    /// Reset a single qubit to |0> (measure, flip if needed).
    void reset_qubit(size_t q, Rng& rng);

    void apply(CliffordGate g, size_t a);
    void apply(CliffordGate g, size_t a, size_t b);

    void h(size_t q);
    void s(size_t q);
    void sdg(size_t q);
    void x(size_t q);
    void y(size_t q);
    void z(size_t q);
    void rx(size_t q, bool positive);
    void ry(size_t q, bool positive);
    void rz(size_t q, bool positive);
    void cnot(size_t c, size_t t);
    void cz(size_t a, size_t b);
    /// XX(theta) = exp(-i theta/2 X_a X_b) for theta = +-pi/2.
    void ms(size_t a, size_t b, bool positive);

    /// Conjugate the state by a Pauli operator: flips the signs of all
    /// generators that anticommute with it. Self-inverse for any Pauli.
    void apply_pauli(const PauliString& p);
    void apply_pauli_xz(uint64_t xmask, uint64_t zmask);

    MeasureResult measure_z(size_t q, Rng& rng);

    /// Expectation of a Pauli observable on the current state: +1, -1 or 0.
    int expectation(const PauliString& p) const;

    PauliString stabilizer_row(size_t i) const;
    PauliString destabilizer_row(size_t i) const;

    /// Debug validator: generators commute, destabiliser pairing holds, and
    /// the combined x|z matrix has full rank. Throws on violation.
    void check_invariants() const;

private:
    void row_mult(size_t dst, size_t src);
    void row_set_z(size_t row, size_t q, bool sign);
    void row_copy(size_t dst, size_t src);
    void row_clear(size_t row);
    PauliString row_to_pauli(size_t row) const;

    size_t n_;
    uint64_t xcol_[kMaxQubits + 1];
    uint64_t zcol_[kMaxQubits + 1];
    uint64_t sign_;
    uint64_t stab_mask_;   // bits [n, 2n)
    uint64_t all_mask_;    // bits [0, 2n)
};

}  // namespace ionqec
