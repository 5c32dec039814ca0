#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ionqec/pauli.hpp"
#include "ionqec/rng.hpp"

namespace ionqec {

enum class Axis { X, Y, Z };

/// Dense state vector over n <= 14 qubits. Qubit 0 is the least significant
/// amplitude index bit. Global phase is not normalised; comparisons should be
/// fidelity based.
class DenseState {
public:
    static constexpr size_t kMaxQubits = 14;

    explicit DenseState(size_t n);

    size_t num_qubits() const { return n_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
    std::vector<std::complex<double>>& amplitudes() { return amp_; }

    void reset_all_zero();
    void reset_qubit(size_t q, Rng& rng);

    /// exp(-i theta/2 P_q) for P in {X, Y, Z}.
    void rotate(Axis axis, double theta, size_t q);
    /// exp(-i theta/2 X_a X_b).
    void xx(double theta, size_t a, size_t b);
    void h(size_t q);
    void cnot(size_t c, size_t t);

    void apply_pauli(const PauliString& p);
    void apply_pauli_xz(uint64_t xmask, uint64_t zmask);

    /// Entangling-crosstalk unitary: for every (g, n) pair applies
    /// exp(-i ang/2 X_g X_n) with ang doubled for "doubled" neighbours.
    void crosstalk_xx(double ang, const std::vector<std::pair<size_t, size_t>>& pairs,
                      const std::vector<bool>& doubled);
    /// Stark-shift crosstalk: exp(-i phi Z_n) on each listed neighbour.
    void stark_z(double phi, const std::vector<size_t>& neighbors);

    /// Exact projector norms (p0, p1) for a Z measurement of qubit q.
    std::pair<double, double> branch_probs(size_t q) const;
    bool measure_z(size_t q, Rng& rng);
    /// Project onto the given outcome and renormalise. Throws if the branch
    /// probability is (numerically) zero.
    void project(size_t q, bool outcome);

    double norm() const;
    void renormalize();

    /// |<other|this>|^2, phase insensitive.
    double fidelity(const DenseState& other) const;

private:
    size_t n_;
    std::vector<std::complex<double>> amp_;
};

}  // namespace ionqec
