#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ionqec {

/// n-qubit Pauli operator i^phase * prod_q X_q^x Z_q^z, with the phase
/// exponent tracked exactly (0..3, i.e. +1, +i, -1, -i).
///
/// The (x,z) convention: (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y where Y = iXZ,
/// so a bare (x=1,z=1) word pair contributes a factor -i relative to Y.
/// All public accessors hide that bookkeeping.
class PauliString {
public:
    explicit PauliString(size_t n) : n_(n), x_((n + 63) / 64, 0), z_((n + 63) / 64, 0), phase_(0) {}

    static PauliString identity(size_t n) { return PauliString(n); }

    /// Parse e.g. "+XIZY" or "-iXX". '_' is accepted as identity.
    static PauliString from_str(const std::string& s);

    size_t num_qubits() const { return n_; }

    bool x(size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
    bool z(size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1; }

    void set_x(size_t q, bool v) { assign_bit(x_, q, v); }
    void set_z(size_t q, bool v) { assign_bit(z_, q, v); }

    /// 0=I, 1=X, 2=Y, 3=Z on qubit q.
    int pauli_at(size_t q) const {
        bool xb = x(q), zb = z(q);
        if (xb && zb) return 2;
        if (xb) return 1;
        if (zb) return 3;
        return 0;
    }

    void set_pauli(size_t q, int p) {
        switch (p) {
            case 0: set_x(q, false); set_z(q, false); break;
            case 1: set_x(q, true); set_z(q, false); break;
            case 2: set_x(q, true); set_z(q, true); break;
            case 3: set_x(q, false); set_z(q, true); break;
            default: throw std::invalid_argument("pauli code must be 0..3");
        }
    }

    /// Phase exponent k for i^k, in {0,1,2,3}, of the whole operator.
    int phase_exponent() const;
    void set_phase_exponent(int k);

    int weight() const {
        int w = 0;
        for (size_t q = 0; q < n_; ++q) w += (x(q) || z(q)) ? 1 : 0;
        return w;
    }

    bool commutes_with(const PauliString& other) const;

    /// In-place product: *this = *this * other, phase tracked exactly.
    PauliString& operator*=(const PauliString& other);
    friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }

    bool operator==(const PauliString& other) const {
        return n_ == other.n_ && x_ == other.x_ && z_ == other.z_ && phase_ == other.phase_;
    }

    bool same_letters(const PauliString& other) const {
        return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
    }

    std::string str() const;

    const std::vector<uint64_t>& x_words() const { return x_; }
    const std::vector<uint64_t>& z_words() const { return z_; }

private:
    static void assign_bit(std::vector<uint64_t>& w, size_t q, bool v) {
        uint64_t mask = uint64_t(1) << (q & 63);
        if (v) w[q >> 6] |= mask; else w[q >> 6] &= ~mask;
    }

    size_t n_;
    std::vector<uint64_t> x_, z_;
    // Internal phase exponent of i^phase_ * prod (X^x Z^z); differs from the
    // user-facing exponent by one factor of i per Y.
    int phase_;
};

}  // namespace ionqec
