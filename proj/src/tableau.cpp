#include "ionqec/tableau.hpp"

#include <bit>
#include <cstring>

namespace ionqec {

// ---------------------------------------------------------------------------
// PauliString

PauliString PauliString::from_str(const std::string& s) {
    size_t i = 0;
    int k = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') k = 2;
        ++i;
    }
    if (i < s.size() && s[i] == 'i') {
        k = (k + 1) & 3;
        ++i;
    }
    PauliString p(s.size() - i);
    for (size_t q = 0; i < s.size(); ++i, ++q) {
        switch (s[i]) {
            case 'I': case '_': break;
            case 'X': p.set_pauli(q, 1); break;
            case 'Y': p.set_pauli(q, 2); break;
            case 'Z': p.set_pauli(q, 3); break;
            default: throw std::invalid_argument("bad pauli letter");
        }
    }
    p.set_phase_exponent(k);
    return p;
}

int PauliString::phase_exponent() const {
    int ys = 0;
    for (size_t w = 0; w < x_.size(); ++w) ys += std::popcount(x_[w] & z_[w]);
    return ((phase_ - ys) % 4 + 4) & 3;
}

void PauliString::set_phase_exponent(int k) {
    int ys = 0;
    for (size_t w = 0; w < x_.size(); ++w) ys += std::popcount(x_[w] & z_[w]);
    phase_ = ((k + ys) % 4 + 4) & 3;
}

bool PauliString::commutes_with(const PauliString& other) const {
    if (n_ != other.n_) throw std::invalid_argument("pauli size mismatch");
    int par = 0;
    for (size_t w = 0; w < x_.size(); ++w) {
        par ^= std::popcount((x_[w] & other.z_[w]) ^ (z_[w] & other.x_[w])) & 1;
    }
    return par == 0;
}

PauliString& PauliString::operator*=(const PauliString& other) {
    if (n_ != other.n_) throw std::invalid_argument("pauli size mismatch");
    int ph = phase_ + other.phase_;
    for (size_t w = 0; w < x_.size(); ++w) {
        // reorder Z-from-left past X-from-right: each crossing gives -1
        ph += 2 * std::popcount(z_[w] & other.x_[w]);
        x_[w] ^= other.x_[w];
        z_[w] ^= other.z_[w];
    }
    phase_ = ph & 3;
    return *this;
}

std::string PauliString::str() const {
    static const char* pre[4] = {"+", "+i", "-", "-i"};
    std::string out = pre[phase_exponent()];
    for (size_t q = 0; q < n_; ++q) out += "IXYZ"[pauli_at(q)];
    return out;
}

// ---------------------------------------------------------------------------
// StabilizerTableau

StabilizerTableau::StabilizerTableau(size_t n) : n_(n) {
    if (n == 0 || n > kMaxQubits) {
        throw std::invalid_argument("tableau supports 1..31 qubits");
    }
    stab_mask_ = ((uint64_t(1) << n_) - 1) << n_;
    all_mask_ = (uint64_t(1) << (2 * n_)) - 1;
    reset_all_zero();
}

void StabilizerTableau::reset_all_zero() {
    // destabiliser i = X_i, stabiliser i = Z_i
    for (size_t q = 0; q < n_; ++q) {
        xcol_[q] = uint64_t(1) << q;
        zcol_[q] = uint64_t(1) << (n_ + q);
    }
    sign_ = 0;
}

void StabilizerTableau::h(size_t q) {
    sign_ ^= xcol_[q] & zcol_[q];
    std::swap(xcol_[q], zcol_[q]);
}

void StabilizerTableau::s(size_t q) {
    sign_ ^= xcol_[q] & zcol_[q];
    zcol_[q] ^= xcol_[q];
}

void StabilizerTableau::sdg(size_t q) {
    zcol_[q] ^= xcol_[q];
    sign_ ^= xcol_[q] & zcol_[q];
}

void StabilizerTableau::x(size_t q) { sign_ ^= zcol_[q]; }
void StabilizerTableau::z(size_t q) { sign_ ^= xcol_[q]; }
void StabilizerTableau::y(size_t q) { sign_ ^= xcol_[q] ^ zcol_[q]; }

void StabilizerTableau::rx(size_t q, bool positive) {
    // Rx(+pi/2): Y -> Z, Z -> -Y.  Rx(-pi/2): Y -> -Z, Z -> Y.
    uint64_t xq = xcol_[q], zq = zcol_[q];
    sign_ ^= positive ? (zq & ~xq) : (zq & xq);
    xcol_[q] = xq ^ zq;
}

void StabilizerTableau::ry(size_t q, bool positive) {
    // Ry(+pi/2): X -> -Z, Z -> X.  Ry(-pi/2): X -> Z, Z -> -X.
    uint64_t xq = xcol_[q], zq = zcol_[q];
    sign_ ^= positive ? (xq & ~zq) : (zq & ~xq);
    std::swap(xcol_[q], zcol_[q]);
}

void StabilizerTableau::rz(size_t q, bool positive) {
    // Rz(+pi/2) == S, Rz(-pi/2) == Sdg up to global phase.
    if (positive) s(q); else sdg(q);
}

void StabilizerTableau::cnot(size_t c, size_t t) {
    uint64_t xc = xcol_[c], zt = zcol_[t];
    sign_ ^= xc & zt & ~(xcol_[t] ^ zcol_[c]);
    xcol_[t] ^= xc;
    zcol_[c] ^= zt;
}

void StabilizerTableau::cz(size_t a, size_t b) {
    h(b);
    cnot(a, b);
    h(b);
}

void StabilizerTableau::ms(size_t a, size_t b, bool positive) {
    // exp(-i pi/4 XX): Z_a -> -Y_a X_b, Y_a -> Z_a X_b, and symmetrically.
    // Rows anticommuting with X_a X_b (z_a ^ z_b set) flip sign when they
    // carry no Y factor (positive angle) or a Y factor (negative angle).
    uint64_t za = zcol_[a], zb = zcol_[b];
    uint64_t anti = za ^ zb;
    uint64_t has_y = (xcol_[a] & za) | (xcol_[b] & zb);
    sign_ ^= positive ? (anti & ~has_y) : (anti & has_y);
    xcol_[a] ^= anti;
    xcol_[b] ^= anti;
}

void StabilizerTableau::apply(CliffordGate g, size_t a) {
    switch (g) {
        case CliffordGate::H: h(a); return;
        case CliffordGate::S: s(a); return;
        case CliffordGate::Sdg: sdg(a); return;
        case CliffordGate::X: x(a); return;
        case CliffordGate::Y: y(a); return;
        case CliffordGate::Z: z(a); return;
        case CliffordGate::RxPlus: rx(a, true); return;
        case CliffordGate::RxMinus: rx(a, false); return;
        case CliffordGate::RyPlus: ry(a, true); return;
        case CliffordGate::RyMinus: ry(a, false); return;
        case CliffordGate::RzPlus: rz(a, true); return;
        case CliffordGate::RzMinus: rz(a, false); return;
        default: throw std::invalid_argument("gate needs two targets");
    }
}

void StabilizerTableau::apply(CliffordGate g, size_t a, size_t b) {
    if (a == b || a >= n_ || b >= n_) throw std::out_of_range("bad gate targets");
    switch (g) {
        case CliffordGate::CNOT: cnot(a, b); return;
        case CliffordGate::CZ: cz(a, b); return;
        case CliffordGate::MsPlus: ms(a, b, true); return;
        case CliffordGate::MsMinus: ms(a, b, false); return;
        default: throw std::invalid_argument("gate needs one target");
    }
}

void StabilizerTableau::apply_pauli(const PauliString& p) {
    if (p.num_qubits() != n_) throw std::invalid_argument("pauli size mismatch");
    uint64_t xm = 0, zm = 0;
    for (size_t q = 0; q < n_; ++q) {
        if (p.x(q)) xm |= uint64_t(1) << q;
        if (p.z(q)) zm |= uint64_t(1) << q;
    }
    apply_pauli_xz(xm, zm);
}

void StabilizerTableau::apply_pauli_xz(uint64_t xmask, uint64_t zmask) {
    uint64_t acc = 0;
    uint64_t m = xmask | zmask;
    while (m) {
        size_t q = std::countr_zero(m);
        m &= m - 1;
        if ((zmask >> q) & 1) acc ^= xcol_[q];
        if ((xmask >> q) & 1) acc ^= zcol_[q];
    }
    sign_ ^= acc;
}

void StabilizerTableau::row_mult(size_t dst, size_t src) {
    // phase exponent of i accumulated with the CHP g-function
    int g = ((sign_ >> dst) & 1) * 2 + ((sign_ >> src) & 1) * 2;
    for (size_t q = 0; q < n_; ++q) {
        int x1 = (xcol_[q] >> src) & 1, z1 = (zcol_[q] >> src) & 1;
        int x2 = (xcol_[q] >> dst) & 1, z2 = (zcol_[q] >> dst) & 1;
        if (x1 && z1) g += z2 - x2;
        else if (x1) g += z2 * (2 * x2 - 1);
        else if (z1) g += x2 * (1 - 2 * z2);
        uint64_t bit = uint64_t(1) << dst;
        xcol_[q] = (xcol_[q] & ~bit) | (uint64_t((xcol_[q] >> src) ^ (xcol_[q] >> dst)) & 1) << dst;
        zcol_[q] = (zcol_[q] & ~bit) | (uint64_t((zcol_[q] >> src) ^ (zcol_[q] >> dst)) & 1) << dst;
    }
    g = ((g % 4) + 4) & 3;
    uint64_t bit = uint64_t(1) << dst;
    sign_ = (sign_ & ~bit) | (uint64_t(g == 2) << dst);
}

void StabilizerTableau::row_copy(size_t dst, size_t src) {
    uint64_t bit = uint64_t(1) << dst;
    for (size_t q = 0; q < n_; ++q) {
        xcol_[q] = (xcol_[q] & ~bit) | ((uint64_t(xcol_[q] >> src) & 1) << dst);
        zcol_[q] = (zcol_[q] & ~bit) | ((uint64_t(zcol_[q] >> src) & 1) << dst);
    }
    sign_ = (sign_ & ~bit) | ((uint64_t(sign_ >> src) & 1) << dst);
}

void StabilizerTableau::row_clear(size_t row) {
    uint64_t bit = uint64_t(1) << row;
    for (size_t q = 0; q < n_; ++q) {
        xcol_[q] &= ~bit;
        zcol_[q] &= ~bit;
    }
    sign_ &= ~bit;
}

void StabilizerTableau::row_set_z(size_t row, size_t q, bool sign) {
    row_clear(row);
    zcol_[q] |= uint64_t(1) << row;
    if (sign) sign_ |= uint64_t(1) << row;
}

MeasureResult StabilizerTableau::measure_z(size_t q, Rng& rng) {
    if (q >= n_) throw std::out_of_range("measure_z qubit out of range");
    uint64_t anti_stab = xcol_[q] & stab_mask_;
    if (anti_stab != 0) {
        size_t p = std::countr_zero(anti_stab);
        uint64_t others = xcol_[q] & all_mask_ & ~(uint64_t(1) << p);
        while (others) {
            size_t i = std::countr_zero(others);
            others &= others - 1;
            row_mult(i, p);
        }
        row_copy(p - n_, p);
        bool outcome = rng.bit();
        row_set_z(p, q, outcome);
        return {outcome, true};
    }
    // deterministic: accumulate into scratch row 2n
    size_t scratch = 2 * n_;
    row_clear(scratch);
    uint64_t destab = xcol_[q] & (all_mask_ >> n_);
    while (destab) {
        size_t i = std::countr_zero(destab);
        destab &= destab - 1;
        row_mult(scratch, i + n_);
    }
    return {((sign_ >> scratch) & 1) != 0, false};
}

void StabilizerTableau::reset_qubit(size_t q, Rng& rng) {
    auto r = measure_z(q, rng);
    if (r.outcome) x(q);
}

PauliString StabilizerTableau::row_to_pauli(size_t row) const {
    PauliString p(n_);
    for (size_t q = 0; q < n_; ++q) {
        p.set_x(q, (xcol_[q] >> row) & 1);
        p.set_z(q, (zcol_[q] >> row) & 1);
    }
    p.set_phase_exponent(((sign_ >> row) & 1) ? 2 : 0);
    return p;
}

PauliString StabilizerTableau::stabilizer_row(size_t i) const { return row_to_pauli(n_ + i); }
PauliString StabilizerTableau::destabilizer_row(size_t i) const { return row_to_pauli(i); }

int StabilizerTableau::expectation(const PauliString& p) const {
    if (p.num_qubits() != n_) throw std::invalid_argument("pauli size mismatch");
    for (size_t i = 0; i < n_; ++i) {
        if (!stabilizer_row(i).commutes_with(p)) return 0;
    }
    // p commutes with the whole group, so p = +-prod of the stabilisers it
    // fails to commute with at the destabiliser level.
    PauliString prod = PauliString::identity(n_);
    for (size_t i = 0; i < n_; ++i) {
        if (!destabilizer_row(i).commutes_with(p)) prod *= stabilizer_row(i);
    }
    if (!prod.same_letters(p)) return 0;  // p not in +-group (e.g. identity mismatch)
    int dk = (prod.phase_exponent() - p.phase_exponent() + 4) & 3;
    if (dk == 0) return 1;
    if (dk == 2) return -1;
    return 0;
}

void StabilizerTableau::check_invariants() const {
    for (size_t i = 0; i < n_; ++i) {
        PauliString si = stabilizer_row(i);
        PauliString di = destabilizer_row(i);
        for (size_t j = 0; j < n_; ++j) {
            if (!si.commutes_with(stabilizer_row(j))) {
                throw std::logic_error("stabilisers do not commute");
            }
            bool anti = !di.commutes_with(stabilizer_row(j));
            if (anti != (i == j)) {
                throw std::logic_error("destabiliser pairing broken");
            }
        }
    }
    // rank check: 2n rows of (x|z) bits must be independent over GF(2)
    uint64_t rows[2 * kMaxQubits];
    for (size_t r = 0; r < 2 * n_; ++r) {
        uint64_t v = 0;
        for (size_t q = 0; q < n_; ++q) {
            v |= (uint64_t((xcol_[q] >> r) & 1) << q);
            v |= (uint64_t((zcol_[q] >> r) & 1) << (n_ + q));
        }
        rows[r] = v;
    }
    size_t rank = 0;
    for (size_t col = 0; col < 2 * n_ && rank < 2 * n_; ++col) {
        size_t pivot = rank;
        while (pivot < 2 * n_ && !((rows[pivot] >> col) & 1)) ++pivot;
        if (pivot == 2 * n_) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < 2 * n_; ++r) {
            if (r != rank && ((rows[r] >> col) & 1)) rows[r] ^= rows[rank];
        }
        ++rank;
    }
    if (rank != 2 * n_) throw std::logic_error("tableau rank deficient");
}

}  // namespace ionqec
