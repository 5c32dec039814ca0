#include "ionqec/dense.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace ionqec {

using cd = std::complex<double>;

DenseState::DenseState(size_t n) : n_(n) {
    if (n == 0 || n > kMaxQubits) {
        throw std::invalid_argument("dense backend supports 1..14 qubits");
    }
    amp_.assign(size_t(1) << n_, cd(0.0, 0.0));
    amp_[0] = 1.0;
}

void DenseState::reset_all_zero() {
    std::fill(amp_.begin(), amp_.end(), cd(0.0, 0.0));
    amp_[0] = 1.0;
}

void DenseState::reset_qubit(size_t q, Rng& rng) {
    bool r = measure_z(q, rng);
    if (r) apply_pauli_xz(uint64_t(1) << q, 0);
}

void DenseState::rotate(Axis axis, double theta, size_t q) {
    if (q >= n_) throw std::out_of_range("rotate qubit out of range");
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const size_t bit = size_t(1) << q;
    const size_t dim = amp_.size();
    if (axis == Axis::Z) {
        const cd e0(c, -s), e1(c, s);
        for (size_t i = 0; i < dim; ++i) amp_[i] *= (i & bit) ? e1 : e0;
        return;
    }
    for (size_t base = 0; base < dim; ++base) {
        if (base & bit) continue;
        cd a0 = amp_[base], a1 = amp_[base | bit];
        if (axis == Axis::X) {
            amp_[base] = c * a0 + cd(0, -s) * a1;
            amp_[base | bit] = cd(0, -s) * a0 + c * a1;
        } else {  // Y
            amp_[base] = c * a0 - s * a1;
            amp_[base | bit] = s * a0 + c * a1;
        }
    }
}

void DenseState::xx(double theta, size_t a, size_t b) {
    if (a == b || a >= n_ || b >= n_) throw std::out_of_range("xx targets invalid");
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const cd ms(0, -s);
    const size_t mask = (size_t(1) << a) | (size_t(1) << b);
    const size_t dim = amp_.size();
    for (size_t i = 0; i < dim; ++i) {
        size_t j = i ^ mask;
        if (i < j) {
            cd ai = amp_[i], aj = amp_[j];
            amp_[i] = c * ai + ms * aj;
            amp_[j] = ms * ai + c * aj;
        }
    }
}

void DenseState::h(size_t q) {
    const size_t bit = size_t(1) << q;
    const double r = 1.0 / std::sqrt(2.0);
    for (size_t base = 0; base < amp_.size(); ++base) {
        if (base & bit) continue;
        cd a0 = amp_[base], a1 = amp_[base | bit];
        amp_[base] = r * (a0 + a1);
        amp_[base | bit] = r * (a0 - a1);
    }
}

void DenseState::cnot(size_t c, size_t t) {
    const size_t cb = size_t(1) << c, tb = size_t(1) << t;
    for (size_t i = 0; i < amp_.size(); ++i) {
        if ((i & cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
    }
}

void DenseState::apply_pauli(const PauliString& p) {
    if (p.num_qubits() != n_) throw std::invalid_argument("pauli size mismatch");
    uint64_t xm = 0, zm = 0;
    for (size_t q = 0; q < n_; ++q) {
        if (p.x(q)) xm |= uint64_t(1) << q;
        if (p.z(q)) zm |= uint64_t(1) << q;
    }
    apply_pauli_xz(xm, zm);
    int k = p.phase_exponent();
    // restore the i^k prefactor plus the i per Y absorbed below
    int ys = 0;
    for (size_t q = 0; q < n_; ++q) ys += (p.x(q) && p.z(q)) ? 1 : 0;
    k = (k + ys) & 3;
    static const cd ik[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    if (k != 0) {
        for (auto& a : amp_) a *= ik[k];
    }
}

void DenseState::apply_pauli_xz(uint64_t xmask, uint64_t zmask) {
    // applies prod X^x Z^z (Y letters contribute -i each, restored by caller)
    const size_t dim = amp_.size();
    if (xmask == 0) {
        for (size_t i = 0; i < dim; ++i) {
            if (std::popcount(uint64_t(i) & zmask) & 1) amp_[i] = -amp_[i];
        }
        return;
    }
    for (size_t i = 0; i < dim; ++i) {
        size_t j = i ^ xmask;  // X flips
        if (j < i) continue;
        cd vi = amp_[i], vj = amp_[j];
        if (std::popcount(uint64_t(i) & zmask) & 1) vi = -vi;  // Z acts first
        if (std::popcount(uint64_t(j) & zmask) & 1) vj = -vj;
        amp_[i] = vj;
        amp_[j] = vi;
    }
}

void DenseState::crosstalk_xx(double ang, const std::vector<std::pair<size_t, size_t>>& pairs,
                              const std::vector<bool>& doubled) {
    for (size_t k = 0; k < pairs.size(); ++k) {
        double a = ang * (k < doubled.size() && doubled[k] ? 2.0 : 1.0);
        xx(a, pairs[k].first, pairs[k].second);
    }
}

void DenseState::stark_z(double phi, const std::vector<size_t>& neighbors) {
    for (size_t q : neighbors) rotate(Axis::Z, 2.0 * phi, q);
}

std::pair<double, double> DenseState::branch_probs(size_t q) const {
    if (q >= n_) throw std::out_of_range("branch_probs qubit out of range");
    const size_t bit = size_t(1) << q;
    double p1 = 0;
    for (size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) p1 += std::norm(amp_[i]);
    }
    double p0 = 0;
    for (size_t i = 0; i < amp_.size(); ++i) {
        if (!(i & bit)) p0 += std::norm(amp_[i]);
    }
    return {p0, p1};
}

bool DenseState::measure_z(size_t q, Rng& rng) {
    auto [p0, p1] = branch_probs(q);
    bool outcome = rng.uniform() * (p0 + p1) >= p0;
    project(q, outcome);
    return outcome;
}

void DenseState::project(size_t q, bool outcome) {
    const size_t bit = size_t(1) << q;
    double p = 0;
    for (size_t i = 0; i < amp_.size(); ++i) {
        bool one = (i & bit) != 0;
        if (one != outcome) amp_[i] = 0;
        else p += std::norm(amp_[i]);
    }
    if (p < 1e-300) throw std::runtime_error("projection onto zero-probability branch");
    double inv = 1.0 / std::sqrt(p);
    for (auto& a : amp_) a *= inv;
}

double DenseState::norm() const {
    double s = 0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

void DenseState::renormalize() {
    double inv = 1.0 / norm();
    for (auto& a : amp_) a *= inv;
}

double DenseState::fidelity(const DenseState& other) const {
    if (other.n_ != n_) throw std::invalid_argument("state size mismatch");
    cd ov(0, 0);
    for (size_t i = 0; i < amp_.size(); ++i) ov += std::conj(other.amp_[i]) * amp_[i];
    return std::norm(ov);
}

}  // namespace ionqec
