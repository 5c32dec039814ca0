#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ionqec/circuit.hpp"
#include "ionqec/rng.hpp"

namespace ionqec {

enum class CrosstalkMode {
    Off,
    EntanglingCoherent,
    EntanglingIncoherent,
    StarkCoherent,
    StarkIncoherent,
};

enum class RefocusMode { Structural, Residual };

CrosstalkMode crosstalk_mode_from_string(const std::string& s);
std::string to_string(CrosstalkMode m);

/// All physical error parameters. Defaults follow the anticipated near-term
/// trapped-ion values used throughout the study.
struct NoiseParams {
    double p_1q = 1e-5;          // single-qubit depolarising rate
    double p_ms = 2e-4;          // fully entangling MS gate error rate
    double p_c = 0.0;            // crosstalk rate
    CrosstalkMode crosstalk_mode = CrosstalkMode::Off;
    bool refocussing = false;
    RefocusMode refocus_mode = RefocusMode::Structural;
    double p_sp = 1e-4;          // preparation flip rate
    double p_m = 1e-4;           // measurement flip rate
    double prep_leak_fraction = 0.0;
    double t1_s = 1.1;           // metastable state lifetime
    double t2_s = 2.2;           // coherence time
    double leak_ratio = 4.0 / 9.0;  // Gamma_l / Gamma_d
    double p_sg = 1e-4;          // repump single-pulse error rate
    bool idle_noise = true;
    DurationTable durations;

    void validate() const;
    bool coherent_only() const;
    bool needs_dense_backend() const;

    /// Crosstalk rotation angle for the fully entangling gate,
    /// theta_c = 2 arcsin(sqrt(p_c)).
    double crosstalk_angle() const;
    /// Stark-shift strength mu with p_c = sin^2(mu pi / 4).
    double stark_mu() const;

    std::map<std::string, std::string> to_kv() const;
    static NoiseParams from_kv(const std::map<std::string, std::string>& kv);
};

/// Kraus channel over one or two qubits restricted to (weight, Pauli) pairs
/// plus optional attached unitaries, which covers every channel in the model.
struct KrausChannel {
    struct Branch {
        double weight;
        // pauli codes per qubit: 0=I,1=X,2=Y,3=Z
        std::array<int, 2> pauli = {0, 0};
        bool crosstalk_unitary = false;  // apply U_CT = exp(-i th_ct X_n X_g) too
    };
    int arity = 1;
    std::vector<Branch> branches;
    double ct_angle = 0.0;  // angle of the attached crosstalk unitary

    /// sum_k K_k^dagger K_k == I within tol, checked at construction.
    void check_complete(double tol = 1e-12) const;
    /// Sample a branch index.
    size_t sample(Rng& rng) const;
};

KrausChannel depolarizing_1q(double p_1q);
/// Structured MS-gate Pauli channel: {1-p: I, 0.80p: X1X2, 0.05p: Y1,
/// 0.05p: Y2, 0.05p: X1Z2, 0.05p: Z1X2}.
KrausChannel ms_pauli_channel(double p_ms);
/// Residual channel of one refocussed MS on a (gate, neighbour) pair:
/// K0 = sqrt(1-2p) I, K1 = sqrt(p/3) Zn Uct, K2 = sqrt(p/3) Yn Uct,
/// K3 = sqrt(2p/3) Xn, K4 = sqrt(p/3) Zn, K5 = sqrt(p/3) Yn, with
/// Uct = exp(-i theta eps_ct Xn Xg). Pauli slot 0 is the neighbour.
KrausChannel refocus_residual_channel(double p_1q, double theta, double eps_ct);

/// Per-ion leak flags; cleared by preparation, measurement and (usually)
/// repumping.
class LeakRegistry {
public:
    explicit LeakRegistry(int num_ions = 0) : leaked_(num_ions + 1, false) {}
    void reset() { std::fill(leaked_.begin(), leaked_.end(), false); }
    bool leaked(int ion) const { return leaked_[ion]; }
    void set(int ion, bool v) { leaked_[ion] = v; }
    int count() const;

private:
    std::vector<bool> leaked_;
};

/// Idle channel probabilities for a given interval.
struct IdleRates {
    double p_dephase;  // Z with probability (1 - exp(-dt/T2)) / 2
    double p_decay;    // 1 - exp(-dt/T1)
};

IdleRates idle_rates(double dt_us, const NoiseParams& p);
/// Fraction of decay events that leak: Gamma_l / (Gamma_l + Gamma_d).
double leak_fraction(const NoiseParams& p);

}  // namespace ionqec
