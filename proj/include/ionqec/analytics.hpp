#pragma once

#include <map>
#include <string>
#include <vector>

namespace ionqec {

/// Inputs for the MS-gate crosstalk infidelity budget. Frequencies and rates
/// are angular and in Hz, times in seconds; the simulator's microsecond
/// durations are converted at the boundary by the caller.
struct MsBudgetInput {
    int num_active = 2;                 // N
    std::vector<double> omega_ratios;   // Omega_j / Omega per spectator (M entries)
    double omega = 2 * 3.14159265358979323846 * 100e3;  // Rabi frequency
    double delta = 2 * 3.14159265358979323846 * 1e6;    // sideband detuning
    std::vector<double> eta;            // Lamb-Dicke parameter per mode
    std::vector<double> mode_freq;      // omega_n per mode
    std::vector<double> nbar;           // thermal occupation per mode
    std::vector<std::vector<double>> mode_vec;  // M_{j,n}: spectator x mode
    double t_gate = 15e-6;              // s
    double t2 = 2.2;                    // s
    double gamma_intensity = 0.0;       // intensity-noise rate
    double eps_ms = 2e-4;               // crosstalk-free MS infidelity

    int num_spectators() const { return int(omega_ratios.size()); }
    void validate() const;

    static MsBudgetInput from_kv(const std::map<std::string, std::string>& kv);
};

/// Coherent spectator rotation error: (pi^2/4) N sum_j (Omega_j/Omega)^2.
double eps_ct_ms(int num_active, const std::vector<double>& omega_ratios);
/// Off-resonant carrier excitation: (1/2)(Omega/delta)^2 sum_j ratios^2.
double eps_ct_off(double omega, double delta, const std::vector<double>& omega_ratios);
/// Debye-Waller fluctuations of the state-dependent force.
double eps_ct_dw(int num_active, int num_spectators, const std::vector<double>& omega_ratios,
                 const std::vector<double>& eta, const std::vector<double>& nbar);
/// Residual spin-motion entanglement from unclosed spectator-mode loops.
double eps_ct_loops(const std::vector<double>& omega_j, const std::vector<double>& mode_freq,
                    const std::vector<double>& eta, const std::vector<std::vector<double>>& mode_vec,
                    const std::vector<double>& nbar);
/// Collective dephasing: 2 N^2 t_g / T2.
double eps_ct_deph(int num_active, double t_gate, double t2);
/// Laser intensity noise on the residually illuminated spectators.
double eps_ct_int(double gamma_intensity, double t_gate, const std::vector<double>& eta,
                  const std::vector<double>& nbar, const std::vector<double>& omega_ratios);
/// Small parameter chi = sum_j (Omega_j/Omega)^2.
double chi(const std::vector<double>& omega_ratios);
/// Total crosstalk infidelity chi (eps_MS + pi^2 N / 4 + 2 N^2 t_g/T2)
/// - 2 N^2 t_g/T2, clamped at zero (the subtraction can win for tiny chi).
double eps_ct_total(const MsBudgetInput& in);

struct ChannelRates {
    double p_ms;
    double p_ct;
    double n_ms;  // error-configuration counts entering the conversion
    double n_ct;
};
/// Map infidelities to channel rates: N_MS = 15 N(N-1)/2 + 3N and
/// p_MS = eps_MS N_MS / (N_MS - N(N-1)/2) since ZZ errors leave the target
/// GHZ state alone; spectator errors all count, so p_ct = eps_ct.
ChannelRates channel_rates(double eps_ms, double eps_ct, int num_active, int num_spectators);

/// Effective crosstalk rotation angle from the residual intensity fraction:
/// Theta_eff = Theta sqrt(I_r / <I>).
double single_qubit_ct_angle(double theta, double intensity_ratio);

struct BudgetRow {
    std::string name;
    double value;
};
/// Labelled budget table: each contribution, the total, and the channel
/// rates.
std::vector<BudgetRow> budget_table(const MsBudgetInput& in);

}  // namespace ionqec
