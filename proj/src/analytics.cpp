#include "ionqec/analytics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ionqec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void MsBudgetInput::validate() const {
    if (num_active < 2) throw std::invalid_argument("need at least two active qubits");
    for (double r : omega_ratios) {
        if (r < 0) throw std::invalid_argument("omega ratios must be non-negative");
    }
    if (!(t_gate > 0) || !(t2 > 0)) throw std::invalid_argument("times must be positive");
    if (t_gate >= t2) throw std::invalid_argument("t_gate must be below T2");
    size_t modes = eta.size();
    if (mode_freq.size() != modes || nbar.size() != modes) {
        throw std::invalid_argument("per-mode arrays must have equal length");
    }
    if (!mode_vec.empty()) {
        if (mode_vec.size() != omega_ratios.size()) {
            throw std::invalid_argument("mode_vec needs one row per spectator");
        }
        for (const auto& row : mode_vec) {
            if (row.size() != modes) throw std::invalid_argument("mode_vec row length mismatch");
        }
    }
}

double eps_ct_ms(int num_active, const std::vector<double>& omega_ratios) {
    double s = 0;
    for (double r : omega_ratios) s += r * r;
    return (kPi * kPi / 4.0) * num_active * s;
}

double eps_ct_off(double omega, double delta, const std::vector<double>& omega_ratios) {
    if (delta == 0) throw std::invalid_argument("delta must be nonzero");
    double s = 0;
    for (double r : omega_ratios) s += r * r;
    double x = omega / delta;
    return 0.5 * x * x * s;
}

double eps_ct_dw(int num_active, int num_spectators, const std::vector<double>& omega_ratios,
                 const std::vector<double>& eta, const std::vector<double>& nbar) {
    if (eta.size() != nbar.size()) throw std::invalid_argument("per-mode arrays must have equal length");
    double total = 0;
    double nm = num_active + num_spectators;
    for (size_t n = 0; n < eta.size(); ++n) {
        for (double r : omega_ratios) {
            double term = r * eta[n] * eta[n] / nm;
            total += term * term * (2 * nbar[n] + 1) * (2 * nbar[n] + 1);
        }
    }
    return (kPi * num_active / 4.0) * total;
}

double eps_ct_loops(const std::vector<double>& omega_j, const std::vector<double>& mode_freq,
                    const std::vector<double>& eta, const std::vector<std::vector<double>>& mode_vec,
                    const std::vector<double>& nbar) {
    if (eta.size() != nbar.size() || eta.size() != mode_freq.size()) {
        throw std::invalid_argument("per-mode arrays must have equal length");
    }
    double total = 0;
    for (size_t j = 0; j < omega_j.size(); ++j) {
        // modes n >= 2: the COM mode (index 0) drives the gate itself
        for (size_t n = 1; n < mode_freq.size(); ++n) {
            if (mode_freq[n] == 0) throw std::invalid_argument("mode frequency must be nonzero");
            double mjn = mode_vec.empty() ? 1.0 : mode_vec[j][n];
            double a = omega_j[j] / mode_freq[n];
            double b = eta[n] * mjn;
            total += a * a * b * b * (2 * nbar[n] + 1);
        }
    }
    return total;
}

double eps_ct_deph(int num_active, double t_gate, double t2) {
    return 2.0 * num_active * num_active * t_gate / t2;
}

double eps_ct_int(double gamma_intensity, double t_gate, const std::vector<double>& eta,
                  const std::vector<double>& nbar, const std::vector<double>& omega_ratios) {
    if (eta.size() != nbar.size()) throw std::invalid_argument("per-mode arrays must have equal length");
    double modes = 0;
    for (size_t n = 0; n < eta.size(); ++n) modes += eta[n] * eta[n] * (nbar[n] + 0.5);
    double s = 0;
    for (double r : omega_ratios) s += r * r;
    return gamma_intensity * t_gate * modes * s;
}

double chi(const std::vector<double>& omega_ratios) {
    double s = 0;
    for (double r : omega_ratios) s += r * r;
    return s;
}

double eps_ct_total(const MsBudgetInput& in) {
    double x = chi(in.omega_ratios);
    double deph = eps_ct_deph(in.num_active, in.t_gate, in.t2);
    double v = x * (in.eps_ms + kPi * kPi * in.num_active / 4.0 + deph) - deph;
    return v < 0 ? 0.0 : v;  // dephasing subtraction can win for tiny chi
}

ChannelRates channel_rates(double eps_ms, double eps_ct, int num_active, int num_spectators) {
    double n = num_active;
    double nm = 15.0 * n * (n - 1) / 2.0 + 3.0 * n;
    double t = num_active + num_spectators;
    double nct = 15.0 * t * (t - 1) / 2.0 + 3.0 * t;
    ChannelRates r;
    r.n_ms = nm;
    r.n_ct = nct;
    r.p_ms = eps_ms * nm / (nm - n * (n - 1) / 2.0);
    r.p_ct = eps_ct;
    return r;
}

double single_qubit_ct_angle(double theta, double intensity_ratio) {
    if (intensity_ratio < 0) throw std::invalid_argument("intensity ratio must be non-negative");
    return theta * std::sqrt(intensity_ratio);
}

std::vector<BudgetRow> budget_table(const MsBudgetInput& in) {
    in.validate();
    std::vector<BudgetRow> rows;
    std::vector<double> omega_j;
    for (double r : in.omega_ratios) omega_j.push_back(r * in.omega);
    rows.push_back({"eps_ct_ms", eps_ct_ms(in.num_active, in.omega_ratios)});
    rows.push_back({"eps_ct_off", eps_ct_off(in.omega, in.delta, in.omega_ratios)});
    rows.push_back({"eps_ct_dw", eps_ct_dw(in.num_active, in.num_spectators(), in.omega_ratios,
                                           in.eta, in.nbar)});
    rows.push_back({"eps_ct_loops", in.eta.empty() ? 0.0
                                                   : eps_ct_loops(omega_j, in.mode_freq, in.eta,
                                                                  in.mode_vec, in.nbar)});
    rows.push_back({"eps_ct_deph", eps_ct_deph(in.num_active, in.t_gate, in.t2)});
    rows.push_back({"eps_ct_int", eps_ct_int(in.gamma_intensity, in.t_gate, in.eta, in.nbar,
                                             in.omega_ratios)});
    rows.push_back({"chi", chi(in.omega_ratios)});
    double total = eps_ct_total(in);
    rows.push_back({"eps_ct_total", total});
    ChannelRates cr = channel_rates(in.eps_ms, total, in.num_active, in.num_spectators());
    rows.push_back({"n_ms", cr.n_ms});
    rows.push_back({"n_ct", cr.n_ct});
    rows.push_back({"p_ms", cr.p_ms});
    rows.push_back({"p_ct", cr.p_ct});
    return rows;
}

MsBudgetInput MsBudgetInput::from_kv(const std::map<std::string, std::string>& kv) {
    MsBudgetInput in;
    auto num = [&](const char* k, double& dst) {
        auto it = kv.find(k);
        if (it != kv.end()) dst = std::stod(it->second);
    };
    auto list = [&](const char* k, std::vector<double>& dst) {
        auto it = kv.find(k);
        if (it == kv.end()) return;
        dst.clear();
        std::istringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) dst.push_back(std::stod(tok));
        }
    };
    if (auto it = kv.find("num_active"); it != kv.end()) in.num_active = std::stoi(it->second);
    list("omega_ratios", in.omega_ratios);
    num("omega", in.omega);
    num("delta", in.delta);
    list("eta", in.eta);
    list("mode_freq", in.mode_freq);
    list("nbar", in.nbar);
    num("t_gate", in.t_gate);
    num("t2", in.t2);
    num("gamma_intensity", in.gamma_intensity);
    num("eps_ms", in.eps_ms);
    in.validate();
    return in;
}

}  // namespace ionqec
