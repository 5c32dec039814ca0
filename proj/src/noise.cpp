#include "ionqec/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace ionqec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CrosstalkMode crosstalk_mode_from_string(const std::string& s) {
    if (s == "off") return CrosstalkMode::Off;
    if (s == "entangling-coherent") return CrosstalkMode::EntanglingCoherent;
    if (s == "entangling-incoherent") return CrosstalkMode::EntanglingIncoherent;
    if (s == "stark-coherent") return CrosstalkMode::StarkCoherent;
    if (s == "stark-incoherent") return CrosstalkMode::StarkIncoherent;
    throw std::invalid_argument("unknown crosstalk mode '" + s + "'");
}

std::string to_string(CrosstalkMode m) {
    switch (m) {
        case CrosstalkMode::Off: return "off";
        case CrosstalkMode::EntanglingCoherent: return "entangling-coherent";
        case CrosstalkMode::EntanglingIncoherent: return "entangling-incoherent";
        case CrosstalkMode::StarkCoherent: return "stark-coherent";
        case CrosstalkMode::StarkIncoherent: return "stark-incoherent";
    }
    return "off";
}

void NoiseParams::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in [0,1]");
    };
    prob(p_1q, "p_1q");
    prob(p_ms, "p_ms");
    prob(p_sp, "p_sp");
    prob(p_m, "p_m");
    prob(p_sg, "p_sg");
    prob(prep_leak_fraction, "prep_leak_fraction");
    if (p_c < 0.0 || p_c >= 1.0) throw std::invalid_argument("p_c must be in [0,1)");
    if (!(t1_s > 0) || !(t2_s > 0)) throw std::invalid_argument("T1 and T2 must be positive");
    if (!(leak_ratio >= 0)) throw std::invalid_argument("leak_ratio must be non-negative");
    durations.validate();
}

bool NoiseParams::coherent_only() const {
    bool coherent_ct = crosstalk_mode == CrosstalkMode::EntanglingCoherent ||
                       crosstalk_mode == CrosstalkMode::StarkCoherent;
    bool no_stochastic = p_1q == 0 && p_ms == 0 && p_sp == 0 && p_m == 0 && p_sg == 0 && !idle_noise;
    return no_stochastic && (crosstalk_mode == CrosstalkMode::Off || coherent_ct);
}

bool NoiseParams::needs_dense_backend() const {
    return crosstalk_mode == CrosstalkMode::EntanglingCoherent ||
           crosstalk_mode == CrosstalkMode::StarkCoherent;
}

double NoiseParams::crosstalk_angle() const { return 2.0 * std::asin(std::sqrt(p_c)); }

double NoiseParams::stark_mu() const { return (4.0 / kPi) * std::asin(std::sqrt(p_c)); }

// ---------------------------------------------------------------------------

void KrausChannel::check_complete(double tol) const {
    // all branches are weight * (Pauli, optional unitary): completeness is
    // just sum of weights == 1
    double s = 0;
    for (const auto& b : branches) {
        if (b.weight < -tol) throw std::logic_error("negative Kraus weight");
        s += b.weight;
    }
    if (std::abs(s - 1.0) > tol) throw std::logic_error("Kraus channel incomplete");
}

size_t KrausChannel::sample(Rng& rng) const {
    double u = rng.uniform();
    double acc = 0;
    for (size_t i = 0; i + 1 < branches.size(); ++i) {
        acc += branches[i].weight;
        if (u < acc) return i;
    }
    return branches.size() - 1;
}

KrausChannel depolarizing_1q(double p_1q) {
    if (p_1q < 0 || p_1q > 1) throw std::invalid_argument("p_1q must be in [0,1]");
    KrausChannel ch;
    ch.arity = 1;
    ch.branches = {
        {1.0 - p_1q, {0, 0}, false},
        {p_1q / 3, {1, 0}, false},
        {p_1q / 3, {2, 0}, false},
        {p_1q / 3, {3, 0}, false},
    };
    ch.check_complete();
    return ch;
}

KrausChannel ms_pauli_channel(double p_ms) {
    if (p_ms < 0 || p_ms > 1) throw std::invalid_argument("p_ms must be in [0,1]");
    KrausChannel ch;
    ch.arity = 2;
    ch.branches = {
        {1.0 - p_ms, {0, 0}, false},
        {0.80 * p_ms, {1, 1}, false},  // X1 X2
        {0.05 * p_ms, {2, 0}, false},  // Y1
        {0.05 * p_ms, {0, 2}, false},  // Y2
        {0.05 * p_ms, {1, 3}, false},  // X1 Z2
        {0.05 * p_ms, {3, 1}, false},  // Z1 X2
    };
    ch.check_complete();
    return ch;
}

KrausChannel refocus_residual_channel(double p_1q, double theta, double eps_ct) {
    if (p_1q < 0 || p_1q > 0.5) throw std::invalid_argument("p_1q must be in [0,1/2]");
    KrausChannel ch;
    ch.arity = 2;
    ch.ct_angle = 2.0 * theta * eps_ct;  // exponent of U_CT = exp(-i theta eps X X)
    double p3 = p_1q / 3;
    ch.branches = {
        {1.0 - 2 * p_1q, {0, 0}, false},
        {p3, {3, 0}, true},   // Zn U_CT
        {p3, {2, 0}, true},   // Yn U_CT
        {2 * p3, {1, 0}, false},  // Xn
        {p3, {3, 0}, false},  // Zn
        {p3, {2, 0}, false},  // Yn
    };
    ch.check_complete();
    return ch;
}

int LeakRegistry::count() const {
    int c = 0;
    for (bool b : leaked_) c += b ? 1 : 0;
    return c;
}

IdleRates idle_rates(double dt_us, const NoiseParams& p) {
    if (dt_us < 0) throw std::invalid_argument("idle interval must be non-negative");
    double dt = dt_us * 1e-6;
    return {0.5 * (1.0 - std::exp(-dt / p.t2_s)), 1.0 - std::exp(-dt / p.t1_s)};
}

double leak_fraction(const NoiseParams& p) {
    // Gamma_l = leak_ratio * Gamma_d  =>  Gamma_l / Gamma = r / (1 + r)
    return p.leak_ratio / (1.0 + p.leak_ratio);
}

// ---------------------------------------------------------------------------
// key=value round trip

std::map<std::string, std::string> NoiseParams::to_kv() const {
    char buf[64];
    auto fmt = [&](double v) {
        snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::map<std::string, std::string> kv;
    kv["p_1q"] = fmt(p_1q);
    kv["p_ms"] = fmt(p_ms);
    kv["p_c"] = fmt(p_c);
    kv["crosstalk_mode"] = to_string(crosstalk_mode);
    kv["refocussing"] = refocussing ? "true" : "false";
    kv["refocus_mode"] = refocus_mode == RefocusMode::Structural ? "structural" : "residual";
    kv["p_sp"] = fmt(p_sp);
    kv["p_m"] = fmt(p_m);
    kv["prep_leak_fraction"] = fmt(prep_leak_fraction);
    kv["t1_s"] = fmt(t1_s);
    kv["t2_s"] = fmt(t2_s);
    kv["leak_ratio"] = fmt(leak_ratio);
    kv["p_sg"] = fmt(p_sg);
    kv["idle_noise"] = idle_noise ? "true" : "false";
    kv["ms_us"] = fmt(durations.ms_gate);
    kv["one_qubit_us"] = fmt(durations.one_qubit);
    kv["measurement_us"] = fmt(durations.measurement);
    kv["reset_us"] = fmt(durations.reset);
    kv["recool_us"] = fmt(durations.recool);
    kv["repump_us"] = fmt(durations.repump);
    return kv;
}

NoiseParams NoiseParams::from_kv(const std::map<std::string, std::string>& kv) {
    NoiseParams p;
    auto num = [&](const char* k, double& dst) {
        auto it = kv.find(k);
        if (it != kv.end()) dst = std::stod(it->second);
    };
    auto flag = [&](const char* k, bool& dst) {
        auto it = kv.find(k);
        if (it == kv.end()) return;
        if (it->second == "true" || it->second == "1") dst = true;
        else if (it->second == "false" || it->second == "0") dst = false;
        else throw std::invalid_argument(std::string("bad boolean for ") + k);
    };
    num("p_1q", p.p_1q);
    num("p_ms", p.p_ms);
    num("p_c", p.p_c);
    if (auto it = kv.find("crosstalk_mode"); it != kv.end()) {
        p.crosstalk_mode = crosstalk_mode_from_string(it->second);
    }
    flag("refocussing", p.refocussing);
    if (auto it = kv.find("refocus_mode"); it != kv.end()) {
        if (it->second == "structural") p.refocus_mode = RefocusMode::Structural;
        else if (it->second == "residual") p.refocus_mode = RefocusMode::Residual;
        else throw std::invalid_argument("bad refocus_mode");
    }
    num("p_sp", p.p_sp);
    num("p_m", p.p_m);
    num("prep_leak_fraction", p.prep_leak_fraction);
    num("t1_s", p.t1_s);
    num("t2_s", p.t2_s);
    num("leak_ratio", p.leak_ratio);
    num("p_sg", p.p_sg);
    flag("idle_noise", p.idle_noise);
    num("ms_us", p.durations.ms_gate);
    num("one_qubit_us", p.durations.one_qubit);
    num("measurement_us", p.durations.measurement);
    num("reset_us", p.durations.reset);
    num("recool_us", p.durations.recool);
    num("repump_us", p.durations.repump);
    p.validate();
    return p;
}

}  // namespace ionqec
