#include "doctest.h"

#include <cmath>

#include "ionqec/analytics.hpp"

using namespace ionqec;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("coherent spectator rotation error") {
    CHECK(eps_ct_ms(2, {}) == 0.0);
    CHECK(eps_ct_ms(2, {0.0, 0.0}) == 0.0);
    // hand value: (pi^2/4) * 2 * 1e-4
    CHECK(eps_ct_ms(2, {0.01}) == doctest::Approx(4.934802200545e-4).epsilon(1e-10));
    // quadratic scaling in a single ratio
    CHECK(eps_ct_ms(2, {0.02}) == doctest::Approx(4 * eps_ct_ms(2, {0.01})).epsilon(1e-12));
}

TEST_CASE("off-resonant carrier term") {
    CHECK(eps_ct_off(1.0, 10.0, {}) == 0.0);
    CHECK(eps_ct_off(0.1, 1.0, {0.01}) == doctest::Approx(5e-7).epsilon(1e-10));
    // scales as (Omega/delta)^2
    CHECK(eps_ct_off(0.2, 1.0, {0.01}) == doctest::Approx(4 * 5e-7).epsilon(1e-10));
    CHECK_THROWS(eps_ct_off(1.0, 0.0, {0.01}));
}

TEST_CASE("Debye-Waller term") {
    CHECK(eps_ct_dw(2, 1, {0.0}, {0.1}, {0.05}) == 0.0);
    // ground-state mode contributes factor one per mode
    double g0 = eps_ct_dw(2, 1, {0.01}, {0.1}, {0.0});
    double gt = eps_ct_dw(2, 1, {0.01}, {0.1}, {0.05});
    CHECK(gt / g0 == doctest::Approx(1.1 * 1.1).epsilon(1e-12));
    // hand value for N=2, M=1, eta=0.1, nbar=0.05, ratio 0.01
    CHECK(gt == doctest::Approx(2.111848394913e-9).epsilon(1e-10));
    CHECK_THROWS(eps_ct_dw(2, 1, {0.01}, {0.1, 0.2}, {0.0}));
}

TEST_CASE("residual spin-motion loops term") {
    double omega = 2 * kPi * 100e3;
    std::vector<double> omega_j = {0.01 * omega};
    std::vector<double> freqs = {2 * kPi * 1e6, 2 * kPi * 0.9e6};
    std::vector<double> eta = {0.1, 0.08};
    std::vector<double> nbar = {0.05, 0.02};
    std::vector<std::vector<double>> mvec = {{1.0, 0.7}};
    CHECK(eps_ct_loops({0.0}, freqs, eta, mvec, nbar) == 0.0);
    // hand value: only the second mode enters the sum
    CHECK(eps_ct_loops(omega_j, freqs, eta, mvec, nbar) ==
          doctest::Approx(4.026469135802e-9).epsilon(1e-10));
    // linear in (2 nbar + 1)
    std::vector<double> nbar2 = {0.05, 0.52};
    double r = eps_ct_loops(omega_j, freqs, eta, mvec, nbar2) /
               eps_ct_loops(omega_j, freqs, eta, mvec, nbar);
    CHECK(r == doctest::Approx((2 * 0.52 + 1) / (2 * 0.02 + 1)).epsilon(1e-12));
}

TEST_CASE("collective dephasing term") {
    CHECK(eps_ct_deph(2, 0.0, 2.2) == 0.0);
    CHECK(eps_ct_deph(2, 15e-6, 2.2) == doctest::Approx(5.454545454545e-5).epsilon(1e-10));
    // quadratic in N
    CHECK(eps_ct_deph(4, 15e-6, 2.2) == doctest::Approx(4 * 5.454545454545e-5).epsilon(1e-10));
}

TEST_CASE("intensity noise term") {
    CHECK(eps_ct_int(0.0, 15e-6, {0.1}, {0.1}, {0.01}) == 0.0);
    CHECK(eps_ct_int(0.5, 15e-6, {0.1}, {0.1}, {0.01}) ==
          doctest::Approx(4.5e-12).epsilon(1e-10));
    // linear in the gate time
    CHECK(eps_ct_int(0.5, 30e-6, {0.1}, {0.1}, {0.01}) ==
          doctest::Approx(9e-12).epsilon(1e-10));
}

TEST_CASE("total crosstalk infidelity") {
    MsBudgetInput in;
    in.num_active = 2;
    in.eps_ms = 2e-4;
    in.t_gate = 15e-6;
    in.t2 = 2.2;

    // chi = 1 edge: eps_ms + pi^2 N / 4
    in.omega_ratios = {1.0};
    CHECK(chi(in.omega_ratios) == doctest::Approx(1.0));
    CHECK(eps_ct_total(in) == doctest::Approx(2e-4 + kPi * kPi * 2 / 4).epsilon(1e-12));

    // chi = 0: the dephasing subtraction wins, clamped at zero
    in.omega_ratios = {0.0};
    CHECK(eps_ct_total(in) == 0.0);

    // default-style value at chi = 1e-4
    in.omega_ratios = {0.01};
    CHECK(eps_ct_total(in) == doctest::Approx(4.389602200545e-4).epsilon(1e-10));
}

TEST_CASE("channel rates") {
    ChannelRates r = channel_rates(1e-3, 0.0, 2, 0);
    CHECK(r.n_ms == doctest::Approx(21.0));
    CHECK(r.p_ms == doctest::Approx(1.05e-3).epsilon(1e-12));
    CHECK(r.p_ct == 0.0);
    ChannelRates z = channel_rates(0.0, 0.0, 2, 2);
    CHECK(z.p_ms == 0.0);
    CHECK(z.n_ct == doctest::Approx(102.0));
    // spectator errors all perturb the target state: p_ct = eps_ct
    ChannelRates c = channel_rates(1e-3, 7e-5, 2, 2);
    CHECK(c.p_ct == doctest::Approx(7e-5));
}

TEST_CASE("depolarising channel from the rates is complete") {
    // N active + M spectator ions, single- and two-qubit error terms with
    // the active weights p_ms/N_MS and spectator weights normalised to p_ct
    const int N = 2, M = 2;
    ChannelRates r = channel_rates(2e-4, 7e-5, N, M);
    double total = 1.0 - r.p_ms - r.p_ct;
    int active_terms = 15 * N * (N - 1) / 2 + 3 * N;
    for (int t = 0; t < active_terms; ++t) total += r.p_ms / r.n_ms;
    int spect_terms = 15 * M * (M - 1) / 2 + 3 * M;
    for (int t = 0; t < spect_terms; ++t) total += r.p_ct / spect_terms;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single qubit crosstalk angle") {
    CHECK(single_qubit_ct_angle(kPi / 2, 0.0) == 0.0);
    CHECK(single_qubit_ct_angle(kPi / 2, 1.0) == doctest::Approx(kPi / 2));
    // quadrupled intensity doubles the angle
    double base = single_qubit_ct_angle(kPi / 2, 1e-4);
    CHECK(single_qubit_ct_angle(kPi / 2, 4e-4) == doctest::Approx(2 * base).epsilon(1e-12));
}

TEST_CASE("budget table") {
    MsBudgetInput in;
    in.omega_ratios = {0.0};
    auto rows = budget_table(in);
    double total = -1;
    for (const auto& row : rows) {
        if (row.name == "eps_ct_total") total = row.value;
        if (row.name == "eps_ct_ms" || row.name == "eps_ct_off" || row.name == "eps_ct_dw" ||
            row.name == "eps_ct_int" || row.name == "chi" || row.name == "p_ct") {
            CHECK(row.value == 0.0);
        }
    }
    CHECK(total == 0.0);

    MsBudgetInput bad;
    bad.num_active = 1;
    CHECK_THROWS(budget_table(bad));
    MsBudgetInput bad2;
    bad2.t_gate = 3.0;  // above T2
    CHECK_THROWS(budget_table(bad2));
}

TEST_CASE("budget input from key=value") {
    std::map<std::string, std::string> kv = {
        {"num_active", "3"},
        {"omega_ratios", "0.01,0.02"},
        {"t_gate", "1.5e-5"},
        {"eps_ms", "1e-4"},
    };
    MsBudgetInput in = MsBudgetInput::from_kv(kv);
    CHECK(in.num_active == 3);
    CHECK(in.omega_ratios.size() == 2);
    CHECK(in.omega_ratios[1] == doctest::Approx(0.02));
    CHECK(in.eps_ms == doctest::Approx(1e-4));
}
