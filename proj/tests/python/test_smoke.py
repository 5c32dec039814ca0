import math

import pytest

import ionqec


def clean_params():
    np = ionqec.NoiseParams()
    np.p_1q = np.p_ms = np.p_sp = np.p_m = np.p_sg = 0.0
    np.idle_noise = False
    return np


def test_tableau_bell_pair():
    t = ionqec.StabilizerTableau(2)
    t.ms(0, 1, True)
    assert t.expectation(ionqec.PauliString.from_str("+ZZ")) == 1
    assert t.expectation(ionqec.PauliString.from_str("+Z_")) == 0
    t.check_invariants()


def test_dense_ms_gate():
    s = ionqec.DenseState(2)
    s.xx(math.pi / 2, 0, 1)
    amps = s.amplitudes
    assert abs(abs(amps[0]) ** 2 - 0.5) < 1e-12
    assert abs(abs(amps[3]) ** 2 - 0.5) < 1e-12
    p0, p1 = s.branch_probs(0)
    assert abs(p0 + p1 - 1.0) < 1e-12


def test_noiseless_qec_round_never_fails():
    exp = ionqec.SteaneExperiment(ionqec.Basis.Plus, clean_params(), ionqec.BackendKind.Tableau)
    for trial in range(50):
        out = exp.run_trial(7, trial)
        assert not out.logical_failure
        assert out.rounds_run == 1


def test_monte_carlo_estimate():
    np = clean_params()
    np.p_ms = 0.01
    exp = ionqec.SteaneExperiment(ionqec.Basis.Plus, np, ionqec.BackendKind.Tableau)
    est = ionqec.monte_carlo(exp, 20000, 3, 2)
    assert est.n_samples == 20000
    assert 0.0 < est.p_log < 0.5
    assert est.err == pytest.approx(math.sqrt(est.p_log * (1 - est.p_log) / 20000))


def test_enumerate_paths_coherent_only():
    np = clean_params()
    np.crosstalk_mode = ionqec.CrosstalkMode.EntanglingCoherent
    np.p_c = 1e-4
    exp = ionqec.SteaneExperiment(ionqec.Basis.Plus, np, ionqec.BackendKind.Paths)
    p, wsum, leaves = ionqec.enumerate_paths(exp)
    assert p > 0
    assert wsum == pytest.approx(1.0, abs=1e-9)
    assert leaves > 1000


def test_analytics_values():
    assert ionqec.eps_ct_ms(2, [0.01]) == pytest.approx(4.9348022e-4, rel=1e-6)
    assert ionqec.eps_ct_deph(2, 15e-6, 2.2) == pytest.approx(5.4545454e-5, rel=1e-6)
    p_ms, p_ct, n_ms, n_ct = ionqec.channel_rates(1e-3, 0.0, 2, 0)
    assert p_ms == pytest.approx(1.05e-3)
    assert n_ms == 21
