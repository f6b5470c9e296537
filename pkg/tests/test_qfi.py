import numpy as np
import pytest

import qspec as q
from conftest import random_model

GAMMA = q.ParameterTag.gamma()
DET1 = q.ParameterTag.detuning(1)


# -- bounds ------------------------------------------------------------------


def test_tls_bounds_closed_form(tls):
    res_g = q.qfi_bound(tls, GAMMA)
    assert res_g.bound == pytest.approx(4.0, rel=1e-9)
    assert res_g.omega_max == pytest.approx(0.5, abs=1e-9)
    assert res_g.omega_min == pytest.approx(-0.5, abs=1e-9)
    res_d = q.qfi_bound(tls, DET1)
    assert res_d.bound == pytest.approx(16.0, rel=1e-9)
    assert res_d.mu_min == 0.0


def test_gamma_bound_scale_invariance():
    # Gamma^2 * bound = 4 for every model: chi = +-1 is always attainable.
    rng = np.random.default_rng(61)
    for rate in (0.1, 1.0, 7.3):
        m = random_model(rng, 3, rate=rate)
        res = q.qfi_bound(m, GAMMA)
        assert rate**2 * res.bound == pytest.approx(4.0, rel=1e-9)


def test_qfi_result_validation():
    with pytest.raises(q.InvariantViolation, match="bound_range"):
        q.QfiResult(bound=5.0, mu_max=1.0, mu_min=-1.0, omega_max=0.0, omega_min=1.0)
    with pytest.raises(q.InvariantViolation, match="bound_dominance"):
        q.QfiResult(bound=4.0, mu_max=1.0, mu_min=-1.0, omega_max=0.0, omega_min=1.0, value=5.0)


# -- pulse QFI ---------------------------------------------------------------


def test_decaying_exp_qfi_closed_form(tls):
    # For a resonant decaying exponential with spectral HWHM b (Gamma = 1)
    # the rate QFI is 4 b / (b + 1/2)^2, maximal (= 2) at b = 1/2.
    from scipy.integrate import quad

    for b in (0.1, 0.5, 2.0):
        expect = 4 * b / (b + 0.5) ** 2

        def moment(k):
            return quad(
                lambda w: abs(q.amplitude(q.DecayingExp(0.0, b), w)) ** 2
                * q.response(tls, w, GAMMA) ** k,
                -np.inf,
                np.inf,
                limit=400,
            )[0]

        assert 4 * (moment(2) - moment(1) ** 2) == pytest.approx(expect, rel=1e-8)
        # Grid route: clipping the Lorentzian tail at +-W removes
        # ~(2b/pi)/W of the mass and shifts the variance at that order.
        field = q.build_grid(tls, q.DecayingExp(0.0, b), window=(-500.0, 500.0), budget=8192)
        assert q.qfi_pulse(tls, field, GAMMA) == pytest.approx(expect, rel=5e-3)


def test_qfi_below_bound_random():
    rng = np.random.default_rng(67)
    for trial in range(5):
        m = random_model(rng, 3)
        field = q.build_grid(m, q.Gaussian(float(m.detunings[0]), 1.0))
        for tag in (GAMMA, DET1):
            res = q.evaluate(m, field, tag)
            assert 0.0 <= res.value <= res.bound * (1 + 1e-9)
            assert res.saturation == pytest.approx(res.value / res.bound)


def test_fidelity_oracle_agreement(tls):
    field = q.build_grid(tls, q.DecayingExp(0.0, 0.5), budget=8192)
    direct = q.qfi_pulse(tls, field, GAMMA)
    oracle = q.qfi_fidelity_oracle(tls, field, GAMMA)
    assert abs(oracle - direct) <= 5e-3 * direct


def test_fidelity_oracle_two_routes_random():
    rng = np.random.default_rng(71)
    for trial in range(3):
        m = random_model(rng, 2)
        field = q.build_grid(m, q.Gaussian(float(m.detunings[0]), 0.8), budget=8192)
        for tag in (GAMMA, DET1):
            direct = q.qfi_pulse(m, field, tag)
            oracle = q.qfi_fidelity_oracle(m, field, tag)
            assert abs(oracle - direct) <= 5e-3 * max(direct, 1e-6)


def test_fidelity_oracle_warns_on_large_step(tls):
    field = q.build_grid(tls, q.DecayingExp(0.0, 0.5))
    with pytest.warns(q.StepTooLargeWarning):
        q.qfi_fidelity_oracle(tls, field, GAMMA, dtheta=0.5)


# -- optimal pulses ----------------------------------------------------------


def test_optimal_pulse_placement(tls):
    pulse = q.optimal_pulse(tls, GAMMA, kappa=1e-3, reg="gaussian")
    assert pulse.omega_plus == pytest.approx(0.5, abs=1e-9)
    assert pulse.omega_minus == pytest.approx(-0.5, abs=1e-9)
    assert pulse.phi == 0.0


def test_optimal_pulse_saturates_gamma_bound(tls):
    for reg in ("lorentzian", "gaussian", "rectangular"):
        pulse = q.optimal_pulse(tls, GAMMA, kappa=1e-3, reg=reg)
        field = q.build_grid(tls, pulse)
        assert q.qfi_pulse(tls, field, GAMMA) >= 0.98 * 4.0


def test_optimal_pulse_saturates_detuning_bound(tls):
    pulse = q.optimal_pulse(tls, DET1, kappa=1e-3, reg="gaussian")
    field = q.build_grid(tls, pulse)
    assert q.qfi_pulse(tls, field, DET1) >= 0.98 * 16.0


def test_far_detuned_frequency(tls):
    w = q.far_detuned_frequency(tls)
    assert w == pytest.approx(1e3)
    assert q.response(tls, w, DET1) <= 1e-5 * 4.0


# -- sweeps ------------------------------------------------------------------


def test_sweep_kappa_monotone_tls(tls):
    rows = q.sweep_kappa(tls, GAMMA, kappas=np.geomspace(10.0, 1e-3, 12))
    for reg in ("lorentzian", "gaussian", "rectangular"):
        col = [v for r, k, v in rows if r == reg]
        assert len(col) == 12
        assert all(b > a for a, b in zip(col, col[1:]))
        assert col[-1] >= 0.98 * 4.0


def test_sweep_kappa_threads_match(tls):
    kappas = np.geomspace(1.0, 1e-2, 4)
    serial = q.sweep_kappa(tls, GAMMA, regs=("gaussian",), kappas=kappas, threads=1)
    parallel = q.sweep_kappa(tls, GAMMA, regs=("gaussian",), kappas=kappas, threads=4)
    assert serial == parallel


def test_bandwidth_sweep_families_and_maxima(tls):
    rows = q.bandwidth_sweep(
        tls, bandwidths=np.geomspace(0.05, 10.0, 25), budget=8192
    )
    by_family = {}
    for name, b, v in rows:
        by_family.setdefault(name, []).append(v)
    assert set(by_family) == {"gaussian", "rectangular", "decaying_exp", "rising_exp"}
    # Time-reversal pairs share the spectral intensity, hence the QFI.
    assert np.allclose(by_family["decaying_exp"], by_family["rising_exp"], rtol=1e-9)
    assert max(by_family["decaying_exp"]) == pytest.approx(2.0, rel=0.05)
    assert max(by_family["gaussian"]) == pytest.approx(2.5, rel=0.1)
    assert max(by_family["rectangular"]) == pytest.approx(2.5, rel=0.1)
    # All single-peak shapes stay below the bound.
    for col in by_family.values():
        assert max(col) <= 4.0
