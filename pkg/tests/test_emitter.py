import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import simpson

import qspec as q
from conftest import nonpole_frequencies, random_model

GAMMA = q.ParameterTag.gamma()


# -- model validation -------------------------------------------------------


def test_invariant_names():
    with pytest.raises(q.InvariantViolation, match="h_m_hermitian"):
        q.EmitterModel([[0.0, 1.0], [0.5, 0.0]], [1.0, 0.0], 1.0)
    with pytest.raises(q.InvariantViolation, match="gamma_vec_normalized"):
        q.EmitterModel([[0.0]], [0.7], 1.0)
    with pytest.raises(q.InvariantViolation, match="gamma_rate_positive"):
        q.EmitterModel([[0.0]], [1.0], -1.0)


def test_json_round_trip(tls):
    doc = tls.to_json_dict()
    again = q.emitter_from_json(doc)
    assert np.allclose(again.h_m, tls.h_m)
    assert again.gamma_rate == tls.gamma_rate


def test_json_missing_field():
    with pytest.raises(q.InvariantViolation, match="emitter_schema"):
        q.emitter_from_json({"n": 1})


def test_spectral_decomposition_invariants():
    rng = np.random.default_rng(7)
    m = random_model(rng, 5)
    dec = m.spectral()
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    assert abs(dec.overlaps.sum() - 1.0) < 1e-10


# -- susceptibility ---------------------------------------------------------


def test_chi_tls_closed_form(tls):
    assert q.susceptibility(tls, 0.5) == pytest.approx(1.0, abs=1e-14)
    assert q.susceptibility(tls, -0.5) == pytest.approx(-1.0, abs=1e-14)


def test_chi_two_level_cancellation():
    m = q.EmitterModel(np.diag([1.0, 3.0]), np.array([1.0, 1.0]) / np.sqrt(2), 1.0)
    assert q.susceptibility(m, 2.0) == pytest.approx(0.0, abs=1e-13)


def test_chi_is_real():
    rng = np.random.default_rng(3)
    m = random_model(rng, 4)
    for w in nonpole_frequencies(rng, m, 20):
        x = np.linalg.solve(w * np.eye(m.n) - m.h_m, m.gamma_vec)
        chi = 0.5 * m.gamma_rate * np.vdot(m.gamma_vec, x)
        assert abs(chi.imag) <= 1e-12 * abs(chi.real) + 1e-15


def test_chi_pole_guard(tls):
    with pytest.raises(q.PoleProximityError):
        q.susceptibility(tls, 1e-10)
    with pytest.raises(q.PoleProximityError):
        q.susceptibility_spectral(tls.spectral(), 1.0, 1e-10)


def test_chi_spectral_single_term():
    dec = q.SpectralDecomposition([0.3], [1.0])
    assert q.susceptibility_spectral(dec, 1.0, 0.8) == pytest.approx(1.0, abs=1e-14)


def test_chi_dual_route_equivalence():
    rng = np.random.default_rng(11)
    m = random_model(rng, 4)
    dec = m.spectral()
    for w in nonpole_frequencies(rng, m, 100):
        a = q.susceptibility(m, w)
        b = q.susceptibility_spectral(dec, m.gamma_rate, w)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


# -- parameter derivatives --------------------------------------------------


def test_dchi_tls_values(tls):
    assert q.d_susceptibility(tls, 0.5, GAMMA) == pytest.approx(1.0, abs=1e-14)
    assert q.d_susceptibility(tls, 0.5, q.ParameterTag.detuning(1)) == pytest.approx(2.0, abs=1e-13)


def test_dchi_detuning_nonnegative():
    rng = np.random.default_rng(5)
    m = random_model(rng, 3)
    for w in nonpole_frequencies(rng, m, 30):
        for j in range(1, 4):
            assert q.d_susceptibility(m, w, q.ParameterTag.detuning(j)) >= 0.0


def test_dchi_finite_difference_oracle():
    rng = np.random.default_rng(17)
    for n in (1, 3, 5):
        m = random_model(rng, n)
        h = 1e-6 * m.gamma_rate
        for w in nonpole_frequencies(rng, m, 10):
            fd = (
                q.susceptibility(m.with_gamma_rate(m.gamma_rate + h), w)
                - q.susceptibility(m.with_gamma_rate(m.gamma_rate - h), w)
            ) / (2 * h)
            assert q.d_susceptibility(m, w, GAMMA) == pytest.approx(fd, rel=1e-5, abs=1e-10)
            for j in range(1, n + 1):
                tag = q.ParameterTag.detuning(j)
                fd = (
                    q.susceptibility(m.with_detuning_shift(j, h), w)
                    - q.susceptibility(m.with_detuning_shift(j, -h), w)
                ) / (2 * h)
                assert q.d_susceptibility(m, w, tag) == pytest.approx(fd, rel=1e-5, abs=1e-10)


# -- response function ------------------------------------------------------


def test_response_tls_values(tls):
    assert q.response(tls, 0.5, GAMMA) == pytest.approx(1.0, abs=1e-14)
    assert q.response(tls, 0.0, q.ParameterTag.detuning(1)) == pytest.approx(4.0, abs=1e-12)
    assert q.response(tls, 0.0, GAMMA) == 0.0  # chi -> inf kills chi/(1+chi^2)


def test_response_bounded_and_signed():
    rng = np.random.default_rng(23)
    m = random_model(rng, 4)
    ws = np.linspace(m.bright_poles.min() - 30, m.bright_poles.max() + 30, 4001)
    xg = q.emitter._response_array(m, ws, GAMMA)
    assert np.all(np.abs(xg) <= 1.0 / m.gamma_rate + 1e-12)
    for j in range(1, 5):
        xd = q.emitter._response_array(m, ws, q.ParameterTag.detuning(j))
        assert np.all(xd >= 0.0)


def test_response_detuning_vanishes_far_away():
    rng = np.random.default_rng(29)
    m = random_model(rng, 3)
    far_lo = m.bright_poles.min() - 1e3 * m.gamma_rate
    far_hi = m.bright_poles.max() + 1e3 * m.gamma_rate
    for j in range(1, 4):
        tag = q.ParameterTag.detuning(j)
        assert q.response(m, far_lo, tag) < 1e-5
        assert q.response(m, far_hi, tag) < 1e-5


def test_response_total_across_pole(tls):
    # Smooth through the pole: guard-band values match the nearby closed form.
    tag = q.ParameterTag.detuning(1)
    assert q.response(tls, 1e-12, tag) == pytest.approx(4.0, rel=1e-9)
    assert q.response(tls, 0.3, tag) == pytest.approx(1.0 / (0.3**2 + 0.25), rel=1e-12)


# -- kernels ----------------------------------------------------------------


def test_kernel_time_tls(tls):
    assert q.kernel_time(tls, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert q.kernel_time(tls, 2.0) == pytest.approx(np.exp(-1.0), rel=1e-12)
    assert q.kernel_time(tls, -1.0) == 0.0


def test_kernel_time_samples_matches_expm():
    rng = np.random.default_rng(31)
    m = random_model(rng, 3)
    ts = np.linspace(-1.0, 10.0, 23)
    fs = q.kernel_time_samples(m, ts)
    for t, f in zip(ts, fs):
        assert f == pytest.approx(q.kernel_time(m, t), abs=1e-10)


def test_kernel_freq_values(tls):
    assert q.kernel_freq(tls, 0.0) == pytest.approx(2.0)  # pole limit
    assert q.kernel_freq(tls, 0.5) == pytest.approx(1.0 + 1.0j)  # chi = 1
    assert abs(1.0 - q.kernel_freq(tls, 0.5)) == pytest.approx(1.0, abs=1e-14)


def test_kernel_freq_unitarity_sweep():
    rng = np.random.default_rng(37)
    m = random_model(rng, 3)
    ws = rng.uniform(-30, 30, size=1000)
    f = q.emitter._kernel_freq_array(m, ws)
    assert np.max(np.abs(np.abs(1.0 - f) - 1.0)) <= 1e-12


def test_kernel_fourier_consistency():
    rng = np.random.default_rng(41)
    m = random_model(rng, 2)
    dt = 0.002
    ts = np.arange(0.0, 200.0, dt)
    ker = q.kernel_time_samples(m, ts)
    for w in np.linspace(-20, 20, 21):
        ft = simpson(ker * np.exp(1j * w * ts), dx=dt)
        assert abs(ft - q.kernel_freq(m, w)) <= 1e-4


@settings(max_examples=50, deadline=None)
@given(st.floats(-100.0, 100.0, allow_nan=False))
def test_kernel_unitarity_property(w):
    m = q.EmitterModel(np.diag([-1.0, 2.0]), np.array([0.6, 0.8]), 1.0)
    assert abs(abs(1.0 - q.kernel_freq(m, w)) - 1.0) <= 1e-12
