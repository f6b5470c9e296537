import numpy as np
import pytest

import qspec as q


@pytest.fixture
def tls():
    """Resonant two-level emitter with Gamma = 1."""
    return q.EmitterModel([[0.0]], [1.0], 1.0)


def random_model(rng, n, rate=1.0, min_overlap=1e-3):
    """Random Hermitian emitter whose eigenstates all couple to |gamma>."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (a + a.conj().T)
    u = np.linalg.eigh(h)[1]
    while True:
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        v = v / np.linalg.norm(v)
        if np.min(np.abs(u.conj().T @ v) ** 2) > min_overlap:
            return q.EmitterModel(h, v, rate)


def nonpole_frequencies(rng, model, count, span=20.0):
    """Random frequencies keeping a safe distance from every pole."""
    poles = model.bright_poles
    lo = poles.min() - span * model.gamma_rate
    hi = poles.max() + span * model.gamma_rate
    out = []
    while len(out) < count:
        w = rng.uniform(lo, hi)
        if np.min(np.abs(poles - w)) > 1e-3 * model.gamma_rate:
            out.append(w)
    return np.array(out)
