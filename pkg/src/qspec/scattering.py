"""Propagation of a single-photon pulse through the emitter.

Frequency domain: each spectral component picks up the pure phase factor
(1 - i chi)/(1 + i chi) = exp(-i 2 arctan chi), so scattering is unitary
point by point.  Time domain: the causal convolution with the kernel f(t)
provides an independent route used as a consistency oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.signal

from .emitter import (
    EmitterModel,
    PoleProximityError,
    _chi_array,
    kernel_time_samples,
    susceptibility,
)
from .errors import GridTooCoarseError
from .pulses import SampledField

# Uniform time grids coarser than this (in units of 1/Gamma) cannot resolve
# the decay kernel.
MAX_TIME_STEP = 0.01


@dataclass(frozen=True)
class ScatterResult:
    """Scattered field, encoding phase on the grid, and the norm defect."""

    out: SampledField
    phase_curve: np.ndarray
    norm_error: float


def _transmission(model: EmitterModel, omegas: np.ndarray):
    """(factor, phase): unit-modulus transmission factor and 2 arctan(chi).

    At chi-poles the factor is the limit -1 and the phase is pi.
    """
    chi, at_pole = _chi_array(model, omegas)
    factor = (1.0 - 1j * chi) / (1.0 + 1j * chi)
    phase = 2.0 * np.arctan(chi)
    factor[at_pole] = -1.0
    phase[at_pole] = np.pi
    return factor, phase


def encoding_phase(model: EmitterModel, omega: float) -> float:
    """Eigenvalue 2 arctan(chi(w)) of the effective encoding Hamiltonian."""
    try:
        return float(2.0 * np.arctan(susceptibility(model, omega)))
    except PoleProximityError:
        return float(np.pi)


def scatter_freq(model: EmitterModel, field: SampledField) -> ScatterResult:
    """Apply the frequency-domain transmission factor to a normalized field."""
    factor, phase = _transmission(model, field.freqs)
    out = SampledField(field.freqs, field.amps * factor, field.weights)
    return ScatterResult(out, phase, abs(out.norm2() - 1.0))


def scatter_time(model: EmitterModel, times: np.ndarray, xi_in: np.ndarray) -> np.ndarray:
    """Causal convolution route: xi_out(t) = xi_in(t) - int ds f(s) xi_in(t-s).

    ``times`` must be uniform with spacing <= 0.01/Gamma; the input must be
    compactly supported inside the grid.
    """
    times = np.asarray(times, dtype=float)
    xi_in = np.asarray(xi_in, dtype=complex)
    if times.ndim != 1 or times.size < 3 or times.shape != xi_in.shape:
        raise GridTooCoarseError("need matching 1-d time/sample arrays with >= 3 points")
    dt = times[1] - times[0]
    if not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0.0):
        raise GridTooCoarseError("time grid is not uniform")
    if dt > MAX_TIME_STEP / model.gamma_rate * (1.0 + 1e-12):
        raise GridTooCoarseError(
            f"dt = {dt!r} exceeds {MAX_TIME_STEP}/Gamma = {MAX_TIME_STEP / model.gamma_rate!r}"
        )
    ker = kernel_time_samples(model, times - times[0])
    conv = scipy.signal.fftconvolve(xi_in, ker)[: times.size]
    # Trapezoid end corrections for the s = 0 and s = t - t0 endpoints.
    conv = conv - 0.5 * ker[0] * xi_in - 0.5 * ker * xi_in[0]
    return xi_in - dt * conv
