"""Quantum Fisher information of a pulse, the universal bounds, and the
optimal pulse construction.

For the diagonal phase encoding exp(-i h(w)) with h = 2 arctan(chi), the
pure-state QFI of a single-photon pulse reduces to four times the variance
of X_theta(w) = d h/d theta under the spectral intensity |xi(w)|^2.  The
maximum variance of a bounded variable is the half-range squared, attained
by a 50/50 two-point distribution, which gives the estimator-independent
bound (mu_max - mu_min)^2 and the delta-pair optimal pulse.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .emitter import EmitterModel, ParameterTag, _response_array
from .errors import InvariantViolation, StepTooLargeWarning
from .pulses import (
    DecayingExp,
    DeltaPair,
    Gaussian,
    RisingExp,
    SampledField,
    TimeRectangular,
    build_grid,
)
from .scattering import scatter_freq
from .search import ExtremaResult, find_extrema

# Default finite-difference step for the fidelity oracle, in natural units
# (multiples of Gamma for both parameter kinds).
ORACLE_STEP = 1e-4

# Input-shape comparison families.  These are temporal wave packets:
# 'rectangular' is flat in time (sinc spectrum, duration 1/b), Gaussian is
# its own transform, and the exponentials have Lorentzian spectra.  The
# sweep variable b is the spectral scale of each family.
BANDWIDTH_FAMILIES = {
    "gaussian": Gaussian,
    "rectangular": lambda center, b: TimeRectangular(center, 1.0 / b),
    "decaying_exp": DecayingExp,
    "rising_exp": RisingExp,
}


@dataclass(frozen=True)
class QfiResult:
    """QFI bound data; ``value``/``saturation`` are present when a pulse
    was evaluated against the bound."""

    bound: float
    mu_max: float
    mu_min: float
    omega_max: float
    omega_min: float
    value: float | None = None
    saturation: float | None = None

    def __post_init__(self):
        if abs(self.bound - (self.mu_max - self.mu_min) ** 2) > 1e-9 * max(1.0, self.bound):
            raise InvariantViolation("bound_range", "bound != (mu_max - mu_min)^2")
        if self.value is not None:
            if self.value < 0 or self.value > self.bound * (1.0 + 1e-6):
                raise InvariantViolation(
                    "bound_dominance", f"value {self.value} outside [0, bound]"
                )


def qfi_pulse(model: EmitterModel, field: SampledField, tag: ParameterTag) -> float:
    """QFI = 4 Var(X_theta) under the spectral intensity of the pulse."""
    p = field.weights * np.abs(field.amps) ** 2
    p = p / p.sum()
    x = _response_array(model, field.freqs, tag)
    mean = float(p @ x)
    return float(4.0 * (p @ (x * x) - mean * mean))


def _perturbed(model: EmitterModel, tag: ParameterTag, delta: float) -> EmitterModel:
    if tag.kind == "gamma":
        return model.with_gamma_rate(model.gamma_rate + delta)
    return model.with_detuning_shift(tag.j, delta)


def qfi_fidelity_oracle(
    model: EmitterModel,
    field: SampledField,
    tag: ParameterTag,
    dtheta: float | None = None,
) -> float:
    """Independent QFI estimate 8 (1 - F) / dtheta^2 from the overlap of
    output fields at neighboring parameter values.

    Warns (StepTooLargeWarning) when halving the step moves the estimate
    by more than 1%.
    """
    if dtheta is None:
        dtheta = ORACLE_STEP * model.gamma_rate

    def estimate(step: float) -> float:
        out0 = scatter_freq(model, field).out
        out1 = scatter_freq(_perturbed(model, tag, step), field).out
        f = abs(out0.overlap(out1)) / np.sqrt(out0.norm2() * out1.norm2())
        return 8.0 * (1.0 - f) / step**2

    q = estimate(dtheta)
    q_half = estimate(0.5 * dtheta)
    if abs(q - q_half) > 0.01 * max(abs(q), 1e-300):
        warnings.warn(
            f"fidelity oracle step {dtheta} fails Richardson check: {q} vs {q_half}",
            StepTooLargeWarning,
        )
    return q


def far_detuned_frequency(model: EmitterModel) -> float:
    """Finite surrogate for the infinitely detuned mode of the optimal
    detuning pulse; X there is O(1e-6) of its peak."""
    eps = model.bright_poles
    spread = float(eps.max() - eps.min()) if eps.size > 1 else 0.0
    return float(eps.max() + 1e3 * max(model.gamma_rate, spread))


def qfi_bound(model: EmitterModel, tag: ParameterTag) -> QfiResult:
    """Upper bound (mu_max - mu_min)^2 from the global extrema of X_theta.

    For the rate the extrema are +-1/Gamma regardless of H_M; for a
    detuning the infimum 0 is attained in the far-detuned limit, so
    mu_min is exactly zero with the far surrogate as its location.
    """
    ext: ExtremaResult = find_extrema(model, tag)
    if tag.kind == "gamma":
        mu_max, omega_max = ext.mu_max, ext.omega_max
        mu_min, omega_min = ext.mu_min, ext.omega_min
    else:
        mu_max, omega_max = ext.mu_max, ext.omega_max
        mu_min, omega_min = 0.0, far_detuned_frequency(model)
    return QfiResult(
        bound=(mu_max - mu_min) ** 2,
        mu_max=mu_max,
        mu_min=mu_min,
        omega_max=omega_max,
        omega_min=omega_min,
    )


def evaluate(
    model: EmitterModel, field: SampledField, tag: ParameterTag
) -> QfiResult:
    """Pulse QFI together with the bound and the saturation fraction."""
    res = qfi_bound(model, tag)
    value = qfi_pulse(model, field, tag)
    saturation = value / res.bound if res.bound > 0 else 0.0
    return QfiResult(
        bound=res.bound,
        mu_max=res.mu_max,
        mu_min=res.mu_min,
        omega_max=res.omega_max,
        omega_min=res.omega_min,
        value=value,
        saturation=saturation,
    )


def optimal_pulse(
    model: EmitterModel, tag: ParameterTag, kappa: float, reg: str = "gaussian"
) -> DeltaPair:
    """Regularized version of the bound-saturating delta pair.

    Rate estimation: branches at the frequencies where chi = +-1.  Detuning
    estimation: one branch at the response maximum, the other far detuned
    (standing in for the mode at infinity).
    """
    res = qfi_bound(model, tag)
    return DeltaPair(
        omega_plus=res.omega_max,
        omega_minus=res.omega_min,
        kappa=kappa,
        reg=reg,
        phi=0.0,
    )


def _map_cells(fn, cells, threads: int):
    """Evaluate independent sweep cells, merged back in input order."""
    if threads <= 1:
        return [fn(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, cells))


def sweep_kappa(
    model: EmitterModel,
    tag: ParameterTag,
    regs=("lorentzian", "gaussian", "rectangular"),
    kappas=None,
    budget: int = 4096,
    threads: int = 1,
) -> list[tuple[str, float, float]]:
    """(reg, kappa/Gamma, Gamma^2 * QFI) for regularized optimal pulses.

    Each column approaches Gamma^2 * bound monotonically as kappa shrinks.
    """
    rate = model.gamma_rate
    if kappas is None:
        kappas = rate * np.geomspace(1e2, 1e-3, 30)
    res = qfi_bound(model, tag)

    def cell(args):
        reg, kappa = args
        pulse = DeltaPair(res.omega_max, res.omega_min, float(kappa), reg, 0.0)
        field = build_grid(model, pulse, budget=budget)
        return (reg, float(kappa / rate), float(rate**2 * qfi_pulse(model, field, tag)))

    cells = [(reg, kappa) for reg in regs for kappa in kappas]
    return _map_cells(cell, cells, threads)


def bandwidth_sweep(
    model: EmitterModel,
    families=("gaussian", "rectangular", "decaying_exp", "rising_exp"),
    bandwidths=None,
    budget: int = 4096,
    threads: int = 1,
) -> list[tuple[str, float, float]]:
    """(family, bandwidth/Gamma, Gamma^2 * QFI) for resonant single-peak
    pulses estimating the rate of a (near-)TLS emitter.

    The pulse center sits on the first detuning; the scale parameter of
    each family is swept.
    """
    rate = model.gamma_rate
    center = float(model.detunings[0])
    if bandwidths is None:
        bandwidths = rate * np.geomspace(0.02, 20.0, 40)
    tag = ParameterTag.gamma()

    def cell(args):
        name, b = args
        pulse = BANDWIDTH_FAMILIES[name](center, float(b))
        field = build_grid(model, pulse, budget=budget)
        return (name, float(b / rate), float(rate**2 * qfi_pulse(model, field, tag)))

    cells = [(name, b) for name in families for b in bandwidths]
    return _map_cells(cell, cells, threads)
