"""Emitter model and its linear response.

A quantum emitter probed by a single-photon pulse is described, within the
singly-excited subspace (SES), by a Hermitian Hamiltonian ``H_M`` (written in
the rotating frame, so its diagonal entries are the detunings), a normalized
coupling vector ``|gamma>`` and the spontaneous-emission rate ``Gamma``.

This module evaluates the real susceptibility

    chi(w) = (Gamma/2) <gamma| (w*I - H_M)^{-1} |gamma>,

its derivatives with respect to the rate and the detunings, the bounded
response function

    X_theta(w) = 2 d_theta chi(w) / (1 + chi(w)^2),

and the time/frequency scattering kernels of the emitter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import InvariantViolation, PoleProximityError

# Relative tolerance for Hermiticity / normalization of the inputs.
HERMITICITY_RTOL = 1e-12
NORM_RTOL = 1e-12

# Eigenstates with |<gamma|eps_k>|^2 below this carry no pole.
DARK_OVERLAP = 1e-14

# Frequencies closer than pole_guard = POLE_GUARD_FACTOR * Gamma to a
# pole-bearing eigenvalue are rejected by chi() and handled by the
# limit branch of response().
POLE_GUARD_FACTOR = 1e-9


@dataclass(frozen=True)
class ParameterTag:
    """Which emitter parameter is being estimated.

    ``kind`` is ``"gamma"`` (the linewidth) or ``"detuning"`` (a diagonal
    element of H_M); for detunings ``j`` is the 1-based level index.
    """

    kind: str
    j: int | None = None

    def __post_init__(self):
        if self.kind not in ("gamma", "detuning"):
            raise InvariantViolation("parameter_kind", f"unknown kind {self.kind!r}")
        if self.kind == "detuning":
            if self.j is None or self.j < 1:
                raise InvariantViolation("parameter_index", "detuning index must be >= 1")
        elif self.j is not None:
            raise InvariantViolation("parameter_index", "gamma tag takes no index")

    @classmethod
    def gamma(cls) -> "ParameterTag":
        return cls("gamma")

    @classmethod
    def detuning(cls, j: int) -> "ParameterTag":
        return cls("detuning", j)

    def __str__(self):
        return "Gamma" if self.kind == "gamma" else f"Detuning({self.j})"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues of H_M and their overlaps with the coupling vector.

    ``overlaps[k] = |<gamma|eps_k>|^2``; completeness on a normalized
    |gamma> makes them sum to one.
    """

    eigenvalues: np.ndarray
    overlaps: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.eigenvalues, dtype=float)
        p = np.asarray(self.overlaps, dtype=float)
        object.__setattr__(self, "eigenvalues", eps)
        object.__setattr__(self, "overlaps", p)
        if eps.shape != p.shape or eps.ndim != 1:
            raise InvariantViolation("spectral_shape", "eigenvalues/overlaps mismatch")
        if np.any(np.diff(eps) < 0):
            raise InvariantViolation("eigenvalues_sorted", "eigenvalues not non-decreasing")
        if np.any(p < 0):
            raise InvariantViolation("overlaps_nonnegative", "negative overlap")
        if abs(p.sum() - 1.0) > 1e-10:
            raise InvariantViolation(
                "overlaps_complete", f"overlaps sum to {p.sum()!r}, expected 1"
            )


class EmitterModel:
    """Immutable emitter description in the singly-excited subspace."""

    def __init__(self, h_m, gamma_vec, gamma_rate, frequency_unit: str = "Gamma"):
        h = np.array(h_m, dtype=complex)
        v = np.array(gamma_vec, dtype=complex).ravel()
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise InvariantViolation("h_m_square", f"h_m has shape {h.shape}")
        if v.shape[0] != h.shape[0]:
            raise InvariantViolation(
                "gamma_vec_dimension", f"|gamma> has length {v.shape[0]}, expected {h.shape[0]}"
            )
        hscale = max(1.0, float(np.linalg.norm(h)))
        if np.linalg.norm(h - h.conj().T) > HERMITICITY_RTOL * hscale:
            raise InvariantViolation("h_m_hermitian", "h_m is not Hermitian")
        nv = float(np.linalg.norm(v))
        if abs(nv - 1.0) > NORM_RTOL:
            raise InvariantViolation("gamma_vec_normalized", f"||gamma|| = {nv!r}, expected 1")
        rate = float(gamma_rate)
        if not np.isfinite(rate) or rate <= 0:
            raise InvariantViolation("gamma_rate_positive", f"gamma_rate = {rate!r}")
        # Symmetrize exactly; the deviation is below tolerance by construction.
        self._h_m = 0.5 * (h + h.conj().T)
        self._h_m.setflags(write=False)
        self._gamma_vec = v
        self._gamma_vec.setflags(write=False)
        self._gamma_rate = rate
        self.frequency_unit = str(frequency_unit)

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return self._h_m.shape[0]

    @property
    def h_m(self) -> np.ndarray:
        return self._h_m

    @property
    def gamma_vec(self) -> np.ndarray:
        return self._gamma_vec

    @property
    def gamma_rate(self) -> float:
        return self._gamma_rate

    @property
    def detunings(self) -> np.ndarray:
        """Diagonal of H_M: the level detunings relative to the carrier."""
        return np.real(np.diag(self._h_m))

    @property
    def pole_guard(self) -> float:
        return POLE_GUARD_FACTOR * self._gamma_rate

    # -- spectral data ---------------------------------------------------

    @cached_property
    def _eig(self):
        """(eps, U, g): eigenvalues, eigenvector matrix, g = U^dag |gamma>."""
        eps, u = np.linalg.eigh(self._h_m)
        g = u.conj().T @ self._gamma_vec
        return eps, u, g

    @cached_property
    def bright_poles(self) -> np.ndarray:
        """Eigenvalues carrying a pole of chi (overlap above DARK_OVERLAP)."""
        eps, _, g = self._eig
        return eps[np.abs(g) ** 2 > DARK_OVERLAP]

    @cached_property
    def has_dark_states(self) -> bool:
        """True when some eigenstate does not overlap |gamma> (a component
        of the SES that never decays into the waveguide)."""
        eps, _, g = self._eig
        return bool(np.any(np.abs(g) ** 2 <= DARK_OVERLAP))

    def spectral(self) -> SpectralDecomposition:
        eps, _, g = self._eig
        return SpectralDecomposition(eps.copy(), np.abs(g) ** 2)

    # -- (de)serialization ----------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "h_m_re": self._h_m.real.tolist(),
            "h_m_im": self._h_m.imag.tolist(),
            "gamma_vec_re": self._gamma_vec.real.tolist(),
            "gamma_vec_im": self._gamma_vec.imag.tolist(),
            "gamma_rate": self._gamma_rate,
            "frequency_unit": self.frequency_unit,
        }

    def with_gamma_rate(self, rate: float) -> "EmitterModel":
        return EmitterModel(self._h_m, self._gamma_vec, rate, self.frequency_unit)

    def with_detuning_shift(self, j: int, delta: float) -> "EmitterModel":
        """New model with H_M[j,j] shifted by delta (j is 1-based)."""
        h = np.array(self._h_m)
        h[j - 1, j - 1] += delta
        return EmitterModel(h, self._gamma_vec, self._gamma_rate, self.frequency_unit)


def emitter_from_json(obj: dict) -> EmitterModel:
    """Build an EmitterModel from its JSON document form.

    Imaginary blocks are optional and default to zero.  Validation errors
    carry the name of the violated invariant.
    """
    try:
        n = int(obj["n"])
        h_re = np.array(obj["h_m_re"], dtype=float)
        h_im = np.array(obj.get("h_m_im", np.zeros((n, n))), dtype=float)
        v_re = np.array(obj["gamma_vec_re"], dtype=float)
        v_im = np.array(obj.get("gamma_vec_im", np.zeros(n)), dtype=float)
        rate = float(obj["gamma_rate"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolation("emitter_schema", f"bad emitter document: {exc}") from exc
    if h_re.shape != (n, n):
        raise InvariantViolation("h_m_square", f"h_m_re has shape {h_re.shape}, expected ({n},{n})")
    return EmitterModel(
        h_re + 1j * h_im,
        v_re + 1j * v_im,
        rate,
        frequency_unit=str(obj.get("frequency_unit", "Gamma")),
    )


# ---------------------------------------------------------------------------
# Susceptibility and derivatives
# ---------------------------------------------------------------------------


def _check_pole(model: EmitterModel, omega: float):
    if not np.isfinite(omega):
        raise PoleProximityError(f"omega = {omega!r} is not finite")
    poles = model.bright_poles
    if poles.size and np.min(np.abs(poles - omega)) < model.pole_guard:
        raise PoleProximityError(
            f"omega = {omega!r} within pole_guard of an emitter eigenvalue"
        )


def susceptibility(model: EmitterModel, omega: float) -> float:
    """chi(w) via a linear solve of (w*I - H_M) x = |gamma>.

    Real for Hermitian H_M and real w.  Raises PoleProximityError within
    ``pole_guard`` of a pole-bearing eigenvalue.
    """
    _check_pole(model, omega)
    a = omega * np.eye(model.n) - model.h_m
    x = np.linalg.solve(a, model.gamma_vec)
    chi = 0.5 * model.gamma_rate * np.vdot(model.gamma_vec, x)
    return float(chi.real)


def susceptibility_spectral(
    decomp: SpectralDecomposition, gamma_rate: float, omega: float
) -> float:
    """chi(w) as the partial-fraction sum over the spectral decomposition."""
    guard = POLE_GUARD_FACTOR * gamma_rate
    bright = decomp.overlaps > DARK_OVERLAP
    d = omega - decomp.eigenvalues[bright]
    if d.size and np.min(np.abs(d)) < guard:
        raise PoleProximityError(
            f"omega = {omega!r} within pole_guard of an emitter eigenvalue"
        )
    return float(0.5 * gamma_rate * np.sum(decomp.overlaps[bright] / d))


def d_susceptibility(model: EmitterModel, omega: float, tag: ParameterTag) -> float:
    """Derivative of chi with respect to the tagged parameter.

    For the rate, chi is linear in Gamma so the derivative is chi/Gamma.
    For a detuning, d chi / d Delta_j = (Gamma/2) |<j|(w*I-H_M)^{-1}|gamma>|^2,
    which is non-negative.
    """
    _check_pole(model, omega)
    if tag.kind == "gamma":
        return susceptibility(model, omega) / model.gamma_rate
    if tag.j > model.n:
        raise InvariantViolation("parameter_index", f"detuning index {tag.j} > N = {model.n}")
    a = omega * np.eye(model.n) - model.h_m
    x = np.linalg.solve(a, model.gamma_vec)
    return float(0.5 * model.gamma_rate * abs(x[tag.j - 1]) ** 2)


# ---------------------------------------------------------------------------
# Response function X_theta(w), vectorized with pole-limit branches
# ---------------------------------------------------------------------------


def _safe_distances(model: EmitterModel, omegas: np.ndarray):
    """Distances to all eigenvalues, clipped away from zero.

    Returns (dsafe, near) where ``near[i, k]`` marks frequencies inside the
    guard band of a *pole-bearing* eigenvalue k.  Dark eigenvalues are
    clipped too (their residues are negligible) but never flagged.
    """
    eps, _, g = model._eig
    guard = model.pole_guard
    d = omegas[:, None] - eps[None, :]
    small = np.abs(d) < guard
    dsafe = np.where(small, np.where(d >= 0, guard, -guard), d)
    bright = (np.abs(g) ** 2 > DARK_OVERLAP)[None, :]
    return dsafe, small & bright


def _chi_array(model: EmitterModel, omegas: np.ndarray):
    """(chi, at_pole): vectorized susceptibility and pole-band mask.

    ``chi`` values where ``at_pole`` is True are clipped, not exact; callers
    must branch on the mask.
    """
    omegas = np.asarray(omegas, dtype=float)
    _, _, g = model._eig
    dsafe, near = _safe_distances(model, omegas)
    chi = 0.5 * model.gamma_rate * ((np.abs(g) ** 2)[None, :] / dsafe).sum(axis=1)
    return chi, near.any(axis=1)


def _response_array(model: EmitterModel, omegas: np.ndarray, tag: ParameterTag) -> np.ndarray:
    """X_theta on an array of frequencies, finite everywhere.

    Inside the guard band of a pole the closed limit form is used:
    X_gamma -> 0 and X_Delta_j -> (4/Gamma) |<j|eps_k>|^2 / |<gamma|eps_k>|^2
    (the ratio of the leading pole coefficients of d_chi and chi^2).
    """
    omegas = np.asarray(omegas, dtype=float)
    eps, u, g = model._eig
    rate = model.gamma_rate
    p = np.abs(g) ** 2
    dsafe, near = _safe_distances(model, omegas)
    chi = 0.5 * rate * (p[None, :] / dsafe).sum(axis=1)
    at_pole = near.any(axis=1)
    if tag.kind == "gamma":
        x = (2.0 * chi / rate) / (1.0 + chi * chi)
        x[at_pole] = 0.0
        return x
    if tag.j > model.n:
        raise InvariantViolation("parameter_index", f"detuning index {tag.j} > N = {model.n}")
    c = u[tag.j - 1, :] * g  # <j|eps_k><eps_k|gamma>
    amp = (c[None, :] / dsafe).sum(axis=1)
    dchi = 0.5 * rate * np.abs(amp) ** 2
    x = 2.0 * dchi / (1.0 + chi * chi)
    for i in np.nonzero(at_pole)[0]:
        ks = np.nonzero(near[i])[0]
        x[i] = (4.0 / rate) * abs(c[ks].sum()) ** 2 / p[ks].sum() ** 2
    return x


def _chi_prime_array(model: EmitterModel, omegas: np.ndarray) -> np.ndarray:
    """d chi / d omega = -(Gamma/2) sum_k p_k / (w - eps_k)^2 (always < 0)."""
    omegas = np.asarray(omegas, dtype=float)
    _, _, g = model._eig
    dsafe, _ = _safe_distances(model, omegas)
    return -0.5 * model.gamma_rate * ((np.abs(g) ** 2)[None, :] / dsafe**2).sum(axis=1)


def _response_prime_array(model: EmitterModel, omegas: np.ndarray, tag: ParameterTag) -> np.ndarray:
    """Analytic d X_theta / d omega away from poles (used to polish extrema).

    Suffers catastrophic cancellation close to poles; callers keep a
    safety distance there.
    """
    omegas = np.asarray(omegas, dtype=float)
    eps, u, g = model._eig
    rate = model.gamma_rate
    p = np.abs(g) ** 2
    dsafe, _ = _safe_distances(model, omegas)
    chi = 0.5 * rate * (p[None, :] / dsafe).sum(axis=1)
    chi_p = -0.5 * rate * (p[None, :] / dsafe**2).sum(axis=1)
    if tag.kind == "gamma":
        return (2.0 / rate) * chi_p * (1.0 - chi * chi) / (1.0 + chi * chi) ** 2
    c = u[tag.j - 1, :] * g
    amp = (c[None, :] / dsafe).sum(axis=1)
    amp_p = -(c[None, :] / dsafe**2).sum(axis=1)
    dchi = 0.5 * rate * np.abs(amp) ** 2
    dchi_p = rate * np.real(np.conj(amp) * amp_p)
    one = 1.0 + chi * chi
    return (2.0 * dchi_p * one - 4.0 * dchi * chi * chi_p) / one**2


def response(model: EmitterModel, omega: float, tag: ParameterTag) -> float:
    """X_theta(w) = 2 d_theta chi / (1 + chi^2), total over real w.

    Bounded by 1/Gamma in magnitude for the rate; non-negative for
    detunings.
    """
    return float(_response_array(model, np.array([omega], dtype=float), tag)[0])


# ---------------------------------------------------------------------------
# Scattering kernels
# ---------------------------------------------------------------------------


def _effective_generator(model: EmitterModel) -> np.ndarray:
    """-(i H_M + Gamma |gamma><gamma| / 2): generator of the SES decay."""
    v = model.gamma_vec
    return -(1j * model.h_m + 0.5 * model.gamma_rate * np.outer(v, v.conj()))


def kernel_time(model: EmitterModel, t: float) -> complex:
    """Causal scattering kernel f(t) = Gamma <gamma| e^{A t} |gamma>, t >= 0.

    Returns 0 for t < 0; at t = 0 the step function is taken
    right-continuous so f(0) = Gamma.
    """
    if t < 0:
        return 0.0j
    a = _effective_generator(model)
    v = model.gamma_vec
    return complex(model.gamma_rate * np.vdot(v, scipy.linalg.expm(a * t) @ v))


def kernel_time_samples(model: EmitterModel, ts: np.ndarray) -> np.ndarray:
    """f(t) on an array of times via eigendecomposition of the generator.

    Falls back to per-sample matrix exponentials when the generator is too
    ill-conditioned to diagonalize reliably.
    """
    ts = np.asarray(ts, dtype=float)
    a = _effective_generator(model)
    v = model.gamma_vec
    w, vec = np.linalg.eig(a)
    try:
        coef = (v.conj() @ vec) * np.linalg.solve(vec, v)
        out = model.gamma_rate * (np.exp(np.outer(ts.clip(min=0.0), w)) @ coef)
        # Spot-check the diagonalization against the dense exponential.
        tref = float(np.max(np.abs(ts), initial=0.0)) * 0.37 + 0.1 / model.gamma_rate
        ref = kernel_time(model, tref)
        probe = complex(model.gamma_rate * (np.exp(tref * w) @ coef))
        if abs(probe - ref) > 1e-8 * max(1.0, abs(ref)):
            raise np.linalg.LinAlgError("defective generator")
    except np.linalg.LinAlgError:
        out = np.array([kernel_time(model, t) for t in ts.clip(min=0.0)])
    out = np.where(ts < 0, 0.0j, out)
    return out


def kernel_freq(model: EmitterModel, omega: float) -> complex:
    """Frequency-domain kernel 2i chi / (1 + i chi); equals 2 at chi-poles.

    The transmission factor 1 - f has unit modulus for every w.
    """
    try:
        chi = susceptibility(model, omega)
    except PoleProximityError:
        return 2.0 + 0.0j
    return complex(2j * chi / (1.0 + 1j * chi))


def _kernel_freq_array(model: EmitterModel, omegas: np.ndarray) -> np.ndarray:
    chi, at_pole = _chi_array(model, omegas)
    f = 2j * chi / (1.0 + 1j * chi)
    f[at_pole] = 2.0
    return f
