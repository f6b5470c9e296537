"""Precision bounds and the pulses that saturate them.

A quantum emitter driven by a single-photon pulse imprints the pure phase
2*arctan(chi(w)) on each spectral component.  The quantum Fisher information
of any pulse for a parameter theta is 4*Var(X_theta) under its spectral
intensity, so no pulse can beat the square of the response range,
(mu_max - mu_min)^2 -- and a 50/50 pair of narrow spectral lines parked on
the extrema reaches it.

This script reproduces the two headline numbers for a resonant two-level
emitter with Gamma = 1: the linewidth bound 4/Gamma^2 and the detuning
bound 16/Gamma^2, then checks the regularized delta-pair pulses against
them.
"""

import numpy as np

import qspec as q

tls = q.EmitterModel([[0.0]], [1.0], 1.0)

print("== two-level emitter, Gamma = 1 ==")
for tag in (q.ParameterTag.gamma(), q.ParameterTag.detuning(1)):
    res = q.qfi_bound(tls, tag)
    print(f"\nparameter {tag}:")
    print(f"  bound            = {res.bound:.6f}  (Gamma^2 units)")
    print(f"  response maximum  mu_max = {res.mu_max:.6f} at omega = {res.omega_max:+.6f}")
    print(f"  response minimum  mu_min = {res.mu_min:.6f} at omega = {res.omega_min:+.6f}")

    # The optimal pulse: two regularized spectral lines on the extrema.
    for kappa in (0.1, 0.01, 0.001):
        pulse = q.optimal_pulse(tls, tag, kappa=kappa, reg="gaussian")
        field = q.build_grid(tls, pulse)
        value = q.qfi_pulse(tls, field, tag)
        print(
            f"  delta pair, kappa/Gamma = {kappa:<6g} QFI = {value:.6f}"
            f"  ({100 * value / res.bound:.2f}% of the bound)"
        )

print(
    "\nThe linewidth bound 4/Gamma^2 is universal: chi = +-1 is attainable\n"
    "for every Hermitian level structure, so the range of X_Gamma is always\n"
    "2/Gamma.  A quick spot check on a random three-level model:"
)
rng = np.random.default_rng(1)
a = rng.normal(size=(3, 3))
h = 0.5 * (a + a.T)
v = rng.normal(size=3)
v /= np.linalg.norm(v)
model = q.EmitterModel(h, v, gamma_rate=2.5)
res = q.qfi_bound(model, q.ParameterTag.gamma())
print(f"  Gamma = 2.5, three levels: Gamma^2 * bound = {2.5**2 * res.bound:.9f}")
