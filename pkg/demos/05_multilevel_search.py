"""Root finding and extremum search on a multi-level emitter.

Between consecutive pole-carrying eigenvalues the susceptibility chi is
strictly decreasing and spans the whole real line, so chi = c has exactly
one root per interior gap.  The linewidth response X_Gamma peaks exactly
where chi = +-1, which gives two fully independent routes to the same
frequencies -- a strong self-check, demonstrated here on a V-type
three-level emitter.
"""

import numpy as np

import qspec as q

# Two excited levels at detunings -1 and +2, unequal coupling.
h = np.diag([-1.0, 2.0])
v = np.array([0.8, 0.6])
model = q.EmitterModel(h, v, 1.0)

print("bracket structure (pole-to-pole intervals):")
for lo, hi in q.brackets(model).intervals:
    print(f"  ({lo:+.3f}, {hi:+.3f})")

for c in (1.0, -1.0):
    roots = q.solve_chi_equals(model, c)
    print(f"\nroots of chi = {c:+g}:")
    for r in roots:
        print(f"  omega = {r:+.12f}   residual {q.susceptibility(model, r) - c:+.1e}")

ext = q.find_extrema(model, q.ParameterTag.gamma())
print("\nextrema of the linewidth response X_Gamma:")
print(f"  max {ext.mu_max:+.12f} at omega = {ext.omega_max:+.12f}")
print(f"  min {ext.mu_min:+.12f} at omega = {ext.omega_min:+.12f}")

plus = min(abs(ext.omega_max - r) for r in q.solve_chi_equals(model, 1.0))
minus = min(abs(ext.omega_min - r) for r in q.solve_chi_equals(model, -1.0))
print(f"  agreement with the chi = +-1 roots: {max(plus, minus):.2e}")

print("\ndetuning responses (non-negative, peak at a pole):")
for j in (1, 2):
    ext = q.find_extrema(model, q.ParameterTag.detuning(j))
    print(f"  level {j}: max {ext.mu_max:.6f} at omega = {ext.omega_max:+.6f}")

# A dark state drops out of the pole structure entirely.
dark = q.EmitterModel(np.diag([0.0, 5.0]), [1.0, 0.0], 1.0)
print(f"\ndecoupled level: has_dark_states = {dark.has_dark_states}, "
      f"bright poles = {dark.bright_poles}")
