"""Haugazeau's method creeping toward the apex of a wedge.

We project (1, 0) onto the wedge {|v| <= -u tan(theta)}.  The apex is the
answer, yet every step only shaves a little off the distance to it.  The
objective gap shrinks like 1/k, and since the gradient at the apex is not
zero the distance to the apex does too.  Narrow wedges take longest to
settle into that rate.
"""
import numpy as np

from feasopt.analysis import fit_power_law, run_two_halfspace

K = 5000

print(f"{'theta':>8} {'alpha_K':>12} {'gap exponent':>14} {'alpha exponent':>15}")
for theta in (np.pi / 3, np.pi / 4, np.pi / 8, np.pi / 16):
    out = run_two_halfspace(theta, K)
    k, alpha = out["k"], out["alpha"]
    tail = k >= 100
    # f* = 1 here, so 1 - f_k is the objective gap
    e_gap, _ = fit_power_law(k[tail], out["one_minus_f"][tail])
    e_alpha, _ = fit_power_law(k[tail], alpha[tail])
    print(f"{theta:8.4f} {alpha[-1]:12.3e} {e_gap:14.3f} {e_alpha:15.3f}")

out = run_two_halfspace(np.pi / 4, 20)
err = np.nanmax(np.abs(out["alpha"] - out["predicted"]))
print(f"\nclosed-form recurrence reproduces the run to {err:.1e}")
