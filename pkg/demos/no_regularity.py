"""When the sets touch tangentially.

C+ = {v >= |u|^p} and C- = {v <= -|u|^p} meet only at the origin and
are not linearly regular there.  Haugazeau's method still converges, but
the distance to the answer decays like k^(-1/(2p-1)) and the per-step
lower bound shows that nothing faster is possible.
"""
from feasopt.analysis import fit_power_law, run_no_regularity

K = 4000
for p in (2, 4, 6):
    out = run_no_regularity(p, K)
    k, u = out["k"], out["u"]
    tail = k >= 50
    e, c = fit_power_law(k[tail], u[tail])
    ok = bool((u[1:] >= out["bound"][1:] - 1e-15).all())
    print(f"p = {p}: u_K = {u[-1]:.3e}, fitted exponent {e:.4f} "
          f"(predicted {-1 / (2 * p - 1):.4f}), lower bound respected: {ok}")
