"""Three solvers on one random polyhedral instance, same outer budget.

The subgradient method pays for its generality with a 1/sqrt(k) tail.
Haugazeau's method needs strong convexity and closes the gap much
faster.  The cutting-plane scheme tracks Haugazeau step for step, but it
only ever solves its subproblems approximately and each outer step
carries a certificate on that inner error; the inner column counts the
projected gradient steps spent on it.
"""
import numpy as np

from feasopt.analysis import random_polyhedral_instance
from feasopt.haugazeau import run
from feasopt.strongcvx import run_algorithm53
from feasopt.subgrad import run_subgradient

K = 3000
rng = np.random.default_rng(7)
p = random_polyhedral_instance(rng, n=6, m=15)
x_star, f_star = p.known_optimum

runs = {
    "subgradient 1A": run_subgradient(p, "1A", K=K),
    "subgradient 1B": run_subgradient(p, "1B", K=K),
    "haugazeau": run(p, "classic", K=K),
    "cutting scheme": run_algorithm53(p, K=K),
}

print(f"n = {x_star.size}, m = {len(p.constraints)}, f* = {f_star:.6f}\n")
print(f"{'method':>16} {'rows':>6} {'inner':>7} {'|f - f*|':>11} {'violation':>11} "
      f"{'|x - x*|':>11}")
for name, tr in runs.items():
    x = tr.info["x_final"]
    inner = sum(r.inner for r in tr)
    print(f"{name:>16} {len(tr):6d} {inner:7d} {abs(p.objective.value(x) - f_star):11.3e} "
          f"{p.max_violation(x):11.3e} {np.linalg.norm(x - x_star):11.3e}")
