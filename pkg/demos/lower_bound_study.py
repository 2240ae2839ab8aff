"""How much does each revealed constraint buy?

The model problem hides its optimum behind n - 1 halfspaces.  A method
that only learns one constraint per step cannot beat the value obtained
with the first k of them, and this script prints that value next to its
closed form.  Larger p flattens the objective and stretches the tail.
"""
from feasopt.analysis import ModelProblemParams, lower_bound_fk, run_analyze_lower_bdd

n = 12
for p in (2, 4, 8):
    params = ModelProblemParams(n, p, eps=0.5)
    values = run_analyze_lower_bdd(params)
    print(f"p = {p}")
    for k, v in enumerate(values, start=1):
        print(f"  k={k:2d}  f_k={v:.10f}  closed form={lower_bound_fk(k, params):.10f}")
