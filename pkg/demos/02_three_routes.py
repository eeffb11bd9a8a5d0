"""
Three ways to evaluate the bilocal score
========================================

S = sqrt|I| + sqrt|J| is evaluated for a strategy on two Werner states by

* the exact trace over the four-qubit space,
* the Bloch-coefficient contraction (which must match the trace), and
* the published row-sum formula, which factorises differently.

For the textbook strategy the three agree. For the published optimum the
row-sum formula gives about 4.06 while the exact trace gives about 2.25.
"""

from bilocal.correlations import canonical_strategy, eval_bloch_general, eval_paper_formula, eval_trace
from bilocal.experiments import reported_strategy
from bilocal.qstate import bloch_decompose, werner

p, q = 1.0, 1.0
rho_ab, rho_bc = werner(p), werner(q)
bf_ab, bf_bc = bloch_decompose(rho_ab), bloch_decompose(rho_bc)

for name, strategy in [("canonical", canonical_strategy()), ("published", reported_strategy())]:
    print(f"\n{name} strategy at p={p}, q={q}")
    # the published numbers are rounded to four decimals, so skip the strict admissibility check
    routes = {
        "trace": eval_trace(strategy, rho_ab, rho_bc, check=False),
        "bloch": eval_bloch_general(strategy, bf_ab, bf_bc, check=False),
        "row-sum formula": eval_paper_formula(strategy, bf_ab, bf_bc, check=False),
    }
    for route, res in routes.items():
        print(f"  {route:16s} I={res.I:+.4f}  J={res.J:+.4f}  S={res.S:.4f}")
