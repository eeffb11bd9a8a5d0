"""
Auditing the published optimum and scanning the (p, q) plane
============================================================

The row-sum formula predicts a violation whenever pq > (2 / S')^2, which
for S' = 4.0642 includes pairs where one Werner state is separable
(q <= 1/3). The exact trace tells a different story: for Werner pairs S
scales as sqrt(pq) times its value at p = q = 1, and a swarm search over
the same strategy space does not push that value above 2 sqrt(2). So a
trace-valid violation needs pq > 1/2, which rules out q <= 1/3.

For context, a semidefinite-programming bound in the literature certifies
violation for p = q >= 0.83; no such solver is included here.
"""

from bilocal.experiments import HEADLINE_P, HEADLINE_Q, audit_reported, run_trace_experiment, scan_pq
from bilocal.optimizer import PsoConfig

report = audit_reported(float(HEADLINE_P), float(HEADLINE_Q))
for key, value in report.to_json().items():
    print(f"{key:20s} {value}")

cells = scan_pq(4.0642, 101)
mixed = [c for c in cells if c.violates_paper and c.ab_entangled and not c.bc_entangled]
print(f"\n{len(mixed)} of {len(cells)} grid cells: entangled x separable pairs flagged by the row-sum formula")

# S at p=q=1 approaches 2 sqrt2 = 2.8284 from below
_, s_max, _ = run_trace_experiment(1.0, 1.0, PsoConfig(seed=1))
print(f"swarm maximum of the exact S at p=q=1: {s_max:.4f}")
print(f"implied trace threshold pq > {(2 / s_max) ** 2:.4f}")
