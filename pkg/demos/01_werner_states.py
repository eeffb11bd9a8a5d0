"""
Werner states in Bloch form
===========================

A Werner state mixes the Bell state |phi+> with white noise. Its Bloch
form has no local part and a diagonal correlation matrix diag(p, -p, p).
The partial transpose turns negative exactly when p exceeds 1/3.
"""

import numpy as np

from bilocal.qstate import bloch_compose, bloch_decompose, ppt_min_eigenvalue, werner

np.set_printoptions(precision=4, suppress=True)

rho = werner(0.5)
print("werner(0.5) =")
print(rho.real)

bf = bloch_decompose(rho)
print("r =", bf.r, " s =", bf.s)
print("T =")
print(bf.T)

# composing the Bloch form gives back the same matrix
print("round trip error:", np.max(np.abs(bloch_compose(bf) - rho)))

# smallest eigenvalue of the partial transpose is (1 - 3p)/4
print("\n   p    lambda_min(PT)   entangled")
for p in np.linspace(0, 1, 11):
    lam = ppt_min_eigenvalue(werner(p))
    print(f"{p:5.2f}   {lam:+.4f}          {lam < -1e-12}")
