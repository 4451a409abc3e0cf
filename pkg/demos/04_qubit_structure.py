"""
Qubit maps in diagonal form
===========================

A qubit map with Pauli transfer matrix ``[[1, 0], [t, diag(lambda)]]``
has a Choi matrix that is entrywise nonnegative exactly when
``t2 = 0`` and ``|lambda1| >= |lambda2|`` (up to the sign choices allowed
by basis changes).  We look at the Choi matrix, the Pauli matrix and the
``adjoint o map`` probe on either side of that boundary.
"""

import numpy as np

from epmult import channels as ch
from epmult.verify import ep_hat_probe

np.set_printoptions(precision=3, suppress=True)

for lam in [(0.5, 0.3, 0.2), (0.3, 0.5, 0.2)]:
    P = ch.QubitDiagonalParams.from_arrays(lam, (0.1, 0.0, 0.3))
    K = ch.qubit_from_diagonal(P)
    print(f"lambda={lam}  t=(0.1, 0, 0.3)")
    print("  Choi matrix:\n", K.choi.real)
    print("  canonical EP:", ch.qubit_is_ep_canonical(P), " standard-basis EP:", ch.is_ep_in_basis(K).ok)
    print("  CP:", ch.is_cp(K).ok)
    probe = ep_hat_probe(P)
    print(f"  b12 = {probe.b[1, 2]:+.4f}  (lambda1^2 - lambda2^2 = {lam[0]**2 - lam[1]**2:+.4f})")
    print("  adjoint o map EP:", probe.ep_hat)
    print()

# Pauli transfer matrix round trip
A = ch.pauli_transfer(ch.qubit_from_diagonal(ch.QubitDiagonalParams(0.5, 0.3, 0.2, 0.1, 0.0, 0.3)))
print("Pauli transfer matrix:\n", A)
