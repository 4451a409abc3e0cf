"""
The matrix inequalities behind the product formulas
===================================================

Three facts are used when splitting a bipartite input into blocks:

* a Hoelder bound for traces of products,
* ``sum_ij ||A_ij||_p^2 <= ||A||_p^2`` for ``1 <= p <= 2``,
* off-diagonal blocks of a PSD matrix factor through a contraction.

We sample random instances and record the worst case of each.
"""

import numpy as np

from epmult.inequalities import bhatia_kittaneh_check, block_norm_matrix, contraction_decomposition
from epmult.linalg import holder_trace_bound, schatten_norm

rng = np.random.default_rng(0)


def gaussian(*shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


worst_holder = max(np.divide(*holder_trace_bound([gaussian(3, 3) for _ in range(3)])) for _ in range(1000))
print(f"Hoelder: worst lhs/rhs over 1000 triples = {worst_holder:.4f}")

for p in (1.0, 1.5, 2.0):
    checks = [bhatia_kittaneh_check(gaussian(6, 6), 3, 2, p) for _ in range(300)]
    worst = max(c.lhs / c.rhs for c in checks)
    print(f"block inequality p={p}: worst lhs/rhs = {worst:.4f}")

# the block inequality fails for p > 2, e.g. the identity at p = inf
I4 = np.eye(4)
print("p=inf, identity:", np.sum(block_norm_matrix(I4, 2, 2, np.inf) ** 2), ">", schatten_norm(I4, np.inf) ** 2)

worst = 0.0
for _ in range(1000):
    G = gaussian(6, int(rng.integers(1, 7)))
    _, nrm = contraction_decomposition(G @ G.conj().T, 3, 2, 0, 2)
    worst = max(worst, nrm)
print(f"contraction: largest operator norm over 1000 PSD inputs = {worst:.12f}")
