"""
Maximal output purity of a depolarizing channel
===============================================

The qubit depolarizing channel shrinks the Bloch sphere by ``lambda``.  Its
maximal output t-norm has a closed form, which we compare with the
restarted optimizer and with a brute-force scan of the Bloch sphere.
"""

import numpy as np

from epmult import channels as ch
from epmult.linalg import schatten_norm
from epmult.norms import OptimizerConfig, nu

lam, t = 0.5, 2
K = ch.depolarizing(2, lam)

# closed form: output eigenvalues (1 + lam)/2 and (1 - lam)/2
closed = (((1 + lam) / 2) ** t + ((1 - lam) / 2) ** t) ** (1 / t)

# optimizer over pure inputs, 32 seeded restarts
res = nu(K, t, OptimizerConfig(restarts=32, seed=0))

# brute force over a Fibonacci grid of pure states
n = 10_000
k = np.arange(n) + 0.5
z = 1 - 2 * k / n
phi = np.pi * (1 + 5**0.5) * k
r = np.stack([np.sqrt(1 - z**2) * np.cos(phi), np.sqrt(1 - z**2) * np.sin(phi), z], axis=1)
grid = max(
    schatten_norm(K.apply(0.5 * (np.eye(2) + sum(v[i] * ch.PAULI[i + 1] for i in range(3)))), t)
    for v in r
)

print(f"closed form      {closed:.10f}")
print(f"optimizer        {res.value:.10f}  ({res.restarts_agreeing}/32 restarts agree)")
print(f"Bloch grid       {grid:.10f}")

# every pure input is optimal here, since the channel is covariant
print("maximizer        ", np.round(res.maximizer, 6))
