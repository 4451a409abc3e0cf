"""
Where multiplicativity breaks: the Werner-Holevo map
====================================================

``W(rho) = (Tr(rho) I - rho^T) / (d - 1)`` sends every pure state to a
flat spectrum, so ``nu_t(W) = (d - 1)**((1 - t)/t)``.  Feeding ``W x W``
a maximally entangled input does better than any product input once t is
large enough.  For d = 3 the crossing happens between t = 4 and t = 5.
"""

from epmult.verify import wh_violation

print(" d   t   witness/product   violated")
for d in (2, 3):
    for t in range(2, 8):
        rep = wh_violation(d, t)
        print(f"{d:2d}  {t:2d}   {rep.extra['ratio_witness']:.9f}       {rep.violated}")

# the output spectrum of the entangled witness for d = 3
rep = wh_violation(3, 5)
print("output spectrum (d=3):", [round(x, 6) for x in rep.extra["output_spectrum"]])
