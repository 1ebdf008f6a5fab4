"""Real eigenvectors of a symmetric tensor, found as critical points on the sphere."""
import numpy as np

from tensormodes import find_eigenpairs, from_terms, random_polynomial, tensor_view

# (x^2 + y^2)^2 + x^2 y^2
P = from_terms(2, 4, [((4, 0), 1), ((0, 4), 1), ((2, 2), 3)])
T = tensor_view(P)
print("T[0,0,1,1] =", T[0, 0, 1, 1], "(coefficient 3 spread over 6 orderings)")

rep = find_eigenpairs(P)
print(f"{rep.real_count} unit eigenvectors, bound on eigenlines N_R = {rep.bezout_bound}")
for e in rep.eigenpairs:
    print(f"  theta={e.angle:+.6f}  lambda={e.lam:.6f}  {e.classification.label():8s} index {e.classification.ph_index:+d}")
print("index sum", rep.index_sum, "(Euler characteristic of the circle is 0)")

# a generic quartic in three variables
Q = random_polynomial(3, 4, seed=42)
rep = find_eigenpairs(Q)
kinds = [e.classification.kind for e in rep.eigenpairs]
print()
print(f"random quartic on S^2: {rep.real_count} critical points, at most {2 * rep.bezout_bound}")
print({k: kinds.count(k) for k in sorted(set(kinds))})
print("index sum", rep.index_sum, "parity ok", rep.parity_ok)

# lambda = n P(v) on every eigenpair
print("max |lambda - 4 P(v)|:", max(abs(e.lam - 4 * Q(e.v)) for e in rep.eigenpairs))
