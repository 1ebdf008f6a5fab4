"""Modes of (x^2 + y^2)^2 + beta x^2 y^2 for a few beta.

The sign of beta decides which of axes and diagonals are minima of the
potential on the unit circle.
"""
import numpy as np

from tensormodes import HigherSymmetry, critical_angles, cross_validate, restrict

for beta in (-1.0, -0.5, 0.5, 1.0):
    fam = HigherSymmetry(beta)
    ms = critical_angles(fam)
    prof = restrict(fam, samples=360)
    print(f"beta={beta:+.1f}  W ranges over [{prof.values.min():.4f}, {prof.values.max():.4f}]")
    for th, kind, c in zip(ms.angles, ms.kinds, ms.c_coeffs):
        print(f"    theta={th / np.pi:+.2f} pi  {kind:8s}  c_theta={c:.4f}")
    cv = cross_validate(fam)
    print("    tensor solver agrees:", cv.ok)
