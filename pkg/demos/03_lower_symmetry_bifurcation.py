"""Counting modes of x^4 + alpha y^4 + 2 beta x^2 y^2 while beta varies."""
import numpy as np

from tensormodes import LowerSymmetry, bifurcation_scan, critical_angles, off_axis_angle

alpha = 0.25
res = bifurcation_scan(alpha, (-0.4, 1.5, 0.01))

# compress the scan into runs of equal count
start = 0
for i in range(1, len(res.betas) + 1):
    if i == len(res.betas) or res.counts[i] != res.counts[start]:
        print(f"beta in [{res.betas[start]:+.2f}, {res.betas[i - 1]:+.2f}]: {res.counts[start]} modes")
        start = i
print("transitions:", [f"{t:.9f}" for t in res.transitions])

# the off-axis pair exists only outside [alpha, 1]
for beta in (0.0, 0.5, 1.2):
    fam = LowerSymmetry(alpha, beta)
    ts = off_axis_angle(fam)
    ms = critical_angles(fam)
    off = [k for t, k in zip(ms.angles, ms.kinds) if ts is not None and np.isclose(abs(t), ts)]
    print(f"beta={beta}: theta* = {ts}  kinds {off}")
