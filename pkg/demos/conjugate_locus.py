"""Distances to the tangent conjugate locus and 2 pi separated preimages."""

import numpy as np

from skewexp import dist_to_locus, exp_skew, in_s0, schur_skew, separated_preimage
from skewexp.matcore import random_skew

for n in (2, 3, 4, 5, 8):
    d = dist_to_locus(schur_skew(np.zeros((n, n))))
    print(f"A=0, n={n}: dist={d.dist:.6f} via {d.subset}")

rng = np.random.default_rng(2)
A = random_skew(6, rng) * 2.5
s = schur_skew(A)
d = dist_to_locus(s)
print(f"\ntheta = {np.round(s.theta, 4)}, in S0: {in_s0(s)}")
print(f"closest subset {d.subset} l={d.l} blocks ({d.i}, {d.j}) sign {d.sign}: dist {d.dist:.6f}")
print(f"|A - B|_2 = {np.linalg.norm(A - d.touching_point, 2):.6f}, touching angles {np.round(d.touching_angles, 4)}")

B = separated_preimage(s, 1, 1, A)
print(f"\nseparated preimage: |exp(A) - exp(B)| = {np.max(np.abs(exp_skew(A) - exp_skew(B))):.1e}, "
      f"|A - B|_2 / pi = {np.linalg.norm(A - B, 2) / np.pi:.12f}")
