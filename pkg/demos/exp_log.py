"""Exponential and principal logarithm through the skew Schur form."""

import numpy as np

from skewexp import exp_skew, log_so, schur_skew
from skewexp.matcore import random_skew
from skewexp.reference import error_metric, pade_expm, xp_expm

rng = np.random.default_rng(0)

for n in (10, 50, 100):
    A = random_skew(n, rng)
    s = schur_skew(A)
    ref = xp_expm(A)
    print(
        f"n={n:4d}  |A|_2={np.linalg.norm(A, 2):6.3f}  "
        f"schur {error_metric(exp_skew(A, s), ref):.1e}  "
        f"pade13 {error_metric(pade_expm(A, 13), ref):.1e}  "
        f"pade3 {error_metric(pade_expm(A, 3), ref):.1e}"
    )

# the principal log returns A only inside the ball of radius pi
A = random_skew(6, rng)
for norm in (2.0, 4.0):
    B = A * (norm / np.linalg.norm(A, 2))
    L = log_so(exp_skew(B))
    print(f"|A|_2={norm}: |log(exp(A)) - A|_F = {np.linalg.norm(L - B):.2e}, |log|_2 = {np.linalg.norm(L, 2):.3f}")
