"""Differential of exp on skew matrices, its inverse, and where the inverse fails."""

import math

import numpy as np
from scipy.linalg import expm_frechet

from skewexp import dexp, dexp_invertible, l_map, l_map_inverse, schur_skew
from skewexp.errors import NotInvertibleError
from skewexp.matcore import GemmCounter, random_skew
from skewexp.reference import DKCache, dk_lmap, error_metric, fd_dexp
from skewexp.schur import SchurSkew

rng = np.random.default_rng(1)
n = 12
A, X = random_skew(n, rng) * 2, random_skew(n, rng)
s = schur_skew(A)

g = GemmCounter()
Y = l_map(s, X, counter=g)
D = dexp(s, X).matrix()
print(f"GEMMs in l_map: {g.count}")
print(f"vs scipy expm_frechet:        {np.max(np.abs(D - expm_frechet(A, X, compute_expm=False))):.1e}")
print(f"vs complex divided diffs:     {np.max(np.abs(Y - dk_lmap(DKCache.build(s), X))):.1e}")
print(f"vs central difference (1e-9): {error_metric(D, fd_dexp(A, X, 1e-9)):.1e}")
print(f"round trip:                   {error_metric(l_map_inverse(s, Y), X):.1e}")

# theta_1 + theta_2 = 2 pi makes the map singular
theta = [1.5 * math.pi, 0.5 * math.pi]
print(dexp_invertible(theta, 4).violations[0].describe())
try:
    l_map_inverse(SchurSkew.from_angles_n(theta, 4), random_skew(4, rng))
except NotInvertibleError as exc:
    print("refused:", exc)

# twice an angle hitting 2 pi is harmless on skew matrices
print("Theta=(pi, 0.3) invertible:", bool(dexp_invertible([math.pi, 0.3], 4)))
