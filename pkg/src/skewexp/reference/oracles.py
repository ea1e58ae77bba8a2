"""Independent oracles: extended-precision expm and dexp, brute-force Jacobians.

Nothing here depends on the production Schur-based maps, so agreement with
them is a genuine cross-check.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from ..errors import DomainError
from ..matcore import block_sizes
from .daletskii import core_map_complex
from .ddouble import DD

__all__ = [
    "core_jacobian",
    "error_metric",
    "fd_dexp",
    "jacobian_rank",
    "mp_skew_angles",
    "mp_spectral_norm",
    "xp_expm",
]

MAX_JACOBIAN_N = 12
_TAYLOR_STOP = 1e-35


def error_metric(M, M_star, n: int | None = None) -> float:
    """Normalized error ``||M - M*||_F / n**2``."""
    M = np.asarray(M, dtype=float)
    M_star = M_star.to_float() if isinstance(M_star, DD) else np.asarray(M_star, dtype=float)
    n = M.shape[0] if n is None else n
    return float(np.linalg.norm(M - M_star) / n**2)


def xp_expm(A) -> DD:
    """Matrix exponential in double-double arithmetic.

    The argument (a float array or :class:`DD`) is scaled by a power of two
    until its 1-norm is at most 1/2, the Taylor series is summed until a term
    drops below ``1e-35`` of the partial sum, and the result is squared back.
    """
    A = DD.coerce(A)
    n = A.shape[0]
    norm1 = float(np.max(np.sum(np.abs(A.hi), axis=0))) if n else 0.0
    sigma = max(0, math.ceil(math.log2(norm1 / 0.5))) if norm1 > 0.5 else 0
    As = A.ldexp(-sigma)
    S = DD(np.eye(n)) + As
    T = As
    k = 1
    while T.abs_max() >= _TAYLOR_STOP * max(S.abs_max(), 1.0):
        k += 1
        T = (T @ As) / float(k)
        S = S + T
        if k > 200:
            break
    for _ in range(sigma):
        S = S @ S
    return S


def fd_dexp(A, X, h: float = 1e-6) -> np.ndarray:
    """Central difference ``(exp(A + hX) - exp(A - hX)) / 2h`` in double-double.

    The shifted arguments are formed exactly, so the only error of note is
    the ``O(h**2)`` truncation.
    """
    if not h > 0:
        raise DomainError("finite-difference step must be positive")
    A = DD.coerce(np.asarray(A, dtype=float))
    hX = DD(np.asarray(X, dtype=float)) * h
    diff = xp_expm(A + hX) - xp_expm(A - hX)
    return (diff / (2.0 * h)).to_float()


def _skew_basis(n: int):
    rows, cols = np.tril_indices(n, -1)
    return rows, cols


def core_jacobian(theta, n: int) -> np.ndarray:
    """Matrix of the core map over the skew basis ``E_pq = e_p e_q^T - e_q e_p^T``, ``p > q``.

    Columns are images of basis matrices, evaluated through the complex
    divided-difference formula, so the result is independent of the real
    block kernels.

    Raises
    ------
    DomainError
        For ``n > 12`` (cost guard).
    """
    if n > MAX_JACOBIAN_N:
        raise DomainError(f"core_jacobian is limited to n <= {MAX_JACOBIAN_N}, got {n}")
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    m, _ = block_sizes(n)
    if theta.size != m:
        raise DomainError(f"expected {m} angles for n={n}")
    rows, cols = _skew_basis(n)
    J = np.empty((rows.size, rows.size))
    for c, (p, q) in enumerate(zip(rows, cols)):
        E = np.zeros((n, n))
        E[p, q], E[q, p] = 1.0, -1.0
        J[:, c] = core_map_complex(theta, n, E)[rows, cols]
    return J


def jacobian_rank(J: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Numerical rank from singular values above ``rel_tol * sigma_max``."""
    if J.size == 0:
        return 0
    sv = np.linalg.svd(J, compute_uv=False)
    return int(np.sum(sv > rel_tol * sv[0])) if sv[0] > 0 else 0


def _to_mp(A, dps):
    with mpmath.workdps(dps):
        return mpmath.matrix([[mpmath.mpf(float(x)) for x in row] for row in np.asarray(A)])


def mp_skew_angles(A, dps: int = 30) -> np.ndarray:
    """Nonnegative imaginary parts of the eigenvalues of ``A``, descending, in extended precision.

    Computed as eigenvalues of the Hermitian matrix ``iA``.
    """
    A = np.asarray(A, dtype=float)
    with mpmath.workdps(dps):
        H = _to_mp(A, dps) * mpmath.mpc(0, 1)
        ev = mpmath.eighe(H, eigvals_only=True)
        vals = np.array([float(v) for v in ev])
    return np.sort(np.abs(vals))[::-1]


def mp_spectral_norm(A, dps: int = 30, iters: int = 5000, seed: int = 0) -> float:
    """Largest singular value by power iteration on ``A^T A`` in extended precision."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    with mpmath.workdps(dps):
        M = _to_mp(A, dps)
        G = M.T * M
        v = mpmath.matrix([mpmath.mpf(float(x)) for x in rng.standard_normal(n)])
        lam_old = mpmath.mpf(0)
        for _ in range(iters):
            w = G * v
            nrm = mpmath.norm(w)
            if nrm == 0:
                return 0.0
            v = w / nrm
            lam = (v.T * (G * v))[0]
            if abs(lam - lam_old) <= mpmath.mpf(10) ** (-dps + 4) * abs(lam):
                break
            lam_old = lam
        return float(mpmath.sqrt(lam))
