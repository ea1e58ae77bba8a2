"""Real Schur decompositions of skew-symmetric and special orthogonal matrices.

A skew matrix is written ``A = R D R^T`` with ``D`` block diagonal, each 2x2
block ``[[0, -theta_i], [theta_i, 0]]`` and a trailing zero for odd ``n``.
A rotation is written ``Q = R E R^T`` with rotation blocks
``[[c_i, -s_i], [s_i, c_i]]`` and a trailing one for odd ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceError, DomainError
from .matcore import block_sizes, skew, special_orthogonal

__all__ = [
    "SchurSkew",
    "SchurSO",
    "eig_from_schur",
    "rotation_blocks",
    "schur_skew",
    "schur_so",
    "simultaneous_schur",
    "skew_blocks",
]


def skew_blocks(theta, n: int) -> np.ndarray:
    """Block-diagonal skew matrix with angles ``theta`` (trailing zero when n is odd)."""
    theta = np.asarray(theta, dtype=float)
    m, _ = block_sizes(n)
    if theta.shape != (m,):
        raise DomainError(f"expected {m} angles for n={n}, got shape {theta.shape}")
    D = np.zeros((n, n))
    idx = np.arange(m)
    D[2 * idx + 1, 2 * idx] = theta
    D[2 * idx, 2 * idx + 1] = -theta
    return D


def rotation_blocks(cos, sin, n: int) -> np.ndarray:
    """Block-diagonal rotation with blocks ``[[c, -s], [s, c]]`` (trailing one when n is odd)."""
    cos = np.asarray(cos, dtype=float)
    sin = np.asarray(sin, dtype=float)
    m, _ = block_sizes(n)
    E = np.zeros((n, n))
    idx = np.arange(m)
    E[2 * idx, 2 * idx] = cos
    E[2 * idx + 1, 2 * idx + 1] = cos
    E[2 * idx + 1, 2 * idx] = sin
    E[2 * idx, 2 * idx + 1] = -sin
    if n % 2:
        E[-1, -1] = 1.0
    return E


@dataclass(frozen=True)
class SchurSkew:
    """Schur form ``(theta, D, R)`` of a skew matrix ``A = R D R^T``.

    Attributes
    ----------
    theta : numpy.ndarray, shape (m,)
        Angles, possibly negative.
    R : numpy.ndarray, shape (n, n)
        Orthogonal Schur vectors with ``det(R) = 1``.
    D : numpy.ndarray, shape (n, n)
        Block-diagonal skew matrix built from ``theta``; exact zeros off the blocks.
    """

    theta: np.ndarray
    R: np.ndarray
    D: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float).copy()
        R = np.asarray(self.R, dtype=float)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise DomainError("Schur vectors must be square")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "D", skew_blocks(theta, R.shape[0]))

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def k(self) -> int:
        return (self.n + 1) // 2

    def matrix(self) -> np.ndarray:
        """Reassemble ``R D R^T`` as an exactly skew matrix."""
        return skew(self.R @ self.D @ self.R.T)

    @classmethod
    def from_angles(cls, theta, R=None) -> "SchurSkew":
        """Build a decomposition from prescribed angles; ``R`` defaults to the identity."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if R is None:
            raise DomainError("from_angles needs R or use from_angles_n")
        return cls(theta, R)

    @classmethod
    def from_angles_n(cls, theta, n: int, R=None) -> "SchurSkew":
        """Decomposition of dimension ``n`` with angles ``theta`` and frame ``R`` (default I)."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float)).reshape(-1)
        return cls(theta, np.eye(n) if R is None else R)


@dataclass(frozen=True)
class SchurSO:
    """Schur form ``(E, R)`` of a rotation ``Q = R E R^T``.

    Attributes
    ----------
    cos, sin : numpy.ndarray, shape (m,)
        Block cosines and sines, ``cos**2 + sin**2 == 1`` to rounding.
    R : numpy.ndarray, shape (n, n)
        Orthogonal Schur vectors with ``det(R) = 1``.
    E : numpy.ndarray, shape (n, n)
        Block-diagonal rotation assembled from ``cos`` and ``sin``.
    """

    cos: np.ndarray
    sin: np.ndarray
    R: np.ndarray
    E: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        R = np.asarray(self.R, dtype=float)
        object.__setattr__(self, "cos", np.asarray(self.cos, dtype=float).copy())
        object.__setattr__(self, "sin", np.asarray(self.sin, dtype=float).copy())
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "E", rotation_blocks(self.cos, self.sin, R.shape[0]))

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @property
    def m(self) -> int:
        return self.n // 2

    def angles(self) -> np.ndarray:
        """Principal block angles ``atan2(sin, cos)`` in ``(-pi, pi]``."""
        return np.arctan2(self.sin, self.cos)

    def matrix(self) -> np.ndarray:
        return self.R @ self.E @ self.R.T


def _fix_orientation(R: np.ndarray, theta: np.ndarray) -> None:
    """Flip one column in place so that ``det(R) = +1``, keeping ``R D R^T`` unchanged."""
    n = R.shape[0]
    sign, _ = np.linalg.slogdet(R)
    if sign > 0:
        return
    if n % 2:
        R[:, -1] *= -1.0
        return
    zero = np.flatnonzero(theta == 0.0)
    if zero.size:
        R[:, 2 * zero[-1] + 1] *= -1.0
        return
    # reflecting one plane of a block reverses the sign of its angle
    i = int(np.argmin(np.abs(theta)))
    R[:, 2 * i + 1] *= -1.0
    theta[i] = -theta[i]


def schur_skew(A) -> SchurSkew:
    """Real Schur decomposition of a skew-symmetric matrix.

    Householder reduction brings ``A`` to skew tridiagonal form. Splitting
    the tridiagonal into its even and odd coordinates exposes an ``m x k``
    upper bidiagonal matrix whose singular values are the ``|theta_i|`` and
    whose singular vectors are the Schur vectors in the reduced coordinates.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Skew matrix; asymmetric input is skew-symmetrized first.

    Returns
    -------
    SchurSkew
        Angles in descending order of magnitude, ``det(R) = 1``.

    Raises
    ------
    ConvergenceError
        If the bidiagonal SVD fails to converge.
    """
    A = skew(A)
    n = A.shape[0]
    m, k = block_sizes(n)
    if n == 1:
        return SchurSkew(np.zeros(0), np.eye(1))
    H, P = sla.hessenberg(A, calc_q=True)
    sub = np.diagonal(H, -1).copy()
    B = np.zeros((m, k))
    idx = np.arange(m)
    B[idx, idx] = sub[0::2]
    sup = -sub[1::2]
    B[idx[: sup.size], idx[: sup.size] + 1] = sup
    try:
        U, sigma, Wt = sla.svd(B, full_matrices=True, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        try:
            U, sigma, Wt = sla.svd(B, full_matrices=True, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"bidiagonal SVD did not converge for n={n}: {exc}") from exc
    scale = sigma[0] if sigma.size else 0.0
    theta = np.where(sigma <= 1e-14 * scale, 0.0, sigma)
    # columns of R in the reduced coordinates: x_j on even slots, y_j on odd slots
    Z = np.zeros((n, n))
    Z[0::2, 0 : 2 * m : 2] = Wt[:m].T
    Z[1::2, 1 : 2 * m : 2] = U
    if n % 2:
        Z[0::2, -1] = Wt[m]
    R = P @ Z
    _fix_orientation(R, theta)
    return SchurSkew(theta, R)


def schur_so(Q, orth_tol: float | None = None, schur_tol: float | None = None) -> SchurSO:
    """Real Schur decomposition of a rotation with 2x2 rotation blocks.

    Real eigenvalues are paired into blocks (``-1`` with ``-1`` as a half
    turn, ``+1`` with ``+1`` as the identity); for odd ``n`` one ``+1`` is
    left for the trailing position.

    Raises
    ------
    DomainError
        If ``Q`` fails validation as a special orthogonal matrix.
    ConvergenceError
        If the decomposition fails or does not reproduce ``Q``.
    """
    Q = special_orthogonal(Q, orth_tol)
    n = Q.shape[0]
    m, _ = block_sizes(n)
    try:
        T, Z = sla.schur(Q, output="real")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceError(f"real Schur decomposition failed: {exc}") from exc
    sub = np.abs(np.diagonal(T, -1)) > 0.0
    pairs, minus, plus = [], [], []
    p = 0
    while p < n:
        if p + 1 < n and sub[p]:
            pairs.append((p, p + 1))
            p += 2
        else:
            (minus if T[p, p] < 0 else plus).append(p)
            p += 1
    if len(minus) % 2:
        raise ConvergenceError("odd number of -1 eigenvalues; Q is not numerically in SO(n)")
    pairs += list(zip(minus[0::2], minus[1::2]))
    pairs += list(zip(plus[0::2], plus[1::2]))
    order = [c for pr in pairs for c in pr]
    if n % 2:
        order.append(plus[-1])
    R = Z[:, order].copy()
    T2 = R.T @ Q @ R
    idx = np.arange(m)
    cos = 0.5 * (T2[2 * idx, 2 * idx] + T2[2 * idx + 1, 2 * idx + 1])
    sin = 0.5 * (T2[2 * idx + 1, 2 * idx] - T2[2 * idx, 2 * idx + 1])
    r = np.hypot(cos, sin)
    cos, sin = cos / r, sin / r
    sign, _ = np.linalg.slogdet(R)
    if sign < 0:
        if n % 2:
            R[:, -1] *= -1.0
        else:
            R[:, 1] *= -1.0
            sin[0] = -sin[0]
    out = SchurSO(cos, sin, R)
    tol = 1e-12 * n if schur_tol is None else schur_tol
    resid = np.linalg.norm(out.matrix() - Q) / max(np.linalg.norm(Q), 1.0)
    if resid > tol:
        raise ConvergenceError(f"Schur form of Q has relative residual {resid:.3e} > {tol:.3e}")
    return out


def simultaneous_schur(A, schur: SchurSkew | None = None) -> tuple[SchurSkew, SchurSO]:
    """One frame ``R`` decomposing both ``A`` and ``exp(A) = R exp(D) R^T``."""
    s = schur_skew(A) if schur is None else schur
    return s, SchurSO(np.cos(s.theta), np.sin(s.theta), s.R)


def eig_from_schur(s: SchurSkew) -> tuple[np.ndarray, np.ndarray]:
    """Complex eigendecomposition ``A V = V diag(lam)`` assembled from a Schur form.

    Returns
    -------
    lam : numpy.ndarray of complex, shape (n,)
        ``(-i theta_1, i theta_1, ..., -i theta_m, i theta_m[, 0])``.
    V : numpy.ndarray of complex, shape (n, n)
        Unitary eigenvectors ``R @ U_n``; each 2x2 diagonal block of ``U_n``
        is ``(1/sqrt 2) [[1, 1], [i, -i]]``, and a trailing one for odd ``n``.
    """
    n, m = s.n, s.m
    lam = np.zeros(n, dtype=complex)
    lam[0 : 2 * m : 2] = -1j * s.theta
    lam[1 : 2 * m : 2] = 1j * s.theta
    return lam, s.R @ unitary_blocks(n)


def unitary_blocks(n: int) -> np.ndarray:
    """Block-diagonal unitary ``U_n`` mapping the rotation-block frame to eigenvectors."""
    m, _ = block_sizes(n)
    U = np.zeros((n, n), dtype=complex)
    h = np.sqrt(0.5)
    idx = np.arange(m)
    U[2 * idx, 2 * idx] = h
    U[2 * idx, 2 * idx + 1] = h
    U[2 * idx + 1, 2 * idx] = 1j * h
    U[2 * idx + 1, 2 * idx + 1] = -1j * h
    if n % 2:
        U[-1, -1] = 1.0
    return U
