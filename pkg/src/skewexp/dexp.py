"""Differential of the exponential on skew-symmetric matrices and its inverse.

With ``A = R D R^T`` the differential factors as ``dexp_A[X] = exp(A) L_A(X)``
where ``L_A(X) = R C(R^T X R) R^T`` and the core map ``C`` acts on each 2x2
block pair ``(i, j)`` of the rotated matrix independently through a 4x4
kernel (a 2-vector kernel on the trailing row when ``n`` is odd).

Block vectors use column-major order ``(M11, M21, M12, M22)``. In the
combinations ``u = v1 + v4``, ``w = v2 - v3`` the ``(a, b)`` part of a
kernel acts as multiplication by ``a + i b`` on ``u + i w``, and the
``(c, d)`` part does the same on ``v1 - v4``, ``v2 + v3``. This is what
the vectorized application below exploits.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NotInvertibleError, SingularKernelError
from .matcore import GemmCounter, block_sizes, matmul, skew
from .schur import SchurSkew, SchurSO, simultaneous_schur
from .trig import cosc, cotc, sinc

__all__ = [
    "CoreMapCache",
    "InverseCoreMapCache",
    "InvertibilityReport",
    "Violation",
    "core_map",
    "core_map_inverse",
    "dexp",
    "dexp_inverse",
    "dexp_invertible",
    "invert_kernel_x",
    "invert_kernel_y",
    "kernel_x",
    "kernel_y",
    "l_map",
    "l_map_inverse",
]

TWO_PI = 2.0 * np.pi


def kernel_x(a: float, b: float, c: float, d: float) -> np.ndarray:
    """The 4x4 block kernel with parameters ``(a, b)`` and ``(c, d)``."""
    return 0.5 * np.array(
        [
            [a + c, -b - d, b - d, a - c],
            [b + d, a + c, -a + c, b - d],
            [-b + d, -a + c, a + c, -b - d],
            [a - c, -b + d, b + d, a + c],
        ]
    )


def kernel_y(r: float, s: float) -> np.ndarray:
    """The 2x2 edge kernel ``[[r, s], [-s, r]]``."""
    return np.array([[r, s], [-s, r]], dtype=float)


def _invert_pair(p: float, q: float, name: str, tol: float) -> tuple[float, float]:
    h = p * p + q * q
    if h <= tol * tol:
        raise SingularKernelError(f"kernel parameter pair {name} vanishes: ({p!r}, {q!r})")
    return p / h, -q / h


def invert_kernel_x(K: np.ndarray, singular_tol: float = 1e-14) -> np.ndarray:
    """Inverse of a 4x4 block kernel, itself a block kernel.

    Raises
    ------
    SingularKernelError
        When ``(a, b)`` or ``(c, d)`` is within ``singular_tol`` of zero.
    """
    a, b, c, d = kernel_x_params(K)
    a2, b2 = _invert_pair(a, b, "(a, b)", singular_tol)
    c2, d2 = _invert_pair(c, d, "(c, d)", singular_tol)
    return kernel_x(a2, b2, c2, d2)


def invert_kernel_y(K: np.ndarray, singular_tol: float = 1e-14) -> np.ndarray:
    """Inverse of a 2x2 edge kernel."""
    K = np.asarray(K, dtype=float)
    r2, s2 = _invert_pair(K[0, 0], K[0, 1], "(r, s)", singular_tol)
    return kernel_y(r2, s2)


def kernel_x_params(K: np.ndarray) -> tuple[float, float, float, float]:
    """Recover ``(a, b, c, d)`` from an assembled 4x4 kernel."""
    K = np.asarray(K, dtype=float)
    a = K[0, 0] + K[0, 3]
    c = K[0, 0] - K[0, 3]
    b = K[1, 0] + K[0, 2]
    d = K[1, 0] - K[0, 2]
    return float(a), float(b), float(c), float(d)


# ---------------------------------------------------------------- invertibility


@dataclass(frozen=True)
class Violation:
    """One violated angle condition, with 1-based block indices ``i < j``.

    ``kind`` is ``"minus"`` for ``theta_i - theta_j = 2 l pi``, ``"plus"`` for
    ``theta_i + theta_j = 2 l pi`` and ``"single"`` for ``theta_i = 2 l pi``
    (odd ``n`` only; ``j`` is None). ``gap`` is the distance to the exact
    condition.
    """

    kind: str
    i: int
    j: int | None
    l: int
    gap: float

    def describe(self) -> str:
        if self.kind == "single":
            return f"theta_{self.i} = {self.l}*2pi (gap {self.gap:.2e})"
        op = "-" if self.kind == "minus" else "+"
        return f"theta_{self.i} {op} theta_{self.j} = {self.l}*2pi (gap {self.gap:.2e})"


@dataclass(frozen=True)
class InvertibilityReport:
    """Outcome of :func:`dexp_invertible`; truthy exactly when invertible."""

    invertible: bool
    violations: list = field(default_factory=list)
    angle_tol: float = 0.0

    def __bool__(self) -> bool:
        return self.invertible


def default_angle_tol(theta) -> float:
    theta = np.asarray(theta, dtype=float)
    return 1e-10 * max(1.0, float(np.max(np.abs(theta))) if theta.size else 1.0)


def _near_multiple(x: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nearest nonzero multiple ``l`` of 2 pi and whether ``x`` is within ``tol`` of it."""
    lvl = np.rint(x / TWO_PI)
    gap = np.abs(x - lvl * TWO_PI)
    return (lvl != 0) & (gap <= tol), lvl.astype(int), gap


def dexp_invertible(theta, n: int, angle_tol: float | None = None) -> InvertibilityReport:
    """Decide whether the differential of exp is invertible at the given angles.

    The test is over distinct blocks only: for all ``i < j <= m`` and all
    nonzero integers ``l``, ``theta_i +- theta_j != 2 l pi``; when ``n`` is odd
    also ``theta_j != 2 l pi``. Same-block sums ``2 theta_i`` are not tested.

    Parameters
    ----------
    theta : array_like, shape (m,)
    n : int
    angle_tol : float, optional
        Defaults to ``1e-10 * max(1, max |theta|)``.

    Returns
    -------
    InvertibilityReport
        With every violated ``(kind, i, j, l)``.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float)).reshape(-1)
    m, _ = block_sizes(n)
    if theta.size != m:
        raise DomainError(f"expected {m} angles for n={n}, got {theta.size}")
    tol = default_angle_tol(theta) if angle_tol is None else angle_tol
    out = []
    ii, jj = np.triu_indices(m, 1)
    for kind, vals in (("minus", theta[ii] - theta[jj]), ("plus", theta[ii] + theta[jj])):
        bad, lvl, gap = _near_multiple(vals, tol)
        for p in np.flatnonzero(bad):
            out.append(Violation(kind, int(ii[p]) + 1, int(jj[p]) + 1, int(lvl[p]), float(gap[p])))
    if n % 2:
        bad, lvl, gap = _near_multiple(theta, tol)
        for p in np.flatnonzero(bad):
            out.append(Violation("single", int(p) + 1, None, int(lvl[p]), float(gap[p])))
    return InvertibilityReport(not out, out, tol)


# -------------------------------------------------------------------- core maps


@dataclass(frozen=True)
class CoreMapCache:
    """Forward kernel parameters for every block pair.

    ``a, b, c, d`` have shape ``(m, m)``; entry ``[i, j]`` belongs to block
    pair ``(i+1, j+1)`` and only the strictly lower triangle is used.
    ``r, s`` have shape ``(m,)`` and are used only when ``n`` is odd.
    """

    n: int
    theta: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    r: np.ndarray
    s: np.ndarray

    @classmethod
    def build(cls, theta, n: int) -> "CoreMapCache":
        theta = np.asarray(theta, dtype=float).reshape(-1)
        diff = theta[:, None] - theta[None, :]
        summ = theta[:, None] + theta[None, :]
        return cls(n, theta, sinc(diff), cosc(diff), sinc(summ), cosc(summ), sinc(theta), cosc(theta))

    @property
    def m(self) -> int:
        return self.n // 2

    def kernel(self, i: int, j: int) -> np.ndarray:
        """Assembled 4x4 kernel of block pair ``(i, j)``, 1-based, ``j < i <= m``."""
        p, q = i - 1, j - 1
        return kernel_x(self.a[p, q], self.b[p, q], self.c[p, q], self.d[p, q])

    def edge_kernel(self, j: int) -> np.ndarray:
        """Assembled 2x2 kernel of the trailing block ``(m+1, j)``."""
        return kernel_y(self.r[j - 1], self.s[j - 1])


@dataclass(frozen=True)
class InverseCoreMapCache(CoreMapCache):
    """Inverse kernel parameters plus the invertibility report.

    Degenerate pairs (listed in ``report.violations``) carry zero parameters,
    which turns the inverse into a pseudo-inverse on those pairs; using them
    requires ``force=True`` in :func:`core_map_inverse`.
    """

    report: InvertibilityReport = field(default_factory=lambda: InvertibilityReport(True))

    @classmethod
    def build(cls, theta, n: int, angle_tol: float | None = None) -> "InverseCoreMapCache":
        theta = np.asarray(theta, dtype=float).reshape(-1)
        m = theta.size
        report = dexp_invertible(theta, n, angle_tol)
        diff = 0.5 * (theta[:, None] - theta[None, :])
        summ = 0.5 * (theta[:, None] + theta[None, :])
        half = 0.5 * theta
        # only the strictly lower triangle and, for odd n, the edge are needed
        lower = np.tril(np.ones((m, m), dtype=bool), -1)
        dead_minus = ~lower.copy()
        dead_plus = ~lower.copy()
        dead_edge = np.zeros(m, dtype=bool) if n % 2 else np.ones(m, dtype=bool)
        # kernels live on the lower triangle, violations are reported with i < j
        for v in report.violations:
            if v.kind == "minus":
                dead_minus[v.j - 1, v.i - 1] = True
            elif v.kind == "plus":
                dead_plus[v.j - 1, v.i - 1] = True
            else:
                dead_edge[v.i - 1] = True
        a = np.zeros((m, m))
        c = np.zeros((m, m))
        r = np.zeros(m)
        a[~dead_minus] = cotc(diff[~dead_minus])
        c[~dead_plus] = cotc(summ[~dead_plus])
        r[~dead_edge] = cotc(half[~dead_edge])
        b = np.where(dead_minus, 0.0, diff)
        d = np.where(dead_plus, 0.0, summ)
        s = np.where(dead_edge, 0.0, half)
        return cls(n, theta, a, b, c, d, r, s, report)


def _apply(cache: CoreMapCache, M: np.ndarray) -> np.ndarray:
    """Apply the block kernels of ``cache`` to the skew matrix ``M``."""
    n, m = cache.n, cache.m
    if M.shape != (n, n):
        raise DomainError(f"dimension mismatch: expected {n}x{n}, got {M.shape}")
    N = np.zeros_like(M)
    if m:
        M4 = M[: 2 * m, : 2 * m].reshape(m, 2, m, 2)
        v1, v2, v3, v4 = M4[:, 0, :, 0], M4[:, 1, :, 0], M4[:, 0, :, 1], M4[:, 1, :, 1]
        u, w = v1 + v4, v2 - v3
        up, wp = v1 - v4, v2 + v3
        a, b, c, d = cache.a, cache.b, cache.c, cache.d
        pu, pw = a * u - b * w, b * u + a * w
        qu, qw = c * up - d * wp, d * up + c * wp
        N4 = np.empty((m, 2, m, 2))
        N4[:, 0, :, 0] = 0.5 * (pu + qu)
        N4[:, 1, :, 1] = 0.5 * (pu - qu)
        N4[:, 1, :, 0] = 0.5 * (pw + qw)
        N4[:, 0, :, 1] = 0.5 * (qw - pw)
        low = np.tril(np.ones((m, m), dtype=bool), -1)
        N4 *= low[:, None, :, None]
        # diagonal blocks are fixed points
        idx = np.arange(m)
        N4[idx, :, idx, :] = M4[idx, :, idx, :]
        Nsq = N4.reshape(2 * m, 2 * m)
        Nsq -= (N4 * low[:, None, :, None]).reshape(2 * m, 2 * m).T
        N[: 2 * m, : 2 * m] = Nsq
    if n % 2 and m:
        e1, e2 = M[n - 1, 0 : 2 * m : 2], M[n - 1, 1 : 2 * m : 2]
        row = np.empty(2 * m)
        # the edge kernel acts transposed on the row vector of block (m+1, j)
        row[0::2] = cache.r * e1 - cache.s * e2
        row[1::2] = cache.s * e1 + cache.r * e2
        N[n - 1, : 2 * m] = row
        N[: 2 * m, n - 1] = -row
    return N


def core_map(cache: CoreMapCache, M) -> np.ndarray:
    """Core map in the Schur frame; the result is exactly skew-symmetric.

    Diagonal blocks are copied, lower off-diagonal blocks go through their
    kernels and the upper blocks are filled by skew symmetry.
    """
    return _apply(cache, skew(M))


def core_map_inverse(cache: InverseCoreMapCache, N, force: bool = False) -> np.ndarray:
    """Inverse core map.

    Raises
    ------
    NotInvertibleError
        If ``cache`` reports violated angle conditions and ``force`` is false.
        With ``force`` a warning is issued and degenerate pairs are projected out.
    """
    _check_report(cache.report, force)
    return _apply(cache, skew(N))


def _check_report(report: InvertibilityReport, force: bool) -> None:
    if report.invertible:
        return
    msg = "differential of exp is not invertible: " + "; ".join(v.describe() for v in report.violations)
    if not force:
        raise NotInvertibleError(msg, report.violations)
    warnings.warn(msg + " (forced: degenerate pairs are projected out)", RuntimeWarning, stacklevel=3)


# ------------------------------------------------------------------ L_A and dexp


def _congruence(R: np.ndarray, Z: np.ndarray, transpose_first: bool, counter) -> np.ndarray:
    if transpose_first:
        return matmul(matmul(R.T, Z, counter), R, counter)
    return matmul(matmul(R, Z, counter), R.T, counter)


def l_map(s: SchurSkew, X, counter: GemmCounter | None = None, cache: CoreMapCache | None = None) -> np.ndarray:
    """``L_A(X) = R C(R^T X R) R^T`` using exactly four matrix products.

    Parameters
    ----------
    s : SchurSkew
        Decomposition of ``A``.
    X : array_like, shape (n, n)
        Skew direction.
    counter : GemmCounter, optional
        Records the matrix products of the compute stage.
    cache : CoreMapCache, optional
        Precomputed kernels; built from ``s.theta`` when omitted.
    """
    X = skew(X)
    if X.shape[0] != s.n:
        raise DomainError(f"dimension mismatch: A is {s.n}, X is {X.shape[0]}")
    cache = CoreMapCache.build(s.theta, s.n) if cache is None else cache
    M = _congruence(s.R, X, True, counter)
    N = _apply(cache, skew(M))
    return skew(_congruence(s.R, N, False, counter))


def l_map_inverse(
    s: SchurSkew,
    Y,
    counter: GemmCounter | None = None,
    cache: InverseCoreMapCache | None = None,
    force: bool = False,
    angle_tol: float | None = None,
) -> np.ndarray:
    """``L_A^{-1}(Y) = R C^{-1}(R^T Y R) R^T`` using exactly four matrix products.

    Raises
    ------
    NotInvertibleError
        When the angles of ``s`` violate the invertibility condition, unless ``force``.
    """
    Y = skew(Y)
    if Y.shape[0] != s.n:
        raise DomainError(f"dimension mismatch: A is {s.n}, Y is {Y.shape[0]}")
    cache = InverseCoreMapCache.build(s.theta, s.n, angle_tol) if cache is None else cache
    _check_report(cache.report, force)
    M = _congruence(s.R, Y, True, counter)
    N = _apply(cache, skew(M))
    return skew(_congruence(s.R, N, False, counter))


@dataclass(frozen=True)
class Tangent:
    """Tangent vector ``Q @ Y`` at ``Q = exp(A)``, kept in factored form."""

    Q: np.ndarray
    Y: np.ndarray

    def matrix(self) -> np.ndarray:
        return self.Q @ self.Y


def dexp(s: SchurSkew, X, so: SchurSO | None = None) -> Tangent:
    """Differential of exp at ``A`` applied to ``X``, as the pair ``(exp(A), L_A(X))``."""
    _, so = simultaneous_schur(None, s) if so is None else (s, so)
    return Tangent(so.matrix(), l_map(s, X))


def dexp_inverse(s: SchurSkew, Delta, Q=None, force: bool = False) -> np.ndarray:
    """Inverse differential: recover ``X`` from ``Delta = dexp_A[X]``.

    ``Q = exp(A)`` is recomputed from ``s`` when omitted.
    """
    if Q is None:
        Q = simultaneous_schur(None, s)[1].matrix()
    return l_map_inverse(s, np.asarray(Q).T @ np.asarray(Delta), force=force)
