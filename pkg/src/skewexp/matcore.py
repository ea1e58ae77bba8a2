"""Dense matrix helpers: skew and rotation validation, block indexing, norms, I/O.

Matrices are plain :class:`numpy.ndarray` objects. The constructors
:func:`skew` and :func:`special_orthogonal` enforce the invariants of the
two matrix families used throughout the package and return fresh arrays.

Blocks follow the pairing of rows/columns ``(2i-1, 2i)`` with 1-based
indices ``i, j`` in ``1..k`` where ``m = n // 2`` and ``k = ceil(n / 2)``.
For odd ``n`` the last block index ``k`` addresses the single trailing
row/column.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SkewExpError

__all__ = [
    "GemmCounter",
    "block",
    "block_sizes",
    "block_slice",
    "frobenius_norm",
    "random_skew",
    "read_matrix",
    "set_block",
    "skew",
    "special_orthogonal",
    "spectral_norm_skew",
    "write_matrix",
]


def _square(M, name="matrix") -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"{name} must be square, got shape {M.shape}")
    if M.shape[0] == 0:
        raise DomainError(f"{name} must have positive dimension")
    if not np.all(np.isfinite(M)):
        raise DomainError(f"{name} has non-finite entries")
    return M


def skew(M) -> np.ndarray:
    """Return the skew-symmetric part ``(M - M^T) / 2`` with an exactly zero diagonal.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Finite real square matrix. Asymmetric input is repaired, not rejected.

    Returns
    -------
    numpy.ndarray
        A new array ``A`` with ``A == -A.T`` holding bitwise.
    """
    M = _square(M)
    A = 0.5 * (M - M.T)
    np.fill_diagonal(A, 0.0)
    return A


def special_orthogonal(Q, orth_tol: float | None = None) -> np.ndarray:
    """Validate that ``Q`` lies in SO(n) and return it as a float array.

    Parameters
    ----------
    Q : array_like, shape (n, n)
    orth_tol : float, optional
        Bound on ``||Q^T Q - I||_F``. Defaults to ``1e-12 * n``.

    Raises
    ------
    DomainError
        If ``Q`` is not orthogonal within tolerance or ``det(Q) <= 0``.
    """
    Q = _square(Q, "Q")
    n = Q.shape[0]
    tol = 1e-12 * n if orth_tol is None else orth_tol
    defect = np.linalg.norm(Q.T @ Q - np.eye(n))
    if defect > tol:
        raise DomainError(f"Q is not orthogonal: ||Q^T Q - I||_F = {defect:.3e} > {tol:.3e}")
    if np.linalg.det(Q) <= 0:
        raise DomainError("Q has non-positive determinant")
    return Q.copy()


def block_sizes(n: int) -> tuple[int, int]:
    """Return ``(m, k) = (floor(n/2), ceil(n/2))``."""
    if n < 1:
        raise DomainError(f"invalid dimension n={n}")
    return n // 2, (n + 1) // 2


def block_slice(n: int, i: int) -> slice:
    """Row/column slice of the 1-based block index ``i`` for dimension ``n``."""
    _, k = block_sizes(n)
    if not 1 <= i <= k:
        raise IndexError(f"block index {i} out of range 1..{k} for n={n}")
    return slice(2 * (i - 1), min(2 * i, n))


def block(M, i: int, j: int) -> np.ndarray:
    """Return a copy of block ``(i, j)`` of ``M`` (1-based).

    The block is 2x2 for ``i, j <= m``; for odd ``n`` an index equal to
    ``k`` selects the trailing row or column, giving 1x2, 2x1 or 1x1.
    """
    M = np.asarray(M)
    n = M.shape[0]
    return M[block_slice(n, i), block_slice(n, j)].copy()


def set_block(M: np.ndarray, i: int, j: int, value) -> None:
    """Write ``value`` into block ``(i, j)`` of ``M`` in place."""
    n = M.shape[0]
    M[block_slice(n, i), block_slice(n, j)] = value


def frobenius_norm(M) -> float:
    """Frobenius norm ``sqrt(sum(M**2))``."""
    return float(np.linalg.norm(np.asarray(M, dtype=float)))


def spectral_norm_skew(A, schur) -> float:
    """Spectral norm of a skew matrix read off its Schur angles, ``max |theta_i|``.

    Parameters
    ----------
    A : array_like, shape (n, n)
    schur : SchurSkew
        Decomposition of ``A``.
    """
    A = np.asarray(A)
    if A.shape[0] != schur.n:
        raise DomainError(f"dimension mismatch: A is {A.shape[0]}, schur is {schur.n}")
    if schur.theta.size == 0:
        return 0.0
    return float(np.max(np.abs(schur.theta)))


def random_skew(n: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    """Random skew matrix from i.i.d. uniform entries on ``[-1, 1]``.

    The raw matrix is drawn from :func:`numpy.random.default_rng` with the
    given seed and then passed through :func:`skew`.
    """
    if n < 1:
        raise DomainError(f"invalid dimension n={n}")
    rng = np.random.default_rng(seed)
    return skew(rng.uniform(-1.0, 1.0, size=(n, n)))


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    """Read a matrix in the text format ``rows cols`` followed by the rows.

    Lines starting with ``#`` and blank lines are ignored.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MatrixFormatError(f"{path}: empty matrix file")
    try:
        rows, cols = (int(t) for t in lines[0].split())
        data = [[float(t) for t in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from exc
    if len(data) != rows or any(len(r) != cols for r in data):
        raise MatrixFormatError(f"{path}: expected {rows}x{cols} entries")
    M = np.array(data, dtype=float).reshape(rows, cols)
    if not np.all(np.isfinite(M)):
        raise MatrixFormatError(f"{path}: non-finite entries")
    return M


def write_matrix(path_or_file, M, comment: str | None = None) -> None:
    """Write ``M`` in the text matrix format with round-trip precision.

    ``path_or_file`` may be a path or an open text stream.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    out = []
    if comment:
        out.extend(f"# {ln}" for ln in comment.splitlines())
    out.append(f"{M.shape[0]} {M.shape[1]}")
    out.extend(" ".join(repr(float(x)) for x in row) for row in M)
    text = "\n".join(out) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
        return
    try:
        with open(path_or_file, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise MatrixFormatError(f"cannot write {path_or_file}: {exc}") from exc


class MatrixFormatError(SkewExpError, OSError):
    """A matrix file could not be read, parsed or written."""


@dataclass
class GemmCounter:
    """Counts dense matrix products performed through :meth:`matmul`.

    One instance is created per call that wants instrumentation, so no
    global state is shared between threads.
    """

    count: int = 0

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self.count += 1
        return a @ b


def matmul(a: np.ndarray, b: np.ndarray, counter: GemmCounter | None = None) -> np.ndarray:
    """``a @ b``, recorded on ``counter`` when one is given."""
    if counter is None:
        return a @ b
    return counter.matmul(a, b)
