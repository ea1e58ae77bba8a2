"""Exponential of skew matrices and principal logarithm of rotations via Schur forms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PrincipalBranchError
from .matcore import skew
from .schur import SchurSkew, rotation_blocks, schur_skew, schur_so

__all__ = ["ExpLogConfig", "exp_skew", "log_so", "log_so_schur"]


@dataclass(frozen=True)
class ExpLogConfig:
    """``principal_margin``: angles closer than this to +-pi are rejected by the log."""

    principal_margin: float = 1e-9

    def __post_init__(self):
        if not self.principal_margin > 0:
            raise DomainError("principal_margin must be positive")


def exp_skew(A, schur: SchurSkew | None = None) -> np.ndarray:
    """``exp(A) = R exp(D) R^T`` for a skew matrix ``A``.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Ignored when ``schur`` is given.
    schur : SchurSkew, optional
        Reuse an existing decomposition.

    Examples
    --------
    >>> import numpy as np
    >>> np.allclose(exp_skew(np.array([[0.0, -np.pi / 2], [np.pi / 2, 0.0]])), [[0, -1], [1, 0]])
    True
    """
    s = schur_skew(A) if schur is None else schur
    E = rotation_blocks(np.cos(s.theta), np.sin(s.theta), s.n)
    return (s.R @ E) @ s.R.T


def log_so_schur(Q, config: ExpLogConfig = ExpLogConfig()) -> SchurSkew:
    """Schur form of the principal logarithm of ``Q``.

    Raises
    ------
    PrincipalBranchError
        If an angle is within ``config.principal_margin`` of +-pi.
    """
    so = schur_so(Q)
    theta = so.angles()
    bad = np.abs(theta) > np.pi - config.principal_margin
    if np.any(bad):
        raise PrincipalBranchError(
            f"rotation angle {theta[bad][0]!r} is within {config.principal_margin:g} of pi; "
            "the principal logarithm is not defined there"
        )
    return SchurSkew(theta, so.R)


def log_so(Q, config: ExpLogConfig = ExpLogConfig()) -> np.ndarray:
    """Principal logarithm of a rotation; the result has spectral norm below pi."""
    return skew(log_so_schur(Q, config).matrix())
