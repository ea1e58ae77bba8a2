"""Stable scalar kernels sinc, cosc and cotc with removable singularities at 0.

All functions accept scalars or arrays and broadcast elementwise. Below
``taylor_threshold`` a short series is used, which is exact to working
precision there and avoids the cancellation in ``cos(x) - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError

__all__ = ["TrigKernelConfig", "cosc", "cotc", "sinc", "DEFAULT_TRIG"]


@dataclass(frozen=True)
class TrigKernelConfig:
    """Evaluation thresholds for the trig kernels.

    Parameters
    ----------
    taylor_threshold : float
        Inputs with ``|x|`` below this use the series branch.
    pole_tol : float
        ``cotc`` raises when ``x`` is this close to a nonzero multiple of pi.
    """

    taylor_threshold: float = 1e-4
    pole_tol: float = 1e-12

    def __post_init__(self):
        if not (self.taylor_threshold > 0 and self.pole_tol > 0):
            raise DomainError("TrigKernelConfig thresholds must be strictly positive")


DEFAULT_TRIG = TrigKernelConfig()


def _prepare(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("trig kernel evaluated at a non-finite argument")
    return arr


def _finish(x, out):
    return float(out) if np.ndim(x) == 0 else out


def sinc(x, config: TrigKernelConfig = DEFAULT_TRIG):
    """``sin(x) / x`` with ``sinc(0) = 1``.

    Examples
    --------
    >>> sinc(0.0)
    1.0
    """
    arr = _prepare(x)
    small = np.abs(arr) < config.taylor_threshold
    x2 = arr * arr
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.sin(arr) / arr
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, direct)
    return _finish(x, out)


def cosc(x, config: TrigKernelConfig = DEFAULT_TRIG):
    """``(cos(x) - 1) / x`` with ``cosc(0) = 0``.

    The direct branch is evaluated as ``-2 sin(x/2)^2 / x``, free of cancellation.
    """
    arr = _prepare(x)
    small = np.abs(arr) < config.taylor_threshold
    with np.errstate(divide="ignore", invalid="ignore"):
        half = np.sin(0.5 * arr)
        direct = -2.0 * half * half / arr
    out = np.where(small, -arr / 2.0 + arr**3 / 24.0, direct)
    return _finish(x, out)


def cotc(x, config: TrigKernelConfig = DEFAULT_TRIG):
    """``x * cot(x)`` with ``cotc(0) = 1``.

    Raises
    ------
    PoleError
        If ``x`` is within ``config.pole_tol`` of ``l*pi`` for a nonzero integer ``l``.
    """
    arr = _prepare(x)
    near = pole_mask(arr, config.pole_tol)
    if np.any(near):
        bad = np.atleast_1d(arr)[np.atleast_1d(near)]
        raise PoleError(f"cotc evaluated at a pole: x = {bad[0]!r}")
    small = np.abs(arr) < config.taylor_threshold
    x2 = arr * arr
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = arr * np.cos(arr) / np.sin(arr)
    out = np.where(small, 1.0 - x2 / 3.0 - x2 * x2 / 45.0, direct)
    return _finish(x, out)


def pole_mask(x, pole_tol: float = DEFAULT_TRIG.pole_tol) -> np.ndarray:
    """Boolean mask of entries within ``pole_tol`` of a nonzero multiple of pi."""
    arr = np.asarray(x, dtype=float)
    lvl = np.round(arr / np.pi)
    return (lvl != 0) & (np.abs(arr - lvl * np.pi) <= pole_tol)
