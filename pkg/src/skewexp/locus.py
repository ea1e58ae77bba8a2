"""Distances to the tangent conjugate locus and related constructions.

The locus is where the differential of exp on skew matrices loses rank:
``theta_i +- theta_j = 2 l pi`` for distinct blocks (the ``pm`` subsets) and,
for odd ``n``, ``theta_i = 2 l pi`` (the ``star`` subsets), ``l != 0``.
Distances are in the spectral norm, which for a common Schur frame is the
largest absolute angle change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dexp import dexp_invertible
from .errors import DomainError, NotInvertibleError
from .matcore import skew
from .schur import SchurSkew

__all__ = [
    "LocusDistance",
    "crossing_signature",
    "dist_to_locus",
    "dist_to_subset",
    "in_s0",
    "l_range",
    "separated_preimage",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class LocusDistance:
    """Distance to (a subset of) the locus with a witness.

    Attributes
    ----------
    dist : float
        Spectral-norm distance; ``inf`` when the locus is empty.
    subset : str
        ``"pm"``, ``"star"`` or ``"empty"``.
    l : int or None
        Nonzero integer of the closest subset.
    i, j : int or None
        1-based block indices (``j`` is None for ``star``).
    sign : str or None
        ``"plus"`` or ``"minus"`` for ``pm``; ``"plus"`` / ``"minus"`` for
        ``star`` means ``theta_i`` is moved to ``+2 l pi`` / ``-2 l pi``.
    touching_point : numpy.ndarray or None
        Closest point ``B`` on the named subset, ``||A - B||_2 = dist``.
    touching_angles : numpy.ndarray or None
        Angles of ``B`` in the same Schur frame as ``A``.
    """

    dist: float
    subset: str
    l: int | None = None
    i: int | None = None
    j: int | None = None
    sign: str | None = None
    touching_point: np.ndarray | None = None
    touching_angles: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {"dist": self.dist, "subset": self.subset, "l": self.l, "i": self.i, "j": self.j}

    def residual(self) -> float:
        """How far the touching angles are from satisfying the subset equation."""
        if self.subset == "empty":
            return 0.0
        t = self.touching_angles
        target = TWO_PI * self.l
        if self.subset == "star":
            return abs(_star_value(t[self.i - 1], self.sign) - target)
        sgn = 1.0 if self.sign == "plus" else -1.0
        return abs(t[self.i - 1] + sgn * t[self.j - 1] - target)


def _star_value(theta_i: float, sign: str) -> float:
    # "plus": theta_i = 2 l pi ; "minus": theta_i = -2 l pi
    return theta_i if sign == "plus" else -theta_i


def l_range(theta) -> int:
    """Bound ``L`` such that only ``0 < |l| <= L`` can realize the minimum distance."""
    theta = np.asarray(theta, dtype=float)
    mx = float(np.max(np.abs(theta))) if theta.size else 0.0
    return int(math.ceil(mx / np.pi)) + 1


def _touching(s: SchurSkew, angles: np.ndarray) -> np.ndarray:
    return skew(s.R @ SchurSkew(angles, s.R).D @ s.R.T)


def dist_to_subset(s: SchurSkew, l: int, which: str, with_point: bool = True) -> LocusDistance:
    """Distance from ``A`` to the subset ``pm`` or ``star`` at level ``l``.

    ``pm``: ``min_{i != j} |theta_i +- theta_j - 2 l pi| / 2``, reached by moving
    both angles by half the gap. ``star`` (odd ``n`` only):
    ``min_i min(|theta_i - 2 l pi|, |theta_i + 2 l pi|)``, reached by moving one angle.

    Raises
    ------
    DomainError
        If ``l == 0``, if ``which == "star"`` with even ``n`` or if ``which == "pm"`` with ``m < 2``.
    """
    if l == 0:
        raise DomainError("subset level l must be nonzero")
    theta = s.theta
    m = theta.size
    target = TWO_PI * l
    if which == "pm":
        if m < 2:
            raise DomainError(f"the pm subsets need at least two blocks (n={s.n})")
        ii, jj = np.nonzero(~np.eye(m, dtype=bool))
        gaps = np.concatenate([theta[ii] + theta[jj] - target, theta[ii] - theta[jj] - target])
        p = int(np.argmin(np.abs(gaps)))
        plus = p < ii.size
        q = p % ii.size
        i, j = int(ii[q]), int(jj[q])
        delta = -gaps[p]
        new = theta.copy()
        new[i] += 0.5 * delta
        new[j] += 0.5 * delta if plus else -0.5 * delta
        dist = abs(gaps[p]) / 2.0
        res = LocusDistance(dist, "pm", int(l), i + 1, j + 1, "plus" if plus else "minus", None, new)
    elif which == "star":
        if s.n % 2 == 0:
            raise DomainError("the star subsets exist only for odd n")
        gaps = np.concatenate([theta - target, theta + target])
        p = int(np.argmin(np.abs(gaps)))
        plus = p < m
        i = p % m
        new = theta.copy()
        new[i] = target if plus else -target
        res = LocusDistance(abs(gaps[p]), "star", int(l), i + 1, None, "plus" if plus else "minus", None, new)
    else:
        raise DomainError(f"unknown subset {which!r}; expected 'pm' or 'star'")
    if with_point:
        object.__setattr__(res, "touching_point", _touching(s, res.touching_angles))
    return res


def dist_to_locus(s: SchurSkew, with_point: bool = True) -> LocusDistance:
    """Distance from ``A`` to the whole tangent conjugate locus.

    The minimum over all nonzero ``l`` is exact: beyond ``|l| > ceil(max|theta|/pi) + 1``
    every gap exceeds the ones at smaller ``|l|``.
    For ``n <= 2`` the locus is empty and the distance is ``inf``.
    """
    m = s.m
    kinds = (["pm"] if m >= 2 else []) + (["star"] if s.n % 2 and m >= 1 else [])
    if not kinds:
        return LocusDistance(math.inf, "empty")
    L = l_range(s.theta)
    best = None
    for which in kinds:
        for l in range(-L, L + 1):
            if l == 0:
                continue
            cand = dist_to_subset(s, l, which, with_point=False)
            if best is None or cand.dist < best.dist:
                best = cand
    if with_point:
        object.__setattr__(best, "touching_point", _touching(s, best.touching_angles))
    return best


def in_s0(s: SchurSkew) -> bool:
    """Membership in the locus-free component containing 0.

    ``|theta_i +- theta_j| < 2 pi`` for all distinct blocks, and for odd ``n``
    also ``|theta_i| < 2 pi``.
    """
    theta = s.theta
    m = theta.size
    ii, jj = np.tril_indices(m, -1)
    ok = bool(np.all(np.abs(theta[ii] + theta[jj]) < TWO_PI) and np.all(np.abs(theta[ii] - theta[jj]) < TWO_PI))
    if s.n % 2:
        ok = ok and bool(np.all(np.abs(theta) < TWO_PI))
    return ok


def separated_preimage(s: SchurSkew, block: int, l: int, A=None) -> np.ndarray:
    """Another preimage of ``exp(A)``: the angle of ``block`` advanced by ``2 l pi``.

    ``B = A + 2 l pi R_b J R_b^T`` where ``R_b`` are the two Schur vectors of the
    block and ``J`` the unit rotation generator, so ``||A - B||_2 = 2 |l| pi``.

    Raises
    ------
    NotInvertibleError
        If ``A`` lies on the locus.
    """
    if l == 0:
        raise DomainError("l must be nonzero")
    if not 1 <= block <= s.m:
        raise DomainError(f"block index {block} out of range 1..{s.m}")
    report = dexp_invertible(s.theta, s.n)
    if not report:
        raise NotInvertibleError("A lies on the tangent conjugate locus", report.violations)
    A = s.matrix() if A is None else skew(A)
    x = s.R[:, 2 * block - 2]
    y = s.R[:, 2 * block - 1]
    G = np.outer(y, x) - np.outer(x, y)
    return skew(A + (TWO_PI * l) * G)


def crossing_signature(theta, n: int) -> tuple:
    """Sorted multiset of locus levels crossed so far, a locally constant label of ``S \\ locus``.

    Moving continuously, the label changes exactly when some ``|theta_i| +- |theta_j|``
    (or ``|theta_i|`` for odd ``n``) passes a nonzero multiple of ``2 pi``.
    """
    a = np.abs(np.asarray(theta, dtype=float))
    ii, jj = np.tril_indices(a.size, -1)
    levels = list(np.floor((a[ii] + a[jj]) / TWO_PI).astype(int))
    levels += list(np.floor(np.abs(a[ii] - a[jj]) / TWO_PI).astype(int))
    if n % 2:
        levels += list(np.floor(a / TWO_PI).astype(int))
    return tuple(sorted(levels))
