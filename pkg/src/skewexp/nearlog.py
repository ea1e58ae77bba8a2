"""Nearby matrix logarithm and continuous tracking of logarithms along curves.

The nearby logarithm around a seed ``A0`` is the preimage of ``Q`` under
exp that lies in the locus-free neighbourhood of ``A0`` within spectral
distance pi. It is computed by the Newton-type iteration

    S = log(exp(B)^T Q),    B <- B + L_B^{-1}(S)

which solves the first-order model ``exp(B + X) ~ exp(B) exp(L_B(X))``.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from .dexp import InverseCoreMapCache, l_map_inverse
from .errors import (
    ConvergenceError,
    DomainError,
    LabelingError,
    LocusError,
    NotInvertibleError,
    OutOfDomainError,
    PrincipalBranchError,
    StepTooLargeError,
    TrackingStalledError,
)
from .expmaps import exp_skew, log_so
from .locus import crossing_signature, dist_to_locus
from .matcore import read_matrix, skew, special_orthogonal
from .schur import SchurSkew, schur_skew

__all__ = [
    "ClosedFormCurve",
    "NearLogConfig",
    "NearLogResult",
    "PathSample",
    "SampledCurve",
    "TrackedPath",
    "angle_trajectory",
    "load_curve",
    "nearby_log",
    "nearby_log_info",
    "track_curve",
    "write_trajectory_csv",
]

_MAX_HALVINGS = 20
CROSSING_TOL = 1e-3


@dataclass(frozen=True)
class NearLogConfig:
    """Tolerances for the nearby logarithm and curve tracking.

    Parameters
    ----------
    residual_tol : float
        Newton stops when ``||log(exp(B)^T Q)||_F <= residual_tol * n``.
    max_newton_iters : int
    max_step : float
        Largest spectral-norm change accepted between consecutive path samples.
    min_dt : float
        Tracking gives up when the parameter step falls below this.
    """

    residual_tol: float = 1e-12
    max_newton_iters: int = 50
    max_step: float = np.pi / 4
    min_dt: float = 1e-6

    def __post_init__(self):
        if not (self.residual_tol > 0 and self.max_newton_iters > 0 and self.max_step > 0 and self.min_dt > 0):
            raise DomainError("NearLogConfig values must be positive")
        if not self.max_step < np.pi:
            raise DomainError("max_step must be below pi")


@dataclass(frozen=True)
class NearLogResult:
    """Output of :func:`nearby_log_info`."""

    A: np.ndarray
    iterations: int
    residual: float
    schur: SchurSkew


def _spectral(M: np.ndarray) -> float:
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def _residual(B: np.ndarray, Q: np.ndarray):
    sB = schur_skew(B)
    try:
        S = log_so(exp_skew(B, sB).T @ Q)
    except PrincipalBranchError as exc:
        raise StepTooLargeError(f"residual rotation left the principal branch: {exc}") from exc
    return sB, S, float(np.linalg.norm(S))


def nearby_log_info(A0, Q, config: NearLogConfig = NearLogConfig()) -> NearLogResult:
    """Nearby logarithm of ``Q`` around ``A0`` with iteration diagnostics.

    Raises
    ------
    StepTooLargeError
        If ``exp(B)^T Q`` has an angle at the branch cut, i.e. ``Q`` is too far.
    LocusError
        If an iterate has a non-invertible differential.
    OutOfDomainError
        If an iterate leaves the spectral ball of radius pi around ``A0``.
    ConvergenceError
        If the residual does not reach tolerance within the iteration budget.
    """
    A0 = skew(A0)
    Q = special_orthogonal(Q)
    n = A0.shape[0]
    if Q.shape[0] != n:
        raise DomainError(f"dimension mismatch: A0 is {n}, Q is {Q.shape[0]}")
    tol = config.residual_tol * n
    B = A0
    sB, S, res = _residual(B, Q)
    for it in range(config.max_newton_iters + 1):
        if res <= tol:
            return NearLogResult(B, it, res, sB)
        if it == config.max_newton_iters:
            break
        cache = InverseCoreMapCache.build(sB.theta, n)
        if not cache.report:
            d = dist_to_locus(sB, with_point=False).dist
            raise LocusError(
                f"iterate lies on the tangent conjugate locus (distance {d:.3e})", cache.report.violations, d
            )
        step = l_map_inverse(sB, S, cache=cache)
        accepted = False
        for _ in range(_MAX_HALVINGS + 1):
            cand = skew(B + step)
            try:
                sC, SC, rc = _residual(cand, Q)
            except StepTooLargeError:
                rc = math.inf
            if rc < res:
                accepted = True
                break
            step = 0.5 * step
        if not accepted:
            raise ConvergenceError(f"damped Newton step failed to reduce the residual {res:.3e}")
        if _spectral(cand - A0) >= np.pi:
            raise OutOfDomainError("nearby-log iterate left the ball of radius pi around the seed")
        B, sB, S, res = cand, sC, SC, rc
    raise ConvergenceError(
        f"nearby logarithm did not converge in {config.max_newton_iters} iterations (residual {res:.3e})"
    )


def nearby_log(A0, Q, config: NearLogConfig = NearLogConfig()) -> np.ndarray:
    """Nearby logarithm of ``Q`` around the seed ``A0``.

    Around ``A0 = 0`` this is the principal logarithm.
    See :func:`nearby_log_info` for the raised errors.
    """
    return nearby_log_info(A0, Q, config).A


# ------------------------------------------------------------------- curves


class ClosedFormCurve:
    """``Q(t) = Q0 exp(t Y)`` for a rotation ``Q0`` and a skew ``Y``."""

    def __init__(self, Q0, Y):
        self.Q0 = special_orthogonal(Q0)
        self.Y = skew(Y)
        self._sY = schur_skew(self.Y)

    def __call__(self, t: float) -> np.ndarray:
        s = self._sY
        return self.Q0 @ exp_skew(None, SchurSkew(t * s.theta, s.R))


class SampledCurve:
    """Curve through sampled rotations, joined by geodesics between samples."""

    def __init__(self, ts, Qs):
        ts = np.asarray(ts, dtype=float)
        order = np.argsort(ts)
        self.ts = ts[order]
        self.Qs = [special_orthogonal(Qs[i], 1e-9 * len(Qs[i])) for i in order]
        if self.ts.size < 2:
            raise DomainError("a sampled curve needs at least two samples")
        self._logs = [log_so(self.Qs[i].T @ self.Qs[i + 1]) for i in range(len(self.Qs) - 1)]

    def __call__(self, t: float) -> np.ndarray:
        ts = self.ts
        t = float(np.clip(t, ts[0], ts[-1]))
        p = int(np.clip(np.searchsorted(ts, t, side="right") - 1, 0, ts.size - 2))
        frac = (t - ts[p]) / (ts[p + 1] - ts[p])
        return self.Qs[p] @ exp_skew(frac * self._logs[p])


def load_curve(source) -> Callable[[float], np.ndarray]:
    """Build a curve oracle from files.

    ``source`` is either a pair ``(Q0_path, Y_path)`` for ``Q0 exp(tY)``, or a
    directory holding ``manifest.json`` of the form
    ``{"samples": [{"t": 0.0, "file": "q0.txt"}, ...]}`` with matrix files.
    """
    if isinstance(source, (tuple, list)):
        q_path, y_path = source
        return ClosedFormCurve(read_matrix(q_path), read_matrix(y_path))
    root = os.fspath(source)
    try:
        with open(os.path.join(root, "manifest.json"), encoding="utf-8") as fh:
            manifest = json.load(fh)
    except (OSError, ValueError) as exc:
        raise DomainError(f"cannot read curve manifest in {root}: {exc}") from exc
    samples = manifest["samples"]
    ts = [float(e["t"]) for e in samples]
    Qs = [read_matrix(os.path.join(root, e["file"])) for e in samples]
    return SampledCurve(ts, Qs)


@dataclass(frozen=True)
class PathSample:
    t: float
    A: np.ndarray
    residual: float
    dist: float


@dataclass
class TrackedPath:
    """Accepted samples of a tracked logarithm and parameters where the locus was crossed."""

    samples: list = field(default_factory=list)
    crossings: list = field(default_factory=list)

    @property
    def ts(self) -> np.ndarray:
        return np.array([p.t for p in self.samples])

    def __len__(self) -> int:
        return len(self.samples)


def _curve_residual(A: np.ndarray, Q: np.ndarray) -> float:
    n = A.shape[0]
    return float(np.linalg.norm(exp_skew(A) - Q) / n**2)


_RECOVERABLE = (StepTooLargeError, ConvergenceError, OutOfDomainError, NotInvertibleError, PrincipalBranchError)


def _advance(A_prev, Q, config):
    res = nearby_log_info(A_prev, Q, config)
    if _spectral(res.A - A_prev) > config.max_step:
        raise StepTooLargeError("tracking step exceeded max_step")
    return res


def track_curve(
    Q_of_t: Callable[[float], np.ndarray],
    A_start,
    config: NearLogConfig = NearLogConfig(),
    crossing_tol: float = CROSSING_TOL,
    dt0: float = 1.0 / 64.0,
) -> TrackedPath:
    """Follow ``A(t)`` with ``exp(A(t)) = Q(t)`` continuously for ``t`` in ``[0, 1]``.

    Each step seeds the nearby logarithm with the previous sample. Failed
    steps halve ``dt``; successful ones let it grow back towards ``dt0``.
    Whenever the locus label of consecutive samples changes, the interval is
    bisected until a sample within ``crossing_tol`` of the locus is found,
    and that sample is inserted and its parameter recorded as a crossing.

    Raises
    ------
    DomainError
        If ``exp(A_start)`` does not match ``Q(0)``.
    TrackingStalledError
        If ``dt`` falls below ``config.min_dt``; ``exc.path`` has the partial path.
    """
    A = skew(A_start)
    n = A.shape[0]
    r0 = _curve_residual(A, Q_of_t(0.0))
    if r0 > max(config.residual_tol, 1e-14):
        raise DomainError(f"exp(A_start) does not match Q(0): residual {r0:.3e}")
    s0 = schur_skew(A)
    path = TrackedPath([PathSample(0.0, A, r0, dist_to_locus(s0, with_point=False).dist)])
    if path.samples[0].dist < crossing_tol:
        path.crossings.append(0.0)
    label = crossing_signature(s0.theta, n)
    t, dt = 0.0, dt0
    while t < 1.0:
        t_new = min(1.0, t + dt)
        try:
            res = _advance(A, Q_of_t(t_new), config)
        except _RECOVERABLE:
            dt *= 0.5
            if dt < config.min_dt:
                raise TrackingStalledError(f"tracking stalled at t={t:.6g}", path) from None
            continue
        d = dist_to_locus(res.schur, with_point=False).dist
        new_label = crossing_signature(res.schur.theta, n)
        if new_label != label or d < crossing_tol:
            _refine_crossing(Q_of_t, path, t, A, t_new, res, d, label, config, crossing_tol)
        sample = PathSample(t_new, res.A, _curve_residual(res.A, Q_of_t(t_new)), d)
        path.samples.append(sample)
        t, A, label = t_new, res.A, new_label
        dt = min(dt0, 1.5 * dt)
    return path


def _refine_crossing(Q_of_t, path, t_lo, A_lo, t_hi, res_hi, d_hi, label_lo, config, crossing_tol):
    """Bisect ``[t_lo, t_hi]`` for the point nearest the locus and record it."""
    if d_hi < crossing_tol:
        # one record per dip below the threshold
        if path.samples[-1].dist >= crossing_tol:
            path.crossings.append(t_hi)
        return
    best = None
    lo, A_left = t_lo, A_lo
    hi = t_hi
    while hi - lo > config.min_dt:
        mid = 0.5 * (lo + hi)
        try:
            r = nearby_log_info(A_left, Q_of_t(mid), config)
        except _RECOVERABLE:
            break
        d = dist_to_locus(r.schur, with_point=False).dist
        if best is None or d < best[1]:
            best = (mid, d, r)
        if d < crossing_tol:
            break
        if crossing_signature(r.schur.theta, r.A.shape[0]) == label_lo:
            lo, A_left = mid, r.A
        else:
            hi = mid
    if best is None:
        return
    mid, d, r = best
    in_dip = path.samples[-1].dist < crossing_tol
    path.samples.append(PathSample(mid, r.A, _curve_residual(r.A, Q_of_t(mid)), d))
    if not in_dip:
        path.crossings.append(mid)


def _predict(history: list) -> np.ndarray:
    if len(history) >= 2:
        return 2.0 * history[-1] - history[-2]
    return history[-1]


def angle_trajectory(path: TrackedPath, max_step: float | None = None) -> np.ndarray:
    """Continuously labelled signed angles along a path.

    Each sample's angles are matched to a linear prediction from the previous
    two rows, allowing a sign flip per angle, by minimum-cost assignment.

    Returns
    -------
    numpy.ndarray, shape (len(path), 1 + m)
        Columns ``t, theta_1, ..., theta_m``.

    Raises
    ------
    LabelingError
        If a matched angle moves by more than ``max_step`` (default pi/4).
    """
    max_step = np.pi / 4 if max_step is None else max_step
    rows, history = [], []
    for p in path.samples:
        theta = schur_skew(p.A).theta
        if history:
            pred = _predict(history)
            prev = history[-1]
            cand = np.abs(theta)
            plus = np.abs(pred[:, None] - cand[None, :])
            minus = np.abs(pred[:, None] + cand[None, :])
            cost = np.minimum(plus, minus)
            ri, ci = linear_sum_assignment(cost)
            new = np.empty_like(prev)
            for a, b in zip(ri, ci):
                new[a] = cand[b] if plus[a, b] <= minus[a, b] else -cand[b]
            jump = np.max(np.abs(new - prev)) if new.size else 0.0
            if jump > max_step:
                raise LabelingError(f"angle labels jump by {jump:.3g} > {max_step:.3g} at t={p.t:.6g}")
            theta = new
        history.append(theta)
        rows.append(np.concatenate([[p.t], theta]))
    return np.array(rows)


def write_trajectory_csv(path: TrackedPath, out, max_step: float | None = None) -> None:
    """Write ``t,theta_1,...,theta_m,dist_to_locus,residual`` rows to a path or stream."""
    table = angle_trajectory(path, max_step)
    m = table.shape[1] - 1
    header = ["t"] + [f"theta_{i}" for i in range(1, m + 1)] + ["dist_to_locus", "residual"]

    def emit(fh):
        w = csv.writer(fh)
        w.writerow(header)
        for row, p in zip(table, path.samples):
            w.writerow([repr(float(x)) for x in row] + [repr(float(p.dist)), repr(float(p.residual))])

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            emit(fh)
