"""Reference curves in SO(n) used to exercise logarithm tracking.

Each builder returns ``(Q_of_t, A_start)`` ready for :func:`track_curve`.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import special_ortho_group

from .dexp import l_map
from .expmaps import exp_skew, log_so
from .matcore import random_skew
from .nearlog import ClosedFormCurve, nearby_log
from .schur import SchurSkew, schur_skew


def subgroup_curve(n: int = 4, seed=0, norm: float = 2.5):
    """``Q(t) = exp(t Y)`` with ``||Y||_2 = norm < pi``; the tracked log is ``t Y``.

    Returns
    -------
    curve, A_start, Y
    """
    Y = random_skew(n, seed)
    Y *= norm / np.linalg.norm(Y, 2)
    return ClosedFormCurve(np.eye(n), Y), np.zeros((n, n)), Y


def constant_frame_curve(n: int = 4, seed=0, block: int = 2):
    """Curve that advances one Schur angle of ``log(Q0)`` by ``2 pi`` in a fixed frame.

    ``Q(t) = Q0 exp(t Y)`` where ``Y`` rotates only block ``block`` of the
    Schur frame of ``A0 = log(Q0)``. Since ``Y`` commutes with ``A0`` the
    tracked log is ``A0 + t Y`` and ``Q(1) = Q0``.

    Returns
    -------
    curve, A_start, Y
    """
    A0 = log_so(exp_skew(2.0 * random_skew(n, seed)))
    s = schur_skew(A0)
    shift = np.zeros(s.m)
    shift[block - 1] = 2.0 * np.pi
    Y = SchurSkew(shift, s.R).matrix()
    return ClosedFormCurve(exp_skew(A0, s), Y), A0, Y


def locus_crossing_curve(seed=5, t_cross: float = 0.55, angles=(2.2, 2.0 * np.pi - 2.2), speed: float = 0.8):
    """Curve in SO(4) whose tracked log passes within a tiny distance of the locus.

    ``A*`` has angles summing to ``2 pi`` (on the locus). With a random
    direction ``X`` of spectral norm ``speed`` the curve is
    ``Q(t) = exp(A*) exp((t - t_cross) L(X))``, which to first order equals
    ``exp(A* + (t - t_cross) X)``.

    Returns
    -------
    curve, A_start, A_star
    """
    rng = np.random.default_rng(seed)
    R = special_ortho_group.rvs(4, random_state=rng)
    A_star = SchurSkew(np.asarray(angles, dtype=float), R).matrix()
    X = random_skew(4, rng)
    X *= speed / np.linalg.norm(X, 2)
    Y = l_map(schur_skew(A_star), X)
    curve = ClosedFormCurve(exp_skew(A_star) @ exp_skew(-t_cross * Y), Y)
    A_start = nearby_log(A_star - t_cross * X, curve(0.0))
    return curve, A_start, A_star
