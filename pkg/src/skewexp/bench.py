"""Timing and accuracy harness comparing the Schur-based maps with baselines.

Every cell (formula, n) is run once to warm caches, then ``trials`` more
times; each trial records the preprocessing stage, the compute stage and
their total, together with the number of dense matrix products performed.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .dexp import CoreMapCache, InverseCoreMapCache, l_map, l_map_inverse
from .errors import DomainError
from .expmaps import exp_skew
from .matcore import GemmCounter, random_skew
from .reference.daletskii import DKCache, dk_dexp, dk_dexp_inverse, dk_lmap, dk_lmap_inverse
from .reference.oracles import error_metric, fd_dexp, xp_expm
from .reference.pade import pade_expm
from .schur import rotation_blocks, schur_skew

__all__ = [
    "BENCH_HEADER",
    "BenchRecord",
    "ERROR_HEADER",
    "SUITES",
    "bench_suite",
    "error_suite",
    "summarize",
    "write_records",
]

BENCH_HEADER = ["formula", "n", "stage", "trial", "seconds", "gemm_count"]
ERROR_HEADER = ["formula", "n", "trial", "error"]
STAGES = ("preprocess", "compute", "total")
MAX_ERROR_N = 100


@dataclass(frozen=True)
class BenchRecord:
    formula: str
    n: int
    stage: str
    trial: int
    seconds: float
    gemm_count: int

    def row(self) -> list:
        return [self.formula, self.n, self.stage, self.trial, repr(self.seconds), self.gemm_count]


# Each runner takes (A, X, counter) and returns (preprocess, compute) closures:
# preprocess() -> state, compute(state) -> result. Counters see both stages.
Runner = Callable[[np.ndarray, np.ndarray, GemmCounter], tuple[Callable, Callable]]


def _skew_lmap(A, X, g):
    def pre():
        s = schur_skew(A)
        return s, CoreMapCache.build(s.theta, s.n)

    return pre, lambda st: l_map(st[0], X, g, st[1])


def _dk_lmap(A, X, g):
    def pre():
        return DKCache.build(schur_skew(A))

    return pre, lambda c: dk_lmap(c, X, g)


def _skew_dexp_full(A, X, g):
    def pre():
        s = schur_skew(A)
        Q = g.matmul(g.matmul(s.R, rotation_blocks(np.cos(s.theta), np.sin(s.theta), s.n)), s.R.T)
        return s, CoreMapCache.build(s.theta, s.n), Q

    return pre, lambda st: g.matmul(st[2], l_map(st[0], X, g, st[1]))


def _dk_dexp_full(A, X, g):
    def pre():
        return DKCache.build(schur_skew(A))

    return pre, lambda c: dk_dexp(c, X, g)


def _skew_linv(A, Y, g):
    def pre():
        s = schur_skew(A)
        return s, InverseCoreMapCache.build(s.theta, s.n)

    return pre, lambda st: l_map_inverse(st[0], Y, g, st[1])


def _dk_linv(A, Y, g):
    def pre():
        return DKCache.build(schur_skew(A))

    return pre, lambda c: dk_lmap_inverse(c, Y, g)


def _skew_dexpinv_full(A, Delta, g):
    def pre():
        s = schur_skew(A)
        Q = g.matmul(g.matmul(s.R, rotation_blocks(np.cos(s.theta), np.sin(s.theta), s.n)), s.R.T)
        return s, InverseCoreMapCache.build(s.theta, s.n), Q

    return pre, lambda st: l_map_inverse(st[0], g.matmul(st[2].T, Delta), g, st[1])


def _dk_dexpinv_full(A, Delta, g):
    def pre():
        return DKCache.build(schur_skew(A))

    return pre, lambda c: dk_dexp_inverse(c, Delta, g)


def _skew_expm(A, X, g):
    def pre():
        return schur_skew(A)

    def compute(s):
        E = rotation_blocks(np.cos(s.theta), np.sin(s.theta), s.n)
        return g.matmul(g.matmul(s.R, E), s.R.T)

    return pre, compute


def _pade(order):
    def runner(A, X, g):
        return (lambda: None), (lambda _: pade_expm(A, order, g))

    return runner


SUITES: dict[str, dict[str, Runner]] = {
    "dexp_skew": {"skew_symm": _skew_lmap, "semi_simple": _dk_lmap},
    "dexp_full": {"skew_symm": _skew_dexp_full, "semi_simple": _dk_dexp_full},
    "dexpinv_skew": {"skew_symm": _skew_linv, "semi_simple": _dk_linv},
    "dexpinv_full": {"skew_symm": _skew_dexpinv_full, "semi_simple": _dk_dexpinv_full},
    "expm": {"skew_symm": _skew_expm, "pade3": _pade(3), "pade13": _pade(13)},
}


def _inputs(n: int, seed: int):
    rng = np.random.default_rng([seed, n])
    return random_skew(n, rng), random_skew(n, rng)


def _time_trial(runner: Runner, A, X):
    g = GemmCounter()
    pre, compute = runner(A, X, g)
    t0 = time.perf_counter()
    state = pre()
    t1 = time.perf_counter()
    n_pre = g.count
    compute(state)
    t2 = time.perf_counter()
    return t1 - t0, t2 - t1, t2 - t0, n_pre, g.count - n_pre


def bench_suite(
    suite: str,
    sizes: Iterable[int],
    seed: int = 0,
    trials: int = 20,
    formulas: Iterable[str] | None = None,
) -> list[BenchRecord]:
    """Time every formula of ``suite`` at every size; one preheat run per cell is discarded."""
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    if trials < 1:
        raise DomainError("trials must be positive")
    table = SUITES[suite]
    names = list(table) if formulas is None else list(formulas)
    for f in names:
        if f not in table:
            raise DomainError(f"formula {f!r} is not part of suite {suite!r}")
    out = []
    for n in sizes:
        A, X = _inputs(int(n), seed)
        for f in names:
            _time_trial(table[f], A, X)
            for trial in range(trials):
                pre, comp, tot, g_pre, g_comp = _time_trial(table[f], A, X)
                out.append(BenchRecord(f, int(n), "preprocess", trial, pre, g_pre))
                out.append(BenchRecord(f, int(n), "compute", trial, comp, g_comp))
                out.append(BenchRecord(f, int(n), "total", trial, tot, g_pre + g_comp))
    return out


def summarize(records: Iterable[BenchRecord]) -> dict[tuple[str, int, str], float]:
    """Mean seconds per ``(formula, n, stage)`` cell."""
    acc: dict[tuple[str, int, str], list[float]] = {}
    for r in records:
        acc.setdefault((r.formula, r.n, r.stage), []).append(r.seconds)
    return {k: float(np.mean(v)) for k, v in acc.items()}


def write_records(records: Iterable[BenchRecord], fh) -> None:
    w = csv.writer(fh)
    w.writerow(BENCH_HEADER)
    for r in records:
        w.writerow(r.row())


def error_suite(
    suite: str, sizes: Iterable[int], seed: int = 0, trials: int = 1, fd_step: float = 1e-6
) -> list[tuple[str, int, int, float]]:
    """Normalized errors ``||M - M*||_F / n**2`` per formula.

    ``expm`` compares against the double-double exponential, ``dexp`` against
    the double-double central difference with step ``fd_step`` and
    ``dexpinv`` measures the round trip ``L^{-1}(L(X))`` against ``X``.
    """
    sizes = [int(n) for n in sizes]
    if any(n > MAX_ERROR_N for n in sizes):
        raise DomainError(f"error harness is limited to n <= {MAX_ERROR_N}")
    rows = []
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        for trial in range(trials):
            A, X = random_skew(n, rng), random_skew(n, rng)
            s = schur_skew(A)
            if suite == "expm":
                Q_star = xp_expm(A)
                rows.append(("skew_symm", n, trial, error_metric(exp_skew(A, s), Q_star)))
                rows.append(("pade3", n, trial, error_metric(pade_expm(A, 3), Q_star)))
                rows.append(("pade13", n, trial, error_metric(pade_expm(A, 13), Q_star)))
            elif suite == "dexp":
                D_star = fd_dexp(A, X, fd_step)
                Q = exp_skew(A, s)
                rows.append(("skew_symm", n, trial, error_metric(Q @ l_map(s, X), D_star)))
                rows.append(("semi_simple", n, trial, error_metric(dk_dexp(DKCache.build(s), X), D_star)))
            elif suite == "dexpinv":
                Y = l_map(s, X)
                rows.append(("skew_symm", n, trial, error_metric(l_map_inverse(s, Y), X)))
                c = DKCache.build(s)
                rows.append(("semi_simple", n, trial, error_metric(dk_lmap_inverse(c, dk_lmap(c, X)), X)))
            else:
                raise DomainError(f"unknown error suite {suite!r}; choose dexp, dexpinv or expm")
    return rows
