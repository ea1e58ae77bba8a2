import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm_frechet

from skewexp.dexp import dexp_invertible, l_map
from skewexp.errors import DomainError
from skewexp.expmaps import exp_skew
from skewexp.matcore import GemmCounter, random_skew
from skewexp.reference import (
    DD,
    DKCache,
    core_jacobian,
    dd_matmul,
    dk_dexp,
    dk_dexp_inverse,
    dk_lmap,
    dk_lmap_inverse,
    error_metric,
    fd_dexp,
    jacobian_rank,
    mp_skew_angles,
    mp_spectral_norm,
    pade_expm,
    xp_expm,
)
from skewexp.reference.ddouble import two_prod, two_sum
from skewexp.schur import SchurSkew, schur_skew

PI = math.pi
seeds = st.integers(0, 2**32 - 1)


def _mp_matmul(A, B, dps=50):
    with mpmath.workdps(dps):
        C = mpmath.matrix(A.tolist()) * mpmath.matrix(B.tolist())
        return C


# ------------------------------------------------------------- double-double


# products stay clear of the subnormal range where TwoProd is not exact
normal = st.one_of(st.just(0.0), st.floats(1e-100, 1e10), st.floats(-1e10, -1e-100))


@given(normal, normal)
def test_error_free_transforms(a, b):
    s, e = two_sum(np.float64(a), np.float64(b))
    p, f = two_prod(np.float64(a), np.float64(b))
    with mpmath.workdps(80):
        assert mpmath.mpf(s) + mpmath.mpf(e) == mpmath.mpf(a) + mpmath.mpf(b)
        assert mpmath.mpf(p) + mpmath.mpf(f) == mpmath.mpf(a) * mpmath.mpf(b)


def test_dd_matmul_against_mpmath():
    rng = np.random.default_rng(0)
    A, B = rng.standard_normal((6, 6)), rng.standard_normal((6, 6))
    C = dd_matmul(A, B)
    ref = _mp_matmul(A, B)
    with mpmath.workdps(50):
        for i, j in itertools.product(range(6), repeat=2):
            got = mpmath.mpf(C.hi[i, j]) + mpmath.mpf(C.lo[i, j])
            assert abs(got - ref[i, j]) <= mpmath.mpf(2) ** -100 * (1 + abs(ref[i, j]))


@given(seeds)
def test_dd_results_are_normalized(seed):
    rng = np.random.default_rng(seed)
    A, B = rng.standard_normal((5, 5)), rng.standard_normal((5, 5))
    for C in (dd_matmul(A, B), DD(A) * DD(B) + DD(A), xp_expm(A - A.T)):
        assert np.all(np.abs(C.lo) <= 0.5 * np.spacing(np.abs(C.hi)))


def test_dd_arithmetic():
    x = DD(np.array([1.0]), np.array([2.0**-60]))
    y = x - DD(np.array([1.0]))
    assert y.to_float()[0] == 2.0**-60
    z = (x * 3.0) / 3.0
    assert abs((z - x).to_float()[0]) <= 2.0**-100


# ----------------------------------------------------------------- oracles


def test_metric_and_xp_examples():
    M = np.arange(9.0).reshape(3, 3)
    assert error_metric(M, M) == 0.0
    assert error_metric(np.zeros((2, 2)), np.ones((2, 2))) == pytest.approx(0.5)
    np.testing.assert_array_equal(xp_expm(np.zeros((4, 4))).to_float(), np.eye(4))


def test_xp_expm_rotation_closed_form():
    t = 0.3
    A = np.array([[0.0, -t], [t, 0.0]])
    E = xp_expm(A)
    with mpmath.workdps(40):
        c, s = mpmath.cos(t), mpmath.sin(t)
        assert abs(mpmath.mpf(E.hi[0, 0]) + mpmath.mpf(E.lo[0, 0]) - c) < mpmath.mpf(10) ** -30
        assert abs(mpmath.mpf(E.hi[1, 0]) + mpmath.mpf(E.lo[1, 0]) - s) < mpmath.mpf(10) ** -30


def test_pade_examples():
    np.testing.assert_array_equal(pade_expm(np.zeros((3, 3))), np.eye(3))
    t = 0.3
    np.testing.assert_allclose(
        pade_expm(np.array([[0.0, -t], [t, 0.0]])), [[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]], atol=1e-15
    )
    with pytest.raises(DomainError):
        pade_expm(np.zeros((2, 2)), order=7)


def test_pade13_matches_extended_precision():
    rng = np.random.default_rng(1)
    for _ in range(5):
        A = random_skew(12, rng)
        A *= rng.uniform(0.1, 10) / np.linalg.norm(A, 2)
        assert error_metric(pade_expm(A, 13), xp_expm(A)) <= 1e-14


def test_pade3_is_less_accurate():
    A = random_skew(50, 7)
    A *= 5.0 / np.linalg.norm(A, 2)
    ref = xp_expm(A)
    assert error_metric(pade_expm(A, 3), ref) > 100 * error_metric(pade_expm(A, 13), ref)


def test_fd_examples():
    X = random_skew(5, 1)
    np.testing.assert_allclose(fd_dexp(np.zeros((5, 5)), X), X, atol=1e-11)
    A, X2 = random_skew(8, 2), random_skew(8, 3)
    np.testing.assert_allclose(fd_dexp(A, X2), expm_frechet(A, X2, compute_expm=False), atol=1e-10)
    np.testing.assert_allclose(fd_dexp(A, 2.0 * X2), 2.0 * fd_dexp(A, X2), atol=1e-12)
    with pytest.raises(DomainError):
        fd_dexp(A, X2, h=0.0)


def test_fd_linearity_two_directions():
    A, X1, X2 = random_skew(6, 4), random_skew(6, 5), random_skew(6, 6)
    np.testing.assert_allclose(fd_dexp(A, X1 + X2), fd_dexp(A, X1) + fd_dexp(A, X2), atol=1e-12)


def test_mp_oracles():
    theta = [2.5, 1.0, 0.25]
    R = np.linalg.qr(np.random.default_rng(0).standard_normal((7, 7)))[0]
    A = SchurSkew.from_angles_n(theta, 7, R).matrix()
    ang = mp_skew_angles(A)
    np.testing.assert_allclose(ang[:6:2], theta, atol=1e-14)
    np.testing.assert_allclose(ang[1:6:2], theta, atol=1e-14)
    assert abs(ang[6]) < 1e-14
    assert mp_spectral_norm(A) == pytest.approx(2.5, abs=1e-14)


# ----------------------------------------------------------- Daletskii-Krein


def test_dk_cache_invariants():
    s = schur_skew(random_skew(7, 3) * 3)
    c = DKCache.build(s)
    np.testing.assert_allclose(c.Phi, c.Phi.conj().T, atol=1e-15)
    same = np.abs(c.lam[:, None] - c.lam[None, :]) == 0
    np.testing.assert_allclose(c.Phi[same], 1.0, atol=1e-15)
    np.testing.assert_allclose(c.V @ np.diag(c.lam) @ c.V.conj().T, s.matrix(), atol=1e-13)


def test_dk_examples():
    X = random_skew(4, 1)
    c0 = DKCache.build(schur_skew(np.zeros((4, 4))))
    np.testing.assert_allclose(dk_dexp(c0, X), X, atol=1e-15)
    np.testing.assert_allclose(dk_lmap(c0, X), X, atol=1e-15)
    A = random_skew(4, 2)
    s = schur_skew(A)
    c = DKCache.build(s)
    np.testing.assert_allclose(dk_lmap(c, X), l_map(s, X), atol=1e-12)
    np.testing.assert_allclose(dk_dexp(c, X), exp_skew(A) @ dk_lmap(c, X), atol=1e-12)


def test_dk_inverses_and_counter():
    A, X = random_skew(6, 7), random_skew(6, 8)
    c = DKCache.build(schur_skew(A))
    g = GemmCounter()
    Y = dk_lmap(c, X, counter=g)
    assert g.count == 4
    np.testing.assert_allclose(dk_lmap_inverse(c, Y), X, atol=1e-12)
    np.testing.assert_allclose(dk_dexp_inverse(c, dk_dexp(c, X)), X, atol=1e-12)


@given(st.integers(2, 10), seeds)
def test_baseline_triangle(n, seed):
    rng = np.random.default_rng(seed)
    A, X = random_skew(n, rng) * 2, random_skew(n, rng)
    s = schur_skew(A)
    Y1 = l_map(s, X)
    Y2 = dk_lmap(DKCache.build(s), X)
    Y3 = exp_skew(A, s).T @ fd_dexp(A, X)
    for P, Q in ((Y1, Y2), (Y1, Y3), (Y2, Y3)):
        np.testing.assert_allclose(P, Q, atol=1e-10)


# ----------------------------------------------------------------- Jacobian


def test_core_jacobian_examples():
    J = core_jacobian([0.0, 0.0], 4)
    np.testing.assert_allclose(J, np.eye(6), atol=1e-15)
    assert jacobian_rank(J) == 6
    assert jacobian_rank(core_jacobian([1.5 * PI, 0.5 * PI], 4)) == 4
    assert jacobian_rank(core_jacobian([2 * PI], 3)) < 3
    with pytest.raises(DomainError):
        core_jacobian(np.zeros(6), 13)
    with pytest.raises(DomainError):
        core_jacobian([0.1], 4)


def test_rank_agrees_with_predicate_on_grid():
    grid = [0.0, PI / 2, PI, 1.5 * PI, 2 * PI]
    for n in (3, 4, 5, 6):
        m = n // 2
        full = n * (n - 1) // 2
        for theta in itertools.product(grid, repeat=m):
            for signs in itertools.product([1.0, -1.0], repeat=m):
                th = np.array(theta) * signs
                assert (jacobian_rank(core_jacobian(th, n)) == full) == bool(dexp_invertible(th, n)), (n, th)
