import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewexp.errors import DomainError
from skewexp.matcore import (
    GemmCounter,
    MatrixFormatError,
    block,
    block_sizes,
    frobenius_norm,
    random_skew,
    read_matrix,
    set_block,
    skew,
    special_orthogonal,
    spectral_norm_skew,
    write_matrix,
)
from skewexp.reference.oracles import mp_spectral_norm
from skewexp.schur import schur_skew


def test_block_sizes():
    assert block_sizes(4) == (2, 2)
    assert block_sizes(5) == (2, 3)
    assert block_sizes(1) == (0, 1)
    with pytest.raises(DomainError):
        block_sizes(0)


def test_block_trailing_entry_for_odd_n():
    M = np.arange(25.0).reshape(5, 5)
    assert block(M, 3, 3).shape == (1, 1)
    assert block(M, 3, 3)[0, 0] == M[4, 4]
    assert block(M, 3, 1).shape == (1, 2)
    assert block(M, 1, 3).shape == (2, 1)


def test_block_identity_off_diagonal_is_zero():
    np.testing.assert_array_equal(block(np.eye(4), 1, 2), np.zeros((2, 2)))


def test_block_single_block_is_whole_matrix():
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(block(M, 1, 1), M)


def test_block_out_of_range():
    with pytest.raises(IndexError):
        block(np.eye(4), 3, 1)


@given(st.integers(2, 9), st.integers(0, 2**32 - 1))
def test_blocks_of_skew_are_negated_transposes(n, seed):
    A = random_skew(n, seed)
    k = (n + 1) // 2
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            np.testing.assert_array_equal(block(A, i, j), -block(A, j, i).T)


@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_block_roundtrip_is_exact(n, seed):
    M = np.random.default_rng(seed).standard_normal((n, n))
    out = np.zeros_like(M)
    k = (n + 1) // 2
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            set_block(out, i, j, block(M, i, j))
    np.testing.assert_array_equal(out, M)


def test_frobenius_norm_values():
    assert frobenius_norm(np.eye(3)) == pytest.approx(np.sqrt(3.0), rel=1e-15)
    assert frobenius_norm(np.zeros((4, 4))) == 0.0
    assert frobenius_norm(np.array([[3.0, 4.0], [0.0, 0.0]])) == 5.0


def test_spectral_norm_simple_cases():
    assert spectral_norm_skew(np.zeros((4, 4)), schur_skew(np.zeros((4, 4)))) == 0.0
    A = np.array([[0.0, -0.7], [0.7, 0.0]])
    assert spectral_norm_skew(A, schur_skew(A)) == pytest.approx(0.7, rel=1e-15)


def test_spectral_norm_matches_extended_precision_power_iteration():
    A = random_skew(6, 3)
    assert spectral_norm_skew(A, schur_skew(A)) == pytest.approx(mp_spectral_norm(A), abs=1e-12)


def test_spectral_norm_dimension_mismatch():
    with pytest.raises(DomainError):
        spectral_norm_skew(np.zeros((3, 3)), schur_skew(np.zeros((4, 4))))


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_spectral_norm_bounded_by_frobenius(n, seed):
    A = random_skew(n, seed)
    assert spectral_norm_skew(A, schur_skew(A)) <= frobenius_norm(A) * (1 + 1e-14)


def test_random_skew_determinism_and_structure():
    np.testing.assert_array_equal(random_skew(7, 11), random_skew(7, 11))
    A = random_skew(50, 4)
    np.testing.assert_array_equal(A, -A.T)
    assert np.any(random_skew(10, 1) != random_skew(10, 2))
    assert np.max(np.abs(A)) <= 1.0
    with pytest.raises(DomainError):
        random_skew(0, 1)


def test_skew_repairs_input():
    M = np.array([[1.0, 2.0], [4.0, 5.0]])
    A = skew(M)
    np.testing.assert_array_equal(A, [[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(DomainError):
        skew(np.array([[np.nan, 0.0], [0.0, 0.0]]))


def test_special_orthogonal_validation():
    special_orthogonal(np.eye(3))
    with pytest.raises(DomainError):
        special_orthogonal(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(DomainError):
        special_orthogonal(2 * np.eye(3))


def test_matrix_text_roundtrip(tmp_path):
    M = np.random.default_rng(0).standard_normal((3, 4)) * 1e-7
    p = tmp_path / "m.txt"
    write_matrix(p, M, comment="hello")
    np.testing.assert_array_equal(read_matrix(p), M)


def test_matrix_text_comments_and_errors(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("# c\n2 2\n1 2\n# mid\n3 4e0\n")
    np.testing.assert_array_equal(read_matrix(p), [[1, 2], [3, 4]])
    p.write_text("2 2\n1 2\n")
    with pytest.raises(MatrixFormatError):
        read_matrix(p)
    with pytest.raises(MatrixFormatError):
        read_matrix(tmp_path / "missing.txt")
    buf = io.StringIO()
    write_matrix(buf, np.eye(2))
    assert buf.getvalue().splitlines()[0] == "2 2"


def test_gemm_counter_is_per_instance():
    g1, g2 = GemmCounter(), GemmCounter()
    g1.matmul(np.eye(2), np.eye(2))
    assert (g1.count, g2.count) == (1, 0)
