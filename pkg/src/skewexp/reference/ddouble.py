"""Double-double arrays: unevaluated sums ``hi + lo`` carrying about 31 digits.

Elementwise arithmetic uses the classic error-free transformations
(``two_sum``, Dekker's split and ``two_prod``). Matrix products use
error-free slicing: each operand is cut into slices whose pairwise BLAS
products are exact in double precision, and the exact partial products are
accumulated in double-double.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["DD", "dd_matmul", "two_prod", "two_sum", "quick_two_sum"]

_SPLITTER = 134217729.0  # 2**27 + 1
_DD_BITS = 108  # stop slicing once the residual is below 2**-108 of the operand


def two_sum(a, b):
    """``s + e == a + b`` exactly with ``s = fl(a + b)``."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    """Like :func:`two_sum` but requires ``|a| >= |b|``."""
    s = a + b
    e = b - (s - a)
    return s, e


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    """``p + e == a * b`` exactly with ``p = fl(a * b)``."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


class DD:
    """Array of double-double numbers stored as two float64 arrays.

    Parameters
    ----------
    hi, lo : array_like
        Leading and trailing parts. ``lo`` defaults to zeros. The pair is
        renormalized so that ``|lo| <= ulp(hi) / 2``.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo=None):
        hi = np.asarray(hi, dtype=float)
        if lo is None:
            self.hi, self.lo = hi.copy(), np.zeros_like(hi)
        else:
            self.hi, self.lo = quick_two_sum(hi, np.asarray(lo, dtype=float))

    @classmethod
    def _raw(cls, hi, lo):
        obj = cls.__new__(cls)
        obj.hi, obj.lo = hi, lo
        return obj

    @staticmethod
    def coerce(x) -> "DD":
        return x if isinstance(x, DD) else DD(x)

    @property
    def shape(self):
        return self.hi.shape

    @property
    def T(self) -> "DD":
        return DD._raw(self.hi.T.copy(), self.lo.T.copy())

    def to_float(self) -> np.ndarray:
        return self.hi + self.lo

    def copy(self) -> "DD":
        return DD._raw(self.hi.copy(), self.lo.copy())

    def __neg__(self) -> "DD":
        return DD._raw(-self.hi, -self.lo)

    def __add__(self, other) -> "DD":
        other = DD.coerce(other)
        s, e = two_sum(self.hi, other.hi)
        t, f = two_sum(self.lo, other.lo)
        e = e + t
        s, e = quick_two_sum(s, e)
        e = e + f
        return DD._raw(*quick_two_sum(s, e))

    __radd__ = __add__

    def __sub__(self, other) -> "DD":
        return self + (-DD.coerce(other))

    def __rsub__(self, other) -> "DD":
        return DD.coerce(other) - self

    def __mul__(self, other) -> "DD":
        """Elementwise product with a DD or a float (array)."""
        if isinstance(other, DD):
            p, e = two_prod(self.hi, other.hi)
            e = e + (self.hi * other.lo + self.lo * other.hi)
        else:
            b = np.asarray(other, dtype=float)
            p, e = two_prod(self.hi, b)
            e = e + self.lo * b
        return DD._raw(*quick_two_sum(p, e))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DD":
        """Division by a float scalar or array."""
        b = np.asarray(other, dtype=float)
        q1 = self.hi / b
        p, e = two_prod(q1, b)
        r_hi, r_lo = two_sum(self.hi, -p)
        r_lo = r_lo - e + self.lo
        q2 = (r_hi + r_lo) / b
        return DD._raw(*quick_two_sum(q1, q2))

    def __matmul__(self, other) -> "DD":
        return dd_matmul(self, other)

    def ldexp(self, e: int) -> "DD":
        """Exact multiplication by ``2**e``."""
        return DD._raw(np.ldexp(self.hi, e), np.ldexp(self.lo, e))

    def abs_max(self) -> float:
        return float(np.max(np.abs(self.hi))) if self.hi.size else 0.0


def _slices(M: np.ndarray, axis: int, beta_shift: int, floor: float) -> list[np.ndarray]:
    """Cut ``M`` into slices that are exactly summable and pairwise BLAS-exact.

    Each slice keeps at most ``53 - beta_shift`` leading bits per row
    (``axis=1``) or per column (``axis=0``) of the current residual.
    Slicing stops when the residual is below ``floor`` everywhere.
    """
    out = []
    R = M.copy()
    while True:
        mx = np.max(np.abs(R), axis=axis, keepdims=True)
        if not np.any(mx > floor):
            break
        _, tau = np.frexp(mx)
        sigma = np.ldexp(1.0, beta_shift + tau)
        sigma = np.where(mx > 0, sigma, 0.0)
        q = (R + sigma) - sigma
        R = R - q
        out.append(q)
    return out


def dd_matmul(A, B) -> DD:
    """Product of two double-double (or float) matrices to double-double accuracy.

    Accuracy is normwise: the error is about ``2**-106 * |A| |B|``.
    """
    A = DD.coerce(A)
    B = DD.coerce(B)
    p = A.shape[1]
    if B.shape[0] != p:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    rho = math.ceil((53 + math.log2(max(p, 2))) / 2)
    amax = max(A.abs_max(), 1e-300)
    bmax = max(B.abs_max(), 1e-300)
    a_floor = amax * 2.0**-_DD_BITS
    b_floor = bmax * 2.0**-_DD_BITS
    sa = _slices(A.hi, 1, rho, a_floor) + _slices(A.lo, 1, rho, a_floor)
    sb = _slices(B.hi, 0, rho, b_floor) + _slices(B.lo, 0, rho, b_floor)
    # keep only pairs whose product can reach the double-double level
    cut = amax * bmax * 2.0**-(_DD_BITS + 6)
    ma = [float(np.max(np.abs(q))) for q in sa]
    mb = [float(np.max(np.abs(q))) for q in sb]
    terms = []
    for qa, xa in zip(sa, ma):
        for qb, xb in zip(sb, mb):
            if xa * xb * p > cut:
                terms.append((xa * xb, qa, qb))
    terms.sort(key=lambda t: t[0])
    shape = (A.shape[0], B.shape[1])
    hi = np.zeros(shape)
    lo = np.zeros(shape)
    for _, qa, qb in terms:
        prod = qa @ qb
        hi, e = two_sum(hi, prod)
        lo = lo + e
    return DD._raw(*quick_two_sum(hi, lo))
