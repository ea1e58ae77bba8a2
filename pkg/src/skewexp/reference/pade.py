"""Scaling-and-squaring diagonal Pade approximants of orders 3 and 13."""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from ..errors import ConvergenceError, DomainError

__all__ = ["pade_expm", "PADE_COEFFS", "PADE_THETA"]

PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    13: (
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ),
}
# scale until the 1-norm is at most this bound
PADE_THETA = {3: 1.0, 13: 5.4}


def pade_expm(A, order: int = 13, counter=None) -> np.ndarray:
    """Matrix exponential by ``[order/order]`` Pade approximation with scaling and squaring.

    Parameters
    ----------
    A : array_like, shape (n, n)
    order : {3, 13}
    counter : GemmCounter, optional
        Records the matrix products performed.
    """
    if order not in PADE_COEFFS:
        raise DomainError(f"unsupported Pade order {order}; choose 3 or 13")
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    b = PADE_COEFFS[order]
    norm1 = np.linalg.norm(A, 1)
    sigma = 0
    if norm1 > PADE_THETA[order]:
        sigma = int(np.ceil(np.log2(norm1 / PADE_THETA[order])))
    As = A / 2.0**sigma

    def mm(x, y):
        if counter is not None:
            counter.count += 1
        return x @ y

    I = np.eye(n)
    A2 = mm(As, As)
    if order == 3:
        U = mm(As, b[3] * A2 + b[1] * I)
        V = b[2] * A2 + b[0] * I
    else:
        A4 = mm(A2, A2)
        A6 = mm(A4, A2)
        U = mm(As, mm(A6, b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I)
        V = mm(A6, b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I
    try:
        F = sla.solve(V - U, V + U)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceError(f"Pade linear solve failed: {exc}") from exc
    for _ in range(sigma):
        F = mm(F, F)
    return F
