"""Complex eigendecomposition (divided-difference) baseline for dexp.

This is the classical route for diagonalizable matrices: with
``A = V diag(lam) V^H`` the differential applies a Hadamard product with the
first divided differences of ``exp`` in the eigenbasis. All arithmetic is
complex; it serves as the "semi_simple" benchmark baseline and as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SkewExpError
from ..schur import SchurSkew, eig_from_schur, unitary_blocks
from ..trig import cosc, sinc

__all__ = [
    "DKCache",
    "core_map_complex",
    "divided_differences",
    "dk_dexp",
    "dk_dexp_inverse",
    "dk_lmap",
    "dk_lmap_inverse",
]

IMAG_TOL = 1e-12


def divided_differences(lam: np.ndarray) -> np.ndarray:
    """``phi_ij = (exp(lam_j - lam_i) - 1) / (lam_j - lam_i)``, 1 on coincidences.

    ``lam`` must be purely imaginary; with ``lam_j - lam_i = i w`` the entry
    equals ``sinc(w) - i cosc(w)``, evaluated by the stable real kernels.
    """
    w = (lam.imag[None, :] - lam.imag[:, None])
    return sinc(w) - 1j * cosc(w)


@dataclass(frozen=True)
class DKCache:
    """Eigenvalues ``lam``, eigenvectors ``V`` and the divided-difference tables.

    ``Phi`` gives ``L_A`` and ``Psi = diag(exp(lam)) Phi`` gives ``dexp_A``.
    """

    lam: np.ndarray
    V: np.ndarray
    Phi: np.ndarray
    Psi: np.ndarray

    @classmethod
    def build(cls, s: SchurSkew) -> "DKCache":
        lam, V = eig_from_schur(s)
        Phi = divided_differences(lam)
        Psi = np.exp(lam)[:, None] * Phi
        return cls(lam, V, Phi, Psi)


def _real(Z: np.ndarray, what: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(Z.real))) if Z.size else 1.0)
    resid = float(np.max(np.abs(Z.imag))) if Z.size else 0.0
    if resid > IMAG_TOL * scale:
        raise SkewExpError(f"{what}: imaginary residue {resid:.3e} exceeds tolerance")
    return Z.real.copy()


def _hadamard(V: np.ndarray, X: np.ndarray, T: np.ndarray, counter=None) -> np.ndarray:
    Vh = V.conj().T
    if counter is not None:
        counter.count += 4
    return V @ ((Vh @ X @ V) * T) @ Vh


def dk_dexp(cache: DKCache, X, counter=None) -> np.ndarray:
    """``dexp_A[X] = V ((V^H X V) * Psi) V^H`` in complex arithmetic."""
    return _real(_hadamard(cache.V, np.asarray(X, dtype=float), cache.Psi, counter), "dk_dexp")


def dk_lmap(cache: DKCache, X, counter=None) -> np.ndarray:
    """``L_A(X) = V ((V^H X V) * Phi) V^H`` in complex arithmetic."""
    return _real(_hadamard(cache.V, np.asarray(X, dtype=float), cache.Phi, counter), "dk_lmap")


def dk_lmap_inverse(cache: DKCache, Y, counter=None) -> np.ndarray:
    """Inverse of :func:`dk_lmap` by Hadamard division; entries with ``phi = 0`` map to 0."""
    Phi = cache.Phi
    dead = np.abs(Phi) < 1e-14
    inv = np.where(dead, 0.0, 1.0 / np.where(dead, 1.0, Phi))
    return _real(_hadamard(cache.V, np.asarray(Y, dtype=float), inv, counter), "dk_lmap_inverse")


def core_map_complex(theta, n: int, M) -> np.ndarray:
    """Core map evaluated as ``U_n ((U_n^H M U_n) * Phi) U_n^H`` (no Schur frame)."""
    s = SchurSkew.from_angles_n(theta, n)
    lam, _ = eig_from_schur(s)
    U = unitary_blocks(n)
    return _real(_hadamard(U, np.asarray(M, dtype=float), divided_differences(lam)), "core_map_complex")


def dk_dexp_inverse(cache: DKCache, Delta, counter=None) -> np.ndarray:
    """Inverse of :func:`dk_dexp` by Hadamard division with ``Psi``; zero entries map to 0."""
    Psi = cache.Psi
    dead = np.abs(Psi) < 1e-14
    inv = np.where(dead, 0.0, 1.0 / np.where(dead, 1.0, Psi))
    return _real(_hadamard(cache.V, np.asarray(Delta, dtype=float), inv, counter), "dk_dexp_inverse")
