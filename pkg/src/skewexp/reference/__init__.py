"""Baselines and oracles used for benchmarking and verification."""

from .daletskii import DKCache, core_map_complex, dk_dexp, dk_dexp_inverse, dk_lmap, dk_lmap_inverse
from .ddouble import DD, dd_matmul
from .oracles import (
    core_jacobian,
    error_metric,
    fd_dexp,
    jacobian_rank,
    mp_skew_angles,
    mp_spectral_norm,
    xp_expm,
)
from .pade import pade_expm

__all__ = [
    "DD",
    "DKCache",
    "core_jacobian",
    "core_map_complex",
    "dd_matmul",
    "dk_dexp",
    "dk_dexp_inverse",
    "dk_lmap",
    "dk_lmap_inverse",
    "error_metric",
    "fd_dexp",
    "jacobian_rank",
    "mp_skew_angles",
    "mp_spectral_norm",
    "pade_expm",
    "xp_expm",
]
