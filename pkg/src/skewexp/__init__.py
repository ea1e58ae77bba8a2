"""Real-arithmetic differentiation of the exponential on skew-symmetric matrices.

The package provides the Schur-frame core map and its inverse, invertibility
tests, distances to the tangent conjugate locus, the nearby logarithm with
curve tracking, and reference baselines for accuracy and timing studies.
"""

from .dexp import (
    CoreMapCache,
    InverseCoreMapCache,
    core_map,
    core_map_inverse,
    dexp,
    dexp_inverse,
    dexp_invertible,
    invert_kernel_x,
    invert_kernel_y,
    kernel_x,
    kernel_y,
    l_map,
    l_map_inverse,
)
from .errors import (
    ConvergenceError,
    DomainError,
    LabelingError,
    LocusError,
    NotInvertibleError,
    OutOfDomainError,
    PoleError,
    PrincipalBranchError,
    SingularKernelError,
    SkewExpError,
    StepTooLargeError,
    TrackingStalledError,
)
from .expmaps import ExpLogConfig, exp_skew, log_so
from .locus import LocusDistance, dist_to_locus, dist_to_subset, in_s0, separated_preimage
from .matcore import (
    GemmCounter,
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
from .nearlog import (
    ClosedFormCurve,
    NearLogConfig,
    TrackedPath,
    angle_trajectory,
    nearby_log,
    track_curve,
)
from .schur import SchurSkew, SchurSO, eig_from_schur, schur_skew, schur_so, simultaneous_schur
from .trig import TrigKernelConfig, cosc, cotc, sinc

__version__ = "0.1.0"
