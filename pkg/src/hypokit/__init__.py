"""hypokit: stability structure of linear continuous- and discrete-time systems.

Computes hypocoercivity/hypocontractivity indices with dual certificates,
sharp short-time decay constants of propagator norms, implicit-midpoint
(scaled Cayley) discretizations with index-preservation verification, and
maximally coercive/contractive changes of basis.
"""

__version__ = "1.0.0"

from .asymptotics import (
    GridFunction,
    OnsetFit,
    SeriesMinimum,
    StencilWeights,
    apply_stencil,
    cayley_series_minimum,
    contraction_onset_expansion,
    fornberg_weights,
    grid_function,
    peano_estimate,
)
from .cayley import (
    CayleyPair,
    PreservationReport,
    cayley_forward,
    cayley_inverse,
    cayley_transform_matrix,
    inverse_cayley_matrix,
    verify_index_preservation,
)
from .coercivity import (
    ContinuousSystem,
    DecayExpansion,
    IndexReport,
    ShortTimeFit,
    certify_semidissipative,
    decay_constant,
    fit_short_time_expansion,
    hypocoercivity_index,
    norm_deficiency,
    propagator_norm,
)
from .contractivity import (
    DiscreteSystem,
    certify_semicontractive,
    hypocontractivity_index,
    power_norms,
)
from .hilbertform import (
    HilbertMinimum,
    KernelCheckReport,
    hilbert_inverse_entry,
    hilbert_min,
    psd_kernel_check,
)
from .linalg import (
    DEFAULT_TOL,
    HermitianSplit,
    SpectralData,
    Tolerances,
    eigendata,
    expm,
    hermitian_split,
    nullspace_basis,
    psd_sqrt,
    solve_lyapunov,
    solve_stein,
    spectral_norm,
    spectral_norm_2x2_real,
)
from .matrixio import load_matrix, matrix_from_dict, matrix_to_dict, save_matrix
from .transform import (
    AmplificationReport,
    TransformResult,
    error_amplification_report,
    maximally_coercive,
    maximally_contractive,
)

__all__ = [name for name in dir() if not name.startswith("_")]
