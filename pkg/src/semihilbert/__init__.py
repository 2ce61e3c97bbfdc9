"""Operator geometry on finite-dimensional semi-Hilbert spaces."""

from .core import (
    AttainmentBasis,
    ReducedOperator,
    SemiSpace,
    a_adjoint,
    a_inner,
    a_norm_vec,
    a_op_norm,
    a_op_norm_generalized,
    admits_a_adjoint,
    attainment_basis,
    is_a_bounded,
    reduced_operator,
)
from .errors import *  # noqa: F401,F403
from .orthogonality import (
    OrthogonalityVerdict,
    WSetForm,
    bs_property_check,
    compressed_form,
    contains_zero,
    is_birkhoff_orthogonal,
    w_is_singleton,
)
from .smoothness import (
    BlockReport,
    GateauxPair,
    SmoothnessReport,
    block_compose,
    block_smoothness_check,
    gateaux_derivatives,
    gateaux_fd,
    is_a_smooth,
    is_gateaux_differentiable,
    non_smooth_splitting,
)
from .spectral import PsdForm, decompose_psd, half_power, pinv_half, range_projector

__version__ = "0.1.0"
