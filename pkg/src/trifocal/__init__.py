"""Trifocal tensor toolkit: construction, camera recovery, internal
constraints and a minimal 22-parameter parameterization, over exact
rationals or floats."""

from .constraints import (
    ConstraintReport,
    axes_constraints,
    central_circular,
    circular_constraints,
    double_root,
    eigen_constraints,
    pencil_base,
    epipolar_constraints,
    extended_rank_coeffs,
    fixed_epipolar_polynomials,
    rank_constraints,
    validity_report,
)
from .extraction import epipoles, fundamental_12, recover_cameras, slice_null_vectors
from .linalg import DegenerateError, equal_up_to_scale
from .param import (
    ChartError,
    ParamError,
    ParamVector,
    params_to_tensor,
    random_ablated_tensor,
    random_valid_tensor,
    tensor_to_params,
)
from .scalars import Kind, parse_scalar
from .tensor import Camera, TrifocalTensor, homography_12, point_contract, tensor_from_cameras, transfer_line

__version__ = "0.1.0"
