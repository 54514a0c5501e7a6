"""Two-photon cross sections for fractional optical collisions driven by entangled light."""

from .angular import clebsch_gordan, rotate_tensor, wigner_D_matrix, wigner_d_matrix, wigner_small_d
from .channels import (
    WORKED_CHANNELS,
    ChannelSpec,
    CollisionKinematics,
    Segment,
    TrajectoryCase,
    parse_channel,
    q_tensor,
    rank_kernel,
    recoil_kinematics,
)
from .cross_section import branching_ratios, control_contrast, recoil_oracle, total_cross_section
from .errors import ConfigurationError, DomainError, FracollError
from .light import (
    ClassicalLight,
    ExcessLight,
    OpoLightModel,
    WeakLimitLight,
    classicality_witness,
    pair_state,
)
from .polarization import enumerate_mode_quadruples, lab_scalar, phi_tensor

__version__ = "0.1.0"

__all__ = [
    "clebsch_gordan", "wigner_small_d", "wigner_d_matrix", "wigner_D_matrix", "rotate_tensor",
    "ChannelSpec", "parse_channel", "WORKED_CHANNELS", "Segment", "TrajectoryCase",
    "CollisionKinematics", "recoil_kinematics", "q_tensor", "rank_kernel",
    "total_cross_section", "recoil_oracle", "branching_ratios", "control_contrast",
    "OpoLightModel", "WeakLimitLight", "ExcessLight", "ClassicalLight", "classicality_witness", "pair_state",
    "phi_tensor", "lab_scalar", "enumerate_mode_quadruples",
    "FracollError", "DomainError", "ConfigurationError",
    "__version__",
]
