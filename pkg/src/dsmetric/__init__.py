"""Kernel angles and pseudo-metrics between dynamical systems observed as trajectory data."""

from .angles import Angle
from .kernels import KernelSpec, eval_kernel, gram_block, median_bandwidth, resolve_bandwidth
from .metric import (
    AngleResult,
    AngleSchedule,
    angle_AmT,
    estimate_Am,
    geometric_schedule,
    kernel_KmT,
    kernel_KmT_scaled,
    metric_distance,
    pairwise_angles,
    pairwise_gram,
    wedge_oracle_KmT,
)
from .trajectories import (
    ARModel,
    RotationSpec,
    TrajectorySet,
    ar_simulate,
    linear_simulate,
    load_ucr,
    rotation_orbit,
    time_delay_embed,
)

__version__ = "0.1.0"
