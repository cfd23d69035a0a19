"""Grid realization of half-densities, operators and their evolution."""

from .evolution import (
    ClassicalState,
    CrankNicolson,
    HamiltonFlow,
    SolverError,
    classical_step_rk4,
    crank_nicolson_step,
    step_sizes,
)
from .frames import (
    Direction,
    FrameComparison,
    MovingFrame,
    SupportOverflowError,
    compare_frames,
    frame_transform_grid,
    moving_frame_hamiltonian,
)
from .grid import (
    GridError,
    GridSpec,
    GridState,
    PacketOutsideBoxError,
    gaussian_packet,
    inner_product,
    norm_squared,
    packet_tail_mass,
)
from .stencils import (
    OperatorError,
    apply_operator,
    evaluate_on_grid,
    expectation,
    hamiltonian_matrix,
)

__all__ = [
    "ClassicalState",
    "CrankNicolson",
    "Direction",
    "FrameComparison",
    "GridError",
    "GridSpec",
    "GridState",
    "HamiltonFlow",
    "MovingFrame",
    "OperatorError",
    "PacketOutsideBoxError",
    "SolverError",
    "SupportOverflowError",
    "apply_operator",
    "classical_step_rk4",
    "compare_frames",
    "crank_nicolson_step",
    "evaluate_on_grid",
    "expectation",
    "frame_transform_grid",
    "gaussian_packet",
    "hamiltonian_matrix",
    "inner_product",
    "moving_frame_hamiltonian",
    "norm_squared",
    "packet_tail_mass",
    "step_sizes",
]
