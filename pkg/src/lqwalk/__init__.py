"""Directed lackadaisical quantum walks and their classical counterparts."""

from .coin import (
    CoinSpec,
    build_grover_coin,
    build_initial_coin_state,
    coin_overlap,
    coin_pauli_decomposition,
    loop_coin_state,
)
from .topology import BinaryTree, DirectedRing, UndirectedLine
from .evolve import (
    WalkConfig,
    WalkerState,
    evolve,
    initial_state,
    mean_position,
    position_distribution,
    quantum_mean_position,
    std_position,
    step,
)
from .classical import classical_evolve, classical_hitting_time, classical_mean_position, classical_step
from .hitting import (
    HittingResult,
    MaxStepsExceeded,
    MeasuredWalk,
    first_crossing_series,
    mean_hitting_time,
)
from .analysis import analytic_mean_position, asymptotic_mean, fit_scaling_exponent, regime_report

__version__ = "0.1.0"
