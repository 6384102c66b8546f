"""
Measured quantum walks and truncated mean hitting times.

The walk operator and a projective measurement onto the target vertices
alternate. With ``psi`` the unnormalized surviving state,

    p(t)   = || P U psi_{t-1} ||^2
    psi_t  = Q U psi_{t-1}

which for a pure initial state is the same as the density-operator trace
``Tr(P U [Q U]^{t-1} rho0 [U^+ Q]^{t-1} U^+ P)``. Iteration stops at the
first ``T`` with ``sum p(t) >= 1 - epsilon`` and the estimate
``tau_est = sum_{t<=T} t p(t)`` is a lower bound on the true mean hitting
time that tightens as ``epsilon -> 0``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .coin import Alpha, CoinSpec, build_grover_coin, resolve_alpha
from .evolve import WalkConfig, initial_state
from .topology import Topology

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_MAX_STEPS",
    "MaxStepsExceeded",
    "WalkerTrapped",
    "HittingResult",
    "MeasuredWalk",
    "MeasuredEvolution",
    "first_crossing_probabilities",
    "first_crossing_series",
    "mean_hitting_time",
]

DEFAULT_EPSILON = 1e-6
DEFAULT_MAX_STEPS = 10**7


class MaxStepsExceeded(RuntimeError):
    """The first-crossing mass did not reach ``1 - epsilon`` within the step cap."""

    def __init__(self, max_steps, captured, message=None):
        super().__init__(
            message
            or f"captured probability {captured:.6g} after {max_steps} steps; "
            "walker trapped or epsilon too small"
        )
        self.max_steps = max_steps
        self.captured = captured


class WalkerTrapped(MaxStepsExceeded):
    """The surviving state is an eigenvector of the walk that never meets the target."""


@dataclass(frozen=True)
class HittingResult:
    """
    First-crossing series and the truncated mean hitting time.

    ``first_crossing[k]`` is ``p(k + 1)``. ``survival`` is the probability
    left in the walker after ``truncation_time`` steps.
    """

    first_crossing: np.ndarray
    truncation_time: int
    tau_est: float
    residual: float
    survival: float = math.nan

    @property
    def times(self) -> np.ndarray:
        return np.arange(1, self.truncation_time + 1)

    @property
    def captured(self) -> float:
        return float(self.first_crossing.sum())


def _weighted_time(p) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.arange(1, len(p) + 1, dtype=float) @ p)


def run_first_crossing(
    advance: Callable[[], float], epsilon: float, max_steps: int
) -> list[float]:
    """Call ``advance`` (one step plus measurement) until ``1 - epsilon`` is captured."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    probs: list[float] = []
    total = 0.0
    goal = 1.0 - epsilon
    while total < goal:
        if len(probs) >= max_steps:
            raise MaxStepsExceeded(max_steps, total)
        p = advance()
        probs.append(p)
        total += p
    return probs


def make_result(probs, survival=math.nan) -> HittingResult:
    p = np.asarray(probs, dtype=float)
    return HittingResult(
        first_crossing=p,
        truncation_time=len(p),
        tau_est=_weighted_time(p),
        residual=float(1.0 - p.sum()),
        survival=float(survival),
    )


@dataclass(frozen=True)
class MeasuredWalk:
    """
    A quantum walk interleaved with measurements on ``targets``.

    ``targets`` defaults to the topology's natural absorbing set (last site
    of a directed ring, all leaves of a binary tree).
    """

    topology: Topology
    loop_weight: float
    alpha: Alpha = 0.0
    targets: frozenset[int] | None = None
    epsilon: float = DEFAULT_EPSILON
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        CoinSpec(self.topology.degree, self.loop_weight)
        resolve_alpha(self.alpha, self.loop_weight)
        targets = self.targets
        if targets is None:
            targets = self.topology.absorbing_set()
        targets = frozenset(int(x) for x in targets)
        if not targets:
            raise ValueError("projector set must be nonempty")
        for x in targets:
            self.topology.index(x)
        if self.topology.start in targets:
            raise ValueError("projector set must not contain the start vertex")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        object.__setattr__(self, "targets", targets)

    @property
    def config(self) -> WalkConfig:
        return WalkConfig(self.topology, self.loop_weight, self.alpha, 0, check_size=False)


def _is_phase_multiple(new: np.ndarray, old: np.ndarray) -> bool:
    k = int(np.argmax(np.abs(old)))
    if old.flat[k] == 0:
        return False
    phase = new.flat[k] / old.flat[k]
    return abs(abs(phase) - 1.0) < 1e-15 and bool(np.allclose(new, phase * old, rtol=0, atol=1e-15))


class MeasuredEvolution:
    """Stepwise measured walk: ``advance()`` applies U, measures, returns p(t)."""

    def __init__(self, walk: MeasuredWalk, coin: np.ndarray | None = None):
        config = walk.config
        self.coin = build_grover_coin(config.coin) if coin is None else coin
        self.topology = walk.topology
        self.idx = walk.topology.absorbing_indices(walk.targets)
        self.amps = initial_state(config).amplitudes
        self.time = 0

    def advance(self) -> float:
        old = self.amps
        amps = self.topology.shift(self.coin @ old)
        block = amps[:, self.idx]
        p = float((block.real**2 + block.imag**2).sum())
        amps[:, self.idx] = 0
        self.amps = amps
        self.time += 1
        if p == 0.0 and _is_phase_multiple(amps, old):
            raise WalkerTrapped(
                self.time, 0.0,
                f"surviving state is invariant under the walk after {self.time} steps; "
                "the target is never reached",
            )
        return p

    @property
    def survival(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


def first_crossing_probabilities(walk: MeasuredWalk, steps: int, coin: np.ndarray | None = None) -> np.ndarray:
    """``p(1) .. p(steps)`` for a fixed number of steps, ignoring epsilon."""
    run = MeasuredEvolution(walk, coin)
    return np.array([run.advance() for _ in range(steps)])


def first_crossing_series(walk: MeasuredWalk, coin: np.ndarray | None = None) -> HittingResult:
    """Run the measured walk until ``1 - epsilon`` of the probability has been detected."""
    run = MeasuredEvolution(walk, coin)
    probs = run_first_crossing(run.advance, walk.epsilon, walk.max_steps)
    return make_result(probs, run.survival)


def mean_hitting_time(result: HittingResult | Mapping[int, float] | Sequence[float]) -> float:
    """
    ``tau_est = sum_t t p(t)``.

    Accepts a :class:`HittingResult`, a mapping ``{t: p(t)}`` or a sequence
    ``[p(1), p(2), ...]``. Because the series is truncated, the value never
    exceeds the true mean hitting time.
    """
    if isinstance(result, HittingResult):
        return _weighted_time(result.first_crossing)
    if isinstance(result, Mapping):
        return float(sum(float(t) * float(p) for t, p in sorted(result.items())))
    return _weighted_time(result)
