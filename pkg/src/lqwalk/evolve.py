"""
Matrix-free time evolution of the lackadaisical quantum walk.

One step applies the coin to every position block and then the shift
permutation of the topology. Operators are never materialized.

Walks on a binary tree always run in measured mode: after each step the
amplitude on the leaves is recorded as absorbed probability and removed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coin import Alpha, CoinSpec, build_grover_coin, build_initial_coin_state, resolve_alpha
from .topology import BinaryTree, DirectedRing, Topology, UndirectedLine

__all__ = [
    "WalkConfig",
    "WalkerState",
    "PositionDistribution",
    "initial_state",
    "step",
    "evolve",
    "position_distribution",
    "mean_position",
    "std_position",
    "quantum_mean_position",
]


@dataclass(frozen=True)
class WalkConfig:
    """
    Full description of a (non-hitting) quantum walk experiment.

    Size rules keep the wavefront away from the edges: an undirected line
    needs ``half_width >= steps`` and a directed ring ``size >= steps + 2``.
    """

    topology: Topology
    loop_weight: float
    alpha: Alpha = 0.0
    steps: int = 0
    check_size: bool = True

    def __post_init__(self):
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 0:
            raise ValueError(f"steps must be a non-negative integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "loop_weight", self.coin.loop_weight)
        resolve_alpha(self.alpha, self.loop_weight)
        if not self.check_size:
            return
        topo = self.topology
        if isinstance(topo, UndirectedLine) and topo.half_width < self.steps:
            raise ValueError(
                f"undirected line half_width={topo.half_width} < steps={self.steps}"
            )
        if isinstance(topo, DirectedRing) and topo.size < self.steps + 2:
            raise ValueError(
                f"directed ring size={topo.size} < steps + 2 = {self.steps + 2}; "
                "the wavefront would wrap"
            )

    @property
    def coin(self) -> CoinSpec:
        return CoinSpec(self.topology.degree, self.loop_weight)

    @property
    def alpha_value(self) -> float:
        return resolve_alpha(self.alpha, self.loop_weight)

    @property
    def measured(self) -> bool:
        return isinstance(self.topology, BinaryTree)

    @property
    def absorbing(self) -> frozenset[int]:
        return self.topology.absorbing_set() if self.measured else frozenset()


@dataclass
class WalkerState:
    """
    Amplitudes of shape ``(coin_dim, n_sites)`` plus absorbed-probability bookkeeping.

    ``absorbed`` maps a time step to the probability removed at that step;
    ``absorbed_at`` accumulates the removed probability per position index.
    """

    amplitudes: np.ndarray
    time: int = 0
    absorbed: dict[int, float] = field(default_factory=dict)
    absorbed_at: np.ndarray | None = None

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.absorbed_at is None:
            self.absorbed_at = np.zeros(self.amplitudes.shape[1])

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def absorbed_total(self) -> float:
        return float(sum(self.absorbed.values()))

    @property
    def total_probability(self) -> float:
        return self.norm_sq + self.absorbed_total


@dataclass(frozen=True)
class PositionDistribution:
    probabilities: np.ndarray
    time: int
    includes_absorbed: bool

    @property
    def total(self) -> float:
        return float(self.probabilities.sum())


def initial_state(config: WalkConfig) -> WalkerState:
    """Product of the initial coin state and the start vertex."""
    topo = config.topology
    amps = np.zeros((topo.coin_dim, topo.n_sites), dtype=np.complex128)
    amps[:, topo.index(topo.start)] = build_initial_coin_state(config.coin, config.alpha)
    return WalkerState(amps)


def _apply(amps, coin, topology, absorb_idx):
    out = topology.shift(coin @ amps)
    if absorb_idx is None or len(absorb_idx) == 0:
        return out, None
    block = out[:, absorb_idx]
    p = (block.real**2 + block.imag**2).sum(axis=0)
    out[:, absorb_idx] = 0
    return out, p


def _absorb_idx(config):
    if not config.measured:
        return None
    return config.topology.absorbing_indices(config.absorbing)


def step(state: WalkerState, config: WalkConfig, coin: np.ndarray | None = None) -> WalkerState:
    """
    Advance ``state`` by one application of ``S (C x I)``.

    In measured mode (trees) the leaf probability is recorded and projected
    out afterwards. ``coin`` overrides the Grover coin of ``config``.
    """
    if state.amplitudes.shape != (config.topology.coin_dim, config.topology.n_sites):
        raise ValueError(
            f"state shape {state.amplitudes.shape} does not match the topology"
        )
    if coin is None:
        coin = build_grover_coin(config.coin)
    idx = _absorb_idx(config)
    amps, p = _apply(state.amplitudes, coin, config.topology, idx)
    new = WalkerState(amps, state.time + 1, dict(state.absorbed), state.absorbed_at.copy())
    if p is not None:
        new.absorbed[new.time] = float(p.sum())
        new.absorbed_at[idx] += p
    return new


def evolve(config: WalkConfig, coin: np.ndarray | None = None) -> WalkerState:
    """Evolve the initial state for ``config.steps`` steps."""
    if coin is None:
        coin = build_grover_coin(config.coin)
    state = initial_state(config)
    idx = _absorb_idx(config)
    amps = state.amplitudes
    for t in range(1, config.steps + 1):
        amps, p = _apply(amps, coin, config.topology, idx)
        if p is not None:
            state.absorbed[t] = float(p.sum())
            state.absorbed_at[idx] += p
    state.amplitudes = amps
    state.time = config.steps
    return state


def position_distribution(
    state: WalkerState, topology: Topology, include_absorbed: bool = True
) -> PositionDistribution:
    """Trace out the coin: ``P_n = sum_c |psi(c, n)|^2``, optionally adding absorbed mass."""
    a = state.amplitudes
    p = (a.real**2 + a.imag**2).sum(axis=0)
    if include_absorbed:
        p = p + state.absorbed_at
    return PositionDistribution(p, state.time, include_absorbed)


def mean_position(dist: PositionDistribution, topology: Topology) -> float:
    return float(dist.probabilities @ topology.observable)


def std_position(dist: PositionDistribution, topology: Topology) -> float:
    x = topology.observable
    p = dist.probabilities
    m = p @ x
    var = p @ (x - m) ** 2
    return float(np.sqrt(max(var, 0.0)))


def quantum_mean_position(
    topology: Topology, loop_weight: float, alpha: Alpha, steps: int, include_absorbed: bool = True
) -> float:
    """Shortcut: mean position (or mean level) of the quantum walker after ``steps``."""
    config = WalkConfig(topology, loop_weight, alpha, steps)
    dist = position_distribution(evolve(config), topology, include_absorbed)
    return mean_position(dist, topology)
