"""
Classical lackadaisical random walk, evolved exactly with transfer rules.

Transition probabilities are proportional to edge weights: every non-loop
edge has weight 1 and the self-loop has weight ``l``. So the directed ring
moves forward with probability ``1/(1+l)``, the undirected line moves left
or right with ``1/(2+l)`` each, and a tree node passes ``1/(2+l)`` to each
child. Tree leaves keep their mass (absorbing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hitting import DEFAULT_EPSILON, DEFAULT_MAX_STEPS, HittingResult, make_result, run_first_crossing
from .topology import BinaryTree, BoundaryError, DirectedRing, Topology, UndirectedLine

__all__ = [
    "ClassicalDistribution",
    "transition_probabilities",
    "transfer_matrix",
    "classical_step",
    "classical_evolve",
    "classical_mean_position",
    "classical_std_position",
    "classical_hitting_time",
]


@dataclass
class ClassicalDistribution:
    """Probabilities over position indices, plus mass absorbed per step."""

    probabilities: np.ndarray
    time: int = 0
    absorbed: dict[int, float] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return float(self.probabilities.sum()) + float(sum(self.absorbed.values()))


def _check_loop(l):
    l = float(l)
    if not math.isfinite(l) or l < 0:
        raise ValueError(f"loop weight must be finite and >= 0, got {l}")
    return l


def transition_probabilities(topology: Topology, l: float) -> tuple[float, float]:
    """Return ``(move, stay)``: probability per outgoing edge and of the self-loop."""
    l = _check_loop(l)
    total = topology.degree + l
    return 1.0 / total, l / total


def _transfer(p: np.ndarray, topology: Topology, move: float, stay: float) -> np.ndarray:
    out = stay * p
    if isinstance(topology, DirectedRing):
        out[1:] += move * p[:-1]
        out[0] += move * p[-1]
    elif isinstance(topology, UndirectedLine):
        if p[0] or p[-1]:
            raise BoundaryError("classical walker reached the end of the line")
        out[:-1] += move * p[1:]
        out[1:] += move * p[:-1]
    elif isinstance(topology, BinaryTree):
        m = topology.n_internal
        out[m:] = p[m:]
        out[1::2] += move * p[:m]
        out[2::2] += move * p[:m]
    else:
        raise TypeError(f"unsupported topology {type(topology).__name__}")
    return out


def transfer_matrix(topology: Topology, l: float) -> np.ndarray:
    """
    Dense column-stochastic transfer matrix over position indices.

    Built edge by edge from ``shift_target``; meant for small systems and
    cross-checks, the evolution itself never forms it. Undirected-line
    columns at the two ends are left incomplete (the walk is never allowed
    to get there).
    """
    move, stay = transition_probabilities(topology, l)
    n = topology.n_sites
    T = np.zeros((n, n))
    for j, x in enumerate(topology.labels):
        x = int(x)
        if isinstance(topology, BinaryTree) and topology.is_leaf(x):
            T[j, j] = 1.0
            continue
        T[j, j] += stay
        for d in range(topology.degree):
            try:
                y = topology.shift_target(d, x)
            except BoundaryError:
                continue
            T[topology.index(y), j] += move
    return T


def classical_step(dist: ClassicalDistribution, topology: Topology, l: float) -> ClassicalDistribution:
    """One transfer step; absorbed bookkeeping is carried over unchanged."""
    move, stay = transition_probabilities(topology, l)
    p = _transfer(np.asarray(dist.probabilities, dtype=float), topology, move, stay)
    return ClassicalDistribution(p, dist.time + 1, dict(dist.absorbed))


def _point_mass(topology: Topology) -> np.ndarray:
    p = np.zeros(topology.n_sites)
    p[topology.index(topology.start)] = 1.0
    return p


def classical_evolve(topology: Topology, l: float, t: int) -> ClassicalDistribution:
    """Distribution after ``t`` steps from the start vertex."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    move, stay = transition_probabilities(topology, l)
    p = _point_mass(topology)
    for _ in range(int(t)):
        p = _transfer(p, topology, move, stay)
    return ClassicalDistribution(p, int(t))


def classical_mean_position(topology: Topology, l: float, t: int) -> float:
    return float(classical_evolve(topology, l, t).probabilities @ topology.observable)


def classical_std_position(topology: Topology, l: float, t: int) -> float:
    p = classical_evolve(topology, l, t).probabilities
    x = topology.observable
    m = p @ x
    return float(np.sqrt(max(p @ (x - m) ** 2, 0.0)))


def classical_hitting_time(
    topology: Topology,
    l: float,
    absorbing=None,
    epsilon: float = DEFAULT_EPSILON,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> HittingResult:
    """
    Iterate the absorbing chain until ``1 - epsilon`` of the mass has arrived.

    ``absorbing`` defaults to the topology's natural target set.
    """
    if absorbing is None:
        absorbing = topology.absorbing_set()
    idx = topology.absorbing_indices(absorbing)
    if len(idx) == 0:
        raise ValueError("absorbing set must be nonempty")
    if topology.index(topology.start) in set(idx.tolist()):
        raise ValueError("absorbing set must not contain the start vertex")
    move, stay = transition_probabilities(topology, l)
    p = _point_mass(topology)

    def advance():
        nonlocal p
        p = _transfer(p, topology, move, stay)
        hit = float(p[idx].sum())
        p[idx] = 0.0
        return hit

    probs = run_first_crossing(advance, epsilon, max_steps)
    return make_result(probs, survival=float(p.sum()))
