"""
Parameter sweeps over loop weight and alpha, run row by row.

Rows are independent evolutions. With ``jobs > 1`` they are farmed out to a
process pool; results always come back in input order, so output does not
depend on the degree of parallelism.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .classical import classical_hitting_time, classical_mean_position
from .coin import Alpha, format_alpha
from .evolve import quantum_mean_position
from .hitting import DEFAULT_EPSILON, DEFAULT_MAX_STEPS, MeasuredWalk, first_crossing_series
from .topology import Topology

__all__ = [
    "DEFAULT_ALPHAS",
    "log_grid",
    "MeanRow",
    "HittingRow",
    "sweep_loop",
    "sweep_alpha",
    "hitting_sweep",
]

DEFAULT_ALPHAS: tuple[Alpha, ...] = (0.0, 1.0, "l", math.inf)


def log_grid(start: float, stop: float, points: int) -> np.ndarray:
    """Logarithmically spaced grid including both ends."""
    if not (start > 0 and stop > 0):
        raise ValueError("log grid bounds must be strictly positive")
    if points < 1:
        raise ValueError("grid needs at least one point")
    if points == 1:
        return np.array([float(start)])
    return np.geomspace(start, stop, int(points))


def _map(func, items, jobs):
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


@dataclass
class MeanRow:
    key: float
    quantum: dict[str, float] = field(default_factory=dict)
    classical: dict[str, float] = field(default_factory=dict)
    status: str = "ok"


@dataclass
class HittingRow:
    l: float
    tau_quantum: dict[str, float] = field(default_factory=dict)
    T_quantum: dict[str, float] = field(default_factory=dict)
    residual: dict[str, float] = field(default_factory=dict)
    tau_classical: float = math.nan
    T_classical: float = math.nan
    status: str = "ok"


def _failure(exc: Exception) -> str:
    return f"failed: {type(exc).__name__}: {exc}".replace(",", ";")


def _loop_row(l, topology, alphas, steps, include_absorbed):
    row = MeanRow(float(l))
    problems = []
    for a in alphas:
        name = format_alpha(a)
        try:
            row.quantum[name] = quantum_mean_position(topology, l, a, steps, include_absorbed)
        except (ValueError, RuntimeError) as exc:
            row.quantum[name] = math.nan
            problems.append(f"alpha={name} {_failure(exc)}")
    try:
        row.classical["classical"] = classical_mean_position(topology, l, steps)
    except (ValueError, RuntimeError) as exc:
        row.classical["classical"] = math.nan
        problems.append(f"classical {_failure(exc)}")
    if problems:
        row.status = " | ".join(problems)
    return row


def sweep_loop(
    topology: Topology,
    l_values,
    steps: int,
    alphas=DEFAULT_ALPHAS,
    include_absorbed: bool = True,
    jobs: int = 1,
) -> list[MeanRow]:
    """Mean position (quantum per alpha, and classical) for each loop weight, sorted by ``l``."""
    ls = sorted(float(v) for v in l_values)
    func = partial(_loop_row, topology=topology, alphas=tuple(alphas), steps=steps,
                   include_absorbed=include_absorbed)
    return _map(func, ls, jobs)


def _alpha_row(alpha, topology, l_values, steps, include_absorbed):
    row = MeanRow(float(alpha))
    problems = []
    for l in l_values:
        name = format(l, ".12g")
        try:
            row.quantum[name] = quantum_mean_position(topology, l, alpha, steps, include_absorbed)
        except (ValueError, RuntimeError) as exc:
            row.quantum[name] = math.nan
            problems.append(f"l={name} {_failure(exc)}")
        try:
            row.classical[name] = classical_mean_position(topology, l, steps)
        except (ValueError, RuntimeError) as exc:
            row.classical[name] = math.nan
            problems.append(f"classical l={name} {_failure(exc)}")
    if problems:
        row.status = " | ".join(problems)
    return row


def sweep_alpha(
    topology: Topology,
    alpha_values,
    l_values,
    steps: int,
    include_absorbed: bool = True,
    jobs: int = 1,
) -> list[MeanRow]:
    """Mean position against finite ``alpha`` at each fixed loop weight, sorted by ``alpha``."""
    alphas = sorted(float(a) for a in alpha_values)
    for a in alphas:
        if not math.isfinite(a) or a < 0:
            raise ValueError(f"alpha grid values must be finite and >= 0, got {a}")
    func = partial(_alpha_row, topology=topology, l_values=tuple(float(v) for v in l_values),
                   steps=steps, include_absorbed=include_absorbed)
    return _map(func, alphas, jobs)


def _hitting_row(l, topology, alphas, epsilon, max_steps):
    row = HittingRow(float(l))
    problems = []
    for a in alphas:
        name = format_alpha(a)
        try:
            res = first_crossing_series(
                MeasuredWalk(topology, l, a, epsilon=epsilon, max_steps=max_steps)
            )
            row.tau_quantum[name] = res.tau_est
            row.T_quantum[name] = res.truncation_time
            row.residual[name] = res.residual
        except (ValueError, RuntimeError) as exc:
            row.tau_quantum[name] = row.T_quantum[name] = row.residual[name] = math.nan
            problems.append(f"alpha={name} {_failure(exc)}")
    try:
        res = classical_hitting_time(topology, l, epsilon=epsilon, max_steps=max_steps)
        row.tau_classical = res.tau_est
        row.T_classical = res.truncation_time
    except (ValueError, RuntimeError) as exc:
        problems.append(f"classical {_failure(exc)}")
    if problems:
        row.status = " | ".join(problems)
    return row


def hitting_sweep(
    topology: Topology,
    l_values,
    alphas=DEFAULT_ALPHAS,
    epsilon: float = DEFAULT_EPSILON,
    max_steps: int = DEFAULT_MAX_STEPS,
    jobs: int = 1,
) -> list[HittingRow]:
    """
    Quantum (per alpha) and classical truncated mean hitting times per loop weight.

    A row whose walk exceeds ``max_steps`` is kept, with NaN values and a
    ``failed`` status; the sweep continues.
    """
    ls = sorted(float(v) for v in l_values)
    for l in ls:
        if not (math.isfinite(l) and l >= 0):
            raise ValueError(f"loop weights must be finite and >= 0, got {l}")
    func = partial(_hitting_row, topology=topology, alphas=tuple(alphas), epsilon=epsilon,
                   max_steps=max_steps)
    return _map(func, ls, jobs)
