"""
Self-checks run by ``lqwalk verify``.

Each check compares a production path with an independent oracle or a
closed form and returns a :class:`CheckResult`. ``coin_factory`` lets a
caller swap in a different coin (e.g. a deliberately broken one) to make
sure the checks can fail.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .analysis import analytic_mean_position, fit_scaling_exponent
from .classical import classical_mean_position
from .coin import CoinSpec, build_grover_coin, build_initial_coin_state, loop_coin_state
from .evolve import WalkConfig, evolve, position_distribution, quantum_mean_position
from .hitting import MeasuredWalk, first_crossing_probabilities, first_crossing_series
from .topology import BinaryTree, BoundaryError, DirectedRing, Topology, UndirectedLine

__all__ = [
    "CheckResult",
    "CHECKS",
    "PROPERTY_SUITE",
    "dense_shift",
    "dense_walk_operator",
    "dense_projector",
    "dense_first_crossing",
    "run_checks",
]

CoinFactory = Callable[[CoinSpec], np.ndarray]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: float
    expected: str
    seconds: float = 0.0
    detail: str = ""


# -- dense oracles -----------------------------------------------------------


def dense_shift(topology: Topology) -> np.ndarray:
    """Shift operator as an explicit matrix on ``coin (x) position``, from ``shift_target``.

    Edges that do not exist (tree leaves, line ends) give zero columns.
    """
    k, n = topology.coin_dim, topology.n_sites
    S = np.zeros((k * n, k * n))
    for c in range(k):
        for j, x in enumerate(topology.labels):
            try:
                y = topology.shift_target(c, int(x))
            except BoundaryError:
                continue
            if y is not None:
                S[c * n + topology.index(y), c * n + j] = 1.0
    return S


def dense_walk_operator(topology: Topology, coin: np.ndarray) -> np.ndarray:
    return dense_shift(topology) @ np.kron(coin, np.eye(topology.n_sites))


def dense_projector(topology: Topology, targets) -> np.ndarray:
    diag = np.zeros(topology.n_sites)
    for x in targets:
        diag[topology.index(x)] = 1.0
    return np.kron(np.eye(topology.coin_dim), np.diag(diag))


def dense_first_crossing(topology, coin, psi0, targets, steps) -> np.ndarray:
    """First-crossing probabilities via explicit density matrices and projectors."""
    U = dense_walk_operator(topology, coin)
    P = dense_projector(topology, targets)
    Q = np.eye(len(P)) - P
    QU = Q @ U
    rho = np.outer(psi0, psi0.conj())
    out = []
    M = np.eye(len(P))
    for _ in range(steps):
        A = P @ U @ M
        out.append(float(np.trace(A @ rho @ A.conj().T).real))
        M = QU @ M
    return np.array(out)


def _dense_evolve(config: WalkConfig, coin: np.ndarray) -> np.ndarray:
    topo = config.topology
    U = dense_walk_operator(topo, coin)
    psi = np.zeros(topo.coin_dim * topo.n_sites, dtype=complex)
    start = topo.index(topo.start)
    psi[start :: topo.n_sites] = build_initial_coin_state(config.coin, config.alpha)
    if config.measured:
        Q = np.eye(len(psi)) - dense_projector(topo, config.absorbing)
        U = Q @ U
    return np.linalg.matrix_power(U, config.steps) @ psi


# -- checks ------------------------------------------------------------------


def _random_alpha(rng):
    r = rng.random()
    if r < 0.15:
        return math.inf
    if r < 0.3:
        return "l"
    return float(10 ** rng.uniform(-2, 2))


def check_dense_oracle(coin_factory: CoinFactory = build_grover_coin, tol=1e-10) -> CheckResult:
    rng = np.random.default_rng(1)
    cases = [(DirectedRing(12), 10)]
    cases += [(DirectedRing(int(n)), int(rng.integers(0, 13))) for n in rng.integers(2, 17, 12)]
    cases += [(UndirectedLine(6), 6), (UndirectedLine(7), 5)]
    cases += [(BinaryTree(2), 4), (BinaryTree(3), 6), (BinaryTree(3), 12)]
    worst = 0.0
    for topo, t in cases:
        l = float(10 ** rng.uniform(-2, 2))
        config = WalkConfig(topo, l, _random_alpha(rng), t, check_size=False)
        coin = coin_factory(config.coin)
        fast = evolve(config, coin).amplitudes.reshape(-1)
        worst = max(worst, float(np.max(np.abs(fast - _dense_evolve(config, coin)))))
    return CheckResult("dense_oracle", worst < tol, worst, f"< {tol:g}")


def check_unitarity(coin_factory: CoinFactory = build_grover_coin, tol=1e-10, n_configs=200) -> CheckResult:
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(n_configs):
        kind = rng.integers(0, 3)
        t = int(rng.integers(0, 31))
        l = float(10 ** rng.uniform(-3, 3))
        alpha = _random_alpha(rng)
        if kind == 0:
            topo = DirectedRing(int(rng.integers(2, 40)))
        elif kind == 1:
            topo = UndirectedLine(max(t, 1))
        else:
            topo = BinaryTree(int(rng.integers(1, 7)))
        config = WalkConfig(topo, l, alpha, t, check_size=False)
        state = evolve(config, coin_factory(config.coin))
        worst = max(worst, abs(state.total_probability - 1.0))
    # measured-walk bookkeeping: ||psi_T||^2 + sum p = 1
    for _ in range(20):
        topo = DirectedRing(int(rng.integers(3, 30))) if rng.random() < 0.5 else BinaryTree(int(rng.integers(1, 5)))
        l = float(10 ** rng.uniform(-1, 1))
        walk = MeasuredWalk(topo, l, _random_alpha(rng), epsilon=1e-3, max_steps=10**5)
        try:
            res = first_crossing_series(walk, coin_factory(CoinSpec(topo.degree, l)))
        except RuntimeError:
            worst = max(worst, 1.0)
            continue
        worst = max(worst, abs(res.survival + res.captured - 1.0))
    return CheckResult("unitarity", worst < tol, worst, f"< {tol:g}")


def check_coin(coin_factory: CoinFactory = build_grover_coin, tol=1e-12) -> CheckResult:
    worst = 0.0
    for d in range(1, 9):
        for l in (0.0, 0.2, 1.0, 10.0, 1e6):
            spec = CoinSpec(d, l)
            C = coin_factory(spec)
            s = loop_coin_state(spec)
            I = np.eye(spec.dim)
            worst = max(
                worst,
                float(np.max(np.abs(C - C.T))),
                float(np.max(np.abs(C.T @ C - I))),
                float(np.max(np.abs(C @ C - I))),
                float(np.max(np.abs(C @ s - s))),
            )
    return CheckResult("coin_involution", worst < tol, worst, f"< {tol:g}")


def check_mirror(coin_factory: CoinFactory = build_grover_coin, tol=1e-10, t_max=60) -> CheckResult:
    worst = 0.0
    topo = DirectedRing(t_max + 2)
    for l in (0.2, 5.0):
        for t in range(t_max + 1):
            pa = _ring_distribution(topo, l, 1.0, t, coin_factory)
            pb = _ring_distribution(topo, 1.0 / l, 1.0, t, coin_factory)
            worst = max(worst, float(np.max(np.abs(pa[: t + 1] - pb[t::-1]))))
    return CheckResult("mirror_symmetry", worst < tol, worst, f"< {tol:g}")


def _ring_distribution(topo, l, alpha, t, coin_factory):
    config = WalkConfig(topo, l, alpha, t)
    return position_distribution(evolve(config, coin_factory(config.coin)), topo).probabilities


def check_hitting_density(coin_factory: CoinFactory = build_grover_coin, tol=1e-10) -> CheckResult:
    rng = np.random.default_rng(3)
    worst = 0.0
    cases = [DirectedRing(int(n)) for n in range(2, 9)] + [BinaryTree(1), BinaryTree(2)]
    for topo in cases:
        l = float(10 ** rng.uniform(-1, 1))
        alpha = _random_alpha(rng)
        walk = MeasuredWalk(topo, l, alpha)
        coin = coin_factory(walk.config.coin)
        fast = first_crossing_probabilities(walk, 10, coin)
        psi0 = np.zeros(topo.coin_dim * topo.n_sites, dtype=complex)
        psi0[topo.index(topo.start) :: topo.n_sites] = build_initial_coin_state(walk.config.coin, alpha)
        dense = dense_first_crossing(topo, coin, psi0, walk.targets, len(fast))
        worst = max(worst, float(np.max(np.abs(fast - dense))))
    return CheckResult("hitting_density", worst < tol, worst, f"< {tol:g}")


def check_scaling_table(coin_factory: CoinFactory = build_grover_coin) -> CheckResult:
    problems = []
    worst = 0.0
    ring = DirectedRing(202)
    for l in (0.0, 0.5, 1.0, 10.0, 1e4):
        for t in (1, 50, 100, 200):
            err = abs(classical_mean_position(ring, l, t) - t / (1.0 + l))
            worst = max(worst, err)
    if worst >= 1e-10:
        problems.append(f"classical mean off by {worst:.3g}")
    ring = DirectedRing(102)
    # alpha << 1, l << 1: flat in l
    vals = [quantum_mean_position(ring, l, 0.0, 100) for l in (1e-3, 1e-2, 1e-1)]
    spread = max(vals) / min(vals) - 1.0
    if spread >= 0.05:
        problems.append(f"alpha<<1,l<<1 spread {spread:.3g} (>= 0.05)")
    # alpha << 1, l >> 1: flat in l
    vals = [quantum_mean_position(ring, l, 0.0, 100) for l in (1e5, 1e6, 1e7)]
    spread = max(vals) / min(vals) - 1.0
    if spread >= 0.05:
        problems.append(f"alpha<<1,l>>1 spread {spread:.3g} (>= 0.05)")
    # alpha >> 1, l << 1: sqrt(l)
    ls = np.geomspace(1e-3, 1e-2, 6)
    k = fit_scaling_exponent(ls, [quantum_mean_position(ring, l, math.inf, 100) for l in ls]).exponent
    if abs(k - 0.5) >= 0.1:
        problems.append(f"alpha>>1,l<<1 exponent {k:.3g} (want 0.5)")
    # alpha >> 1, l >> 1: 1/l
    ls = np.geomspace(1e6, 1e8, 6)
    k = fit_scaling_exponent(ls, [quantum_mean_position(ring, l, math.inf, 100) for l in ls]).exponent
    if abs(k + 1.0) >= 0.1:
        problems.append(f"alpha>>1,l>>1 exponent {k:.3g} (want -1)")
    return CheckResult("scaling_table", not problems, worst, "classical < 1e-10; quantum cells", detail="; ".join(problems))


def check_closed_form(coin_factory: CoinFactory = build_grover_coin, tol=0.05) -> CheckResult:
    problems = []
    worst = 0.0
    t = 50
    ring = DirectedRing(t + 2)
    for alpha in (0.0, 1.0, 100.0):
        errs = []
        for l in (1e4, 1e5, 1e6):
            sim = quantum_mean_position(ring, l, alpha, t)
            err = abs(analytic_mean_position(alpha, l, t) - sim) / sim
            errs.append(err)
            worst = max(worst, err)
            if err > tol:
                problems.append(f"alpha={alpha:g} l={l:g} rel err {err:.3g}")
        if not all(a > b for a, b in zip(errs, errs[1:])):
            problems.append(f"alpha={alpha:g} error not shrinking: {errs}")
    return CheckResult("closed_form_agreement", not problems, worst, f"<= {tol:g}", detail="; ".join(problems))


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "dense_oracle": check_dense_oracle,
    "unitarity": check_unitarity,
    "coin_involution": check_coin,
    "mirror_symmetry": check_mirror,
    "hitting_density": check_hitting_density,
    "scaling_table": check_scaling_table,
    "closed_form_agreement": check_closed_form,
}

PROPERTY_SUITE = ("dense_oracle", "unitarity", "coin_involution", "mirror_symmetry", "hitting_density")


def run_checks(names=None, coin_factory: CoinFactory = build_grover_coin) -> list[CheckResult]:
    names = list(CHECKS) if names is None else list(names)
    results = []
    for name in names:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}; choose from {sorted(CHECKS)}")
        t0 = time.perf_counter()
        try:
            res = CHECKS[name](coin_factory=coin_factory)
        except Exception as exc:  # a crashing check is a failed check
            res = CheckResult(name, False, math.nan, "no exception", detail=f"{type(exc).__name__}: {exc}")
        results.append(
            CheckResult(res.name, res.passed, res.observed, res.expected, time.perf_counter() - t0, res.detail)
        )
    return results
