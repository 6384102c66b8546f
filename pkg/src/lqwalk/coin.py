"""
Grover coins with a weighted self-loop.

The coin register of a walk with ``degree`` non-loop edges has dimension
``degree + 1``. Basis order is fixed for the whole package: the non-loop
directions ``0 .. degree-1`` come first and the self-loop is the last
basis vector.

The initial coin state is parameterized by ``alpha``, which may be

- a finite non-negative float,
- ``"l"``, meaning "equal to the loop weight" (the coin eigenstate), or
- ``math.inf``, meaning the pure self-loop state.

Note on the d=1 coin applied to the forward state: ``C|0>`` has self-loop
amplitude ``2*sqrt(l)/(1+l)``. A coefficient of ``sqrt(l)/(1+l)`` is
sometimes quoted for this quantity; it is not normalized and is not used
here. Likewise the undirected-line coin at ``l=0`` is ``sigma_x (+) [-1]``,
with ``-1`` on the loop block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Alpha",
    "CoinSpec",
    "build_grover_coin",
    "loop_coin_state",
    "build_initial_coin_state",
    "coin_overlap",
    "coin_pauli_decomposition",
    "resolve_alpha",
    "parse_alpha",
    "format_alpha",
]

Alpha = Union[float, str]
"""A finite float, ``math.inf`` or the string ``"l"``."""


@dataclass(frozen=True)
class CoinSpec:
    """Degree and self-loop weight of a lackadaisical Grover coin."""

    degree: int
    loop_weight: float

    def __post_init__(self):
        if isinstance(self.degree, bool) or int(self.degree) != self.degree:
            raise TypeError(f"degree must be an integer, got {self.degree!r}")
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")
        lw = float(self.loop_weight)
        if not math.isfinite(lw) or lw < 0:
            raise ValueError(f"loop_weight must be finite and >= 0, got {self.loop_weight!r}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "loop_weight", lw)

    @property
    def dim(self) -> int:
        return self.degree + 1


def _weighted_state(degree: int, weight: float) -> np.ndarray:
    vec = np.ones(degree + 1)
    vec[-1] = math.sqrt(weight)
    return vec / math.sqrt(degree + weight)


def loop_coin_state(spec: CoinSpec) -> np.ndarray:
    """Return the weighted uniform coin state ``|s_c>`` (the +1 eigenvector)."""
    return _weighted_state(spec.degree, spec.loop_weight)


def build_grover_coin(spec: CoinSpec) -> np.ndarray:
    """
    Return the real ``(d+1) x (d+1)`` Grover coin ``2|s_c><s_c| - I``.

    Parameters
    ----------
    spec : CoinSpec
        Coin degree and loop weight.

    Returns
    -------
    numpy.ndarray
        Symmetric, orthogonal, involutive float64 matrix.
    """
    s = loop_coin_state(spec)
    return 2.0 * np.outer(s, s) - np.eye(spec.dim)


def resolve_alpha(alpha: Alpha, loop_weight: float) -> float:
    """Turn an alpha mode into a float (``math.inf`` for the trapped state)."""
    if isinstance(alpha, str):
        key = alpha.strip().lower()
        if key == "l":
            return float(loop_weight)
        if key in ("inf", "infinity", "∞"):
            return math.inf
        raise ValueError(f"unknown alpha mode {alpha!r}")
    value = float(alpha)
    if math.isnan(value) or value < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    return value


def parse_alpha(text: str) -> Alpha:
    """Parse ``"l"``, ``"inf"`` or a decimal into an alpha mode."""
    key = text.strip().lower()
    if key == "l":
        return "l"
    if key in ("inf", "infinity", "∞"):
        return math.inf
    value = float(key)
    resolve_alpha(value, 0.0)
    return value


def format_alpha(alpha: Alpha) -> str:
    if isinstance(alpha, str):
        return alpha.strip().lower()
    if math.isinf(alpha):
        return "inf"
    return format(float(alpha), ".12g")


def build_initial_coin_state(spec: CoinSpec, alpha: Alpha) -> np.ndarray:
    """
    Return the normalized initial coin state ``|s_alpha>``.

    ``alpha="l"`` gives exactly ``|s_c>`` and ``alpha=inf`` gives exactly the
    self-loop basis vector.
    """
    value = resolve_alpha(alpha, spec.loop_weight)
    if math.isinf(value):
        vec = np.zeros(spec.dim)
        vec[-1] = 1.0
        return vec
    return _weighted_state(spec.degree, value)


def coin_overlap(spec: CoinSpec, alpha: Alpha) -> float:
    """
    Overlap ``<s_c|s_alpha>`` between the coin eigenstate and the initial state.

    For ``degree == 1`` the closed form
    ``(1 + sqrt(l*alpha)) / sqrt((1+l)(1+alpha))`` is used; otherwise the
    explicit dot product.
    """
    value = resolve_alpha(alpha, spec.loop_weight)
    l = spec.loop_weight
    if spec.degree == 1:
        if math.isinf(value):
            return math.sqrt(l / (1.0 + l))
        return (1.0 + math.sqrt(l * value)) / math.sqrt((1.0 + l) * (1.0 + value))
    return float(loop_coin_state(spec) @ build_initial_coin_state(spec, alpha))


def coin_pauli_decomposition(spec: CoinSpec) -> tuple[float, float]:
    """Coefficients ``(z, x)`` with ``C = z*sigma_z + x*sigma_x`` for a degree-1 coin."""
    if spec.degree != 1:
        raise ValueError(f"Pauli decomposition needs degree 1, got {spec.degree}")
    l = spec.loop_weight
    return (1.0 - l) / (l + 1.0), 2.0 * math.sqrt(l) / (l + 1.0)
