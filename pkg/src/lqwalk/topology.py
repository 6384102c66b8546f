"""
Graph topologies for the walk: undirected line, directed ring, binary tree.

Every topology maps its position labels to array indices ``0 .. n_sites-1``.
Walker amplitudes are stored as an array of shape ``(degree + 1, n_sites)``:
row ``c`` holds coin direction ``c``, with the self-loop in the last row.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "BoundaryError",
    "LeafAmplitudeError",
    "Topology",
    "UndirectedLine",
    "DirectedRing",
    "BinaryTree",
]


class BoundaryError(RuntimeError):
    """Amplitude tried to leave a finite undirected line."""


class LeafAmplitudeError(RuntimeError):
    """Non-loop amplitude sits on a tree leaf, which has no outgoing edges."""


class Topology:
    """Common interface; concrete subclasses are frozen dataclasses."""

    degree: int
    directions: tuple[str, ...]
    default_target: str

    @property
    def n_sites(self) -> int:
        raise NotImplementedError

    @property
    def coin_dim(self) -> int:
        return self.degree + 1

    @property
    def loop(self) -> int:
        """Index of the self-loop direction."""
        return self.degree

    @property
    def labels(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def start(self) -> int:
        raise NotImplementedError

    def index(self, position: int) -> int:
        raise NotImplementedError

    def label(self, index: int) -> int:
        return int(self.labels[index])

    def direction(self, name_or_index) -> int:
        if isinstance(name_or_index, str):
            try:
                return self.directions.index(name_or_index)
            except ValueError:
                raise ValueError(
                    f"unknown direction {name_or_index!r}; expected one of {self.directions}"
                ) from None
        d = int(name_or_index)
        if not 0 <= d < self.coin_dim:
            raise ValueError(f"direction index {d} out of range for {type(self).__name__}")
        return d

    def shift_target(self, direction, position: int) -> int | None:
        """Position reached from ``position`` along ``direction``, or None if absent."""
        raise NotImplementedError

    def shift(self, amps: np.ndarray) -> np.ndarray:
        """Apply the shift to an amplitude array of shape ``(coin_dim, n_sites)``."""
        raise NotImplementedError

    def position_observable(self, position: int) -> float:
        return float(self.observable[self.index(position)])

    @property
    def observable(self) -> np.ndarray:
        """Observable value (coordinate or level) per array index."""
        raise NotImplementedError

    def absorbing_set(self, target: str | None = None) -> frozenset[int]:
        raise NotImplementedError

    def absorbing_indices(self, positions) -> np.ndarray:
        return np.array(sorted(self.index(p) for p in positions), dtype=np.intp)


def _check_int(name, value, minimum):
    if isinstance(value, bool) or int(value) != value:
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


@dataclass(frozen=True)
class UndirectedLine(Topology):
    """Sites ``-half_width .. half_width``; coin basis (left, right, loop)."""

    half_width: int

    degree = 2
    directions = ("left", "right", "loop")
    default_target = ""

    def __post_init__(self):
        object.__setattr__(self, "half_width", _check_int("half_width", self.half_width, 1))

    @property
    def n_sites(self) -> int:
        return 2 * self.half_width + 1

    @cached_property
    def labels(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    @property
    def start(self) -> int:
        return 0

    def index(self, position: int) -> int:
        if not -self.half_width <= position <= self.half_width:
            raise ValueError(f"position {position} outside -{self.half_width}..{self.half_width}")
        return int(position) + self.half_width

    def shift_target(self, direction, position: int) -> int | None:
        d = self.direction(direction)
        self.index(position)
        target = position + (-1, 1, 0)[d]
        if abs(target) > self.half_width:
            raise BoundaryError(f"step from {position} along {self.directions[d]} leaves the line")
        return target

    def shift(self, amps: np.ndarray) -> np.ndarray:
        if amps[0, 0] != 0 or amps[1, -1] != 0:
            raise BoundaryError(
                f"walker reached the boundary of a line with half_width={self.half_width}"
            )
        out = np.empty_like(amps)
        out[0, :-1] = amps[0, 1:]
        out[0, -1] = 0
        out[1, 1:] = amps[1, :-1]
        out[1, 0] = 0
        out[2] = amps[2]
        return out

    @cached_property
    def observable(self) -> np.ndarray:
        return self.labels.astype(float)

    def absorbing_set(self, target: str | None = None) -> frozenset[int]:
        raise ValueError("the undirected line has no absorbing target")


@dataclass(frozen=True)
class DirectedRing(Topology):
    """Sites ``0 .. size-1`` with periodic wrap; coin basis (forward, loop)."""

    size: int

    degree = 1
    directions = ("forward", "loop")
    default_target = "last_site"

    def __post_init__(self):
        object.__setattr__(self, "size", _check_int("size", self.size, 2))

    @property
    def n_sites(self) -> int:
        return self.size

    @cached_property
    def labels(self) -> np.ndarray:
        return np.arange(self.size)

    @property
    def start(self) -> int:
        return 0

    def index(self, position: int) -> int:
        if not 0 <= position < self.size:
            raise ValueError(f"position {position} outside 0..{self.size - 1}")
        return int(position)

    def shift_target(self, direction, position: int) -> int | None:
        d = self.direction(direction)
        self.index(position)
        return (position + 1) % self.size if d == 0 else int(position)

    def shift(self, amps: np.ndarray) -> np.ndarray:
        out = np.empty_like(amps)
        out[0, 1:] = amps[0, :-1]
        out[0, 0] = amps[0, -1]
        out[1] = amps[1]
        return out

    @cached_property
    def observable(self) -> np.ndarray:
        return self.labels.astype(float)

    def absorbing_set(self, target: str | None = None) -> frozenset[int]:
        target = target or self.default_target
        if target != "last_site":
            raise ValueError(f"unsupported target {target!r} for a directed ring")
        return frozenset({self.size - 1})


@dataclass(frozen=True)
class BinaryTree(Topology):
    """
    Perfect binary tree of the given depth, nodes labelled ``1 .. 2**(depth+1)-1``.

    Node ``i`` sits at level ``floor(log2 i)``; its children are ``2i`` (down)
    and ``2i+1`` (up). Coin basis is (down, up, loop).
    """

    depth: int

    degree = 2
    directions = ("down", "up", "loop")
    default_target = "all_leaves"

    def __post_init__(self):
        object.__setattr__(self, "depth", _check_int("depth", self.depth, 1))

    @property
    def n_sites(self) -> int:
        return 2 ** (self.depth + 1) - 1

    @property
    def n_internal(self) -> int:
        return 2**self.depth - 1

    @cached_property
    def labels(self) -> np.ndarray:
        return np.arange(1, self.n_sites + 1)

    @property
    def start(self) -> int:
        return 1

    def index(self, position: int) -> int:
        if not 1 <= position <= self.n_sites:
            raise ValueError(f"node {position} outside 1..{self.n_sites}")
        return int(position) - 1

    def is_leaf(self, position: int) -> bool:
        self.index(position)
        return position > self.n_internal

    def shift_target(self, direction, position: int) -> int | None:
        d = self.direction(direction)
        self.index(position)
        if d == 2:
            return int(position)
        if self.is_leaf(position):
            return None
        return 2 * position + d

    def shift(self, amps: np.ndarray) -> np.ndarray:
        m = self.n_internal
        if np.any(amps[:2, m:]):
            raise LeafAmplitudeError(
                "non-loop amplitude on a leaf; tree walks must run in measured mode"
            )
        out = np.zeros_like(amps)
        # node i (index i-1) -> 2i (index 2i-1) and 2i+1 (index 2i)
        out[0, 1::2] = amps[0, :m]
        out[1, 2::2] = amps[1, :m]
        out[2] = amps[2]
        return out

    @cached_property
    def observable(self) -> np.ndarray:
        # exact integer levels; avoids float log2 rounding
        return np.array([int(i).bit_length() - 1 for i in self.labels], dtype=float)

    def level(self, position: int) -> int:
        self.index(position)
        return int(position).bit_length() - 1

    def leaves(self) -> range:
        return range(2**self.depth, 2 ** (self.depth + 1))

    def absorbing_set(self, target: str | None = None) -> frozenset[int]:
        target = target or self.default_target
        if target != "all_leaves":
            raise ValueError(f"unsupported target {target!r} for a binary tree")
        return frozenset(self.leaves())
