"""Shared fixtures and independent dense reference implementations.

The oracles here are written from the definitions alone: explicit coin
matrix, explicit permutation of basis states, explicit projectors. They do
not call into the package's shift or coin code.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def ref_coin(d: int, l: float) -> np.ndarray:
    s = np.ones(d + 1)
    s[-1] = math.sqrt(l)
    s /= math.sqrt(d + l)
    return 2.0 * np.outer(s, s) - np.eye(d + 1)


def ref_coin_state(d: int, l: float, alpha) -> np.ndarray:
    if alpha == "l":
        alpha = l
    if math.isinf(alpha):
        v = np.zeros(d + 1)
        v[-1] = 1.0
        return v
    v = np.ones(d + 1)
    v[-1] = math.sqrt(alpha)
    return v / math.sqrt(d + alpha)


class RefGraph:
    """Sites, moves and start of one topology, from first principles."""

    def __init__(self, kind: str, size: int):
        self.kind = kind
        if kind == "ring":
            self.labels = list(range(size))
            self.d = 1
            self.start = 0
        elif kind == "line":
            self.labels = list(range(-size, size + 1))
            self.d = 2
            self.start = 0
        elif kind == "tree":
            self.labels = list(range(1, 2 ** (size + 1)))
            self.d = 2
            self.start = 1
            self.depth = size
        else:
            raise ValueError(kind)
        self.n = len(self.labels)
        self.pos = {x: i for i, x in enumerate(self.labels)}

    def move(self, c: int, x: int):
        """Destination label of direction ``c`` at ``x``; None if it leaves the graph."""
        if c == self.d:
            return x
        if self.kind == "ring":
            return (x + 1) % self.n
        if self.kind == "line":
            y = x - 1 if c == 0 else x + 1
            return y if y in self.pos else None
        y = 2 * x + c
        return y if y in self.pos else None

    def leaves(self):
        return [x for x in self.labels if x >= 2 ** self.depth] if self.kind == "tree" else []

    def observable(self):
        if self.kind == "tree":
            return np.array([x.bit_length() - 1 for x in self.labels], dtype=float)
        return np.array(self.labels, dtype=float)

    def basis(self, c: int, x: int) -> int:
        # coin index is the slow index
        return c * self.n + self.pos[x]

    def shift(self) -> np.ndarray:
        D = (self.d + 1) * self.n
        S = np.zeros((D, D))
        for c in range(self.d + 1):
            for x in self.labels:
                y = self.move(c, x)
                if y is not None:
                    S[self.basis(c, y), self.basis(c, x)] = 1.0
        return S

    def walk_operator(self, l: float) -> np.ndarray:
        return self.shift() @ np.kron(ref_coin(self.d, l), np.eye(self.n))

    def initial(self, l: float, alpha) -> np.ndarray:
        psi = np.zeros((self.d + 1) * self.n, dtype=complex)
        chi = ref_coin_state(self.d, l, alpha)
        for c in range(self.d + 1):
            psi[self.basis(c, self.start)] = chi[c]
        return psi

    def position_probs(self, psi: np.ndarray) -> np.ndarray:
        return (np.abs(psi.reshape(self.d + 1, self.n)) ** 2).sum(axis=0)

    def projector(self, targets) -> np.ndarray:
        D = (self.d + 1) * self.n
        P = np.zeros((D, D))
        for c in range(self.d + 1):
            for x in targets:
                k = self.basis(c, x)
                P[k, k] = 1.0
        return P


def ref_evolve(graph: RefGraph, l: float, alpha, t: int) -> np.ndarray:
    """Unmeasured state after ``t`` steps (not for trees)."""
    U = graph.walk_operator(l)
    psi = graph.initial(l, alpha)
    for _ in range(t):
        psi = U @ psi
    return psi


def ref_tree_levels(depth: int, l: float, alpha, t: int) -> np.ndarray:
    """Level distribution on a tree whose leaves are measured out each step."""
    g = RefGraph("tree", depth)
    U = g.walk_operator(l)
    P = g.projector(g.leaves())
    Q = np.eye(len(P)) - P
    psi = g.initial(l, alpha)
    levels = np.zeros(depth + 1)
    obs = g.observable().astype(int)
    for _ in range(t):
        phi = U @ psi
        hit = g.position_probs(P @ phi)
        for i, p in enumerate(hit):
            levels[obs[i]] += p
        psi = Q @ phi
    for i, p in enumerate(g.position_probs(psi)):
        levels[obs[i]] += p
    return levels


def ref_first_crossing(graph: RefGraph, l: float, alpha, targets, steps: int) -> np.ndarray:
    """Density-operator form: p(t) = Tr[P U (Q U)^(t-1) rho (...)^dag U^dag P]."""
    U = graph.walk_operator(l)
    P = graph.projector(targets)
    Q = np.eye(len(P)) - P
    psi = graph.initial(l, alpha)
    rho = np.outer(psi, psi.conj())
    out = []
    for _ in range(steps):
        rho = U @ rho @ U.conj().T
        out.append(float(np.real(np.trace(P @ rho @ P))))
        rho = Q @ rho @ Q
    return np.array(out)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
