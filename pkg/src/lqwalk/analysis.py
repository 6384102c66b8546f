"""
Closed-form mean position at large loop weight, scaling laws, and log-log fits.

Two scaling regimes appear in the mean position of the directed walk with
a trapped initial coin state. They are separated by the scaled time
``t* = t / sqrt(l)``, equivalently by the crossover weight ``l* = t**2``.
Simulation puts the ``l**-1/2`` decay on the ``t* > 1`` side (``l < l*``)
and the ``l**-1`` decay on the ``t* < 1`` side (``l > l*``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats

__all__ = [
    "ANALYTIC_VALIDITY_THRESHOLD",
    "BOUNDARY_BAND",
    "analytic_mean_position",
    "analytic_l_dependent_part",
    "ScalingLaw",
    "asymptotic_mean",
    "SCALING_TABLE",
    "PowerLawFit",
    "fit_scaling_exponent",
    "RegimeReport",
    "regime_report",
    "crossover_windows",
]

ANALYTIC_VALIDITY_THRESHOLD = 10.0
BOUNDARY_BAND = 0.1


def _check_params(alpha, l, t):
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    l = float(l)
    if not l > 1 or not math.isfinite(l):
        raise ValueError(f"the large-l model needs finite l > 1, got {l}")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if l < ANALYTIC_VALIDITY_THRESHOLD:
        warnings.warn(
            f"l={l} is below {ANALYTIC_VALIDITY_THRESHOLD}; the large-l expansion is unreliable",
            RuntimeWarning,
            stacklevel=3,
        )
    return alpha, l, float(t)


def analytic_mean_position(alpha: float, l: float, t: int, truncated: bool = False) -> float:
    """
    Approximate mean position of the directed walk for ``l >> 1``.

    Default (``truncated=False``) is the simplified form

        (t - 4 sqrt(alpha) t / sqrt(l) + (alpha (2t^2 + 2t) + 2t^2 - 4t) / l) / (alpha + 1)

    with an ``O(l**-1.5)`` remainder. ``truncated=True`` keeps the
    ``((l-1)/(l+1))**k`` prefactors of the first three expansion terms,
    which behaves better at moderate ``l``. ``alpha=inf`` returns the limit.

    Raises
    ------
    ValueError
        If ``l <= 1``. A ``RuntimeWarning`` is issued when ``l < 10``.
    """
    alpha, l, t = _check_params(alpha, l, t)
    if truncated:
        r = (l - 1.0) / (l + 1.0)
        c = 2.0 * math.sqrt(l) / (l + 1.0)
        if math.isinf(alpha):
            return r ** (2 * t - 2) * c * c * (t * t + t) / 2.0
        return (
            r ** (2 * t) * t / (alpha + 1.0)
            - r ** (2 * t - 1) * 4.0 * t * math.sqrt(l * alpha) / ((l + 1.0) * (alpha + 1.0))
            + r ** (2 * t - 2) * c * c * (alpha * t * t + alpha * t + t * t - t) / (2.0 * (alpha + 1.0))
        )
    if math.isinf(alpha):
        return (2.0 * t * t + 2.0 * t) / l
    return (
        t
        - 4.0 * math.sqrt(alpha) * t / math.sqrt(l)
        + (alpha * (2.0 * t * t + 2.0 * t) + 2.0 * t * t - 4.0 * t) / l
    ) / (alpha + 1.0)


def analytic_l_dependent_part(alpha: float, l: float, t: int) -> float:
    """The simplified large-l model minus its ``l``-independent term ``t/(alpha+1)``."""
    alpha, l, t = _check_params(alpha, l, t)
    if math.isinf(alpha):
        return (2.0 * t * t + 2.0 * t) / l
    return (
        -4.0 * math.sqrt(alpha) * t / math.sqrt(l)
        + (alpha * (2.0 * t * t + 2.0 * t) + 2.0 * t * t - 4.0 * t) / l
    ) / (alpha + 1.0)


class ScalingLaw(NamedTuple):
    """``<x> ~ t**t_exponent * l**l_exponent``."""

    t_exponent: float
    l_exponent: float


SCALING_TABLE: dict[tuple[str, str, str], ScalingLaw] = {
    ("quantum", "small", "small"): ScalingLaw(1, 0),
    ("quantum", "small", "large"): ScalingLaw(2, 0),
    ("quantum", "large", "small"): ScalingLaw(1, 0.5),
    ("quantum", "large", "large"): ScalingLaw(2, -1),
    ("classical", "any", "small"): ScalingLaw(1, 0),
    ("classical", "any", "large"): ScalingLaw(1, -1),
}


def _regime_tag(tag: str) -> str:
    key = tag.strip().lower()
    aliases = {"small": "small", "<<1": "small", "low": "small", "large": "large", ">>1": "large", "high": "large"}
    if key not in aliases:
        raise ValueError(f"regime tag must be 'small' or 'large', got {tag!r}")
    return aliases[key]


def asymptotic_mean(alpha_regime: str, l_regime: str, walker: str = "quantum") -> ScalingLaw:
    """
    Asymptotic ``(t, l)`` exponents of the mean position in one regime cell.

    ``alpha_regime`` and ``l_regime`` are ``"small"`` (``<< 1``) or
    ``"large"`` (``>> 1``). The classical walker ignores ``alpha_regime``.
    """
    l_tag = _regime_tag(l_regime)
    if walker == "classical":
        return SCALING_TABLE[("classical", "any", l_tag)]
    if walker != "quantum":
        raise ValueError(f"walker must be 'quantum' or 'classical', got {walker!r}")
    return SCALING_TABLE[("quantum", _regime_tag(alpha_regime), l_tag)]


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line through ``(log l, log <x>)``."""

    exponent: float
    stderr: float
    log_prefactor: float
    l_min: float
    l_max: float
    n_samples: int

    @property
    def prefactor(self) -> float:
        return math.exp(self.log_prefactor)

    def predict(self, l) -> np.ndarray:
        return self.prefactor * np.asarray(l, dtype=float) ** self.exponent


def fit_scaling_exponent(l_values, mean_x) -> PowerLawFit:
    """
    Fit ``mean_x = c * l**k`` by ordinary least squares in log-log space.

    Needs at least 4 strictly positive samples spanning at least one
    decade in ``l``. ``stderr`` is the standard error of the slope.
    """
    l = np.asarray(l_values, dtype=float)
    y = np.asarray(mean_x, dtype=float)
    if l.shape != y.shape or l.ndim != 1:
        raise ValueError("l_values and mean_x must be 1-d and of equal length")
    if len(l) < 4:
        raise ValueError(f"need at least 4 samples, got {len(l)}")
    if np.any(~np.isfinite(l)) or np.any(~np.isfinite(y)) or np.any(l <= 0) or np.any(y <= 0):
        raise ValueError("samples must be finite and strictly positive")
    span = math.log10(l.max() / l.min())
    if span < 1.0 - 1e-9:
        raise ValueError(f"fit window spans {span:.3g} decades; at least 1 required")
    res = stats.linregress(np.log(l), np.log(y))
    return PowerLawFit(float(res.slope), float(res.stderr), float(res.intercept), float(l.min()), float(l.max()), len(l))


@dataclass(frozen=True)
class RegimeReport:
    t_star: float
    l_star: float
    regime: str


def regime_report(t: float, l: float) -> RegimeReport:
    """
    Scaled time ``t* = t/sqrt(l)``, crossover weight ``l* = t**2`` and regime.

    ``regime`` is ``"boundary"`` when ``|t* - 1| < 0.1``, otherwise
    ``"inverse_sqrt_l"`` for ``t* > 1`` and ``"inverse_l"`` for ``t* < 1``.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if not l > 0:
        raise ValueError(f"l must be > 0, got {l}")
    t_star = t / math.sqrt(l)
    if abs(t_star - 1.0) < BOUNDARY_BAND:
        regime = "boundary"
    elif t_star > 1.0:
        regime = "inverse_sqrt_l"
    else:
        regime = "inverse_l"
    return RegimeReport(t_star, float(t) ** 2, regime)


def crossover_windows(t: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Fit windows ``[l*/100, l*/10]`` and ``[100 l*, 1e4 l*]`` on either side of ``l* = t**2``."""
    l_star = float(t) ** 2
    return (l_star / 100.0, l_star / 10.0), (100.0 * l_star, 1e4 * l_star)
