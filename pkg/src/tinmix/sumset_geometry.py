"""Cardinality and minimum-distance bounds for sums of two scaled PAM
constellations, with empirical checks of the measure statements.

Two regimes:

* non-overlap: one scaled constellation fits inside a single gap of the
  other, so the sum-set has |X||Y| points and its spacing is the smaller
  of the two scaled spacings;
* otherwise a lower bound that holds for all gains outside an outage set
  of Lebesgue measure at most gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constellation import (
    DiscreteConstellation,
    exact_min_distance,
    sum_set,
)


class SumsetMode(Enum):
    NonOverlapExact = "nonoverlap_exact"
    OutageBound = "outage_bound"


class NonOverlapError(ValueError):
    """The non-overlap condition fails; use the outage bound instead."""


@dataclass(frozen=True)
class SumsetBound:
    cardinality: int
    dmin_lower: float
    mode: SumsetMode
    gamma: float | None = None
    kappa: float | None = None
    upsilon: float | None = None
    almost_everywhere: bool = False


def _spacing(c: DiscreteConstellation) -> float:
    return exact_min_distance(c) if c.size > 1 else math.inf


def nonoverlap_condition(hx: float, X: DiscreteConstellation, hy: float, Y: DiscreteConstellation) -> bool:
    """True when |Y||hy|dY <= |hx|dX or |X||hx|dX <= |hy|dY.

    A singleton factor has infinite spacing; a zero gain makes the
    condition fail (the sum-set degenerates)."""
    if hx == 0 or hy == 0:
        return False
    ax = abs(hx) * _spacing(X)
    ay = abs(hy) * _spacing(Y)
    return bool(Y.size * ay <= ax or X.size * ax <= ay)


def prop2_bound(hx: float, X: DiscreteConstellation, hy: float, Y: DiscreteConstellation) -> SumsetBound:
    if not nonoverlap_condition(hx, X, hy, Y):
        raise NonOverlapError("non-overlap condition fails; use prop3_bound")
    d = min(abs(hx) * _spacing(X), abs(hy) * _spacing(Y))
    return SumsetBound(X.size * Y.size, d, SumsetMode.NonOverlapExact)


def kappa(gamma: float, nx: int, ny: int) -> float:
    """(gamma/2) / (1 + ln max(nx, ny))."""
    return (gamma / 2.0) / (1.0 + math.log(max(nx, ny)))


def upsilon(hx: float, X: DiscreteConstellation, hy: float, Y: DiscreteConstellation) -> float:
    return max(abs(hx) * _spacing(X) / Y.size, abs(hy) * _spacing(Y) / X.size)


def _check_gamma(gamma: float):
    if not (0 < gamma <= 1):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")


def prop3_bound(hx: float, X: DiscreteConstellation, hy: float, Y: DiscreteConstellation,
                gamma: float) -> SumsetBound:
    """kappa * min(|hx|dX, |hy|dY, upsilon), valid outside a gamma-measure set."""
    _check_gamma(gamma)
    k = kappa(gamma, X.size, Y.size)
    u = upsilon(hx, X, hy, Y)
    d = k * min(abs(hx) * _spacing(X), abs(hy) * _spacing(Y), u)
    return SumsetBound(X.size * Y.size, d, SumsetMode.OutageBound,
                       gamma=gamma, kappa=k, upsilon=u, almost_everywhere=True)


def lemma1_epsilon(a: float, b: float, nx: int, ny: int, gamma: float) -> float:
    """gamma * max(b / (2 nx (1 + ln ny)), a / (2 ny (1 + ln nx)))."""
    _check_gamma(gamma)
    return gamma * max(b / (2 * nx * (1 + math.log(ny))), a / (2 * ny * (1 + math.log(nx))))


def lattice_min_bruteforce(a: float, b: float, nx: int, ny: int) -> float:
    """Brute-force min |a zx - b zy| over nonzero zx in [-nx, nx], zy in [-ny, ny]."""
    zx = np.concatenate((np.arange(-nx, 0), np.arange(1, nx + 1)))
    zy = np.concatenate((np.arange(-ny, 0), np.arange(1, ny + 1)))
    return float(np.min(np.abs(a * zx[:, None] - b * zy[None, :])))


def lattice_min(a: float, b: float, nx: int, ny: int) -> float:
    """Same minimum in O(nx): for a, b >= 0 opposite signs never win, and
    for each zx > 0 the best zy is one of the two integers around a zx / b."""
    a, b = abs(a), abs(b)
    zx = np.arange(1, nx + 1, dtype=float)
    if b == 0:
        return float(a)
    with np.errstate(over="ignore"):
        q = np.floor(np.minimum(a * zx / b, ny + 1.0))
    c1 = np.clip(q, 1, ny)
    c2 = np.clip(q + 1, 1, ny)
    return float(min(np.min(np.abs(a * zx - b * c1)), np.min(np.abs(a * zx - b * c2))))


def pam_sumset_min_distance(hx: float, nx: int, dx: float, hy: float, ny: int, dy: float) -> float:
    """Exact minimum distance of hx PAM(nx, dx) + hy PAM(ny, dy) without
    materializing the sum-set: differences are hx dx zx + hy dy zy with
    |zx| < nx, |zy| < ny, not both zero."""
    a = abs(hx) * dx
    b = abs(hy) * dy
    best = math.inf
    if nx > 1:
        best = min(best, a)
    if ny > 1:
        best = min(best, b)
    if nx > 1 and ny > 1:
        best = min(best, lattice_min(a, b, nx - 1, ny - 1))
    return best


@dataclass(frozen=True)
class GainGrid:
    """Uniform sampling box for (hx, hy); ``hy_fixed`` pins hy."""

    hx_low: float = 0.0
    hx_high: float = 1.0
    hy_low: float = 0.0
    hy_high: float = 1.0
    samples: int = 10_000
    hy_fixed: float | None = None


def prop2_boundary(X: DiscreteConstellation, hy: float, Y: DiscreteConstellation) -> tuple[float, float]:
    """hx interval ends (lo, hi): non-overlap holds for hx <= lo or hx >= hi (hx > 0)."""
    if X.size < 2 or Y.size < 2:
        raise ValueError("the boundary is defined for constellations with at least two points")
    dx, dy = _spacing(X), _spacing(Y)
    lo = abs(hy) * dy / (X.size * dx)
    hi = Y.size * abs(hy) * dy / dx
    return lo, hi


def empirical_outage_fraction(X: DiscreteConstellation, Y: DiscreteConstellation, gamma: float,
                              grid_spec: GainGrid, rng_seed: int) -> float:
    """Fraction of uniformly sampled gain pairs where the exact sum-set
    minimum distance falls below the outage lower bound."""
    _check_gamma(gamma)
    if grid_spec.samples < 1:
        raise ValueError("empty sampling grid")
    rng = np.random.default_rng(rng_seed)
    hx = rng.uniform(grid_spec.hx_low, grid_spec.hx_high, grid_spec.samples)
    if grid_spec.hy_fixed is not None:
        hy = np.full(grid_spec.samples, float(grid_spec.hy_fixed))
    else:
        hy = rng.uniform(grid_spec.hy_low, grid_spec.hy_high, grid_spec.samples)
    bad = 0
    for a, b in zip(hx, hy):
        s = sum_set(a, X, b, Y)
        if s.size < 2:
            bad += 1
            continue
        if exact_min_distance(s) < prop3_bound(a, X, b, Y, gamma).dmin_lower:
            bad += 1
    return bad / grid_spec.samples


def zero_measure_overlap_check(X: DiscreteConstellation, Y: DiscreteConstellation, trials: int,
                               rng_seed: int, low: float = 0.5, high: float = 2.0) -> float:
    """Fraction of random gain pairs where the sum-set loses points with
    exact (zero-tolerance) merging."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(rng_seed)
    g = rng.uniform(low, high, size=(trials, 2))
    full = X.size * Y.size
    vals = g[:, :1, None] * X.points[None, :, None] + g[:, 1:, None] * Y.points[None, None, :]
    vals = np.sort(vals.reshape(trials, -1), axis=1)
    distinct = 1 + np.count_nonzero(np.diff(vals, axis=1) > 0, axis=1)
    return float(np.mean(distinct < full))


__all__ = [
    "SumsetBound", "SumsetMode", "NonOverlapError", "GainGrid",
    "nonoverlap_condition", "prop2_bound", "prop3_bound", "kappa", "upsilon",
    "lemma1_epsilon", "lattice_min", "lattice_min_bruteforce", "pam_sumset_min_distance", "prop2_boundary",
    "empirical_outage_fraction", "zero_measure_overlap_check",
]
