"""Finite real constellations: PAM construction, entropy, sum-sets and
exact minimum distance.

Everything downstream (rate formulas, Monte Carlo mixtures) consumes
``DiscreteConstellation`` values built here, so this module is the
brute-force reference for the analytic sum-set machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROB_TOL = 1e-12
DEFAULT_REL_MERGE = 1e-9


class ConstellationError(ValueError):
    """Invalid constellation construction or query."""


class SingletonError(ConstellationError):
    """A minimum distance was requested for a one-point support."""


@dataclass(frozen=True)
class DiscreteConstellation:
    """Sorted support points with explicit probabilities."""

    points: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1)
        prb = np.asarray(self.probs, dtype=float).reshape(-1)
        if pts.size == 0 or pts.size != prb.size:
            raise ConstellationError("points and probs must be nonempty and of equal length")
        if np.any(prb <= 0):
            raise ConstellationError("all probabilities must be positive")
        if abs(prb.sum() - 1.0) > PROB_TOL * max(1, pts.size):
            raise ConstellationError(f"probabilities sum to {prb.sum()!r}, not 1")
        if pts.size > 1 and np.any(np.diff(pts) <= 0):
            raise ConstellationError("points must be strictly increasing")
        pts.setflags(write=False)
        prb.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", prb)

    def __len__(self) -> int:
        return int(self.points.size)

    @property
    def size(self) -> int:
        return len(self)

    def mean(self) -> float:
        return float(np.dot(self.probs, self.points))

    def energy(self) -> float:
        """Second moment E[X^2]."""
        return float(np.dot(self.probs, self.points**2))

    def is_uniform(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.probs - 1.0 / self.size) <= tol))

    def scaled(self, factor: float) -> "DiscreteConstellation":
        """Constellation of ``factor * X``; a zero factor collapses to {0}."""
        if factor == 0:
            return DiscreteConstellation(np.zeros(1), np.ones(1))
        pts = self.points * factor
        prb = self.probs
        if factor < 0:
            pts, prb = pts[::-1], prb[::-1]
        return DiscreteConstellation(pts, prb)


@dataclass(frozen=True)
class PamSpec:
    n_points: int
    d_min: float


def make_pam(spec: PamSpec) -> DiscreteConstellation:
    """Zero-mean, equiprobable PAM with ``n_points`` points spaced ``d_min``."""
    n = int(spec.n_points)
    if n != spec.n_points or n < 1:
        raise ConstellationError(f"n_points must be a positive integer, got {spec.n_points!r}")
    if n == 1:
        return DiscreteConstellation(np.zeros(1), np.ones(1))
    if not spec.d_min > 0:
        raise ConstellationError(f"d_min must be positive, got {spec.d_min!r}")
    pts = (np.arange(n) - (n - 1) / 2.0) * float(spec.d_min)
    return DiscreteConstellation(pts, np.full(n, 1.0 / n))


def pam(n_points: int, d_min: float = 1.0) -> DiscreteConstellation:
    return make_pam(PamSpec(n_points, d_min))


def unit_energy_spacing(n_points: int) -> float:
    """Spacing that gives an N-PAM unit average energy."""
    return float(np.sqrt(12.0 / (n_points**2 - 1)))


def unit_energy_pam(n_points: int) -> DiscreteConstellation:
    if int(n_points) != n_points or n_points < 2:
        raise ConstellationError(f"unit-energy PAM needs at least 2 points, got {n_points!r}")
    return make_pam(PamSpec(int(n_points), unit_energy_spacing(int(n_points))))


def discrete_layer(n_points: int) -> DiscreteConstellation:
    """Unit-energy PAM, with N = 1 meaning the single point 0 (no discrete layer)."""
    if n_points == 1:
        return make_pam(PamSpec(1, 1.0))
    return unit_energy_pam(n_points)


def entropy_bits(c: DiscreteConstellation) -> float:
    p = c.probs
    return float(-np.sum(p * np.log2(p)))


def default_merge_tol(points: np.ndarray) -> float:
    scale = float(np.max(np.abs(points))) if points.size else 0.0
    return DEFAULT_REL_MERGE * scale


def merge_points(points, probs, merge_tol: float | None = None) -> DiscreteConstellation:
    """Sort and merge points closer than ``merge_tol`` (chain merge), adding
    their probabilities. The merged location is the probability-weighted mean."""
    pts = np.asarray(points, dtype=float).reshape(-1)
    prb = np.asarray(probs, dtype=float).reshape(-1)
    if merge_tol is None:
        merge_tol = default_merge_tol(pts)
    if merge_tol < 0:
        raise ConstellationError("merge_tol must be nonnegative")
    order = np.argsort(pts, kind="stable")
    pts, prb = pts[order], prb[order]
    # a new cluster starts wherever the gap exceeds the tolerance (and is > 0)
    gaps = np.diff(pts)
    starts = np.concatenate(([True], gaps > merge_tol)) if pts.size else np.array([], bool)
    labels = np.cumsum(starts) - 1
    n = int(labels[-1]) + 1
    w = np.bincount(labels, weights=prb, minlength=n)
    loc = np.bincount(labels, weights=prb * pts, minlength=n) / w
    w = w / w.sum()
    # merged means can, in pathological float cases, tie; fold them once more
    if n > 1 and np.any(np.diff(loc) <= 0):
        return merge_points(loc, w, merge_tol=max(merge_tol, np.finfo(float).tiny))
    return DiscreteConstellation(loc, w)


def sum_set(hx: float, X: DiscreteConstellation, hy: float, Y: DiscreteConstellation,
            merge_tol: float | None = None) -> DiscreteConstellation:
    """Distribution of hx*X + hy*Y for independent X, Y."""
    vals = (hx * X.points)[:, None] + (hy * Y.points)[None, :]
    w = X.probs[:, None] * Y.probs[None, :]
    return merge_points(vals.ravel(), w.ravel(), merge_tol)


def exact_min_distance(c: DiscreteConstellation) -> float:
    if c.size < 2:
        raise SingletonError("minimum distance of a single-point constellation is undefined")
    return float(np.min(np.diff(c.points)))


def distance_spectrum(c: DiscreteConstellation) -> tuple[np.ndarray, np.ndarray]:
    """All ordered pairs (i, j): weights p_i p_j and squared distances."""
    w = np.outer(c.probs, c.probs).ravel()
    d2 = ((c.points[:, None] - c.points[None, :]) ** 2).ravel()
    return w, d2
