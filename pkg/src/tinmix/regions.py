"""Rate regions for the two-user Gaussian interference channel when each
receiver treats interference as noise and no time sharing is allowed.

Inputs are mixed: X_i = sqrt(1 - delta_i) X_iD + sqrt(delta_i) X_iG with a
unit-energy PAM discrete layer X_iD and a unit-power Gaussian layer X_iG.
The module provides

* the closed-form inner rate pair for a parameter vector [N1, N2, d1, d2],
* the seven-constraint outer bound as a polygon,
* symmetric regime classification and the per-regime parameter families,
* asymmetric regimes, analytic gaps and a numeric gap between regions.

All rates are in bits per channel use; gains are squared magnitudes on a
linear scale with unit noise variance and unit input power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constellation import discrete_layer, sum_set, unit_energy_spacing
from .mi_bounds import GAP_PTP_PAM, MiBoundKind, bound_value, id_bits, id_from, ig, nd
from .sumset_geometry import (
    NonOverlapError,
    nonoverlap_condition,
    pam_sumset_min_distance,
    prop2_bound,
    prop3_bound,
)

DEFAULT_T_GRID = 65
DEFAULT_REFINE_TOL = 0.01
DEFAULT_REFINE_DEPTH = 12
VERTEX_TOL = 1e-9
PARAM_TOL = 1e-12

# point-reduction factor for asymmetric very strong interference
BETA_ASYM_VERY_STRONG = 0.8277
GAP_ASYM_VERY_STRONG = 0.5 * math.log2((2 * math.pi * math.e / 3) * (1 + BETA_ASYM_VERY_STRONG)
                                       / BETA_ASYM_VERY_STRONG)
GAP_VERY_WEAK = 0.5
# Weak2 constant-gap parameterization: the 2R1+R2 face and the sum-rate face
GAP_WEAK2_2R1R2 = 0.5 * math.log2(608 * math.pi * math.e / 27)
GAP_WEAK2_SUMRATE = 0.5 * math.log2(640 * math.pi * math.e / 27)
WEAK2_REDUCTION = 0.75


class RegimeError(ValueError):
    """Gains or parameters fall outside the regime an operation requires."""


class ParamConstraintError(RegimeError):
    """A synthesized parameter vector violates a regime constraint."""


@dataclass(frozen=True)
class ChannelGains:
    h11_sq: float
    h12_sq: float
    h21_sq: float
    h22_sq: float

    def __post_init__(self):
        for name in ("h11_sq", "h12_sq", "h21_sq", "h22_sq"):
            v = float(getattr(self, name))
            if not (v >= 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be finite and nonnegative, got {v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def symmetric(cls, S: float, I: float) -> "ChannelGains":
        return cls(S, I, I, S)

    @property
    def is_symmetric(self) -> bool:
        return self.h11_sq == self.h22_sq and self.h12_sq == self.h21_sq

    def swapped(self) -> "ChannelGains":
        """Relabel the users (user 1 becomes user 2)."""
        return ChannelGains(self.h22_sq, self.h21_sq, self.h12_sq, self.h11_sq)


def alpha_of(S: float, I: float) -> float:
    """Interference level log I / log S."""
    return math.log(I) / math.log(S)


@dataclass(frozen=True)
class MixedInputParams:
    n1: int
    n2: int
    delta1: float
    delta2: float

    def __post_init__(self):
        for name in ("n1", "n2"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        for name in ("delta1", "delta2"):
            v = float(getattr(self, name))
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
            object.__setattr__(self, name, v)

    def swapped(self) -> "MixedInputParams":
        return MixedInputParams(self.n2, self.n1, self.delta2, self.delta1)

    def as_list(self) -> list:
        return [self.n1, self.n2, self.delta1, self.delta2]


class DminKind(Enum):
    Exact = "exact"
    Prop2 = "prop2"
    Prop3 = "prop3"
    Auto = "auto"


@dataclass(frozen=True)
class DminPolicy:
    """How the sum-set spacing entering the discrete-layer rate is obtained.

    Exact: computed from the constellations. Prop2: non-overlap formula,
    an error when the condition fails. Prop3: outage lower bound with
    measure gamma. Auto: Prop2 where it applies, Prop3 otherwise."""

    kind: DminKind = DminKind.Exact
    gamma: float | None = None

    def __post_init__(self):
        if self.kind in (DminKind.Prop3, DminKind.Auto):
            if self.gamma is None or not (0 < self.gamma <= 1):
                raise ValueError(f"{self.kind.value} policy needs gamma in (0, 1]")

    @classmethod
    def exact(cls) -> "DminPolicy":
        return cls(DminKind.Exact)

    @classmethod
    def prop2(cls) -> "DminPolicy":
        return cls(DminKind.Prop2)

    @classmethod
    def prop3(cls, gamma: float) -> "DminPolicy":
        return cls(DminKind.Prop3, gamma)

    @classmethod
    def auto(cls, gamma: float) -> "DminPolicy":
        return cls(DminKind.Auto, gamma)

    @classmethod
    def parse(cls, name: str, gamma: float | None = None) -> "DminPolicy":
        kind = DminKind(name.lower())
        return cls(kind, gamma if kind in (DminKind.Prop3, DminKind.Auto) else None)


# ---------------------------------------------------------------------------
# inner rate


def _discrete_rate(hx: float, nx: int, hy: float, ny: int, policy: DminPolicy) -> float:
    """Clamped discrete-layer rate of hx X + hy Y, X and Y unit-energy PAMs
    with nx and ny points, at unit noise variance."""
    x_on = nx > 1 and hx > 0
    y_on = ny > 1 and hy > 0
    if not x_on and not y_on:
        return 0.0
    if not (x_on and y_on):
        # a single scaled PAM: cardinality and spacing are known exactly
        n, h = (nx, hx) if x_on else (ny, hy)
        return id_from(math.log2(n), h * unit_energy_spacing(n))
    entropy = math.log2(nx) + math.log2(ny)
    if policy.kind is DminKind.Exact:
        dx, dy = unit_energy_spacing(nx), unit_energy_spacing(ny)
        d = pam_sumset_min_distance(hx, nx, dx, hy, ny, dy)
        scale = hx * dx * (nx - 1) / 2 + hy * dy * (ny - 1) / 2
        if d > 1e-9 * scale:
            return id_from(entropy, d)
        # coincident points: fall back to the materialized merged sum-set
        return id_bits(sum_set(hx, discrete_layer(nx), hy, discrete_layer(ny)))
    X, Y = discrete_layer(nx), discrete_layer(ny)
    if policy.kind is DminKind.Prop2 or (policy.kind is DminKind.Auto
                                         and nonoverlap_condition(hx, X, hy, Y)):
        return id_from(entropy, prop2_bound(hx, X, hy, Y).dmin_lower)
    return id_from(entropy, prop3_bound(hx, X, hy, Y, policy.gamma).dmin_lower)


def _user_rate(h_own: float, h_cross: float, n_own: int, n_cross: int,
               d_own: float, d_cross: float, policy: DminPolicy) -> float:
    var = 1.0 + h_own * d_own + h_cross * d_cross
    hx = math.sqrt((1 - d_own) * h_own / var)
    hy = math.sqrt((1 - d_cross) * h_cross / var)
    r = _discrete_rate(hx, n_own, hy, n_cross, policy)
    noise = 1.0 + h_cross * d_cross
    r += ig(h_own * d_own / noise)
    r -= min(math.log2(n_cross), ig(h_cross * (1 - d_cross) / noise))
    # the mutual information is nonnegative, so clamping keeps a valid bound
    return max(0.0, r)


def inner_rate_pair(g: ChannelGains, p: MixedInputParams,
                    dmin_policy: DminPolicy | None = None) -> tuple[float, float]:
    """Lower bounds on I(X1; Y1) and I(X2; Y2) for mixed inputs with
    parameters p, each receiver treating the other input as noise.

    Raises NonOverlapError under the Prop2 policy when the non-overlap
    condition fails at either receiver."""
    policy = dmin_policy or DminPolicy.exact()
    r1 = _user_rate(g.h11_sq, g.h12_sq, p.n1, p.n2, p.delta1, p.delta2, policy)
    r2 = _user_rate(g.h22_sq, g.h21_sq, p.n2, p.n1, p.delta2, p.delta1, policy)
    return r1, r2


def received_sum_set(g: ChannelGains, p: MixedInputParams, user: int):
    """Normalized noiseless discrete constellation seen by receiver ``user``
    (unit noise after dividing by the Gaussian-layer-plus-noise power)."""
    if user == 1:
        h_own, h_cross, n_own, n_cross, d_own, d_cross = (
            g.h11_sq, g.h12_sq, p.n1, p.n2, p.delta1, p.delta2)
    elif user == 2:
        h_own, h_cross, n_own, n_cross, d_own, d_cross = (
            g.h22_sq, g.h21_sq, p.n2, p.n1, p.delta2, p.delta1)
    else:
        raise ValueError("user must be 1 or 2")
    var = 1.0 + h_own * d_own + h_cross * d_cross
    return sum_set(math.sqrt((1 - d_own) * h_own / var), discrete_layer(n_own),
                   math.sqrt((1 - d_cross) * h_cross / var), discrete_layer(n_cross))


def inner_rate_pair_bound(g: ChannelGains, p: MixedInputParams,
                          kind: MiBoundKind) -> tuple[float, float]:
    """Inner rate pair with the discrete-layer term replaced by another
    lower bound on I(S_u; S_u + Z), evaluated on the materialized sum-set."""
    if kind is MiBoundKind.UpperMin:
        raise ValueError("an upper bound cannot certify an achievable rate")
    rates = []
    for user, (h_own, h_cross, n_cross, d_own, d_cross) in enumerate(
            [(g.h11_sq, g.h12_sq, p.n2, p.delta1, p.delta2),
             (g.h22_sq, g.h21_sq, p.n1, p.delta2, p.delta1)], start=1):
        c = received_sum_set(g, p, user)
        r = bound_value(kind, c) if c.size > 1 else 0.0
        noise = 1.0 + h_cross * d_cross
        r += ig(h_own * d_own / noise)
        r -= min(math.log2(n_cross), ig(h_cross * (1 - d_cross) / noise))
        rates.append(max(0.0, r))
    return rates[0], rates[1]


# ---------------------------------------------------------------------------
# regions


def _polygon_vertices(halfspaces) -> list[tuple[float, float]]:
    """Vertices of a bounded down-closed region { a.x <= b } within the
    nonnegative quadrant, ordered counter-clockwise from the origin."""
    hs = list(halfspaces) + [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)]
    pts = []
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            a1, a2, b = hs[i]
            c1, c2, e = hs[j]
            det = a1 * c2 - a2 * c1
            if abs(det) < 1e-14:
                continue
            x = (b * c2 - a2 * e) / det
            y = (a1 * e - b * c1) / det
            if all(u * x + v * y <= w + VERTEX_TOL * (1 + abs(w)) for u, v, w in hs):
                pts.append((max(x, 0.0) + 0.0, max(y, 0.0) + 0.0))
    uniq = []
    for pt in pts:
        if not any(abs(pt[0] - q[0]) <= VERTEX_TOL and abs(pt[1] - q[1]) <= VERTEX_TOL for q in uniq):
            uniq.append(pt)
    # boundary of a down-closed convex set: origin, then along R1 axis,
    # then the frontier with R1 decreasing, then back down the R2 axis
    frontier = sorted((q for q in uniq if q[1] > VERTEX_TOL), key=lambda q: (-q[0], q[1]))
    axis = sorted(q for q in uniq if q[1] <= VERTEX_TOL)
    return axis + frontier


def _pareto(points) -> list[tuple[float, float]]:
    """Non-dominated points sorted by increasing R1."""
    pts = sorted(set((float(a), float(b)) for a, b in points), key=lambda q: (-q[0], -q[1]))
    out, best2 = [], -math.inf
    for a, b in pts:
        if b > best2:
            out.append((a, b))
            best2 = b
    return out[::-1]


@dataclass(frozen=True)
class RateRegion:
    """A down-closed region in the nonnegative quadrant.

    kind "polytope": given by halfspaces a1 R1 + a2 R2 <= b; corners are its
    vertices. kind "staircase": union of the rectangles [0, r1] x [0, r2]
    over the listed corners (no convexification)."""

    corners: tuple
    halfspaces: tuple = ()
    kind: str = "polytope"

    def __post_init__(self):
        object.__setattr__(self, "corners", tuple((float(a), float(b)) for a, b in self.corners))
        object.__setattr__(self, "halfspaces", tuple((float(a), float(b), float(c))
                                                     for a, b, c in self.halfspaces))
        if self.kind not in ("polytope", "staircase"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if any(a < -VERTEX_TOL or b < -VERTEX_TOL for a, b in self.corners):
            raise ValueError("corners must be nonnegative")

    @classmethod
    def from_halfspaces(cls, halfspaces) -> "RateRegion":
        hs = tuple(halfspaces)
        return cls(tuple(_polygon_vertices(hs)), hs, "polytope")

    @classmethod
    def from_points(cls, points) -> "RateRegion":
        pts = list(points) or [(0.0, 0.0)]
        return cls(tuple(_pareto(pts)), (), "staircase")

    def contains(self, point, tol: float = 1e-6) -> bool:
        x, y = point
        if x < -tol or y < -tol:
            return False
        if self.kind == "polytope":
            return all(a * x + b * y <= c + tol for a, b, c in self.halfspaces)
        return any(x <= a + tol and y <= b + tol for a, b in self.corners)

    def shifted(self, d: float) -> "RateRegion":
        """Region moved by (-d, -d) and intersected with the quadrant."""
        if self.kind == "polytope":
            return RateRegion.from_halfspaces((a1, a2, b - d * (a1 + a2)) for a1, a2, b in self.halfspaces)
        return RateRegion.from_points((max(0.0, a - d), max(0.0, b - d)) for a, b in self.corners)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "corners": [list(c) for c in self.corners],
                "halfspaces": [list(h) for h in self.halfspaces]}


def outer_halfspaces(g: ChannelGains) -> list[tuple[float, float, float]]:
    """The seven outer-bound constraints: two cut-set bounds, two Kramer
    sum-rate bounds, the Etkin-Tse-Wang sum-rate bound and the 2R1+R2 and
    R1+2R2 bounds."""
    h11, h12, h21, h22 = g.h11_sq, g.h12_sq, g.h21_sq, g.h22_sq
    pos = lambda x: max(0.0, x)
    etw1 = ig(h12 + h11 / (1 + h21))
    etw2 = ig(h21 + h22 / (1 + h12))
    return [
        (1.0, 0.0, ig(h11)),
        (0.0, 1.0, ig(h22)),
        (1.0, 1.0, pos(ig(h11) - ig(h21)) + ig(h21 + h22)),
        (1.0, 1.0, pos(ig(h22) - ig(h12)) + ig(h11 + h12)),
        (1.0, 1.0, etw1 + etw2),
        (2.0, 1.0, ig(h11 + h12) + etw2 + pos(ig(h11) - ig(h21))),
        (1.0, 2.0, ig(h21 + h22) + etw1 + pos(ig(h22) - ig(h12))),
    ]


def outer_region(g: ChannelGains) -> RateRegion:
    return RateRegion.from_halfspaces(outer_halfspaces(g))


def numeric_gap(inner: RateRegion, outer: RateRegion, edge_samples: int = 0) -> float:
    """Largest equal shift g >= 0, over outer corners c, needed to bring
    (c1 - g, c2 - g) into the inner region.

    ``edge_samples`` > 0 additionally tests that many interior points on
    each outer boundary edge."""
    probes = list(outer.corners)
    if edge_samples > 0 and len(outer.corners) > 1:
        cs = list(outer.corners) + [outer.corners[0]]
        s = np.linspace(0, 1, edge_samples + 2)[1:-1]
        for (x0, y0), (x1, y1) in zip(cs[:-1], cs[1:]):
            probes.extend(zip(x0 + s * (x1 - x0), y0 + s * (y1 - y0)))
    worst = 0.0
    if inner.kind == "staircase":
        r = np.asarray(inner.corners)
        for c1, c2 in probes:
            need = np.maximum(np.maximum(c1 - r[:, 0], c2 - r[:, 1]), 0.0)
            worst = max(worst, float(need.min()))
        return worst
    for c1, c2 in probes:
        for a1, a2, b in inner.halfspaces:
            if a1 + a2 > 0:
                worst = max(worst, (a1 * c1 + a2 * c2 - b) / (a1 + a2))
    return worst


# ---------------------------------------------------------------------------
# symmetric regimes


class Regime(Enum):
    VeryWeak = "very_weak"
    Weak1 = "weak1"
    Weak2 = "weak2"
    Strong = "strong"
    VeryStrong = "very_strong"
    TdmaBand = "tdma_band"
    AsymVeryStrong = "asym_very_strong"
    AsymStrong = "asym_strong"
    AsymMixed = "asym_mixed"
    AsymVeryWeak = "asym_very_weak"
    AsymExcluded = "asym_excluded"


SYMMETRIC_REGIMES = (Regime.VeryWeak, Regime.Weak1, Regime.Weak2, Regime.Strong,
                     Regime.VeryStrong, Regime.TdmaBand)
CONSTANT_GAP_REGIMES = (Regime.VeryWeak, Regime.Weak2, Regime.VeryStrong)


def _weak_ratios(S: float, I: float) -> tuple[float, float]:
    """(A, B) with A = (1+I+S/(1+I))/(1+S/(1+I)) and B = (1+S)/(1+I+S/(1+I));
    Weak1 holds when B <= A."""
    u = S / (1 + I)
    return (1 + I + u) / (1 + u), (1 + S) / (1 + I + u)


def classify_symmetric(S: float, I: float) -> Regime:
    if S < 0 or I < 0:
        raise ValueError("S and I must be nonnegative")
    if I >= S * (1 + S):
        return Regime.VeryStrong
    if I > S:
        return Regime.Strong
    if S >= I * (1 + I):
        return Regime.VeryWeak
    if S <= 1 + I:
        return Regime.TdmaBand
    A, B = _weak_ratios(S, I)
    return Regime.Weak1 if B <= A else Regime.Weak2


def _nd(x: float) -> int:
    # formulas of the form y^t - 1 can dip below zero by rounding
    if x < 0 and x > -1e-9:
        x = 0.0
    if x < 0:
        raise ParamConstraintError(f"point-count argument is negative ({x!r})")
    return nd(x)


def _check_delta(name: str, value: float, limit: float, label: str):
    if value < -PARAM_TOL or value > 1 + PARAM_TOL:
        raise ParamConstraintError(f"{name}={value!r} outside [0, 1]")
    if value > limit * (1 + 1e-9) + PARAM_TOL:
        raise ParamConstraintError(f"{name}={value!r} violates {name} <= {label} = {limit!r}")


def _mk(n1, n2, d1, d2) -> MixedInputParams:
    clip = lambda d: min(1.0, max(0.0, d))
    return MixedInputParams(n1, n2, clip(d1), clip(d2))


def _check_t(t: float):
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t must lie in [0, 1], got {t!r}")


def _strong_params(S, I, t):
    base = 1 + I / (1 + S)
    s0a = base ** (1 - t) * (1 + S) ** t - 1
    s0b = base ** t * (1 + S) ** (1 - t) - 1
    return [_mk(_nd(s0a), _nd(s0b), 0.0, 0.0)]


def _weak1_params(S, I, t):
    A, B = _weak_ratios(S, I)
    u = S / (1 + I)
    cap = 1 / (1 + I)
    s1a = A ** t * B ** (1 - t) - 1
    s1b = A ** (1 - t) * B ** t - 1
    p1 = _mk(_nd(s1a), _nd(s1b), cap, cap)
    s2a = A ** t * ((1 + S) / (1 + u)) ** (1 - t) - 1
    s2b = ((1 + I + S) / (1 + I + u)) ** t - 1
    d2 = (((1 + S) / (1 + I)) ** t - 1) / S
    _check_delta("delta2", d2, cap, "1/(1+I)")
    p2 = _mk(_nd(s2a), _nd(s2b), cap, d2)
    return [p1, p2, p2.swapped()]


def _weak2_sum_face(S, I, t):
    u = S / (1 + I)
    P = (1 + u) * (1 + S) / (1 + I + u)
    Q = (1 + I + u) ** 3 / ((1 + u) * (1 + S))
    s3a = P ** ((1 - t) / 2) * Q ** (t / 2) - 1
    s3b = P ** (t / 2) * Q ** ((1 - t) / 2) - 1
    return s3a, s3b


def _weak2_take1_params(S, I, t):
    A, _ = _weak_ratios(S, I)
    u = S / (1 + I)
    cap = 1 / (1 + I)
    s3a, s3b = _weak2_sum_face(S, I, t)
    _check_delta("delta1", s3a / S, 1.0, "1")
    _check_delta("delta2", s3b / S, 1.0, "1")
    p1 = _mk(_nd(s3a), _nd(s3b), s3a / S, s3b / S)
    s4a = (1 + S) / ((1 + u) ** t * (1 + I + u) ** (1 - t)) - 1
    s4b = ((1 + I + u) ** 2 / (1 + S)) ** (1 - t) - 1
    d2 = (A ** (1 - t) - 1) / S
    _check_delta("delta2", d2, cap, "1/(1+I)")
    p2 = _mk(_nd(s4a), _nd(s4b), cap, d2)
    return [p1, p2, p2.swapped()]


def _weak2_constant_params(S, I, t):
    u = S / (1 + I)
    k = WEAK2_REDUCTION
    s3a, s3b = _weak2_sum_face(S, I, t)
    _check_delta("delta1", s3a / S, 1.0, "1")
    _check_delta("delta2", s3b / S, 1.0, "1")
    p1 = _mk(_nd(k * s3a), _nd(k * s3b), s3a / S, s3b / S)
    s4a = (1 + S) / ((1 + u) ** t * (1 + I + u) ** (1 - t)) - 1
    s4b = ((1 + I + u) ** 2 / (1 + S)) ** (1 - t) - 1
    d1 = s4a / S
    d2 = (1 + I + u) / ((1 + u) * (1 + S))
    _check_delta("delta1", d1, I / S, "I/S")
    _check_delta("delta2", d2, 1 / (1 + I), "1/(1+I)")
    p2 = _mk(_nd(k * (S - I) / (1 + I)), _nd(k * s4b), d1, d2)
    return [p1, p2, p2.swapped()]


def _tdma_params(S, I, t):
    return [_mk(_nd((1 + S) ** t - 1), _nd((1 + S) ** (1 - t) - 1), 0.0, 0.0)]


def table1_params(regime: Regime, S: float, I: float, t: float,
                  weak2_variant: str = "constant") -> list[MixedInputParams]:
    """Parameter vectors for the symmetric regime at face parameter t.

    ``weak2_variant`` selects between the constant-gap parameterization
    ("constant", default) and the log-log-gap one ("loglog")."""
    _check_t(t)
    if regime is Regime.VeryStrong:
        n = _nd(S)
        return [_mk(n, n, 0.0, 0.0)]
    if regime is Regime.VeryWeak:
        return [_mk(1, 1, t, 1.0), _mk(1, 1, 1.0, t)]
    if regime is Regime.Strong:
        return _strong_params(S, I, t)
    if regime is Regime.Weak1:
        return _weak1_params(S, I, t)
    if regime is Regime.Weak2:
        if weak2_variant == "constant":
            return _weak2_constant_params(S, I, t)
        if weak2_variant == "loglog":
            return _weak2_take1_params(S, I, t)
        raise ValueError(f"unknown Weak2 variant {weak2_variant!r}")
    if regime is Regime.TdmaBand:
        return _tdma_params(S, I, t)
    raise RegimeError(f"{regime.value} is not a symmetric regime")


def _loglog_term(factor: float, snr: float, gamma: float) -> float:
    return 0.5 * math.log2(1 + factor * (1 + 0.5 * math.log(1 + snr)) ** 2 / gamma ** 2)


def _check_gamma(gamma: float):
    if not (0 < gamma <= 1):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")


def analytic_gap(regime: Regime, S: float, I: float, gamma: float = 1.0) -> float:
    """Upper bound on the additive gap for the symmetric regime (bits).
    gamma is the outage measure, unused by the constant-gap regimes."""
    if regime is Regime.VeryWeak:
        return GAP_VERY_WEAK
    if regime is Regime.VeryStrong:
        return GAP_PTP_PAM
    if regime is Regime.Weak2:
        return GAP_WEAK2_2R1R2
    _check_gamma(gamma)
    if regime is Regime.Weak1:
        return 0.5 * math.log2(16 * math.pi * math.e / 3) + _loglog_term(45, min(I, S), gamma)
    if regime is Regime.Strong:
        return GAP_PTP_PAM + _loglog_term(8, min(I, S), gamma)
    if regime is Regime.TdmaBand:
        return 0.5 * math.log2(4 * math.pi * math.e / 3) + _loglog_term(8, S, gamma)
    raise RegimeError(f"{regime.value} is not a symmetric regime")


def weak_corner_points(S: float, I: float) -> list[tuple[float, float]]:
    """Corners A, B, C, D of the outer bound for I <= S <= I(1+I)."""
    if not (I <= S <= I * (1 + I)):
        raise RegimeError(f"weak corners need I <= S <= I(1+I), got S={S!r}, I={I!r}")
    a = min(ig(I + S) + ig(S) - ig(I), 2 * ig(I + S / (1 + I)))
    b = ig(I + S / (1 + I)) + ig(S + I) + ig(S) - ig(I)
    c = ig(I + S) - ig(S) + ig(I + S / (1 + I)) - ig(I)
    assert c <= 1.0 + 1e-12, c
    return [(ig(S), c), (b - a, 2 * a - b), (2 * a - b, b - a), (c, ig(S))]


# ---------------------------------------------------------------------------
# asymmetric regimes


def classify_asym(g: ChannelGains) -> Regime:
    h11, h12, h21, h22 = g.h11_sq, g.h12_sq, g.h21_sq, g.h22_sq
    if h21 >= h11 * (1 + h22) and h12 >= h22 * (1 + h11):
        return Regime.AsymVeryStrong
    if h21 >= h11 and h12 >= h22:
        return Regime.AsymStrong
    if h12 * (1 + h21) <= h22 and h21 * (1 + h12) <= h11:
        return Regime.AsymVeryWeak
    if _mixed_side(g) is not None:
        return Regime.AsymMixed
    return Regime.AsymExcluded


def in_excluded_band(g: ChannelGains) -> bool:
    """Weak interference at both receivers but not very weak: the band for
    which no gap claim is made."""
    h11, h12, h21, h22 = g.h11_sq, g.h12_sq, g.h21_sq, g.h22_sq
    return (h22 / (1 + h21) < h12 < h22) and (h11 / (1 + h12) < h21 < h11)


def _mixed_side(g: ChannelGains) -> int | None:
    """1 when the mixed sub-regime holds as stated, 2 when it holds with
    the users swapped, None otherwise."""
    h11, h12, h21, h22 = g.h11_sq, g.h12_sq, g.h21_sq, g.h22_sq
    if h21 * (1 + h12) >= h11 * (1 + h22) and h12 <= h22:
        return 1
    if h12 * (1 + h21) >= h22 * (1 + h11) and h21 <= h11:
        return 2
    return None


def _asym_mixed_params(g: ChannelGains, t: float) -> MixedInputParams:
    h11, h12 = g.h11_sq, g.h12_sq
    s6a = (1 + h11 / (1 + h12)) ** t * (1 + h11) ** (1 - t) - 1
    s6b = (1 + h12) ** t * (1 + h12 / (1 + h11)) ** (1 - t) - 1
    return _mk(_nd(s6a), _nd(s6b), 0.0, 1 / (1 + h12))


def asym_params(regime: Regime, g: ChannelGains, t: float) -> list[MixedInputParams]:
    _check_t(t)
    h11, h12, h21, h22 = g.h11_sq, g.h12_sq, g.h21_sq, g.h22_sq
    if regime is Regime.AsymVeryStrong:
        b = BETA_ASYM_VERY_STRONG
        return [_mk(_nd(b * h11), _nd(b * h22), 0.0, 0.0)]
    if regime is Regime.AsymStrong:
        m = min(h11 + h12, h22 + h21)
        s5a = (1 + h11) ** (1 - t) * ((1 + m) / (1 + h22)) ** t - 1
        s5b = (1 + h22) ** t * ((1 + m) / (1 + h11)) ** (1 - t) - 1
        return [_mk(_nd(s5a), _nd(s5b), 0.0, 0.0)]
    if regime is Regime.AsymMixed:
        if _mixed_side(g) == 1:
            return [_asym_mixed_params(g, t)]
        return [_asym_mixed_params(g.swapped(), t).swapped()]
    if regime is Regime.AsymVeryWeak:
        return [_mk(1, 1, t, 1.0), _mk(1, 1, 1.0, t)]
    if regime is Regime.AsymExcluded:
        return []
    raise RegimeError(f"{regime.value} is not an asymmetric regime")


def asym_analytic_gap(regime: Regime, g: ChannelGains, gamma: float = 1.0) -> float:
    hmax = max(g.h11_sq, g.h22_sq)
    if regime is Regime.AsymVeryStrong:
        return GAP_ASYM_VERY_STRONG
    if regime is Regime.AsymVeryWeak:
        return GAP_VERY_WEAK
    if regime is Regime.AsymExcluded:
        return math.nan
    _check_gamma(gamma)
    if regime is Regime.AsymStrong:
        return GAP_PTP_PAM + _loglog_term(8, hmax, gamma)
    if regime is Regime.AsymMixed:
        return GAP_PTP_PAM + _loglog_term(24, hmax, gamma)
    raise RegimeError(f"{regime.value} is not an asymmetric regime")


# ---------------------------------------------------------------------------
# achievable regions and gap reports


@dataclass(frozen=True)
class TracePoint:
    t: float
    params: MixedInputParams
    r1: float
    r2: float


@dataclass(frozen=True)
class GapReport:
    regime: Regime
    analytic_gap_bits: float
    numeric_gap_bits: float
    gamma: float
    params_trace: tuple = ()
    skipped: tuple = ()
    inner: RateRegion | None = field(default=None, compare=False)
    outer: RateRegion | None = field(default=None, compare=False)


def t_values(t_grid: int) -> np.ndarray:
    if int(t_grid) != t_grid or t_grid < 2:
        raise ValueError(f"t_grid must be an integer >= 2, got {t_grid!r}")
    return np.linspace(0.0, 1.0, int(t_grid))


def _param_family(g: ChannelGains, weak2_variant: str, asymmetric: bool = False):
    """(regime, t -> list of params) for the gains. Symmetric gains use the
    symmetric families unless ``asymmetric`` forces the general path."""
    if g.is_symmetric and not asymmetric:
        S, I = g.h11_sq, g.h12_sq
        regime = classify_symmetric(S, I)
        return regime, lambda t: table1_params(regime, S, I, t, weak2_variant)
    regime = classify_asym(g)
    return regime, lambda t: asym_params(regime, g, t)


def _needs_split(a: list, b: list, tol: float) -> bool:
    """Whether the family changes enough between two t values (lists of
    (params, r1, r2) per branch) to evaluate the midpoint."""
    if len(a) != len(b):
        return True
    for (pa, r1a, r2a), (pb, r1b, r2b) in zip(a, b):
        if abs(pa.n1 - pb.n1) > 1 or abs(pa.n2 - pb.n2) > 1:
            return True
        continuous = pa.delta1 != pb.delta1 or pa.delta2 != pb.delta2
        if continuous and max(abs(r1a - r1b), abs(r2a - r2b)) > tol:
            return True
    return False


def achievable_points(g: ChannelGains, t_grid: int = DEFAULT_T_GRID,
                      dmin_policy: DminPolicy | None = None,
                      weak2_variant: str = "constant",
                      refine_tol: float | None = DEFAULT_REFINE_TOL,
                      max_depth: int = DEFAULT_REFINE_DEPTH,
                      asymmetric: bool = False):
    """Evaluate the inner rate pair over the t-grid and parameter variants.

    With ``refine_tol`` set, intervals of the uniform grid are bisected
    (up to ``max_depth`` times) wherever the power split changes and a
    rate moves by more than ``refine_tol`` bits, or a point count skips a
    value. Refinement only adds points.

    Returns (regime, trace, skipped); skipped holds (t, params or None,
    reason) for vectors whose preconditions failed."""
    policy = dmin_policy or DminPolicy.exact()
    regime, family = _param_family(g, weak2_variant, asymmetric)
    skipped = []
    cache: dict[float, list] = {}

    def evaluate(t: float) -> list:
        if t in cache:
            return cache[t]
        rows = []
        try:
            plist = family(t)
        except ParamConstraintError as exc:
            skipped.append((t, None, str(exc)))
            plist = []
        for p in plist:
            try:
                r1, r2 = inner_rate_pair(g, p, policy)
            except NonOverlapError as exc:
                skipped.append((t, p, str(exc)))
                continue
            rows.append((p, r1, r2))
        cache[t] = rows
        return rows

    grid = [float(t) for t in t_values(t_grid)]
    for t in grid:
        evaluate(t)
    if refine_tol is not None:
        stack = [(grid[i], grid[i + 1], 0) for i in range(len(grid) - 1)]
        while stack:
            lo, hi, depth = stack.pop()
            if depth >= max_depth or not _needs_split(cache[lo], cache[hi], refine_tol):
                continue
            mid = 0.5 * (lo + hi)
            evaluate(mid)
            stack.append((lo, mid, depth + 1))
            stack.append((mid, hi, depth + 1))
    trace = [TracePoint(t, p, r1, r2) for t in sorted(cache) for p, r1, r2 in cache[t]]
    return regime, trace, sorted(skipped, key=lambda x: x[0])


def achievable_region(g: ChannelGains, gamma: float | None = None,
                      t_grid: int = DEFAULT_T_GRID,
                      dmin_policy: DminPolicy | None = None,
                      weak2_variant: str = "constant",
                      refine_tol: float | None = DEFAULT_REFINE_TOL) -> RateRegion:
    """Down-closed union, over the t-grid, of the achieved rate pairs.
    gamma, when given without a policy, selects the Auto policy."""
    if dmin_policy is None and gamma is not None:
        dmin_policy = DminPolicy.auto(gamma)
    _, trace, _ = achievable_points(g, t_grid, dmin_policy, weak2_variant, refine_tol)
    return _staircase(trace)


def _staircase(trace) -> RateRegion:
    return RateRegion.from_points([(0.0, 0.0)] + [(tp.r1, tp.r2) for tp in trace])


def gap_report(g: ChannelGains, gamma: float = 1.0, t_grid: int = DEFAULT_T_GRID,
               dmin_policy: DminPolicy | None = None,
               weak2_variant: str = "constant", edge_samples: int = 0,
               refine_tol: float | None = DEFAULT_REFINE_TOL,
               asymmetric: bool = False) -> GapReport:
    """Regime, analytic gap and numeric gap for the gains.

    Gains classified AsymExcluded carry no gap claim and report NaN gaps."""
    regime, trace, skipped = achievable_points(g, t_grid, dmin_policy, weak2_variant,
                                               refine_tol, asymmetric=asymmetric)
    outer = outer_region(g)
    if regime is Regime.AsymExcluded:
        return GapReport(regime, math.nan, math.nan, gamma, outer=outer)
    inner = _staircase(trace)
    if regime in SYMMETRIC_REGIMES:
        agap = analytic_gap(regime, g.h11_sq, g.h12_sq, gamma)
    else:
        agap = asym_analytic_gap(regime, g, gamma)
    return GapReport(regime, agap, numeric_gap(inner, outer, edge_samples), gamma,
                     tuple(trace), tuple(skipped), inner, outer)


def symmetric_gap(S: float, I: float, gamma: float = 1.0, t_grid: int = DEFAULT_T_GRID,
                  dmin_policy: DminPolicy | None = None,
                  weak2_variant: str = "constant",
                  refine_tol: float | None = DEFAULT_REFINE_TOL) -> GapReport:
    return gap_report(ChannelGains.symmetric(S, I), gamma, t_grid, dmin_policy, weak2_variant,
                      refine_tol=refine_tol)


def asym_gap(g: ChannelGains, gamma: float = 1.0, t_grid: int = DEFAULT_T_GRID,
             dmin_policy: DminPolicy | None = None,
             refine_tol: float | None = DEFAULT_REFINE_TOL) -> GapReport:
    """Gap report through the asymmetric regime path (even for symmetric
    gains). Gains with no gap claim yield AsymExcluded with NaN gaps."""
    return gap_report(g, gamma, t_grid, dmin_policy, refine_tol=refine_tol, asymmetric=True)


def gdof_gamma(S: float, alpha: float, power: float = 1.0) -> float:
    """Outage measure 1/(log2 min(S, S^alpha))^power, capped at 1."""
    m = min(S, S ** alpha)
    if m <= 2:
        return 1.0
    return min(1.0, 1.0 / math.log2(m) ** power)


def gdof_trace(alpha: float, snr_db_list, t_grid: int = DEFAULT_T_GRID,
               policy: DminKind = DminKind.Exact, power: float = 1.0) -> list[tuple[float, float]]:
    """(S, numeric gap / Ig(S)) along I = S^alpha."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    snr = [float(x) for x in snr_db_list]
    if any(b <= a for a, b in zip(snr, snr[1:])):
        raise ValueError("snr list must be strictly increasing")
    out = []
    for s_db in snr:
        S = 10 ** (s_db / 10)
        gamma = gdof_gamma(S, alpha, power)
        pol = DminPolicy(policy, gamma if policy in (DminKind.Prop3, DminKind.Auto) else None)
        rep = symmetric_gap(S, S ** alpha, gamma, t_grid, pol)
        out.append((S, rep.numeric_gap_bits / ig(S)))
    return out


__all__ = [
    "ChannelGains", "MixedInputParams", "DminKind", "DminPolicy", "Regime", "RateRegion",
    "GapReport", "TracePoint", "RegimeError", "ParamConstraintError",
    "inner_rate_pair", "inner_rate_pair_bound", "received_sum_set", "outer_halfspaces", "outer_region", "classify_symmetric",
    "table1_params", "achievable_points", "achievable_region", "analytic_gap", "numeric_gap",
    "classify_asym", "in_excluded_band", "asym_params", "asym_analytic_gap", "asym_gap",
    "gap_report", "symmetric_gap", "gdof_gamma", "gdof_trace", "weak_corner_points",
    "alpha_of", "t_values", "BETA_ASYM_VERY_STRONG", "GAP_ASYM_VERY_STRONG",
    "GAP_WEAK2_2R1R2", "GAP_WEAK2_SUMRATE", "GAP_VERY_WEAK", "DEFAULT_T_GRID",
]
