"""Closed-form mutual-information bounds for discrete inputs on a
unit-variance additive Gaussian noise channel. All values in bits.

The constellation passed in is the *received* noiseless constellation,
i.e. already scaled by the channel gain; noise variance is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy.special import erfc, logsumexp

from .constellation import (
    DiscreteConstellation,
    ConstellationError,
    discrete_layer,
    distance_spectrum,
    entropy_bits,
    exact_min_distance,
)

LOG2E = 1.0 / math.log(2.0)

# 0.5 log2(2 pi e / 12): the uniform-vs-Gaussian entropy offset (~0.2546)
GAP_UNIFORM = 0.5 * math.log2(2 * math.pi * math.e / 12)
# 0.5 log2(2 pi e / 3): point-to-point PAM gap to capacity (~1.2546)
GAP_PTP_PAM = 0.5 * math.log2(2 * math.pi * math.e / 3)
# 0.5 log2(pi e / 6): one-dimensional lattice shaping loss (~0.2546)
SHAPING_LOSS = 0.5 * math.log2(math.pi * math.e / 6)
# 0.5 log2(6 pi e) (~2.8395), a loose worst-case OW-B gap for unit-energy PAM
GAP_6PIE = 0.5 * math.log2(6 * math.pi * math.e)

XI_FLOOR = 1e-300
XI_CEIL = 1.0 - 1e-12


class MiBoundKind(Enum):
    OzarowWynerB = "ow_b"
    OzarowWynerA = "ow_a"
    DtdSimple = "dtd_simple"
    DtdFull = "dtd_full"
    UpperMin = "upper_min"


@dataclass(frozen=True)
class BoundValue:
    value: float
    gap_term: float


def ig(x: float) -> float:
    """Gaussian-input capacity 0.5 log2(1 + x)."""
    if x < 0:
        raise ValueError(f"ig expects x >= 0, got {x!r}")
    return 0.5 * math.log2(1.0 + x)


def nd(x: float) -> int:
    """Number of PAM points matched to SNR x: floor(sqrt(1 + x))."""
    if x < 0:
        raise ValueError(f"nd expects x >= 0, got {x!r}")
    n = math.isqrt(int(math.floor(1.0 + x)))
    # isqrt of the floored argument equals floor(sqrt(1 + x)) for real x
    return max(1, n)


def owb_gap(d_min: float) -> float:
    """Additive gap of the OW-B bound for a constellation with spacing d_min."""
    if d_min <= 0:
        raise ValueError("d_min must be positive")
    return GAP_UNIFORM + 0.5 * math.log2(1.0 + 12.0 / d_min**2)


def id_bits(c: DiscreteConstellation) -> float:
    """[H(X) - OW-B gap]^+, zero for a singleton."""
    if c.size < 2:
        return 0.0
    return max(0.0, entropy_bits(c) - owb_gap(exact_min_distance(c)))


def id_from(entropy: float, d_min: float) -> float:
    """Same clamped quantity when entropy and a (lower bound on) d_min are given."""
    if d_min == math.inf:
        return max(0.0, entropy - GAP_UNIFORM)
    return max(0.0, entropy - owb_gap(d_min))


def ow_b_lower(c: DiscreteConstellation) -> BoundValue:
    if c.size < 2:
        raise ConstellationError("OW-B bound needs at least two points")
    gap = owb_gap(exact_min_distance(c))
    return BoundValue(max(0.0, entropy_bits(c) - gap), gap)


def q_function(x: float) -> float:
    """Standard normal tail probability P[Z > x]."""
    return float(0.5 * erfc(x / math.sqrt(2.0)))


def _h2(p: float) -> float:
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def ow_a_lower(c: DiscreteConstellation) -> BoundValue:
    """Fano bound with a union-bound symbol error probability."""
    n = c.size
    if n < 2:
        raise ConstellationError("OW-A bound needs at least two points")
    xi = 2.0 * q_function(exact_min_distance(c) / 2.0)
    # the Fano term peaks at (n - 1) / n; beyond it a larger error
    # probability no longer bounds the term, so cap there
    xi = min(max(xi, XI_FLOOR), XI_CEIL, (n - 1) / n)
    gap = _h2(xi) + xi * math.log2(n - 1)
    return BoundValue(max(0.0, entropy_bits(c) - gap), gap)


def dtd_simple_gap(n_points: int, d_min: float) -> float:
    return 0.5 * math.log2(math.e / 2) + math.log2(1 + (n_points - 1) * math.exp(-d_min**2 / 4))


def dtd_simple_lower(c: DiscreteConstellation) -> BoundValue:
    n = c.size
    if n < 2:
        raise ConstellationError("DTD bound needs at least two points")
    if not c.is_uniform():
        raise ConstellationError("simple DTD bound assumes equiprobable points")
    gap = dtd_simple_gap(n, exact_min_distance(c))
    return BoundValue(max(0.0, math.log2(n) - gap), gap)


def dtd_full_lower(c: DiscreteConstellation) -> BoundValue:
    """Jensen bound on h(Y) through the pairwise overlap of the mixture
    components: -log2 sum p_i p_j e^{-(s_i-s_j)^2/4}/sqrt(4 pi) - h(Z)."""
    w, d2 = distance_spectrum(c)
    log_sum = float(logsumexp(-d2 / 4.0, b=w)) - 0.5 * math.log(4 * math.pi)
    raw = -log_sum * LOG2E - 0.5 * math.log2(2 * math.pi * math.e)
    # gap_term is reported relative to the entropy so callers can compare families
    return BoundValue(max(0.0, raw), entropy_bits(c) - raw)


def mi_upper(c: DiscreteConstellation) -> float:
    return min(entropy_bits(c), ig(c.energy()))


def state_channel_rate_lower(S: float, T: DiscreteConstellation) -> float:
    """Gaussian input at SNR S against an unknown discrete additive state T
    (T already scaled by its gain). Deliberately unclamped."""
    return ig(S) - owb_gap(exact_min_distance(T))


def ptp_pam_owb_gap(S: float) -> tuple[float, float]:
    """Gap ig(S) - OW-B for unit-energy PAM with nd(S) points at SNR S.

    Returns ``(clamped, unclamped)``: the first uses the [.]^+ rate, the
    second the raw log N - gap expression (N = 1 counts as log N = 0 with
    an infinite spacing)."""
    n = nd(S)
    if n == 1:
        raw = -GAP_UNIFORM
    else:
        raw = math.log2(n) - GAP_UNIFORM - 0.5 * math.log2(1 + (n * n - 1) / S)
    return ig(S) - max(0.0, raw), ig(S) - raw


def dtd_reduced_points(S: float) -> int:
    """Point count nd(S^(1-eps)) used with the simple DTD bound, where
    eps = max(0, log(ln(S)/6)/log S)."""
    if S <= 1:
        return nd(S)
    eps = 0.0
    lnS = math.log(S)
    if lnS / 6 > 1:
        eps = max(0.0, math.log(lnS / 6) / lnS)
    return nd(S ** (1 - eps))


def bound_value(kind: MiBoundKind, c: DiscreteConstellation) -> float:
    if kind is MiBoundKind.OzarowWynerB:
        return ow_b_lower(c).value if c.size > 1 else 0.0
    if kind is MiBoundKind.OzarowWynerA:
        return ow_a_lower(c).value if c.size > 1 else 0.0
    if kind is MiBoundKind.DtdSimple:
        return dtd_simple_lower(c).value if c.size > 1 else 0.0
    if kind is MiBoundKind.DtdFull:
        return dtd_full_lower(c).value
    return mi_upper(c)


def pam_received(n_points: int, snr: float) -> DiscreteConstellation:
    """sqrt(snr) times unit-energy PAM, the noiseless point-to-point output."""
    return discrete_layer(n_points).scaled(math.sqrt(snr))


__all__ = [
    "BoundValue", "MiBoundKind", "GAP_UNIFORM", "GAP_PTP_PAM", "SHAPING_LOSS",
    "ig", "nd", "owb_gap", "id_bits", "id_from", "ow_b_lower", "ow_a_lower",
    "dtd_simple_lower", "dtd_full_lower", "mi_upper", "q_function",
    "state_channel_rate_lower", "ptp_pam_owb_gap", "dtd_reduced_points",
    "bound_value", "pam_received",
]
