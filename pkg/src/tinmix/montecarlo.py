"""Monte Carlo oracles: mutual information for mixed inputs through the
interference channel, the modulo-fold receiver symbol error rate, and the
discrete-vs-Gaussian layer swap inequalities.

Mutual informations are estimated as h(Y) - h(Y | X) where both
densities are exact finite Gaussian mixtures, so the only error is
sampling error. Each sample contributes -log p_Y(y) + log p_W(w) with w
the noise-plus-interference part of the same draw (common random numbers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp

from .constellation import (
    DiscreteConstellation,
    SingletonError,
    discrete_layer,
    entropy_bits,
    exact_min_distance,
    sum_set,
)
from .mi_bounds import LOG2E, ig, q_function
from .regions import ChannelGains, MixedInputParams, RegimeError

CHUNK = 1 << 16
# components farther than (nearest distance + WINDOW_SIGMAS sigma) are dropped;
# each dropped term is below exp(-72) relative to the nearest one
WINDOW_SIGMAS = 12.0
MAX_BATCH_CELLS = 1 << 21


@dataclass(frozen=True)
class McConfig:
    samples: int
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValueError(f"samples must be a positive integer, got {self.samples!r}")

    def rng(self, substream: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id), int(substream)))
        return np.random.default_rng(ss)

    def child(self, stream_id: int) -> "McConfig":
        return McConfig(self.samples, self.seed, stream_id)


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float


def mixture_logpdf(x: np.ndarray, means: np.ndarray, log_w: np.ndarray, var: float) -> np.ndarray:
    """Natural-log density of sum_k w_k N(means_k, var) at each x.

    ``means`` must be sorted. Only components inside a window around each
    x contribute; the window always contains the nearest component."""
    x = np.asarray(x, dtype=float)
    K = means.size
    sigma = math.sqrt(var)
    norm = -0.5 * math.log(2 * math.pi * var)
    if K == 1:
        return norm - (x - means[0]) ** 2 / (2 * var) + log_w[0]
    pos = np.searchsorted(means, x)
    left = means[np.clip(pos - 1, 0, K - 1)]
    right = means[np.clip(pos, 0, K - 1)]
    r0 = np.minimum(np.abs(x - left), np.abs(x - right))
    half = r0 + WINDOW_SIGMAS * sigma
    lo = np.searchsorted(means, x - half, side="left")
    hi = np.searchsorted(means, x + half, side="right")
    out = np.empty_like(x)
    width = hi - lo
    start = 0
    n = x.size
    while start < n:
        # grow the batch while the padded window matrix stays small
        w_max = int(width[start])
        stop = start
        while stop < n:
            w_max_new = max(w_max, int(width[stop]))
            if (stop - start + 1) * w_max_new > MAX_BATCH_CELLS and stop > start:
                break
            w_max = w_max_new
            stop += 1
        sl = slice(start, stop)
        cols = lo[sl, None] + np.arange(w_max)[None, :]
        valid = cols < hi[sl, None]
        cols = np.minimum(cols, K - 1)
        z = -(x[sl, None] - means[cols]) ** 2 / (2 * var) + log_w[cols]
        z[~valid] = -np.inf
        out[sl] = logsumexp(z, axis=1) + norm
        start = stop
    return out


def _log_weights(c: DiscreteConstellation) -> np.ndarray:
    return np.log(c.probs)


def mi_sum_mixture(A: DiscreteConstellation, B: DiscreteConstellation | None,
                   var_own: float, var_noise: float, cfg: McConfig) -> McEstimate:
    """I(A + G; A + G + B + N) in bits, G ~ N(0, var_own), N ~ N(0, var_noise),
    A and B discrete and everything independent."""
    if var_noise <= 0:
        raise ValueError("var_noise must be positive")
    if var_own < 0:
        raise ValueError("var_own must be nonnegative")
    if B is None:
        B = DiscreteConstellation(np.zeros(1), np.ones(1))
    Y = sum_set(1.0, A, 1.0, B)
    var_y = var_own + var_noise
    rng = cfg.rng()
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < cfg.samples:
        m = min(CHUNK, cfg.samples - done)
        ia = rng.choice(A.size, size=m, p=A.probs) if A.size > 1 else np.zeros(m, int)
        ib = rng.choice(B.size, size=m, p=B.probs) if B.size > 1 else np.zeros(m, int)
        g = rng.standard_normal(m)
        nz = rng.standard_normal(m)
        w = B.points[ib] + math.sqrt(var_noise) * nz
        y = A.points[ia] + math.sqrt(var_own) * g + w
        d = (mixture_logpdf(w, B.points, _log_weights(B), var_noise)
             - mixture_logpdf(y, Y.points, _log_weights(Y), var_y)) * LOG2E
        total += float(d.sum())
        total_sq += float(np.dot(d, d))
        done += m
    n = cfg.samples
    mean = total / n
    var = max(0.0, (total_sq - n * mean * mean) / max(1, n - 1))
    return McEstimate(mean, math.sqrt(var / n))


def mi_discrete_awgn(c: DiscreteConstellation, cfg: McConfig) -> McEstimate:
    """I(X; X + Z) for a discrete received constellation at unit noise."""
    return mi_sum_mixture(c, None, 0.0, 1.0, cfg)


def mi_mixed_input(g: ChannelGains, p: MixedInputParams, user: int, cfg: McConfig) -> McEstimate:
    """I(X_u; Y_u) with the other user's mixed input treated as noise."""
    if user == 1:
        h_own, h_cross, n_own, n_cross, d_own, d_cross = (
            g.h11_sq, g.h12_sq, p.n1, p.n2, p.delta1, p.delta2)
    elif user == 2:
        h_own, h_cross, n_own, n_cross, d_own, d_cross = (
            g.h22_sq, g.h21_sq, p.n2, p.n1, p.delta2, p.delta1)
    else:
        raise ValueError("user must be 1 or 2")
    A = discrete_layer(n_own).scaled(math.sqrt(h_own * (1 - d_own)))
    B = discrete_layer(n_cross).scaled(math.sqrt(h_cross * (1 - d_cross)))
    return mi_sum_mixture(A, B, h_own * d_own, 1.0 + h_cross * d_cross, cfg)


# ---------------------------------------------------------------------------
# modulo-fold receiver


class SerResult(NamedTuple):
    ser: float
    bound: float
    ser_free: float
    ser_std: float
    free_std: float


def ser_spacing(n_points: int, normalization: str) -> float:
    """PAM spacing d: 1 for "unit_spacing", sqrt(12/(N^2-1)) for "unit_energy"."""
    if normalization == "unit_spacing":
        return 1.0
    if normalization == "unit_energy":
        return math.sqrt(12.0 / (n_points ** 2 - 1))
    raise ValueError(f"unknown normalization {normalization!r}")


def check_fold_admissible(S: float, I: float, n_points: int):
    if int(n_points) != n_points or n_points < 3 or n_points % 2 == 0:
        raise ValueError(f"n_points must be an odd integer >= 3, got {n_points!r}")
    if S <= 0:
        raise ValueError("S must be positive")
    if n_points ** 2 * S > I:
        raise RegimeError(f"non-overlap needs N^2 S <= I, got N^2 S = {n_points ** 2 * S!r} > I = {I!r}")


def ser_modulo_decoder(S: float, I: float, n_points: int, cfg: McConfig,
                       normalization: str = "unit_spacing") -> SerResult:
    """Symbol error rate of decoding n1 from Y = (sqrt(S) n1 + sqrt(I) n2) d + Z
    after folding Y onto [-sqrt(I) d / 2, sqrt(I) d / 2].

    The reference ``ser_free`` decodes sqrt(S) n1 d + Z with the same
    noise. The returned bound is 2 Q(sqrt(S) d / 2), which equals
    2 Q(sqrt(S) / 2) for unit spacing."""
    check_fold_admissible(S, I, n_points)
    Q = (n_points - 1) // 2
    d = ser_spacing(n_points, normalization)
    rng = cfg.rng()
    step = math.sqrt(S) * d
    period = math.sqrt(I) * d
    errs = 0
    errs_free = 0
    done = 0
    while done < cfg.samples:
        m = min(CHUNK, cfg.samples - done)
        n1 = rng.integers(-Q, Q + 1, size=m)
        n2 = rng.integers(-Q, Q + 1, size=m)
        z = rng.standard_normal(m)
        clean = step * n1 + z
        y = clean + period * n2
        folded = np.mod(y + period / 2, period) - period / 2
        est = np.clip(np.rint(folded / step), -Q, Q)
        est_free = np.clip(np.rint(clean / step), -Q, Q)
        errs += int(np.count_nonzero(est != n1))
        errs_free += int(np.count_nonzero(est_free != n1))
        done += m
    n = cfg.samples
    ser, free = errs / n, errs_free / n
    return SerResult(ser, 2 * q_function(step / 2), free,
                     math.sqrt(ser * (1 - ser) / n), math.sqrt(free * (1 - free) / n))


# ---------------------------------------------------------------------------
# discrete vs Gaussian second layer


class LayerSwapCheck(NamedTuple):
    diff1: float
    diff2: float
    std_error: float
    bound1: float
    bound2: float
    matched: bool = True

    def holds(self, sigmas: float = 3.0) -> bool:
        slack = sigmas * self.std_error
        return self.diff1 <= self.bound1 + slack and self.diff2 <= self.bound2 + slack


def layer_swap_bounds(g: float, d_min: float) -> tuple[float, float]:
    b1 = 0.5 * math.log2(2.0)
    b2 = 0.5 * math.log2(math.pi * math.e / 3) + 0.5 * math.log2(1 + 12 / (g * g * d_min * d_min))
    return b1, b2


def layer_swap_matched(Xc: DiscreteConstellation, Xp: DiscreteConstellation, g: float) -> bool:
    """Ig(g^2 Var[X_M]) <= H(X_D) + 1/2 with Var[X_M] = Var[Xc] + E[Xp^2].

    Under this condition I(X_M) <= Ig(g^2 Var[X_M]) and the OW-B bound on
    I(X_D) give the second layer-swap inequality; without it the
    inequality can fail (few points at a high g d_min)."""
    var_c = Xc.energy() - float(np.dot(Xc.probs, Xc.points)) ** 2
    XD = sum_set(1.0, Xc, 1.0, Xp)
    return ig(g * g * (max(var_c, 0.0) + Xp.energy())) <= entropy_bits(XD) + 0.5 + 1e-12


def prop9_check(Xc: DiscreteConstellation, Xp: DiscreteConstellation, g: float,
                cfg: McConfig) -> LayerSwapCheck:
    """Compare X_D = Xc + Xp against X_M = Xc + Gaussian with the power of
    Xp. diff1 = I(X_D) - I(X_M), diff2 = I(X_M) - I(X_D), each on the
    channel g X + Z. ``matched`` tells whether (X_D, g) lies in the domain
    where the second bound is guaranteed (see ``layer_swap_matched``)."""
    XD = sum_set(1.0, Xc, 1.0, Xp)
    try:
        dmin = exact_min_distance(XD)
    except SingletonError as exc:
        raise ValueError("X_D must have at least two points") from exc
    matched = layer_swap_matched(Xc, Xp, g)
    if g == 0:
        return LayerSwapCheck(0.0, 0.0, 0.0, *layer_swap_bounds(1.0, dmin), matched)
    # same stream for both estimates (common random numbers)
    i_d = mi_sum_mixture(XD.scaled(g), None, 0.0, 1.0, cfg)
    i_m = mi_sum_mixture(Xc.scaled(g), None, g * g * Xp.energy(), 1.0, cfg)
    se = math.hypot(i_d.std_error, i_m.std_error)
    return LayerSwapCheck(i_d.value - i_m.value, i_m.value - i_d.value, se,
                          *layer_swap_bounds(g, dmin), matched)


__all__ = [
    "McConfig", "McEstimate", "SerResult", "LayerSwapCheck", "mixture_logpdf",
    "mi_sum_mixture", "mi_discrete_awgn", "mi_mixed_input", "ser_modulo_decoder",
    "ser_spacing", "check_fold_admissible", "prop9_check", "layer_swap_bounds",
    "layer_swap_matched",
]
