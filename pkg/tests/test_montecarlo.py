import math

import numpy as np
import pytest
from scipy.special import logsumexp

from tinmix.constellation import DiscreteConstellation, discrete_layer, pam
from tinmix.mi_bounds import ig, nd, pam_received
from tinmix.montecarlo import (
    McConfig,
    check_fold_admissible,
    layer_swap_bounds,
    mi_discrete_awgn,
    mi_mixed_input,
    mi_sum_mixture,
    mixture_logpdf,
    layer_swap_matched,
    prop9_check,
    ser_modulo_decoder,
    ser_spacing,
)
from tinmix.regions import ChannelGains, MixedInputParams, RegimeError, inner_rate_pair, table1_params, Regime

# quadrature oracle, computed independently and frozen
QUAD_31_1000 = 4.675730884625668


def test_config_validation_and_reproducibility():
    with pytest.raises(ValueError):
        McConfig(0)
    with pytest.raises(ValueError):
        McConfig(2.5)
    c = pam_received(4, 10.0)
    a = mi_discrete_awgn(c, McConfig(20_000, seed=3))
    b = mi_discrete_awgn(c, McConfig(20_000, seed=3))
    other = mi_discrete_awgn(c, McConfig(20_000, seed=4))
    assert a == b
    assert a != other


def test_streams_are_independent():
    r1 = McConfig(10, 7, 0).rng().standard_normal(5)
    r2 = McConfig(10, 7, 1).rng().standard_normal(5)
    assert not np.allclose(r1, r2)


def test_mixture_logpdf_matches_full_sum():
    rng = np.random.default_rng(0)
    means = np.sort(rng.uniform(-200, 200, 500))
    log_w = np.log(np.full(500, 1 / 500))
    x = rng.uniform(-250, 250, 3000)
    var = 2.3
    full = logsumexp(-(x[:, None] - means[None, :]) ** 2 / (2 * var) + log_w[None, :], axis=1)
    full -= 0.5 * math.log(2 * math.pi * var)
    assert np.allclose(mixture_logpdf(x, means, log_w, var), full, rtol=0, atol=1e-10)


def test_gaussian_closed_forms():
    one = DiscreteConstellation(np.zeros(1), np.ones(1))
    est = mi_sum_mixture(one, None, 10.0, 1.0, McConfig(200_000, 1))
    assert est.value == pytest.approx(ig(10.0), abs=4 * est.std_error + 1e-3)
    g = ChannelGains.symmetric(10.0, 3.0)
    e = mi_mixed_input(g, MixedInputParams(1, 1, 1.0, 1.0), 1, McConfig(200_000, 2))
    assert abs(e.value - ig(10 / 4)) < 4 * e.std_error + 1e-3


def test_pam_mi_against_quadrature():
    S = 1000.0
    est = mi_discrete_awgn(pam_received(31, S), McConfig(200_000, 5))
    assert abs(est.value - QUAD_31_1000) < 4 * est.std_error + 2e-3


def test_inner_rate_bounded_by_mc():
    S = 1000.0
    I = S ** 1.49
    g = ChannelGains.symmetric(S, I)
    p = table1_params(Regime.Strong, S, I, 0.5)[0]
    r1, _ = inner_rate_pair(g, p)
    est = mi_mixed_input(g, p, 1, McConfig(100_000, 9))
    assert r1 <= est.value + 3 * est.std_error


def test_std_error_scales_with_root_samples():
    g = ChannelGains.symmetric(100.0, 30.0)
    p = MixedInputParams(6, 4, 0.2, 0.3)
    a = mi_mixed_input(g, p, 1, McConfig(100_000, 1)).std_error
    b = mi_mixed_input(g, p, 1, McConfig(200_000, 2)).std_error
    assert a / b == pytest.approx(math.sqrt(2), rel=0.1)


def test_rerun_tolerance():
    g = ChannelGains.symmetric(100.0, 30.0)
    p = MixedInputParams(6, 4, 0.2, 0.3)
    a = mi_mixed_input(g, p, 2, McConfig(150_000, 4, 3))
    b = mi_mixed_input(g, p, 2, McConfig(150_000, 4, 3))
    assert abs(a.value - b.value) <= 1e-9


def test_analytic_bounds_below_mc_matrix():
    from tinmix.regions import inner_rate_pair_bound
    from tinmix.mi_bounds import MiBoundKind
    rng = np.random.default_rng(8)
    for k in range(100):
        h = 10 ** rng.uniform(0, 3, size=4)
        g = ChannelGains(*h)
        p = MixedInputParams(int(rng.integers(1, 12)), int(rng.integers(1, 12)),
                             float(rng.uniform(0, 1)), float(rng.uniform(0, 1)))
        e1 = mi_mixed_input(g, p, 1, McConfig(5000, 80 + k))
        sigma = 3 * e1.std_error + 1e-9
        assert inner_rate_pair(g, p)[0] <= e1.value + sigma
        for kind in (MiBoundKind.OzarowWynerB, MiBoundKind.OzarowWynerA, MiBoundKind.DtdFull):
            assert inner_rate_pair_bound(g, p, kind)[0] <= e1.value + sigma, (k, kind)


def test_ser_unit_spacing_under_bound():
    res = ser_modulo_decoder(16.0, 800.0, 5, McConfig(200_000, 0))
    assert res.bound == pytest.approx(2 * 0.5 * math.erfc(2 / math.sqrt(2)))
    assert res.ser <= res.bound + 3 * res.ser_std
    assert abs(res.ser - res.ser_free) < 4 * math.hypot(res.ser_std, res.free_std) + 1e-3


def test_ser_unit_energy_uses_scaled_bound():
    res = ser_modulo_decoder(16.0, 800.0, 5, McConfig(200_000, 0), normalization="unit_energy")
    d = ser_spacing(5, "unit_energy")
    assert d == pytest.approx(math.sqrt(0.5))
    assert res.ser <= res.bound + 3 * res.ser_std
    with pytest.raises(ValueError):
        ser_spacing(5, "other")


def test_fold_admissibility():
    check_fold_admissible(16.0, 400.0, 5)
    with pytest.raises(RegimeError):
        check_fold_admissible(16.0, 399.0, 5)
    for bad in (4, 1, 2.5):
        with pytest.raises(ValueError):
            check_fold_admissible(16.0, 1e6, bad)


def test_layer_swap_singleton_second_layer():
    # with Xp a single point X_D and X_M coincide
    Xc = pam(4, 2.0)
    r = prop9_check(Xc, DiscreteConstellation(np.zeros(1), np.ones(1)), 3.0, McConfig(40_000, 1))
    assert abs(r.diff1) < 1e-12 and abs(r.diff2) < 1e-12
    assert r.holds()


def test_layer_swap_nested_pam():
    Xc, Xp = pam(4, 8.0), pam(4, 1.0)
    for g in (0.5, 2.0, 6.0):
        r = prop9_check(Xc, Xp, g, McConfig(100_000, 3))
        assert r.holds(3.0)
        assert r.diff1 == pytest.approx(-r.diff2)
    assert layer_swap_bounds(1.0, 1.0)[0] == 0.5


def test_layer_swap_zero_gain_and_singleton():
    Xc, Xp = pam(4, 8.0), pam(4, 1.0)
    r = prop9_check(Xc, Xp, 0.0, McConfig(1000))
    assert (r.diff1, r.diff2) == (0.0, 0.0)
    one = DiscreteConstellation(np.zeros(1), np.ones(1))
    with pytest.raises(ValueError):
        prop9_check(one, one, 1.0, McConfig(1000))


def test_layer_swap_counterexample_outside_matched_domain():
    # two well separated 2-point layers at high gain: the Gaussian layer
    # carries far more than the 2 bits X_D can, so the second bound fails
    Xc = discrete_layer(2).scaled(6.954)
    Xp = discrete_layer(2).scaled(0.919)
    r = prop9_check(Xc, Xp, 7.26, McConfig(50_000, 1))
    assert not r.matched
    assert r.diff2 > r.bound2 + 10 * r.std_error
    assert r.diff1 <= r.bound1


def test_matched_domain_examples():
    assert layer_swap_matched(pam(4, 8.0), pam(4, 1.0), 1.0)
    assert not layer_swap_matched(pam(4, 8.0), pam(4, 1.0), 30.0)


def test_layer_swap_random_matrix():
    rng = np.random.default_rng(21)
    checked = 0
    k = 0
    while checked < 100:
        k += 1
        n1, n2 = rng.integers(2, 7, size=2)
        Xc = discrete_layer(int(n1)).scaled(rng.uniform(1, 10))
        Xp = discrete_layer(int(n2)).scaled(rng.uniform(0.1, 1))
        g = rng.uniform(0.2, 5)
        r = prop9_check(Xc, Xp, g, McConfig(4000, 1000 + k))
        assert r.diff1 <= r.bound1 + 4 * r.std_error, (k, r)
        if r.matched:
            checked += 1
            assert r.holds(4.0), (k, r)
