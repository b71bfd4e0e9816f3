"""The twelve acceptance criteria. Each test appends one
"criterion N: PASS|FAIL ..." line that the terminal summary prints in order.

Run directly with ``python3 tests/test_acceptance.py``."""

import math
import subprocess
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

import conftest
from tinmix.constellation import discrete_layer, exact_min_distance, pam, sum_set
from tinmix.mi_bounds import (
    GAP_PTP_PAM,
    SHAPING_LOSS,
    dtd_full_lower,
    ig,
    nd,
    ow_b_lower,
    pam_received,
    ptp_pam_owb_gap,
)
from tinmix.montecarlo import (
    McConfig,
    layer_swap_matched,
    mi_discrete_awgn,
    mi_mixed_input,
    prop9_check,
    ser_modulo_decoder,
)
from tinmix.regions import (
    ChannelGains,
    DminKind,
    DminPolicy,
    Regime,
    analytic_gap,
    classify_symmetric,
    gdof_trace,
    inner_rate_pair,
    outer_region,
    symmetric_gap,
    table1_params,
)
from tinmix.sumset_geometry import (
    GainGrid,
    empirical_outage_fraction,
    nonoverlap_condition,
    prop2_bound,
    prop2_boundary,
)

db = lambda x: 10 ** (x / 10)


def record(n, ok, detail, start=None, limit=None):
    if start is not None:
        elapsed = time.perf_counter() - start
        detail += f" [{elapsed:.1f} s, limit {limit:g} s]"
        ok = ok and elapsed < limit
    conftest.ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


# ---------------------------------------------------------------------------
# shared randomized matrix for criteria 5-8 and 12


@lru_cache(maxsize=None)
def very_strong_reports():
    rng = np.random.default_rng(501)
    out = []
    for _ in range(200):
        S = db(rng.uniform(10, 50))
        I = S * (1 + S) * 10 ** rng.uniform(0, 2)
        out.append((S, I, symmetric_gap(S, I, dmin_policy=DminPolicy.prop2())))
    return tuple(out)


@lru_cache(maxsize=None)
def very_weak_reports():
    rng = np.random.default_rng(601)
    out = []
    for _ in range(200):
        S = db(rng.uniform(10, 50))
        i_max = (math.sqrt(1 + 4 * S) - 1) / 2
        I = i_max * rng.uniform(0, 1)
        out.append((S, I, symmetric_gap(S, I)))
    return tuple(out)


@lru_cache(maxsize=None)
def strong_reports():
    rng = np.random.default_rng(701)
    out = []
    while len(out) < 500:
        S = db(rng.uniform(10, 50))
        I = S * (1 + S) ** rng.uniform(0, 1)
        if not (S < I < S * (1 + S)):
            continue
        out.append((S, I, symmetric_gap(S, I, gamma=0.5, t_grid=33)))
    return tuple(out)


S8 = 1000.0
I8 = S8 ** 1.49


@lru_cache(maxsize=None)
def criterion8_point():
    """Strong-regime parameters (symmetric choices) with the best analytic
    symmetric rate, and their MC rates at 1e6 samples."""
    g = ChannelGains.symmetric(S8, I8)
    cands = [p for t in np.linspace(0, 1, 65) for p in table1_params(Regime.Strong, S8, I8, float(t))]
    sym = [q for q in cands if q.n1 == q.n2 and q.delta1 == q.delta2]
    p = max(sym or cands, key=lambda q: min(inner_rate_pair(g, q)))
    e1 = mi_mixed_input(g, p, 1, McConfig(10 ** 6, 8, 0))
    e2 = mi_mixed_input(g, p, 2, McConfig(10 ** 6, 8, 1))
    return g, p, e1, e2


# ---------------------------------------------------------------------------


def test_criterion_01_ptp_pam_gap():
    t0 = time.perf_counter()
    gaps = []
    for s_db in range(0, 61):
        S = db(s_db)
        n = nd(S)
        c = pam_received(n, S)
        gaps.append(ig(S) - (ow_b_lower(c).value if n > 1 else 0.0))
    worst = ptp_pam_owb_gap(3 - 1e-9)[1]
    ok = max(gaps) <= GAP_PTP_PAM + 1e-6 and abs(worst - GAP_PTP_PAM) <= 1e-6
    ok = ok and max(ptp_pam_owb_gap(s)[1] for s in np.linspace(0.01, 1e6, 20001)) <= worst + 1e-12
    record(1, ok, f"max grid gap {max(gaps):.4f}, unclamped gap at S=3-eps {worst:.6f} vs {GAP_PTP_PAM:.6f}",
           t0, 1)


def test_criterion_02_high_snr_plateaus():
    t0 = time.perf_counter()
    parts, ok = [], True
    for s_db in (30, 40, 50):
        S = db(s_db)
        c = pam_received(nd(S), S)
        g_ow = ig(S) - ow_b_lower(c).value
        g_dtd = ig(S) - dtd_full_lower(c).value
        ok &= 0.70 <= g_ow <= 0.80 and 0.30 <= g_dtd <= 0.42
        parts.append(f"{s_db} dB: OW-B {g_ow:.3f}, DTD {g_dtd:.3f}")
    S = db(50)
    est = mi_discrete_awgn(pam_received(nd(S), S), McConfig(10 ** 6, 2))
    mc_gap = ig(S) - est.value
    ok &= mc_gap >= SHAPING_LOSS - 3 * est.std_error
    parts.append(f"MC gap at 50 dB {mc_gap:.4f} +- {est.std_error:.4f} >= {SHAPING_LOSS:.4f}")
    record(2, ok, "; ".join(parts), t0, 60)


def test_criterion_03_nonoverlap_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    done = fails = 0
    while done < 1000:
        nx, ny = rng.integers(2, 17, size=2)
        X, Y = pam(int(nx), rng.uniform(0.2, 3)), pam(int(ny), rng.uniform(0.2, 3))
        hx, hy = rng.uniform(0.01, 10) * rng.choice([-1, 1]), 10 ** rng.uniform(-2, 2)
        if not nonoverlap_condition(hx, X, hy, Y):
            continue
        done += 1
        b = prop2_bound(hx, X, hy, Y)
        s = sum_set(hx, X, hy, Y)
        d = exact_min_distance(s)
        ref = min(abs(hx) * exact_min_distance(X), abs(hy) * exact_min_distance(Y))
        if s.size != X.size * Y.size or b.cardinality != s.size or not math.isclose(d, ref, rel_tol=1e-9) \
                or not math.isclose(b.dmin_lower, ref, rel_tol=1e-12):
            fails += 1
    record(3, fails == 0, f"{done} non-overlap draws, {fails} failures", t0, 30)


def test_criterion_04_outage_fraction():
    t0 = time.perf_counter()
    X = Y = pam(10, 1.0)
    _, hi = prop2_boundary(X, 1.0, Y)
    parts, ok = [], True
    for k, gamma in enumerate((0.1, 0.3, 0.7)):
        frac = empirical_outage_fraction(X, Y, gamma, GainGrid(0.0, hi, samples=10 ** 4, hy_fixed=1.0), 40 + k)
        ok &= frac <= gamma + 0.02
        parts.append(f"gamma {gamma}: {frac:.4f}")
    record(4, ok, "violation fractions " + ", ".join(parts), t0, 30)


def test_criterion_05_very_strong_gap():
    t0 = time.perf_counter()
    reps = [r for _, _, r in very_strong_reports()]
    assert all(r.regime is Regime.VeryStrong for r in reps)
    worst = max(r.numeric_gap_bits for r in reps)
    record(5, worst <= GAP_PTP_PAM + 1e-6, f"200 samples, max numeric gap {worst:.4f} <= {GAP_PTP_PAM:.4f}",
           t0, 10)


def test_criterion_06_very_weak_gap():
    t0 = time.perf_counter()
    reps = [r for _, _, r in very_weak_reports()]
    assert all(r.regime is Regime.VeryWeak for r in reps)
    worst = max(r.numeric_gap_bits for r in reps)
    record(6, worst <= 0.5 + 1e-6, f"200 samples, max numeric gap {worst:.4f} <= 0.5", t0, 10)


def test_criterion_07_strong_statistical_gap():
    t0 = time.perf_counter()
    reps = [r for _, _, r in strong_reports()]
    assert all(r.regime is Regime.Strong for r in reps)
    n = len(reps)
    bad = sum(r.numeric_gap_bits > r.analytic_gap_bits for r in reps)
    gamma = 0.5
    allowed = gamma + 2 * math.sqrt(gamma * (1 - gamma) / n)
    worst = max(r.numeric_gap_bits for r in reps)
    record(7, bad / n <= allowed,
           f"{n} samples, {bad} exceed the analytic gap (allowed fraction {allowed:.3f}), max gap {worst:.3f}",
           t0, 120)


def test_criterion_08_strong_example():
    t0 = time.perf_counter()
    g, p, e1, e2 = criterion8_point()
    outer = outer_region(g)
    # largest symmetric point (R, R) of the outer region
    sym = min(c / (a + b) for a, b, c in outer.halfspaces)
    r_mc = min(e1.value, e2.value)
    se = max(e1.std_error, e2.std_error)
    gap = sym - r_mc
    full = analytic_gap(Regime.Strong, S8, I8, 0.1)
    ok = gap < 0.7 + 3 * se and full > ig(S8)
    record(8, ok,
           f"params {p.as_list()}, MC symmetric rate {r_mc:.4f} +- {se:.5f}, outer {sym:.4f}, gap {gap:.3f} < 0.7; "
           f"analytic gap(0.1) {full:.3f} > Ig(S) {ig(S8):.4f}", t0, 300)


@pytest.mark.xfail(strict=True, reason="the stated 6.977 omits the 1.2546 constant of the same "
                                       "expression; the formula evaluates to 8.232 (see notes)")
def test_criterion_08_stated_analytic_number():
    full = analytic_gap(Regime.Strong, S8, I8, 0.1)
    ok = abs(full - 6.977) <= 1e-3
    conftest.ACCEPTANCE_LINES.append(
        f"criterion 8: {'PASS' if ok else 'FAIL'} analytic gap(0.1) = {full:.4f}, stated value 6.977 "
        f"not reproduced (log term alone is {full - GAP_PTP_PAM:.4f})")
    assert ok


def test_criterion_09_modulo_fold_ser():
    t0 = time.perf_counter()
    cfg = McConfig(10 ** 6, 9)
    r = ser_modulo_decoder(16.0, 800.0, 5, cfg)
    ok = r.ser <= r.bound + 3 * r.ser_std and r.ser <= 2 * r.ser_free + 3 * math.hypot(r.ser_std, 2 * r.free_std)
    e = ser_modulo_decoder(16.0, 800.0, 5, cfg, normalization="unit_energy")
    record(9, ok and abs(r.bound - 0.04550) < 5e-5,
           f"unit spacing SER {r.ser:.5f} +- {r.ser_std:.5f}, bound {r.bound:.5f}, interference-free "
           f"{r.ser_free:.5f}; unit energy SER {e.ser:.4f} vs its bound {e.bound:.4f}", t0, 30)


def test_criterion_10_gdof_trend():
    t0 = time.perf_counter()
    parts, ok = [], True
    for a in (0.4, 0.75, 1.5, 2.5):
        (_, lo), (_, hi) = gdof_trace(a, [20, 60], policy=DminKind.Exact)
        ok &= hi < 0.5 * lo
        parts.append(f"alpha {a}: {hi / lo:.2f}")
    record(10, ok, "normalized gap ratio 60 dB / 20 dB " + ", ".join(parts), t0, 120)


def test_criterion_11_layer_swap():
    # triples are drawn inside the domain Ig(g^2 Var X_M) <= H(X_D) + 1/2 where
    # the second inequality is guaranteed; outside it the inequality is
    # false (see test_layer_swap_counterexample_outside_matched_domain)
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    fails = rejected = k = 0
    while k < 50:
        n1, n2 = rng.integers(2, 9, size=2)
        Xc = discrete_layer(int(n1)).scaled(10 ** rng.uniform(0, 1.5))
        Xp = discrete_layer(int(n2)).scaled(10 ** rng.uniform(-1, 0))
        g = 10 ** rng.uniform(-0.5, 1)
        if not layer_swap_matched(Xc, Xp, g):
            rejected += 1
            continue
        fails += not prop9_check(Xc, Xp, g, McConfig(10 ** 5, 1100 + k)).holds(3.0)
        k += 1
    record(11, fails == 0, f"50 triples in the matched domain ({rejected} draws outside it skipped), "
                           f"{fails} failures", t0, 120)


def _mc_checks(g, p, r, k):
    e1 = mi_mixed_input(g, p, 1, McConfig(20_000, 12, 2 * k))
    e2 = mi_mixed_input(g, p, 2, McConfig(20_000, 12, 2 * k + 1))
    return (r[0] <= e1.value + 3 * e1.std_error) + (r[1] <= e2.value + 3 * e2.std_error)


def test_criterion_12_soundness():
    t0 = time.perf_counter()
    pairs = inside = 0
    mc_total = mc_ok = 0
    k = 0
    for reps in (very_strong_reports(), very_weak_reports(), strong_reports()):
        for i, (S, I, rep) in enumerate(reps):
            for tp in rep.params_trace:
                pairs += 1
                inside += rep.outer.contains((tp.r1, tp.r2), tol=1e-6)
            # MC subsample: every 20th gain draw, grid ends and midpoint
            if i % 20:
                continue
            g = ChannelGains.symmetric(S, I)
            ts = sorted({tp.t for tp in rep.params_trace})
            picks = {ts[0], ts[len(ts) // 2], ts[-1]}
            for tp in rep.params_trace:
                if tp.t in picks:
                    picks.discard(tp.t)
                    mc_ok += _mc_checks(g, tp.params, (tp.r1, tp.r2), k)
                    mc_total += 2
                    k += 1
    g, p, e1, e2 = criterion8_point()
    r = inner_rate_pair(g, p)
    pairs += 1
    inside += outer_region(g).contains(r, tol=1e-6)
    mc_total += 2
    mc_ok += (r[0] <= e1.value + 3 * e1.std_error) + (r[1] <= e2.value + 3 * e2.std_error)
    ok = inside == pairs and mc_ok == mc_total
    record(12, ok, f"{inside}/{pairs} achieved pairs inside the outer region, "
                   f"{mc_ok}/{mc_total} analytic rates below MC + 3 sigma", t0, 300)


if __name__ == "__main__":
    # a fresh interpreter so pytest imports the test modules itself
    sys.exit(subprocess.call([sys.executable, "-m", "pytest", __file__, "-q", "-p", "no:cacheprovider"]))
