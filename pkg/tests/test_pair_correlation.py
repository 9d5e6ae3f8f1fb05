import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from ppclab import pair_correlation as pc
from ppclab import points as pts
from ppclab.records import Status
from ppclab.spectral import build_profile

from conftest import brute_pair_distances, suite_sets

TWO = pts.PointSet([0.0, 0.5])
unit = st.floats(min_value=0.0, max_value=1.0, exclude_max=True)


def riemann_A(p, nodes=1_000_000):
    """Midpoint rule on the counting definition, counts taken from all pairs."""
    n = p.n
    d = brute_pair_distances(p.points) if n > 1 else np.empty(0)
    h = 0.5 / nodes
    s = (np.arange(nodes) + 0.5) * h
    counts = np.searchsorted(d, s, side="right")
    return 2.0 * h * float(np.sum((counts / n - 2 * n * s) ** 2))


# -- distance multiset ------------------------------------------------------

def test_distance_multiset_examples():
    assert pc.distance_multiset(TWO).jumps() == [(0.5, 2)]
    assert pc.distance_multiset(pts.gen_equispaced(4)).jumps() == [(0.25, 8), (0.5, 4)]
    assert pc.distance_multiset(pts.PointSet([0, 0, 0.5])).jumps() == [(0.0, 2), (0.5, 4)]
    with pytest.raises(ValueError):
        pc.distance_multiset(pts.PointSet([0.1]))


@settings(max_examples=50)
@given(st.lists(unit, min_size=2, max_size=25))
def test_distance_multiset_invariants(xs):
    p = pts.PointSet(xs)
    ms = pc.distance_multiset(p)
    n = p.n
    assert ms.total == n * (n - 1)
    assert np.all(ms.multiplicities % 2 == 0)
    assert np.all(np.diff(ms.distances) > 0)
    np.testing.assert_array_equal(np.repeat(ms.distances, ms.multiplicities), brute_pair_distances(p.points))


@settings(max_examples=50)
@given(st.lists(unit, min_size=2, max_size=30), st.floats(0.0, 0.49))
def test_truncated_multiset_matches_full(xs, r):
    p = pts.PointSet(xs)
    full = pc.distance_multiset(p)
    part = pc.distance_multiset(p, max_distance=r)
    keep = full.distances <= r
    np.testing.assert_array_equal(part.distances, full.distances[keep])
    np.testing.assert_array_equal(part.multiplicities, full.multiplicities[keep])


# -- counting statistics ----------------------------------------------------

def test_pair_count_examples():
    c2 = pc.ppc_curve(TWO)
    assert pc.pair_count(c2, 0.5) == 2
    assert pc.pair_count(c2, 0.49) == 0
    assert pc.pair_count(pc.ppc_curve(pts.gen_equispaced(4)), 0.25) == 8
    with pytest.raises(ValueError):
        pc.pair_count(c2, -0.1)


@pytest.mark.parametrize("n", [5, 16, 100, 333])
def test_ppc_statistic_lattice(n):
    c = pc.ppc_curve(pts.gen_equispaced(n))
    assert pc.ppc_statistic(c, 1.0) == 2.0
    assert pc.ppc_statistic(c, 0.99) == 0.0
    assert pc.ppc_statistic(c, n / 2) == n - 1


@settings(max_examples=30)
@given(st.lists(unit, min_size=2, max_size=20), st.lists(st.floats(0, 0.6), min_size=2, max_size=10))
def test_pair_count_nondecreasing(xs, radii):
    c = pc.ppc_curve(pts.PointSet(xs))
    radii = sorted(radii)
    counts = [pc.pair_count(c, r) for r in radii]
    assert counts == sorted(counts)


def test_ppc_alpha():
    c = pc.ppc_curve(pts.gen_random(64, 3))
    for s in (0.0, 0.5, 1.0, 3.7, 10.0):
        assert pc.ppc_statistic_alpha(c, s, 1.0) == pc.ppc_statistic(c, s)
    c100 = pc.ppc_curve(pts.gen_equispaced(100))
    # radius 1/10: each point sees 2 * 10 lattice neighbours
    assert pc.pair_count(c100, 0.1) == 2000
    assert pc.ppc_statistic_alpha(c100, 1.0, 0.5) == pytest.approx(2.0)
    crand = pc.ppc_curve(pts.gen_random(256, 1))
    assert abs(pc.ppc_statistic_alpha(crand, 1.0, 0.5) - 2.0) <= 0.5
    with pytest.raises(ValueError):
        pc.ppc_statistic_alpha(c, 1.0, 0.0)


def riemann_window(curve, s, u, nodes=1_000_000):
    h = 2 * u / nodes
    t = s - u + (np.arange(nodes) + 0.5) * h
    return float(np.mean(curve.count(np.minimum(t / curve.n, 0.5)) / curve.n))


def test_window_average_lattice():
    c = pc.ppc_curve(pts.gen_equispaced(32))
    # [0, 1]: statistic is 0 except at the right endpoint
    assert pc.window_average(c, 0.5, 0.5) == pytest.approx(0.0, abs=1e-12)
    # [1/2, 3/2]: half at 0, half at 2
    assert pc.window_average(c, 1.0, 0.5) == pytest.approx(1.0, abs=1e-12)
    assert riemann_window(c, 1.0, 0.5) == pytest.approx(1.0, abs=1e-6)
    # constant region (2, 4) -> statistic 4
    assert pc.window_average(c, 2.5, 0.25) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        pc.window_average(c, 0.2, 0.5)


@pytest.mark.parametrize("s, u", [(1.0, 0.5), (3.3, 1.2), (10.0, 2.0)])
def test_window_average_matches_riemann(s, u):
    c = pc.ppc_curve(pts.gen_random(64, 21))
    # midpoint error is at most (jumps * h) / (2u), well under 1e-5 here
    assert pc.window_average(c, s, u) == pytest.approx(riemann_window(c, s, u), abs=1e-5)


# -- pair-correlation hypothesis -------------------------------------------

def brute_hypothesis(p, delta):
    n = p.n
    d = brute_pair_distances(p.points)
    s_max = (8 / delta) * math.sqrt(math.log(n))
    cand = np.concatenate([[1.0], n * d[(n * d > 1) & (n * d <= s_max)]])
    ok = True
    for s in cand:
        r = min(s / n, 0.5)
        count = np.count_nonzero(d <= r + pc.TIE_ATOL)
        ok &= count / n <= (1 + delta) * 2 * s
    return bool(ok)


def test_hypothesis_lattice_holds():
    p = pts.gen_equispaced(10_000)
    prm_smax = (8 / 0.25) * math.sqrt(math.log(10_000))
    c = pc.ppc_curve(p, max_distance=prm_smax / 10_000)
    res = pc.theorem1_hypothesis_check(c, 0.25)
    assert res.holds and not res.vacuous


def test_hypothesis_cluster_fails():
    c = pc.ppc_curve(pts.PointSet([0.0] * 100))
    res = pc.theorem1_hypothesis_check(c, 0.25)
    assert not res.holds
    assert res.worst_s == 1.0 and res.worst_statistic == 99.0


def test_hypothesis_large_random_matches_brute_force_on_jumps():
    p = pts.gen_random(10_000, 5)
    delta = 0.3
    s_max = (8 / delta) * math.sqrt(math.log(p.n))
    c = pc.ppc_curve(p, max_distance=s_max / p.n)
    res = pc.theorem1_hypothesis_check(c, delta)
    # brute force over the same jumps, counted directly from the sorted distances
    d = np.repeat(c.multiset.distances, c.multiset.multiplicities)
    cand = np.concatenate([[1.0], p.n * c.multiset.distances[(p.n * c.multiset.distances > 1)]])
    stats = np.searchsorted(d, np.minimum(cand / p.n, 0.5) + pc.TIE_ATOL, side="right") / p.n
    assert res.holds == bool(np.all(stats <= (1 + delta) * 2 * cand))


@settings(max_examples=30, deadline=None)
@given(st.lists(unit, min_size=2, max_size=40), st.sampled_from([0.1, 0.25, 0.45, 0.8]))
def test_hypothesis_agrees_with_brute_force_and_grid(xs, delta):
    p = pts.PointSet(xs)
    res = pc.theorem1_hypothesis_check(pc.ppc_curve(p), delta)
    assert res.holds == brute_hypothesis(p, delta)
    if res.holds and not res.vacuous:
        grid = np.linspace(1.0, res.s_max, 10_000)
        c = pc.ppc_curve(p)
        stats = c.count(np.minimum(grid / p.n, 0.5)) / p.n
        assert np.all(stats <= (1 + delta) * 2 * grid)


def test_hypothesis_integer_mode_and_vacuous():
    c = pc.ppc_curve(pts.gen_random(50, 2))
    real = pc.theorem1_hypothesis_check(c, 0.3)
    grid = pc.theorem1_hypothesis_check(c, 0.3, integer_only=True)
    # integer grid checks a subset of the conditions
    assert real.holds <= grid.holds
    assert grid.checked == math.floor(real.s_max)


# -- A ----------------------------------------------------------------------

def test_A_direct_examples():
    assert pc.A_direct(TWO) == pytest.approx(4 / 3, abs=1e-12)
    assert pc.A_direct(pts.PointSet([0.3])) == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("p", [pts.gen_random(32, 9), pts.PointSet([0, 0, 0.5, 0.25]), pts.gen_van_der_corput(20)],
                         ids=["random32", "dup", "vdc"])
def test_A_direct_matches_riemann(p):
    assert pc.A_direct(p) == pytest.approx(riemann_A(p), abs=1e-6)


def test_A_spectral_examples():
    enc = pc.A_spectral(build_profile(TWO, 200))
    assert enc.contains(4 / 3)
    # with only even frequencies alive the series is 2 sum 1/(pi k)^2 + 1
    prof = build_profile(TWO, 200)
    zeta_partial = np.sum(1.0 / np.arange(1, 101) ** 2)
    assert enc.estimate == pytest.approx(2 * zeta_partial / math.pi**2 + 1, rel=1e-13)
    single = pc.A_spectral(build_profile(pts.PointSet([0.3]), 100_000))
    assert single.contains(1 / 3)


def test_A_spectral_random_matches_direct():
    p = pts.gen_random(16, 4)
    enc = pc.A_spectral(build_profile(p, 1_000_000))
    assert abs(pc.A_direct(p) - enc.estimate) <= max(enc.tail_low, enc.tail_high) + 1e-9


@pytest.mark.parametrize("p", suite_sets(), ids=lambda p: p.label)
def test_A_identity_on_suite(p):
    K = math.ceil((2 * p.n**2 + 8 * p.n) / (math.pi**2 * 1e-3))
    enc = pc.A_spectral(build_profile(p, K))
    assert enc.width <= 1e-3 + 1e-12
    assert enc.contains(pc.A_direct(p), atol=1e-9)
    assert pc.A_direct(p) >= 0


@settings(max_examples=20, deadline=None)
@given(st.lists(unit, min_size=1, max_size=12), unit)
def test_A_shift_invariant(xs, c):
    p = pts.PointSet(xs)
    assert pc.A_direct(pts.shift(p, c)) == pytest.approx(pc.A_direct(p), abs=1e-12)


# -- Fourier coefficients ---------------------------------------------------

def test_fourier_coeff():
    assert pc.fourier_coeff_indicator(1, 0.25) == pytest.approx(1 / math.pi)
    with pytest.raises(ValueError):
        pc.fourier_coeff_indicator(0, 0.1)


@pytest.mark.parametrize("k", range(1, 13))
def test_fourier_coeff_integrals(k):
    val, _ = integrate.quad(lambda s: pc.fourier_coeff_indicator(k, s), 0, 0.5, epsabs=1e-14)
    assert val == pytest.approx(1 / (k * k * math.pi**2) if k % 2 else 0.0, abs=1e-10)
    diag, _ = integrate.quad(lambda s: pc.fourier_coeff_indicator(k, s) ** 2, 0, 0.5, epsabs=1e-14)
    assert diag == pytest.approx(1 / (4 * k * k * math.pi**2), abs=1e-10)


@pytest.mark.parametrize("k, m", [(1, 2), (2, 3), (1, 4), (3, 7), (-2, 5)])
def test_fourier_coeff_orthogonal(k, m):
    val, _ = integrate.quad(
        lambda s: pc.fourier_coeff_indicator(k, s) * pc.fourier_coeff_indicator(m, s), 0, 0.5, epsabs=1e-14
    )
    assert abs(val) < 1e-10


# -- corollaries ------------------------------------------------------------

def test_corollary2_examples():
    assert pc.corollary2_check(build_profile(TWO, 1000)).status == Status.PASS
    rec = pc.corollary2_check(build_profile(pts.PointSet([0.3]), 10_000))
    assert rec.status == Status.PASS
    assert rec.lhs == pytest.approx(math.pi**2, rel=1e-3)
    assert pc.corollary2_check(build_profile(pts.gen_random(16, 11), 100_000)).status == Status.PASS


def test_corollary2_inconclusive_reports_required_K():
    rec = pc.corollary2_check(build_profile(pts.gen_random(64, 1), 10))
    assert rec.status == Status.INCONCLUSIVE
    assert rec.details["required_K"] > 10


@pytest.mark.parametrize("p", suite_sets(), ids=lambda p: p.label)
def test_corollary2_is_A_nonnegative(p):
    prof = build_profile(p, 3000)
    rec = pc.corollary2_check(prof)
    a = pc.A_spectral(prof).estimate
    rhs_minus_lhs = rec.rhs - rec.lhs
    assert math.pi**2 * p.n**2 * a == pytest.approx(rhs_minus_lhs, rel=1e-9, abs=1e-9)


def test_corollary1_two_points_tight():
    rec = pc.corollary1_check(TWO, 10_000)
    assert rec.status == Status.PASS
    assert rec.lhs == pytest.approx(4 / 3)
    assert abs(rec.slack) < 1e-12
    assert rec.details["matching_normalizations"] == ["1/M"]
    assert not rec.details["candidates"]["1/M^2"]["satisfies"]


def test_corollary1_single_and_random():
    rec = pc.corollary1_check(pts.PointSet([0.3]), 10_000)
    assert rec.status == Status.PASS
    assert rec.rhs == pytest.approx(4 / 3, rel=1e-12)
    rec = pc.corollary1_check(pts.gen_random(8, 6), 10_000)
    assert rec.status == Status.PASS and rec.rhs >= rec.lhs
    with pytest.raises(ValueError):
        pc.corollary1_check(pts.gen_random(70, 1), 10, cap=4096)


# -- A vs discrepancy report, export ---------------------------------------

def test_theorem2_report_cluster_and_sweep():
    rep = pc.theorem2_report(pts.PointSet([0.2] * 10))
    assert rep.D == 1.0 and math.isfinite(rep.r_upper) and rep.irregular
    for n in (8, 16, 32, 64):
        rep = pc.theorem2_report(pts.gen_equispaced(n))
        assert 0 < rep.r_upper <= 1e3
    for seed in range(5):
        rep = pc.theorem2_report(pts.gen_random(32, seed))
        assert 0 < rep.r_upper <= 1e3


def test_ppc_csv():
    buf = io.StringIO()
    pc.write_ppc_csv(pc.ppc_curve(pts.gen_equispaced(8)), [0.5, 1.0], buf)
    assert buf.getvalue().splitlines() == ["s,statistic,poisson_reference", "0.5,0.0,1.0", "1.0,2.0,2.0"]
