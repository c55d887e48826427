"""Tests for the disk-trap closed forms and the hitting-probability quadrature."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from trapprob import (
    ConvergenceError,
    DiskProbQuery,
    DomainError,
    f_disk,
    hunt_approx,
    p_disk,
)
from trapprob.disk_oracle import _WG, _WGK, _XGK, _adaptive_gk, _p_disk_raw

R_T = 0.5

# K0(1)/K0(0.5), mpmath at 40 digits
F_DISK_REF = 0.4554475901082080


# ---------------------------------------------------------------------------
# Gauss-Kronrod tables
# ---------------------------------------------------------------------------

def test_gk_weights_sum_to_two():
    assert_allclose(_WGK.sum(), 2.0, rtol=1e-14)
    assert_allclose(_WG.sum(), 2.0, rtol=1e-14)


@pytest.mark.parametrize("deg", range(0, 23))
def test_gk_rule_exactness(deg):
    # Gauss 7 integrates monomials exactly through degree 13, the Kronrod
    # extension through degree 22 (odd degrees vanish by symmetry)
    exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
    k15 = float(_WGK @ _XGK**deg)
    assert_allclose(k15, exact, rtol=0, atol=2e-14)
    if deg <= 13:
        g7 = float(_WG @ _XGK**deg)
        assert_allclose(g7, exact, rtol=0, atol=2e-14)


def test_adaptive_gk_smooth():
    val, err, evals = _adaptive_gk(np.exp, 0.0, 1.0, 1, 1e-12, 10**5)
    assert_allclose(val, math.e - 1.0, rtol=1e-14)
    assert err < 1e-12
    assert evals == 15


def test_adaptive_gk_splits_hard_integrand():
    # |x|^(1/2) has a derivative singularity at 0: needs refinement
    f = lambda x: np.sqrt(np.abs(x))
    val, err, evals = _adaptive_gk(f, -1.0, 1.0, 2, 1e-10, 10**6)
    assert_allclose(val, 4.0 / 3.0, rtol=1e-9)
    assert evals > 30


def test_adaptive_gk_budget_error():
    f = lambda x: np.sin(1.0 / (x + 1e-3))
    with pytest.raises(ConvergenceError):
        _adaptive_gk(f, 0.0, 1.0, 16, 1e-14, 200)


# ---------------------------------------------------------------------------
# f_disk
# ---------------------------------------------------------------------------

def test_f_disk_reference():
    assert_allclose(f_disk(1.0, R_T, 2.0), F_DISK_REF, rtol=1e-12)


def test_f_disk_inside_is_one():
    assert f_disk(0.3, R_T, 5.0) == 1.0
    assert f_disk(R_T, R_T, 5.0) == 1.0


def test_f_disk_monotone():
    taus = np.geomspace(0.1, 1e4, 25)
    vals = [f_disk(5.0, R_T, float(tau)) for tau in taus]
    assert all(b > a for a, b in zip(vals, vals[1:]))  # increasing in tau
    radii = np.geomspace(0.6, 200.0, 25)
    vals = [f_disk(float(r), R_T, 10.0) for r in radii]
    assert all(b < a for a, b in zip(vals, vals[1:]))  # decreasing in r
    assert all(0.0 < v <= 1.0 for v in vals)


def test_f_disk_scale_invariance():
    # depends only on r/r_T and tau/r_T^2
    for s in (0.1, 3.0, 40.0):
        assert_allclose(
            f_disk(s * 1.0, s * R_T, s * s * 2.0), f_disk(1.0, R_T, 2.0), rtol=1e-13
        )


def test_f_disk_domain():
    with pytest.raises(DomainError):
        f_disk(-1.0, R_T, 1.0)
    with pytest.raises(DomainError):
        f_disk(1.0, R_T, 0.0)


# ---------------------------------------------------------------------------
# p_disk
# ---------------------------------------------------------------------------

def test_p_disk_trivial_values():
    assert p_disk(R_T, R_T, 123.0) == 1.0
    assert p_disk(5.0, R_T, 0.0) == 0.0
    # gap^2/(4t) huge: probability indistinguishable from 0
    assert p_disk(125.0, R_T, 1e-3) == 0.0


def test_p_disk_regression_pin():
    # value certified during development by two independent routes (Laplace
    # consistency against f_disk at 1e-4 and direct Monte Carlo at 3 sigma);
    # pinned at the quadrature tolerance
    assert_allclose(p_disk(5.0, R_T, 1e5), 0.6499562328509851, rtol=0, atol=2e-6)
    assert_allclose(p_disk(125.0, R_T, 100.0), 8.558624697840855e-09, rtol=0, atol=2e-6)


def test_p_disk_bounds_and_monotonicity():
    times = np.geomspace(0.01, 1e5, 12)
    radii = (0.5, 0.75, 1.5, 5.0, 30.0)
    table = {r: [p_disk(r, R_T, float(t)) for t in times] for r in radii}
    for r in radii:
        vals = table[r]
        assert all(0.0 <= v <= 1.0 for v in vals)
        # nondecreasing in t (within quadrature tolerance)
        for a, b in zip(vals, vals[1:]):
            assert b >= a - 2e-6
    # decreasing in r at fixed t
    for j in range(len(times)):
        col = [table[r][j] for r in radii]
        for a, b in zip(col, col[1:]):
            assert b <= a + 2e-6


def test_p_disk_raw_stays_near_unit_interval():
    for r in (0.5, 0.7, 1.0, 5.0, 125.0):
        for t in (1e-3, 0.3, 1.0, 30.0, 1e3, 1e5):
            raw = _p_disk_raw(r, R_T, t)
            assert -2e-6 <= raw <= 1.0 + 2e-6


def test_p_disk_approaches_one():
    # 1 - p ~ 2 ln(r/r_T)/ln t -> 0 logarithmically
    p8 = p_disk(5.0, R_T, 1e8)
    p10 = p_disk(5.0, R_T, 1e10)
    assert p10 > p8 > 0.5
    for t, p in ((1e8, p8), (1e10, p10)):
        assert_allclose(
            math.log(t) * (1.0 - p), 2.0 * math.log(10.0), rtol=0.25
        )


def test_p_disk_laplace_consistency_spot_check():
    # (1/tau) int e^(-t/tau) p dt == f_disk; Gauss-Legendre in s = t/tau.
    # The full nine-combination certification runs in the acceptance suite.
    nodes, weights = np.polynomial.legendre.leggauss(16)
    edges = [0.0, 0.05, 0.15, 0.35, 0.75, 1.5, 3.0, 6.0, 10.0, math.log(1e8)]
    for r, tau in ((1.0, 2.5), (5.0, 25.0)):
        total = 0.0
        for a, b in zip(edges, edges[1:]):
            s = 0.5 * (b - a) * nodes + 0.5 * (a + b)
            w = 0.5 * (b - a) * weights
            total += float(
                w @ [math.exp(-si) * p_disk(r, R_T, tau * si) for si in s]
            )
        total += math.exp(-edges[-1]) * p_disk(r, R_T, tau * edges[-1])
        assert abs(total - f_disk(r, R_T, tau)) < 1e-4


def test_p_disk_domain_errors():
    with pytest.raises(DomainError):
        p_disk(0.3, R_T, 1.0)  # release inside the disk
    with pytest.raises(DomainError):
        p_disk(5.0, R_T, -1.0)
    with pytest.raises(DomainError):
        p_disk(5.0, 0.0, 1.0)


def test_disk_prob_query_validation():
    q = DiskProbQuery(r=5.0, r_T=R_T, t=10.0)
    assert q.r == 5.0 and math.isnan(q.tau)
    with pytest.raises(DomainError):
        DiskProbQuery(r=0.0, r_T=R_T)
    with pytest.raises(DomainError):
        DiskProbQuery(r=1.0, r_T=-1.0)
    with pytest.raises(DomainError):
        DiskProbQuery(r=1.0, r_T=R_T, t=-2.0)
    with pytest.raises(DomainError):
        DiskProbQuery(r=1.0, r_T=R_T, tau=0.0)


# ---------------------------------------------------------------------------
# hunt_approx
# ---------------------------------------------------------------------------

def test_hunt_reference_values():
    assert hunt_approx(5.0, R_T, 1e5, "raw") == pytest.approx(0.6, abs=1e-15)
    assert_allclose(
        hunt_approx(5.0, R_T, 1e5, "tau0"), 0.8148740150441308, rtol=1e-13
    )


def test_hunt_at_disk_edge():
    assert hunt_approx(R_T, R_T, 7.0, "raw") == 1.0
    assert hunt_approx(R_T, R_T, 7.0, "tau0") == 1.0


def test_hunt_degenerate_denominator():
    assert hunt_approx(5.0, R_T, 1.0, "raw") == -math.inf


def test_hunt_not_clamped():
    # short times give values far below 0; that is intentional
    assert hunt_approx(125.0, R_T, 2.0, "raw") < -10.0


def test_hunt_converges_to_p_disk():
    # both variants share the Hunt limit; the gap shrinks with t
    gaps_raw = []
    for t in (1e5, 1e8, 1e10):
        p = p_disk(5.0, R_T, t)
        gaps_raw.append(abs(p - hunt_approx(5.0, R_T, t, "raw")))
    assert gaps_raw[0] > gaps_raw[1] > gaps_raw[2]
    assert gaps_raw[2] < 0.02


def test_hunt_domain_errors():
    with pytest.raises(DomainError):
        hunt_approx(5.0, R_T, 1e5, "smoothed")
    with pytest.raises(DomainError):
        hunt_approx(0.3, R_T, 1e5, "raw")
    with pytest.raises(DomainError):
        hunt_approx(5.0, R_T, 0.0, "raw")
