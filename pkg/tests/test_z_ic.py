"""Z-IC regimes: coefficients, conditions, strong-regime points/segments."""

import math

import numpy as np
import pytest

from dirty_region import mc_oracle
from dirty_region import z_ic
from dirty_region.channels import ZicParams, decompose_forward
from dirty_region.reports import RegimeGateError

SQRT2 = math.sqrt(2.0)


# ----------------------------------------------------------------------
# Very strong: coefficients
# ----------------------------------------------------------------------

def test_vs_coefficients_independent_states():
    p = ZicParams(1.7, 2.0, 3.0, 1.0, 1.0, rho=0.0)
    c = z_ic.zic_vs_coefficients(p)
    t1, t2 = 2.0 / 3.0, 3.0 / 4.0
    assert c.alpha1 == pytest.approx(-t1 * p.a * t2, abs=1e-15)
    assert c.alpha2 == pytest.approx(t1, abs=1e-15)
    assert c.beta == pytest.approx(t2, abs=1e-15)


def test_vs_coefficients_no_interference():
    p = ZicParams(0.0, 2.0, 3.0, 1.0, 1.0, rho=0.6)
    d = decompose_forward(p.q1, p.q2, p.rho).coefficient
    c = z_ic.zic_vs_coefficients(p)
    assert c.alpha1 == pytest.approx(d * 2.0 / 3.0, abs=1e-15)


def test_vs_coefficients_design_equations():
    # the defining ratios of the joint design hold for random parameters
    rng = np.random.default_rng(23)
    for _ in range(100):
        p = ZicParams(
            float(rng.uniform(0.1, 4.0)),
            float(rng.uniform(0.2, 5.0)),
            float(rng.uniform(0.2, 5.0)),
            float(rng.uniform(0.2, 4.0)),
            float(rng.uniform(0.2, 4.0)),
            float(rng.uniform(-0.95, 0.95)),
        )
        d = decompose_forward(p.q1, p.q2, p.rho).coefficient
        c = z_ic.zic_vs_coefficients(p)
        t1 = p.p1 / (p.p1 + 1.0)
        t2 = p.p2 / (p.p2 + 1.0)
        assert c.alpha1 - t1 * (d - p.a * c.beta) == pytest.approx(0.0, abs=1e-12)
        assert c.alpha2 - t1 == pytest.approx(0.0, abs=1e-12)
        assert c.beta - t2 == pytest.approx(0.0, abs=1e-12)


# ----------------------------------------------------------------------
# Very strong: condition and capacity
# ----------------------------------------------------------------------

def test_vs_condition_large_gain_flips_at_state_variance_threshold():
    # at enormous cross gain the verdict flips as q2 crosses (1+p2)/p2
    a, p1, p2, q1 = 1e3, 2.0, 2.0, 1.0
    threshold = (1.0 + p2) / p2
    below = z_ic.zic_vs_condition(ZicParams(a, p1, p2, q1, 0.9 * threshold, 0.0))
    above = z_ic.zic_vs_condition(ZicParams(a, p1, p2, q1, 2.0 * threshold, 0.0))
    assert below.passed
    assert not above.passed


def test_vs_condition_closed_form_cross_check():
    # the cross-check closed form disagrees in sign near the boundary at
    # high correlation (its coupling term has the wrong sign); the report
    # surfaces this instead of hiding it
    flagged = z_ic.zic_vs_condition(ZicParams(1.95, 2, 2, 1, 1, 1.0))
    assert flagged.passed
    assert flagged.extras["closed_form_margin"] < 0
    assert flagged.extras["closed_form_discrepancy"]

    agreeing = z_ic.zic_vs_condition(ZicParams(1.9, 2, 2, 1, 1, 0.95))
    assert not agreeing.passed
    assert not agreeing.extras["closed_form_discrepancy"]


def test_vs_capacity_identities_on_passing_draws():
    rng = np.random.default_rng(31)
    found = 0
    while found < 20:
        p = ZicParams(
            float(rng.uniform(1.5, 4.0)),
            float(rng.uniform(0.2, 3.0)),
            float(rng.uniform(0.2, 3.0)),
            float(rng.uniform(0.2, 3.0)),
            float(rng.uniform(0.2, 1.4)),
            float(rng.uniform(-0.9, 0.9)),
        )
        if p.a**2 <= 1.0 + p.p1:
            continue
        res = z_ic.zic_vs_capacity(p)
        if not res.achieves_capacity:
            continue
        found += 1
        assert abs(res.identity_residuals["rate1"]) <= 1e-9
        assert abs(res.identity_residuals["rate2"]) <= 1e-9
        assert res.capacity_region.m1 == pytest.approx(0.5 * math.log2(1 + p.p1))
        assert res.capacity_region.m2 == pytest.approx(0.5 * math.log2(1 + p.p2))


def test_vs_capacity_gate_boundary_rejected():
    with pytest.raises(RegimeGateError):
        z_ic.zic_vs_capacity(ZicParams(2.0, 3.0, 1.0, 1.0, 1.0, 0.0))  # a^2 == 1+p1


def test_vs_capacity_matches_scan_point():
    # (a, d) = (2.0, 1.0) at p1 = p2 = 2, q1 = q2 = 1 lies above the minimal
    # passing gain for d = 1 (about 1.899), so it must pass
    res = z_ic.zic_vs_capacity(ZicParams(2.0, 2.0, 2.0, 1.0, 1.0, 1.0))
    assert res.achieves_capacity


# ----------------------------------------------------------------------
# Strong regime
# ----------------------------------------------------------------------

def test_strong_point_sum_identity():
    p = ZicParams(1.2, 1.0, 1.0, 2.0, 1.0, 0.3 * SQRT2)
    total = 0.5 * math.log2(1 + p.p1 + p.a**2 * p.p2)
    for p1dd in np.linspace(p.a**2 - 1.0, p.p1, 7):
        pt = z_ic.zic_strong_point(p, float(p1dd))
        assert pt.rates[0] + pt.rates[1] == pytest.approx(total, abs=1e-12)


def test_strong_point_max_r2_corner_rates():
    p = ZicParams(1.2, 1.0, 1.0, 2.0, 1.0, 0.3 * SQRT2)
    pt = z_ic.zic_strong_point(p, p.a**2 - 1.0)
    assert pt.rates[0] == pytest.approx(0.5 * math.log2(1.72), abs=1e-9)
    assert pt.rates[1] == pytest.approx(0.5, abs=1e-9)


def test_strong_point_condition_vs_monte_carlo():
    p = ZicParams(1.2, 1.0, 1.0, 2.0, 1.0, 0.3 * SQRT2)  # c = 0.3
    pt = z_ic.zic_strong_point(p, 0.6)
    from dirty_region.channels import build_strong_layered, split_for

    sys = build_strong_layered(p, split_for(p.p1, 0.6), pt.coefficients, "zic")
    cfg = mc_oracle.SampleConfig(1_000_000, 0x5EED)
    est = mc_oracle.mi_estimate(sys, "V", "Y2", cfg) - mc_oracle.mi_estimate(
        sys, "V", ("U1", "Y1"), cfg
    )
    assert abs(pt.condition.margin - est) <= 1e-2


def test_strong_point_closed_form_agrees():
    # the strong-regime closed form is exact (no typo), so the margins match
    rng = np.random.default_rng(41)
    for _ in range(20):
        p1 = float(rng.uniform(0.5, 3.0))
        a = float(rng.uniform(1.0, math.sqrt(1 + p1) * 0.999))
        p = ZicParams(
            a,
            p1,
            float(rng.uniform(0.3, 3.0)),
            float(rng.uniform(0.3, 3.0)),
            float(rng.uniform(0.3, 3.0)),
            float(rng.uniform(-0.9, 0.9)),
        )
        p1dd = float(rng.uniform(max(0.0, a**2 - 1), p1))
        pt = z_ic.zic_strong_point(p, p1dd)
        assert pt.condition.extras["closed_form_margin"] == pytest.approx(
            pt.condition.margin, abs=1e-9
        )
        assert not pt.condition.extras["closed_form_discrepancy"]


def test_strong_point_gates():
    with pytest.raises(RegimeGateError):
        z_ic.zic_strong_point(ZicParams(0.9, 1.0, 1.0, 1.0, 1.0, 0.0), 0.5)
    with pytest.raises(RegimeGateError):
        z_ic.zic_strong_point(ZicParams(1.5, 1.0, 1.0, 1.0, 1.0, 0.0), 0.5)  # very strong


def test_strong_segment_nonempty_at_high_correlation():
    # c = 0.65 with fixed state variances passes near the max-R1 corner
    c = 0.65
    p = ZicParams(1.2, 1.0, 1.0, 2.0, 1.0, c * SQRT2)
    seg = z_ic.zic_strong_segment(p, grid_size=129)
    assert not seg.empty
    assert seg.count > 0
    assert not seg.prefix_violation
    assert seg.r1_range[1] == pytest.approx(0.5, abs=1e-9)  # anchored at max R1


def test_strong_segment_empty_when_anchor_fails():
    p = ZicParams(1.2, 1.0, 1.0, 2.0, 1.0, 0.0)  # independent states: all fail
    seg = z_ic.zic_strong_segment(p, grid_size=65)
    assert seg.empty
    assert seg.count == 0
    assert not seg.prefix_violation


def test_strong_segment_prefix_structure_on_sampled_parameters():
    rng = np.random.default_rng(53)
    for _ in range(12):
        p1 = float(rng.uniform(0.5, 2.0))
        a = float(rng.uniform(1.0, math.sqrt(1 + p1) * 0.99))
        p = ZicParams(
            a,
            p1,
            float(rng.uniform(0.3, 2.0)),
            float(rng.uniform(0.3, 3.0)),
            float(rng.uniform(0.3, 3.0)),
            float(rng.uniform(-0.95, 0.95)),
        )
        seg = z_ic.zic_strong_segment(p, grid_size=65)
        assert not seg.prefix_violation


# ----------------------------------------------------------------------
# Weak regime
# ----------------------------------------------------------------------

def test_weak_no_interference():
    p = ZicParams(0.0, 2.0, 3.0, 1.0, 1.0, 0.5)
    expected = 0.5 * math.log2(3.0) + 0.5 * math.log2(4.0)
    assert z_ic.zic_weak_sum_capacity(p) == pytest.approx(expected, abs=1e-12)


def test_weak_hand_arithmetic():
    p = ZicParams(1.0, 1.0, 1.0, 1.0, 1.0, 0.0)
    expected = 0.5 * math.log2(1.5) + 0.5 * math.log2(2.0)
    value = z_ic.zic_weak_sum_capacity(p)
    assert value == pytest.approx(expected, abs=1e-12)
    assert value == pytest.approx(0.7925, abs=1e-4)


def test_weak_correlation_independent():
    vals = {
        z_ic.zic_weak_sum_capacity(ZicParams(0.8, 1.5, 2.0, 1.0, 2.0, rho))
        for rho in (-0.9, 0.0, 0.9)
    }
    assert len(vals) == 1


def test_weak_gate():
    with pytest.raises(RegimeGateError):
        z_ic.zic_weak_sum_capacity(ZicParams(1.1, 1.0, 1.0, 1.0, 1.0, 0.0))


def test_vs_capacity_with_zero_state_variances():
    # no state at all: the joint design degenerates to plain decoding and
    # the interference-free rectangle is achieved
    res = z_ic.zic_vs_capacity(ZicParams(2.0, 2.0, 2.0, 0.0, 0.0, 0.0))
    assert res.achieves_capacity
    assert abs(res.identity_residuals["rate1"]) <= 1e-9
    assert abs(res.identity_residuals["rate2"]) <= 1e-9


def test_strong_point_degenerate_layers():
    p = ZicParams(1.0, 1.0, 1.0, 2.0, 1.0, 0.9)  # gate edge a^2 == 1
    top = z_ic.zic_strong_point(p, p.p1)
    assert top.condition.extras["degenerate_first_layer"]
    bottom = z_ic.zic_strong_point(p, 0.0)
    assert bottom.condition.extras["degenerate_second_layer"]
    assert top.rates[0] == pytest.approx(0.5 * math.log2(1 + p.p1), abs=1e-12)
