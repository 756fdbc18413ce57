"""Parameter records, state decompositions, and system builders."""

import math

import numpy as np
import pytest

from dirty_region import gauss_core as gc
from dirty_region import mc_oracle
from dirty_region.channels import (
    DecompositionError,
    IcParams,
    IcVeryStrongCoefficients,
    LayeredCoefficients,
    MacHelperParams,
    ParameterError,
    PowerSplit,
    PowerViolationError,
    SplitError,
    ZicParams,
    ZicVeryStrongCoefficients,
    build_ic_verystrong,
    build_mac_helper,
    build_strong_layered,
    build_zic_verystrong,
    decompose_backward,
    decompose_forward,
    split_for,
)


def test_param_validation():
    with pytest.raises(ParameterError):
        MacHelperParams(-1, 1, 1, 1)
    with pytest.raises(ParameterError):
        ZicParams(1.0, 1, 1, 1, 1, rho=1.5)
    with pytest.raises(ParameterError):
        IcParams(1.0, 1.0, 1, -2, 1, 1)


def test_decompose_independent_states():
    dec = decompose_forward(1.0, 1.0, 0.0)
    assert dec.coefficient == 0.0
    assert dec.residual_variance == 1.0


def test_decompose_perfect_correlation():
    dec = decompose_forward(2.0, 1.0, 1.0)
    assert dec.coefficient == pytest.approx(math.sqrt(2.0))
    assert dec.residual_variance == pytest.approx(0.0)


def test_forward_backward_consistency():
    rng = np.random.default_rng(11)
    for _ in range(100):
        q1, q2 = rng.uniform(0.1, 5.0, 2)
        rho = rng.uniform(-1.0, 1.0)
        fwd = decompose_forward(q1, q2, rho)
        bwd = decompose_backward(q1, q2, rho)
        assert fwd.coefficient * bwd.coefficient == pytest.approx(rho**2, abs=1e-12)
        # reconstructions are exact
        assert fwd.coefficient**2 * q2 + fwd.residual_variance == pytest.approx(q1, abs=1e-12)
        assert bwd.coefficient**2 * q1 + bwd.residual_variance == pytest.approx(q2, abs=1e-12)


def test_decompose_zero_variance_rules():
    dec = decompose_forward(2.0, 0.0, 0.0)
    assert dec.coefficient == 0.0 and dec.residual_variance == 2.0
    with pytest.raises(DecompositionError):
        decompose_forward(2.0, 0.0, 0.5)
    with pytest.raises(DecompositionError):
        decompose_backward(0.0, 2.0, -0.3)


# ----------------------------------------------------------------------
# MAC helper builder
# ----------------------------------------------------------------------

def test_mac_builder_zero_coefficients():
    p = MacHelperParams(2.0, 1.0, 1.5, 3.0)
    sys = build_mac_helper(p, 0.0, 0.0)
    # U is exactly the precoding variable
    assert np.allclose(sys.coefficient_vector("U"), sys.coefficient_vector("X0p"))
    assert sys.variance("Y") == pytest.approx(p.p0 + p.p1 + p.p2 + p.q + 1.0)


def test_mac_builder_power_constraint_binds():
    p = MacHelperParams(5.0, 1.0, 1.0, 12.0)
    for beta in (0.0, 0.3, -0.3, math.sqrt(p.p0 / p.q)):
        sys = build_mac_helper(p, 0.1, beta)
        assert sys.variance("X0") == pytest.approx(p.p0, abs=1e-9)


def test_mac_builder_aux_state_mi_hand_formula():
    p0, q, alpha, beta = 5.0, 12.0, 0.3, 0.2
    sys = build_mac_helper(MacHelperParams(p0, 1.0, 1.0, q), alpha, beta)
    p0p = p0 - beta**2 * q
    expected = 0.5 * math.log2(1.0 + alpha**2 * q / p0p)
    assert gc.mutual_info_bits(sys, "U", "S") == pytest.approx(expected, abs=1e-12)


def test_mac_builder_power_violation():
    p = MacHelperParams(1.0, 1.0, 1.0, 12.0)
    with pytest.raises(PowerViolationError):
        build_mac_helper(p, 0.0, 1.0)


# ----------------------------------------------------------------------
# Z-IC / IC very-strong builders
# ----------------------------------------------------------------------

def test_zic_builder_no_interference_identity():
    p = ZicParams(0.0, 1.0, 2.0, 1.5, 1.0, 0.4)
    coeffs = ZicVeryStrongCoefficients(0.2, 0.3, 0.5)
    sys = build_zic_verystrong(p, coeffs)
    y1 = sys.coefficient_vector("Y1")
    assert y1[sys.base_names.index("X2")] == 0.0
    assert sys.variance("Y2") == pytest.approx(p.p2 + p.q2 + 1.0)


def test_zic_builder_covariance_vs_oracle():
    p = ZicParams(1.8, 1.0, 2.0, 1.5, 1.0, 0.4)
    sys = build_zic_verystrong(p, ZicVeryStrongCoefficients(0.2, 0.3, 0.5))
    names = ("U", "V", "Y1", "Y2")
    exact = gc.covariance(sys, names)
    emp = mc_oracle.sample_covariance(sys, names, mc_oracle.SampleConfig(200_000, 0x5EED))
    se = np.sqrt((np.outer(np.diag(exact), np.diag(exact)) + exact**2) / 200_000)
    assert np.all(np.abs(emp - exact) <= 4.0 * se)


def test_ic_builder_reduces_to_zic_at_b_zero():
    zp = ZicParams(1.7, 2.0, 1.5, 1.2, 0.8, 0.4)
    ip = IcParams(1.7, 0.0, 2.0, 1.5, 1.2, 0.8, 0.4)
    # index conventions differ: IC alpha1 rides on S1', Z-IC alpha1 on S2
    zsys = build_zic_verystrong(zp, ZicVeryStrongCoefficients(0.25, 0.6, 0.55))
    isys = build_ic_verystrong(ip, IcVeryStrongCoefficients(0.6, 0.25, 0.0, 0.55))
    names = zsys.names
    assert names == isys.names
    np.testing.assert_allclose(
        gc.covariance(zsys, names), gc.covariance(isys, names), atol=1e-12
    )


def test_ic_builder_receiver1_variance():
    p = IcParams(1.6, 1.2, 1.0, 1.0, 0.9, 0.9, 0.5)
    sys = build_ic_verystrong(p, IcVeryStrongCoefficients(0.1, 0.2, 0.3, 0.4))
    assert sys.variance("Y1") == pytest.approx(
        p.p1 + p.a**2 * p.p2 + p.q1 + 1.0, abs=1e-12
    )


# ----------------------------------------------------------------------
# Layered (strong regime) builder
# ----------------------------------------------------------------------

def test_layered_no_split_is_allowed_degenerate():
    p = ZicParams(1.2, 1.0, 1.0, 2.0, 1.0, 0.3)
    sys = build_strong_layered(p, split_for(p.p1, p.p1), LayeredCoefficients(0.0, 0.2, 0.3), "zic")
    assert sys.variance("U1") == pytest.approx(0.0)


def test_layered_aux_variance():
    p = ZicParams(1.2, 1.0, 1.5, 2.0, 1.0, 0.3)
    beta = 0.4
    sys = build_strong_layered(
        p, split_for(p.p1, 0.5), LayeredCoefficients(0.1, 0.2, beta), "zic"
    )
    assert sys.variance("V") == pytest.approx(p.a**2 * p.p2 + beta**2 * p.q1, abs=1e-12)


def test_layered_covariance_vs_oracle():
    p = IcParams(1.2, 1.3, 1.0, 1.0, 2.0, 1.0, 0.3)
    sys = build_strong_layered(
        p, split_for(p.p1, 0.5), LayeredCoefficients(0.1, 0.2, 0.4), "ic"
    )
    names = ("U1", "U2", "V", "Y1", "Y2")
    exact = gc.covariance(sys, names)
    emp = mc_oracle.sample_covariance(sys, names, mc_oracle.SampleConfig(200_000, 0x5EED))
    se = np.sqrt((np.outer(np.diag(exact), np.diag(exact)) + exact**2) / 200_000)
    assert np.all(np.abs(emp - exact) <= 4.0 * se)


def test_layered_invalid_split():
    p = ZicParams(1.2, 1.0, 1.0, 2.0, 1.0, 0.3)
    with pytest.raises(SplitError):
        split_for(p.p1, 1.5)
    with pytest.raises(SplitError):
        PowerSplit(-0.1, 0.5)
    with pytest.raises(SplitError):
        build_strong_layered(p, PowerSplit(0.8, 0.8), LayeredCoefficients(0, 0, 0), "zic")


def test_reconstruction_in_built_systems():
    # decompositions reconstruct the original state variances inside systems
    p = ZicParams(1.8, 1.0, 2.0, 1.5, 1.0, 0.6)
    sys = build_zic_verystrong(p, ZicVeryStrongCoefficients(0.2, 0.3, 0.5))
    assert sys.variance("S1") == pytest.approx(p.q1, abs=1e-12)
    layered = build_strong_layered(
        ZicParams(1.2, 1.0, 1.0, 2.0, 1.0, 0.3),
        split_for(1.0, 0.5),
        LayeredCoefficients(0.1, 0.2, 0.3),
        "zic",
    )
    assert layered.variance("S2") == pytest.approx(1.0, abs=1e-12)
