"""Regular interference channel with correlated receiver states.

Counterpart of :mod:`dirty_region.z_ic` with both receivers interfered, so
both transmitters run dirty paper coding jointly:

* very strong regime: U = X1 + alpha1*S1' + alpha2*S2 and
  V = X2 + beta1*S1' + beta2*S2 solve a four-equation consistency system
  (each auxiliary must be the exact single-user design for the residual
  state its receiver sees after subtracting the other auxiliary).  The
  closed-form solution shares the denominator
  D = (p1+1)(p2+1) - a*b*p1*p2 and degenerates when D = 0.
* strong regime: the same layered split as the Z-IC, but all three
  auxiliaries must also be decodable at receiver 2, giving three conditions
  instead of one.
* weak regime: per-link dirty paper coding, interference as noise.

Every condition is decided on covariance-based mutual informations; the
entropy formulation of the very-strong conditions is evaluated alongside,
and both must agree (they are the same quantity written two ways).

At b = 0 every coefficient, condition, and capacity value reduces to its
Z-IC counterpart (note the index swap: here alpha1 rides on S1' while the
Z-IC's alpha1 rides on S2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .channels import (
    IcParams,
    IcVeryStrongCoefficients,
    build_ic_verystrong,
    build_strong_layered,
    decompose_forward,
    split_for,
)
from .gauss_core import (
    cond_mutual_info_bits,
    entropy_bits,
    mutual_info_bits,
)
from .region import Pentagon
from .reports import ConditionReport, RegimeGateError
from .z_ic import (
    DEGENERATE_TOL,
    StrongSegment,
    ZicStrongPoint,
    _segment_scan,
    state_pair_subset,
    strong_coefficients,
    strong_point_rates,
)

SINGULAR_D_TOL = 1e-12
FORM_AGREEMENT_TOL = 1e-9
DEFAULT_SEGMENT_GRID = 513


class SingularCoefficientError(Exception):
    """The joint-design denominator (p1+1)(p2+1) - a*b*p1*p2 vanishes."""


def _nostate_rate(p: float) -> float:
    return 0.5 * math.log2(1.0 + p)


def _joint_denominator(params: IcParams) -> float:
    return (params.p1 + 1.0) * (params.p2 + 1.0) - params.a * params.b * params.p1 * params.p2


# --------------------------------------------------------------------------
# Very strong regime
# --------------------------------------------------------------------------

def ic_vs_coefficients(params: IcParams) -> IcVeryStrongCoefficients:
    """Solve the joint dirty-paper consistency system.

    The four constraints (ratios of each auxiliary's state coefficients to
    the residual state each receiver sees) are:

        alpha1 / (1 - a*beta1) = alpha2 / (d - a*beta2) = p1/(p1+1)
        beta1 / (-b*alpha1)    = beta2 / (1 - b*alpha2) = p2/(p2+1)

    whose unique solution (D = (p1+1)(p2+1) - a*b*p1*p2) is

        alpha1 = p1*(1+p2)/D              alpha2 = p1*(d + d*p2 - a*p2)/D
        beta1  = -b*p1*p2/D               beta2  = p2*(p1 + 1 - b*d*p1)/D

    beta1 carries a minus sign: receiver 2's residual state component on S1'
    after subtracting b*U is -b*alpha1*S1', and V must match its sign.
    """
    d_corr = decompose_forward(params.q1, params.q2, params.rho).coefficient
    denom = _joint_denominator(params)
    if abs(denom) <= SINGULAR_D_TOL:
        raise SingularCoefficientError(
            f"joint design singular: (p1+1)(p2+1) = a*b*p1*p2 at a*b="
            f"{params.a * params.b:.6g}"
        )
    p1, p2, a, b = params.p1, params.p2, params.a, params.b
    return IcVeryStrongCoefficients(
        alpha1=p1 * (1.0 + p2) / denom,
        alpha2=p1 * (d_corr + d_corr * p2 - a * p2) / denom,
        beta1=-b * p1 * p2 / denom,
        beta2=p2 * (p1 + 1.0 - b * d_corr * p1) / denom,
    )


def consistency_residuals(params: IcParams, coeffs: IcVeryStrongCoefficients) -> tuple[float, ...]:
    """Residuals of the four consistency constraints (all ~0 for the solution)."""
    d = decompose_forward(params.q1, params.q2, params.rho).coefficient
    a, b = params.a, params.b
    t1 = params.p1 / (params.p1 + 1.0)
    t2 = params.p2 / (params.p2 + 1.0)
    r1 = coeffs.alpha1 * (d - a * coeffs.beta2) - coeffs.alpha2 * (1.0 - a * coeffs.beta1)
    r2 = coeffs.alpha1 - t1 * (1.0 - a * coeffs.beta1)
    r3 = coeffs.beta1 * (1.0 - b * coeffs.alpha2) - coeffs.beta2 * (-b * coeffs.alpha1)
    r4 = coeffs.beta1 - t2 * (-b * coeffs.alpha1)
    return (r1, r2, r3, r4)


def ic_vs_conditions(params: IcParams) -> tuple[ConditionReport, ConditionReport]:
    """Both very-strong decodability conditions, as margins in bits.

    Condition 1: receiver 2 must decode U at least at the interference-free
    rate of link 1, I(U;Y2) - I(S1,S2;U) >= (1/2)log2(1+p1); condition 2 is
    the mirror for V at receiver 1.  Each margin is computed both as mutual
    informations and as the entropy combination h(X) - h(aux, Y) + h(Y) -
    target; the two must agree to 1e-9 and both are reported.
    """
    coeffs = ic_vs_coefficients(params)
    sys = build_ic_verystrong(params, coeffs)

    states = state_pair_subset(sys)
    mi_1 = mutual_info_bits(sys, "U", "Y2") - mutual_info_bits(sys, states, "U")
    ent_1 = entropy_bits(sys, "X1") - entropy_bits(sys, ("U", "Y2")) + entropy_bits(sys, "Y2")
    mi_2 = mutual_info_bits(sys, "V", "Y1") - mutual_info_bits(sys, states, "V")
    ent_2 = entropy_bits(sys, "X2") - entropy_bits(sys, ("V", "Y1")) + entropy_bits(sys, "Y1")

    target_1 = _nostate_rate(params.p1)
    target_2 = _nostate_rate(params.p2)
    rep1 = ConditionReport(
        name="ic-very-strong-decode-u-at-rx2",
        margin=mi_1 - target_1,
        witness={"alpha1": coeffs.alpha1, "alpha2": coeffs.alpha2},
        extras={
            "entropy_form_margin": ent_1 - target_1,
            "form_gap": abs(mi_1 - ent_1),
        },
    )
    rep2 = ConditionReport(
        name="ic-very-strong-decode-v-at-rx1",
        margin=mi_2 - target_2,
        witness={"beta1": coeffs.beta1, "beta2": coeffs.beta2},
        extras={
            "entropy_form_margin": ent_2 - target_2,
            "form_gap": abs(mi_2 - ent_2),
        },
    )
    return rep1, rep2


@dataclass(frozen=True)
class IcVeryStrongResult:
    coefficients: IcVeryStrongCoefficients
    conditions: tuple[ConditionReport, ConditionReport]
    capacity_region: Pentagon | None
    identity_residuals: Mapping[str, float] = field(default_factory=dict)

    @property
    def achieves_capacity(self) -> bool:
        return self.capacity_region is not None


def ic_vs_gate(params: IcParams) -> bool:
    """Both links see very strong interference."""
    thresh = (1.0 + params.p1) * (1.0 + params.p2)
    return (
        params.p1 + params.a ** 2 * params.p2 + 1.0 > thresh
        and params.b ** 2 * params.p1 + params.p2 + 1.0 > thresh
    )


def ic_vs_capacity(params: IcParams) -> IcVeryStrongResult:
    """Capacity rectangle test in the very strong regime.

    Gate: p1 + a^2*p2 + 1 and b^2*p1 + p2 + 1 both exceed (1+p1)(1+p2),
    strictly.  On both conditions passing, the capacity equals the two
    point-to-point no-state rates; the joint-design cancellation identities
    are reported as residuals.
    """
    if not ic_vs_gate(params):
        raise RegimeGateError(
            "very strong regime needs p1+a^2*p2+1 and b^2*p1+p2+1 to exceed "
            f"(1+p1)(1+p2) = {(1.0 + params.p1) * (1.0 + params.p2):.6g}"
        )
    coeffs = ic_vs_coefficients(params)
    rep1, rep2 = ic_vs_conditions(params)
    sys = build_ic_verystrong(params, coeffs)
    states = state_pair_subset(sys)
    residuals = {
        "rate1": mutual_info_bits(sys, "U", ("V", "Y1"))
        - mutual_info_bits(sys, states, "U")
        - _nostate_rate(params.p1),
        "rate2": mutual_info_bits(sys, "V", ("U", "Y2"))
        - mutual_info_bits(sys, states, "V")
        - _nostate_rate(params.p2),
    }
    region = None
    if rep1.passed and rep2.passed:
        m1 = _nostate_rate(params.p1)
        m2 = _nostate_rate(params.p2)
        region = Pentagon(m1, m2, m1 + m2)
    return IcVeryStrongResult(
        coefficients=coeffs,
        conditions=(rep1, rep2),
        capacity_region=region,
        identity_residuals=residuals,
    )


# --------------------------------------------------------------------------
# Strong (not very strong) regime
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IcStrongPoint:
    """Sum-face point with the three receiver-2 decodability margins."""

    split_point: ZicStrongPoint
    margins: tuple[float, float, float]
    swapped: bool

    @property
    def achievable(self) -> bool:
        return min(self.margins) >= -1e-9


def ic_strong_orient(params: IcParams) -> tuple[IcParams, bool]:
    """Auto-swap users so that p1 + a^2*p2 + 1 <= b^2*p1 + p2 + 1."""
    if params.p1 + params.a ** 2 * params.p2 > params.b ** 2 * params.p1 + params.p2:
        return params.swap_users(), True
    return params, False


def _ic_strong_gate(params: IcParams) -> tuple[IcParams, bool]:
    oriented, swapped = ic_strong_orient(params)
    if oriented.a < 1.0 or oriented.b < 1.0:
        raise RegimeGateError(
            f"strong regime needs a >= 1 and b >= 1, got a={params.a}, b={params.b}"
        )
    thresh = (1.0 + oriented.p1) * (1.0 + oriented.p2)
    if oriented.p1 + oriented.a ** 2 * oriented.p2 + 1.0 > thresh:
        raise RegimeGateError(
            "strong (not very strong) regime needs "
            f"min(p1+a^2*p2+1, b^2*p1+p2+1) <= (1+p1)(1+p2) = {thresh:.6g}"
        )
    return oriented, swapped


def _ic_strong_margins(params: IcParams, p1_dprime: float) -> tuple[float, float, float]:
    """Receiver-2 decodability margins for U1, U2, V (pass when all >= 0).

    Each margin is the receiver-2 mutual information minus the receiver-1
    one for the same decoding step (the binning costs cancel).  Degenerate
    zero-power layers drop their auxiliary from the subsets.
    """
    split = split_for(params.p1, p1_dprime)
    coeffs = strong_coefficients(params.p1, params.p2, params.a, split)
    sys = build_strong_layered(params, split, coeffs, "ic")
    u1_degenerate = split.p1_prime <= DEGENERATE_TOL
    u2_degenerate = split.p1_dprime <= DEGENERATE_TOL
    if u1_degenerate:
        m1 = 0.0
        m3 = mutual_info_bits(sys, "V", "Y2") - mutual_info_bits(sys, "V", "Y1")
        if u2_degenerate:
            m2 = 0.0
        else:
            m2 = mutual_info_bits(sys, "U2", ("V", "Y2")) - mutual_info_bits(
                sys, "U2", ("V", "Y1")
            )
    else:
        m1 = mutual_info_bits(sys, "U1", "Y2") - mutual_info_bits(sys, "U1", "Y1")
        m3 = cond_mutual_info_bits(sys, "V", "Y2", "U1") - cond_mutual_info_bits(
            sys, "V", "Y1", "U1"
        )
        if u2_degenerate:
            m2 = 0.0
        else:
            m2 = cond_mutual_info_bits(sys, "U2", ("V", "Y2"), "U1") - cond_mutual_info_bits(
                sys, "U2", ("V", "Y1"), "U1"
            )
    return (m1, m2, m3)


def ic_strong_point(params: IcParams, p1_dprime: float) -> IcStrongPoint:
    """Achievability of one sum-face point for the regular IC.

    All three auxiliaries must be decodable at receiver 2 at the rates the
    receiver-1 layered design imposes.  Users are auto-swapped to the
    canonical orientation when needed (``swapped`` records it; rates refer
    to the oriented channel).
    """
    oriented, swapped = _ic_strong_gate(params)
    margins = _ic_strong_margins(oriented, p1_dprime)
    split = split_for(oriented.p1, p1_dprime)
    coeffs = strong_coefficients(oriented.p1, oriented.p2, oriented.a, split)
    zp = ZicStrongPoint(
        split=split,
        rates=strong_point_rates(oriented.p1, oriented.p2, oriented.a, p1_dprime),
        coefficients=coeffs,
        condition=ConditionReport(
            name="ic-strong-point",
            margin=min(margins),
            witness={"p1_dprime": p1_dprime},
            extras={"margins": margins},
        ),
    )
    return IcStrongPoint(split_point=zp, margins=margins, swapped=swapped)


def ic_strong_segment(
    params: IcParams, grid_size: int = DEFAULT_SEGMENT_GRID
) -> StrongSegment:
    """Characterized sum-capacity segment for the regular IC (oriented)."""
    oriented, _ = _ic_strong_gate(params)
    return _segment_scan(
        oriented,
        lambda x: min(_ic_strong_margins(oriented, x)),
        lambda x: strong_point_rates(oriented.p1, oriented.p2, oriented.a, x),
        grid_size,
    )


# --------------------------------------------------------------------------
# Weak regime
# --------------------------------------------------------------------------

def ic_weak_gate(params: IcParams) -> bool:
    """Weak-interference gate: |a*(1 + b^2*p1)| + |b*(1 + a^2*p2)| <= 1.

    Exposed separately from :func:`ic_weak_sum_capacity` so callers can
    substitute their own gate if they work with a different weak-regime
    definition."""
    return (
        abs(params.a * (1.0 + params.b ** 2 * params.p1))
        + abs(params.b * (1.0 + params.a ** 2 * params.p2))
        <= 1.0
    )


def ic_weak_sum_capacity(params: IcParams) -> float:
    """Sum capacity in the weak regime; independent of the state correlation."""
    if not ic_weak_gate(params):
        raise RegimeGateError(
            "weak regime needs |a(1+b^2 p1)| + |b(1+a^2 p2)| <= 1"
        )
    return 0.5 * math.log2(
        1.0 + params.p1 / (params.a ** 2 * params.p2 + 1.0)
    ) + 0.5 * math.log2(1.0 + params.p2 / (params.b ** 2 * params.p1 + 1.0))
