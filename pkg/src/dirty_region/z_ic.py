"""Z-interference channel with correlated receiver states.

Three interference regimes:

* very strong (a^2 > 1 + p1): joint dirty-paper design of U (against both
  state components seen after interference cancellation) and V (against the
  clean receiver's state).  When receiver 1 can decode V at least as well as
  receiver 2 — I(V;Y2) <= I(V;Y1) — both states and the interference are
  fully canceled and the capacity region is the no-interference rectangle.
* strong but not very strong (1 <= a^2 < 1 + p1): rate splitting with
  layered dirty-paper coding achieves points on the no-state sum-capacity
  face; a point is achievable iff receiver 2 can decode V at the rate
  receiver 1's design imposes, I(V;U1,Y1) <= I(V;Y2).
* weak (a^2 <= 1): per-receiver dirty paper coding plus treating
  interference as noise is sum-capacity optimal, independent of the state
  correlation.

Conditions are decided on covariance-based mutual informations (the
unambiguous formulation); algebraic closed forms of the same conditions are
evaluated as cross-checks and any sign disagreement is surfaced in the
report rather than hidden.  The very-strong cross-check deliberately keeps
a (d + a*beta)^2 coupling term even though the derivation gives
(d - a*beta)^2, so its discrepancy flag has real content; the strong-regime
closed form is exact.

The achievable set of sum-face points is an interval anchored at the
max-R1 corner of the pentagon (the margin is monotone in the split), so the
segment scan walks the split from that corner toward the max-R2 corner and
reports the maximal passing prefix, verifying rather than assuming the
prefix structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .channels import (
    LayeredCoefficients,
    PowerSplit,
    ZicParams,
    ZicVeryStrongCoefficients,
    build_strong_layered,
    build_zic_verystrong,
    decompose_backward,
    decompose_forward,
    split_for,
)
from .gauss_core import LinearGaussianSystem, mutual_info_bits
from .region import Pentagon
from .reports import ConditionReport, RegimeGateError

DEGENERATE_TOL = 1e-12
SIGN_AGREEMENT_BAND = 1e-6
DEFAULT_SEGMENT_GRID = 513
SEGMENT_BISECT_TOL = 1e-8


def _nostate_rate(p: float) -> float:
    return 0.5 * math.log2(1.0 + p)


def state_pair_subset(sys: LinearGaussianSystem) -> tuple[str, ...]:
    """The joint state (S1, S2) expressed through the decomposition bases.

    Mutual information with (S1, S2) equals mutual information with the
    independent components the builder used (the map between them is
    invertible), and deterministic-zero components are dropped so perfectly
    correlated states do not produce a singular covariance.
    """
    candidates = [n for n in ("S2", "S1p", "S1", "S2p") if n in sys.base_names]
    return tuple(n for n in candidates if sys.variance(n) > DEGENERATE_TOL)


# --------------------------------------------------------------------------
# Very strong regime
# --------------------------------------------------------------------------

def zic_vs_coefficients(params: ZicParams) -> ZicVeryStrongCoefficients:
    """Joint dirty-paper coefficients canceling both states.

    V = X2 + beta*S2 is the standard single-user design for receiver 2;
    U = X1 + alpha1*S2 + alpha2*S1' cancels the residual state seen by
    receiver 1 after subtracting a*V.
    """
    dec = decompose_forward(params.q1, params.q2, params.rho)
    d = dec.coefficient
    t1 = params.p1 / (params.p1 + 1.0)
    t2 = params.p2 / (params.p2 + 1.0)
    return ZicVeryStrongCoefficients(
        alpha1=t1 * (d - params.a * t2),
        alpha2=t1,
        beta=t2,
    )


def _closed_form_vs_margin(params: ZicParams) -> float:
    """Cross-check closed form of the very-strong condition, in bits.

    Carries a (d + a*beta)^2 coupling term where the derivation gives
    (d - a*beta)^2; used only as a secondary margin so the report can flag
    formula disagreement.
    """
    dec = decompose_forward(params.q1, params.q2, params.rho)
    d, q1p = dec.coefficient, dec.residual_variance
    beta = params.p2 / (params.p2 + 1.0)
    num = params.p1 + params.a ** 2 * params.p2 + d * d * params.q2 + q1p + 1.0
    den = (d + params.a * beta) ** 2 * params.q2 * params.p2 + (
        params.p2 + beta * beta * params.q2
    ) * (params.p1 + q1p + 1.0)
    if den <= 0 or num <= 0:
        return -math.inf
    return 0.5 * math.log2(num / den) - 0.5 * math.log2((params.p2 + 1.0) / params.p2)


def zic_vs_condition(params: ZicParams) -> ConditionReport:
    """Very-strong achievability condition I(V;Y2) <= I(V;Y1).

    The covariance-based margin I(V;Y1) - I(V;Y2) is the verdict; the
    closed-form cross-check rides along in ``extras`` with a discrepancy
    flag when the two disagree in sign away from the boundary.
    """
    coeffs = zic_vs_coefficients(params)
    sys = build_zic_verystrong(params, coeffs)
    margin = mutual_info_bits(sys, "V", "Y1") - mutual_info_bits(sys, "V", "Y2")
    closed = _closed_form_vs_margin(params)
    discrepancy = (
        abs(margin) > SIGN_AGREEMENT_BAND
        and math.isfinite(closed)
        and (margin >= 0) != (closed >= 0)
    )
    return ConditionReport(
        name="zic-very-strong",
        margin=margin,
        witness={"alpha1": coeffs.alpha1, "alpha2": coeffs.alpha2, "beta": coeffs.beta},
        extras={
            "closed_form_margin": closed,
            "closed_form_discrepancy": discrepancy,
        },
    )


@dataclass(frozen=True)
class ZicVeryStrongResult:
    coefficients: ZicVeryStrongCoefficients
    condition: ConditionReport
    capacity_region: Pentagon | None
    identity_residuals: Mapping[str, float] = field(default_factory=dict)

    @property
    def achieves_capacity(self) -> bool:
        return self.capacity_region is not None


def _vs_identity_residuals(
    sys: LinearGaussianSystem, p1: float, p2: float
) -> dict[str, float]:
    states = state_pair_subset(sys)
    r1 = mutual_info_bits(sys, "U", ("V", "Y1")) - mutual_info_bits(sys, states, "U")
    r2 = mutual_info_bits(sys, "V", "Y2")
    if sys.variance("S2") > DEGENERATE_TOL:  # deterministic state carries no cost
        r2 -= mutual_info_bits(sys, "S2", "V")
    return {
        "rate1": r1 - _nostate_rate(p1),
        "rate2": r2 - _nostate_rate(p2),
    }


def zic_vs_capacity(params: ZicParams) -> ZicVeryStrongResult:
    """Full capacity test in the very strong regime (gate: a^2 > 1 + p1).

    On a passing condition the capacity region is the rectangle of the two
    interference-free point-to-point rates.  The dirty-paper cancellation
    identities (achieved rate equals the no-state rate on each link) are
    evaluated and reported as residuals.
    """
    if params.a ** 2 <= 1.0 + params.p1:
        raise RegimeGateError(
            f"very strong regime needs a^2 > 1 + p1 ({params.a ** 2:.6g} <= "
            f"{1.0 + params.p1:.6g})"
        )
    coeffs = zic_vs_coefficients(params)
    condition = zic_vs_condition(params)
    sys = build_zic_verystrong(params, coeffs)
    residuals = _vs_identity_residuals(sys, params.p1, params.p2)
    region = None
    if condition.passed:
        m1 = _nostate_rate(params.p1)
        m2 = _nostate_rate(params.p2)
        region = Pentagon(m1, m2, m1 + m2)
    return ZicVeryStrongResult(
        coefficients=coeffs,
        condition=condition,
        capacity_region=region,
        identity_residuals=residuals,
    )


# --------------------------------------------------------------------------
# Strong (not very strong) regime
# --------------------------------------------------------------------------

def strong_coefficients(p1: float, p2: float, a: float, split: PowerSplit) -> LayeredCoefficients:
    """Layered dirty-paper coefficients for the split (successive decoding
    U1, then V, then U2 at receiver 1, each canceling the remaining state)."""
    d = p1 + a * a * p2 + 1.0
    return LayeredCoefficients(
        alpha1=split.p1_prime / d,
        alpha2=split.p1_dprime / d,
        beta=a * a * p2 / d,
    )


def strong_point_rates(p1: float, p2: float, a: float, p1_dprime: float) -> tuple[float, float]:
    """Rate pair of the sum-face point parameterized by the split."""
    p1_prime = p1 - p1_dprime
    r1 = 0.5 * math.log2(
        1.0 + p1_prime / (a * a * p2 + p1_dprime + 1.0)
    ) + 0.5 * math.log2(1.0 + p1_dprime)
    r2 = 0.5 * math.log2(1.0 + a * a * p2 / (p1_dprime + 1.0))
    return r1, r2


def _strong_gate(params: ZicParams) -> None:
    a2 = params.a ** 2
    if not 1.0 <= a2 < 1.0 + params.p1:
        raise RegimeGateError(
            f"strong regime needs 1 <= a^2 < 1 + p1, got a^2={a2:.6g}, p1={params.p1:.6g}"
        )


def _zic_strong_margin(params: ZicParams, p1_dprime: float) -> tuple[float, LayeredCoefficients]:
    """Covariance margin I(V;Y2) - I(V;U1,Y1) for one split (pass >= 0).

    A zero-power first layer makes U1 deterministic; it is then dropped from
    the conditioning subset instead of producing a singular covariance.
    """
    split = split_for(params.p1, p1_dprime)
    coeffs = strong_coefficients(params.p1, params.p2, params.a, split)
    sys = build_strong_layered(params, split, coeffs, "zic")
    receiver1_side = ("Y1",) if split.p1_prime <= DEGENERATE_TOL else ("U1", "Y1")
    margin = mutual_info_bits(sys, "V", "Y2") - mutual_info_bits(sys, "V", receiver1_side)
    return margin, coeffs


def _closed_form_strong_margin(params: ZicParams, p1_dprime: float) -> float:
    """Closed form of the strong-regime condition (matches the covariance
    margin identically when the layered design is exact)."""
    dec = decompose_backward(params.q1, params.q2, params.rho)
    c, q2p = dec.coefficient, dec.residual_variance
    a, p1, p2, q1 = params.a, params.p1, params.p2, params.q1
    beta = a * a * p2 / (p1 + a * a * p2 + 1.0)
    num = a * a * p2 * (p2 + c * c * q1 + q2p + 1.0)
    den = (a * c - beta) ** 2 * q1 * p2 + (a * a * p2 + beta * beta * q1) * (q2p + 1.0)
    rhs = 1.0 + a * a * p2 / (p1_dprime + 1.0)
    if num <= 0 or den <= 0:
        return -math.inf
    return 0.5 * math.log2(num / den) - 0.5 * math.log2(rhs)


@dataclass(frozen=True)
class ZicStrongPoint:
    """One candidate point on the no-state sum-capacity face."""

    split: PowerSplit
    rates: tuple[float, float]
    coefficients: LayeredCoefficients
    condition: ConditionReport

    @property
    def achievable(self) -> bool:
        return self.condition.passed


def zic_strong_point(params: ZicParams, p1_dprime: float) -> ZicStrongPoint:
    """Achievability of the sum-face point with second-layer power p1_dprime.

    Gate: 1 <= a^2 < 1 + p1 and 0 <= p1_dprime <= p1.  The report carries
    both the covariance margin (primary) and the closed-form margin
    (cross-check, flagged on sign disagreement away from the boundary).
    """
    _strong_gate(params)
    margin, coeffs = _zic_strong_margin(params, p1_dprime)
    closed = _closed_form_strong_margin(params, p1_dprime)
    discrepancy = (
        abs(margin) > SIGN_AGREEMENT_BAND
        and math.isfinite(closed)
        and (margin >= 0) != (closed >= 0)
    )
    split = split_for(params.p1, p1_dprime)
    return ZicStrongPoint(
        split=split,
        rates=strong_point_rates(params.p1, params.p2, params.a, p1_dprime),
        coefficients=coeffs,
        condition=ConditionReport(
            name="zic-strong-point",
            margin=margin,
            witness={
                "p1_dprime": p1_dprime,
                "alpha1": coeffs.alpha1,
                "alpha2": coeffs.alpha2,
                "beta": coeffs.beta,
            },
            extras={
                "closed_form_margin": closed,
                "closed_form_discrepancy": discrepancy,
                "degenerate_first_layer": split.p1_prime <= DEGENERATE_TOL,
                "degenerate_second_layer": split.p1_dprime <= DEGENERATE_TOL,
            },
        ),
    )


@dataclass(frozen=True)
class StrongSegment:
    """Characterized portion of the no-state sum-capacity face.

    The scan walks p1_dprime from p1 (max-R1 corner) down to a^2 - 1 (max-R2
    corner).  ``prefix`` is the maximal passing prefix of that scan — the
    characterized segment; ``passing`` is the full passing set.  When the
    passing set is not a prefix (never observed; the margin is monotone in
    the split) ``prefix_violation`` is set instead of silently truncating.
    """

    grid: np.ndarray            # p1_dprime scan values, descending from p1
    margins: np.ndarray
    prefix: tuple[float, float] | None   # (p1_dprime_lo, p1_dprime_hi) of the prefix
    passing: tuple[tuple[float, float], ...]
    r1_range: tuple[float, float] | None
    prefix_violation: bool

    @property
    def count(self) -> int:
        return int(np.sum(self.margins >= 0.0))

    @property
    def empty(self) -> bool:
        return self.prefix is None


def _segment_scan(
    params,
    margin_fn,
    rates_fn,
    grid_size: int,
) -> StrongSegment:
    """Shared descending-split scan with bisected boundary refinement."""
    lo = max(0.0, params.a ** 2 - 1.0)
    grid = np.linspace(params.p1, lo, grid_size)
    margins = np.array([margin_fn(float(x)) for x in grid])
    passing_mask = margins >= 0.0

    runs: list[tuple[float, float]] = []
    start = None
    for i, ok in enumerate(passing_mask):
        if ok and start is None:
            start = i
        if not ok and start is not None:
            runs.append((float(grid[i - 1]), float(grid[start])))
            start = None
    if start is not None:
        runs.append((float(grid[-1]), float(grid[start])))

    prefix = None
    prefix_violation = False
    if passing_mask[0]:
        k = int(np.argmin(passing_mask)) if not passing_mask.all() else grid_size
        if k < grid_size:
            a_pass, b_fail = float(grid[k - 1]), float(grid[k])
            while abs(a_pass - b_fail) > SEGMENT_BISECT_TOL:
                mid = 0.5 * (a_pass + b_fail)
                if margin_fn(mid) >= 0.0:
                    a_pass = mid
                else:
                    b_fail = mid
            prefix = (a_pass, float(grid[0]))
        else:
            prefix = (float(grid[-1]), float(grid[0]))
        prefix_violation = bool(np.any(passing_mask[np.argmin(passing_mask):])) \
            if not passing_mask.all() else False
    else:
        prefix_violation = bool(np.any(passing_mask))

    r1_range = None
    if prefix is not None:
        r1_lo = rates_fn(prefix[1])[0]
        r1_hi = rates_fn(prefix[0])[0]
        r1_range = (min(r1_lo, r1_hi), max(r1_lo, r1_hi))
    return StrongSegment(
        grid=grid,
        margins=margins,
        prefix=prefix,
        passing=tuple(runs),
        r1_range=r1_range,
        prefix_violation=prefix_violation,
    )


def zic_strong_segment(
    params: ZicParams, grid_size: int = DEFAULT_SEGMENT_GRID
) -> StrongSegment:
    """Characterized sum-capacity segment in the strong regime."""
    _strong_gate(params)
    return _segment_scan(
        params,
        lambda x: _zic_strong_margin(params, x)[0],
        lambda x: strong_point_rates(params.p1, params.p2, params.a, x),
        grid_size,
    )


# --------------------------------------------------------------------------
# Weak regime
# --------------------------------------------------------------------------

def zic_weak_sum_capacity(params: ZicParams) -> float:
    """Sum capacity for a^2 <= 1: per-link dirty paper coding, interference
    treated as noise.  Independent of the state correlation."""
    if params.a ** 2 > 1.0:
        raise RegimeGateError(
            f"weak regime needs a^2 <= 1, got a^2={params.a ** 2:.6g}"
        )
    return 0.5 * math.log2(
        1.0 + params.p1 / (params.a ** 2 * params.p2 + 1.0)
    ) + 0.5 * math.log2(1.0 + params.p2)
