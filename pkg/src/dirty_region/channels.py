"""Channel parameter records, state decompositions, and system builders.

Three Gaussian models are covered:

* MAC with a state-informed helper:  Y = X0 + X1 + X2 + S + N
* Z-interference channel:            Y1 = X1 + a*X2 + S1 + N1,  Y2 = X2 + S2 + N2
* Regular interference channel:      Y1 = X1 + a*X2 + S1 + N1,  Y2 = b*X1 + X2 + S2 + N2

The two receiver states are jointly Gaussian with correlation ``rho``; the
correlation is always carried as ``rho`` and the regression constants of the
forward (S1 = d*S2 + S1') and backward (S2 = c*S1 + S2') decompositions are
derived from it, never stored independently, so (d, c, rho) can never drift
out of consistency (d*c == rho^2).

Builders return :class:`~dirty_region.gauss_core.LinearGaussianSystem`
instances that carry both the base variables of the decomposed form and the
derived originals (S1 or S2), so mutual-information queries can be phrased
either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gauss_core import LinearGaussianSystem, build_system

SPLIT_TOL = 1e-12


class ChannelError(Exception):
    """Base error for channel parameter handling."""


class ParameterError(ChannelError):
    """A parameter violates its domain (negative power, |rho| > 1, ...)."""


class DecompositionError(ChannelError):
    """State decomposition impossible (zero-variance divisor with rho != 0)."""


class PowerViolationError(ChannelError):
    """A direct-cancellation coefficient exceeds the helper power budget."""


class SplitError(ChannelError):
    """A rate-splitting power split is outside [0, P1]."""


def _require_nonneg(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if value < 0:
            raise ParameterError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class MacHelperParams:
    """Helper-assisted MAC: transmit powers p0 (helper), p1, p2; state variance q."""

    p0: float
    p1: float
    p2: float
    q: float

    def __post_init__(self):
        _require_nonneg(p0=self.p0, p1=self.p1, p2=self.p2, q=self.q)


@dataclass(frozen=True)
class ZicParams:
    """Z-IC: cross gain a into receiver 1; powers p1, p2; states (q1, q2, rho)."""

    a: float
    p1: float
    p2: float
    q1: float
    q2: float
    rho: float = 0.0

    def __post_init__(self):
        _require_nonneg(p1=self.p1, p2=self.p2, q1=self.q1, q2=self.q2)
        if abs(self.rho) > 1:
            raise ParameterError(f"|rho| must be <= 1, got {self.rho}")


@dataclass(frozen=True)
class IcParams:
    """Regular IC: cross gains a (into rx 1) and b (into rx 2)."""

    a: float
    b: float
    p1: float
    p2: float
    q1: float
    q2: float
    rho: float = 0.0

    def __post_init__(self):
        _require_nonneg(p1=self.p1, p2=self.p2, q1=self.q1, q2=self.q2)
        if abs(self.rho) > 1:
            raise ParameterError(f"|rho| must be <= 1, got {self.rho}")

    def drop_cross_gain_b(self) -> ZicParams:
        """The Z-IC obtained by removing the X1 -> Y2 link."""
        return ZicParams(self.a, self.p1, self.p2, self.q1, self.q2, self.rho)

    def swap_users(self) -> "IcParams":
        """Relabel users 1 <-> 2 (swaps powers, states, and cross gains)."""
        return IcParams(self.b, self.a, self.p2, self.p1, self.q2, self.q1, self.rho)


@dataclass(frozen=True)
class StateDecomposition:
    """One state written as coefficient * other state + independent residual."""

    form: str  # "forward": S1 = d*S2 + S1' ; "backward": S2 = c*S1 + S2'
    coefficient: float
    residual_variance: float


def decompose_forward(q1: float, q2: float, rho: float) -> StateDecomposition:
    """S1 = d*S2 + S1' with d = rho*sqrt(q1/q2) and Var(S1') = (1-rho^2)*q1.

    A zero divisor variance (q2 == 0) is a deterministic-zero state: the
    decomposition degenerates to coefficient 0 with the full q1 as residual,
    which is only consistent when rho == 0; otherwise the request is
    contradictory and raises :class:`DecompositionError`.
    """
    _require_nonneg(q1=q1, q2=q2)
    if abs(rho) > 1:
        raise ParameterError(f"|rho| must be <= 1, got {rho}")
    if q2 == 0:
        if rho != 0:
            raise DecompositionError(
                "q2 == 0 admits no correlated decomposition; use rho=0 "
                "(independent states) or supply q2 > 0"
            )
        return StateDecomposition("forward", 0.0, q1)
    d = rho * math.sqrt(q1 / q2)
    return StateDecomposition("forward", d, (1.0 - rho * rho) * q1)


def decompose_backward(q1: float, q2: float, rho: float) -> StateDecomposition:
    """S2 = c*S1 + S2' with c = rho*sqrt(q2/q1) and Var(S2') = (1-rho^2)*q2."""
    _require_nonneg(q1=q1, q2=q2)
    if abs(rho) > 1:
        raise ParameterError(f"|rho| must be <= 1, got {rho}")
    if q1 == 0:
        if rho != 0:
            raise DecompositionError(
                "q1 == 0 admits no correlated decomposition; use rho=0 "
                "(independent states) or supply q1 > 0"
            )
        return StateDecomposition("backward", 0.0, q2)
    c = rho * math.sqrt(q2 / q1)
    return StateDecomposition("backward", c, (1.0 - rho * rho) * q2)


# --------------------------------------------------------------------------
# Dirty-paper-coding coefficient records
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MacCoefficients:
    """Helper auxiliary U = X0' + alpha*S with direct cancellation X0 = X0' + beta*S."""

    alpha: float
    beta: float


@dataclass(frozen=True)
class ZicVeryStrongCoefficients:
    """U = X1 + alpha1*S2 + alpha2*S1',  V = X2 + beta*S2."""

    alpha1: float
    alpha2: float
    beta: float


@dataclass(frozen=True)
class IcVeryStrongCoefficients:
    """U = X1 + alpha1*S1' + alpha2*S2,  V = X2 + beta1*S1' + beta2*S2."""

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float


@dataclass(frozen=True)
class LayeredCoefficients:
    """Rate-splitting auxiliaries U1 = X1' + alpha1*S1, U2 = X1'' + alpha2*S1,
    V = a*X2 + beta*S1 for the strong (not very strong) regime."""

    alpha1: float
    alpha2: float
    beta: float


@dataclass(frozen=True)
class PowerSplit:
    """Split of transmitter 1's power: p1_prime decoded first, p1_dprime last."""

    p1_prime: float
    p1_dprime: float

    def __post_init__(self):
        if self.p1_prime < -SPLIT_TOL or self.p1_dprime < -SPLIT_TOL:
            raise SplitError(
                f"split powers must be nonnegative, got ({self.p1_prime}, {self.p1_dprime})"
            )

    @property
    def total(self) -> float:
        return self.p1_prime + self.p1_dprime


def split_for(p1: float, p1_dprime: float) -> PowerSplit:
    """Full-power split with the given second-layer power."""
    if not 0.0 <= p1_dprime <= p1 + SPLIT_TOL:
        raise SplitError(f"p1_dprime must lie in [0, {p1}], got {p1_dprime}")
    p1_dprime = min(p1_dprime, p1)
    return PowerSplit(p1 - p1_dprime, p1_dprime)


# --------------------------------------------------------------------------
# System builders
# --------------------------------------------------------------------------

def build_mac_helper(
    params: MacHelperParams, alpha: float, beta: float
) -> LinearGaussianSystem:
    """Helper-assisted MAC with U = X0' + alpha*S, X0 = X0' + beta*S.

    The helper splits its power between dirty-paper precoding (X0', variance
    p0' = p0 - beta^2*q) and direct state subtraction (beta*S); beta outside
    the power budget raises :class:`PowerViolationError`.
    """
    p0p = params.p0 - beta * beta * params.q
    if p0p < -SPLIT_TOL:
        raise PowerViolationError(
            f"beta={beta} needs power {beta * beta * params.q:.6g} > p0={params.p0}"
        )
    p0p = max(p0p, 0.0)
    bases = [
        ("S", params.q),
        ("X0p", p0p),
        ("X1", params.p1),
        ("X2", params.p2),
        ("N", 1.0),
    ]
    derived = [
        ("U", [alpha, 1.0, 0.0, 0.0, 0.0]),
        ("X0", [beta, 1.0, 0.0, 0.0, 0.0]),
        ("Y", [1.0 + beta, 1.0, 1.0, 1.0, 1.0]),
    ]
    return build_system(bases, derived)


def build_zic_verystrong(
    params: ZicParams, coeffs: ZicVeryStrongCoefficients
) -> LinearGaussianSystem:
    """Z-IC in forward-decomposed form (S1 = d*S2 + S1').

    Bases {S2, S1p, X1, X2, N1, N2}; derived {S1, U, V, Y1, Y2} with
    Y1 = X1 + a*X2 + d*S2 + S1' + N1 and Y2 = X2 + S2 + N2.
    """
    dec = decompose_forward(params.q1, params.q2, params.rho)
    d = dec.coefficient
    bases = [
        ("S2", params.q2),
        ("S1p", dec.residual_variance),
        ("X1", params.p1),
        ("X2", params.p2),
        ("N1", 1.0),
        ("N2", 1.0),
    ]
    derived = [
        ("S1", [d, 1.0, 0.0, 0.0, 0.0, 0.0]),
        ("U", [coeffs.alpha1, coeffs.alpha2, 1.0, 0.0, 0.0, 0.0]),
        ("V", [coeffs.beta, 0.0, 0.0, 1.0, 0.0, 0.0]),
        ("Y1", [d, 1.0, 1.0, params.a, 1.0, 0.0]),
        ("Y2", [1.0, 0.0, 0.0, 1.0, 0.0, 1.0]),
    ]
    return build_system(bases, derived)


def build_ic_verystrong(
    params: IcParams, coeffs: IcVeryStrongCoefficients
) -> LinearGaussianSystem:
    """Regular IC in forward-decomposed form; reduces to the Z-IC at b = 0.

    Bases {S2, S1p, X1, X2, N1, N2}; derived {S1, U, V, Y1, Y2} with
    Y1 = X1 + a*X2 + d*S2 + S1' + N1 and Y2 = b*X1 + X2 + S2 + N2.
    """
    dec = decompose_forward(params.q1, params.q2, params.rho)
    d = dec.coefficient
    bases = [
        ("S2", params.q2),
        ("S1p", dec.residual_variance),
        ("X1", params.p1),
        ("X2", params.p2),
        ("N1", 1.0),
        ("N2", 1.0),
    ]
    derived = [
        ("S1", [d, 1.0, 0.0, 0.0, 0.0, 0.0]),
        ("U", [coeffs.alpha2, coeffs.alpha1, 1.0, 0.0, 0.0, 0.0]),
        ("V", [coeffs.beta2, coeffs.beta1, 0.0, 1.0, 0.0, 0.0]),
        ("Y1", [d, 1.0, 1.0, params.a, 1.0, 0.0]),
        ("Y2", [1.0, 0.0, params.b, 1.0, 0.0, 1.0]),
    ]
    return build_system(bases, derived)


def build_strong_layered(
    params: ZicParams | IcParams,
    split: PowerSplit,
    coeffs: LayeredCoefficients,
    model: str,
) -> LinearGaussianSystem:
    """Rate-splitting system in backward-decomposed form (S2 = c*S1 + S2').

    Bases {S1, S2p, X1p, X1pp, X2, N1, N2}; derived {S2, X1, U1, U2, V, Y1,
    Y2}.  For ``model == "zic"`` receiver 2 sees no X1; for ``model == "ic"``
    it sees b*X1.  A zero-power layer (p1_prime == 0 or p1_dprime == 0) is
    allowed; the corresponding auxiliary is then deterministic and must be
    left out of mutual-information subsets by the caller.
    """
    if model not in ("zic", "ic"):
        raise ValueError(f"model must be 'zic' or 'ic', got {model!r}")
    if split.total > params.p1 + SPLIT_TOL:
        raise SplitError(
            f"split total {split.total} exceeds p1={params.p1}"
        )
    b_gain = params.b if model == "ic" else 0.0  # type: ignore[union-attr]
    dec = decompose_backward(params.q1, params.q2, params.rho)
    c = dec.coefficient
    bases = [
        ("S1", params.q1),
        ("S2p", dec.residual_variance),
        ("X1p", split.p1_prime),
        ("X1pp", split.p1_dprime),
        ("X2", params.p2),
        ("N1", 1.0),
        ("N2", 1.0),
    ]
    derived = [
        ("S2", [c, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        ("X1", [0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0]),
        ("U1", [coeffs.alpha1, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
        ("U2", [coeffs.alpha2, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]),
        ("V", [coeffs.beta, 0.0, 0.0, 0.0, params.a, 0.0, 0.0]),
        ("Y1", [1.0, 0.0, 1.0, 1.0, params.a, 1.0, 0.0]),
        ("Y2", [c, 1.0, b_gain, b_gain, 1.0, 0.0, 1.0]),
    ]
    return build_system(bases, derived)
