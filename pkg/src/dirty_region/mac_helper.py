"""Helper-assisted MAC: bounds, regime classification, and capacity segments.

The helper knows the additive state S (variance q) noncausally and spends
its power p0 on a mix of direct subtraction (beta*S) and single-bin
dirty-paper precoding (auxiliary U = X0' + alpha*S).  Two rate functions
govern the achievable region:

    f(alpha, beta, P): decode-the-auxiliary route, net of the binning cost
    g(alpha, beta, P): decode-the-message route given the auxiliary

and each rate face of the inner region is min(f, g) at the chosen (alpha,
beta).  The outer bound couples a helper-limited term (a function of the
helper/state correlation rho) with the no-state MAC capacity.

Classification of an index k in {1, 2, 3} (faces R1, R2, R1+R2 with powers
p1, p2, p1+p2):

* label C ("fully canceled"): some alpha with beta = alpha - 1 makes the
  no-state rate achievable, i.e. the full-cancellation margin
  p0'^2 - alpha^2*q*(P + 1 - p0') is nonnegative somewhere on
  Omega_alpha = [1 - sqrt(p0/q), 1 + sqrt(p0/q)];
* label A ("state-limited"): at the helper-optimal (alpha_k, beta_k) the
  f-route is the binding one (f <= g), so the face meets the outer bound's
  helper-limited term;
* label B: neither witness exists; the face is uncharacterized.

C for the sum index implies C for both single-user indices (the margin is
nonincreasing in P), so at most 19 distinct label combinations occur.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import _kernels as kernels
from . import search
from .channels import MacHelperParams, PowerViolationError
from .region import Pentagon, RateRegion, envelope_region
from .reports import ConditionReport

LABEL_TOL = 1e-9
ALPHA_SCAN_SIZE = 4096
DEFAULT_ALPHA_GRID = 257
DEFAULT_BETA_GRID = 129
DEFAULT_RHO_GRID = 257
DEFAULT_R1_GRID = 513


def _beta_limit(params: MacHelperParams) -> float:
    return math.sqrt(params.p0 / params.q) if params.q > 0 else math.inf


def _nostate_rate(p: float) -> float:
    return 0.5 * math.log2(1.0 + p)


def _fg_scalar(params: MacHelperParams, alpha: float, beta: float, p: float) -> tuple[float, float]:
    f, g = kernels.fg_grid(params.p0, params.q, p, np.array([alpha]), np.array([beta]))
    return float(f[0, 0]), float(g[0, 0])


def f_rate(params: MacHelperParams, alpha: float, beta: float, p: float) -> float:
    """Auxiliary-route rate f(alpha, beta, p) in bits.

    Requires |beta| <= sqrt(p0/q).  With no state (q == 0) the binning cost
    vanishes and f is never the binding face; +inf is returned as sentinel.
    """
    if params.q == 0:
        return math.inf
    if abs(beta) > _beta_limit(params) * (1 + 1e-15):
        raise PowerViolationError(
            f"|beta|={abs(beta)} exceeds sqrt(p0/q)={_beta_limit(params):.6g}"
        )
    return _fg_scalar(params, alpha, beta, p)[0]


def g_rate(params: MacHelperParams, alpha: float, beta: float, p: float) -> float:
    """Message-route rate g(alpha, beta, p) in bits; equals the no-state rate
    whenever beta = alpha - 1."""
    if params.q == 0:
        return _nostate_rate(p)
    if abs(beta) > _beta_limit(params) * (1 + 1e-15):
        raise PowerViolationError(
            f"|beta|={abs(beta)} exceeds sqrt(p0/q)={_beta_limit(params):.6g}"
        )
    return _fg_scalar(params, alpha, beta, p)[1]


def outer_first_term(params: MacHelperParams, p: float, rho: float) -> float:
    """Helper-limited outer-bound term at helper/state correlation rho."""
    return float(
        kernels.helper_rate_grid(params.p0, params.q, p, np.array([rho]))[0]
    )


def rho_star(
    params: MacHelperParams,
    p: float,
    tol: float = 1e-8,
    grid_size: int = search.DEFAULT_GRID_1D,
) -> tuple[float, float]:
    """Correlation maximizing the helper-limited term over [-1, 1].

    A powerless helper makes the term constant in rho; 0 is returned then.
    """
    if params.p0 == 0:
        return 0.0, outer_first_term(params, p, 0.0)
    grid = kernels.helper_rate_grid(
        params.p0, params.q, p, np.linspace(-1.0, 1.0, grid_size)
    )
    return search.maximize_1d(
        lambda r: outer_first_term(params, p, r),
        -1.0,
        1.0,
        tol=tol,
        grid_size=grid_size,
        grid_values=grid,
    )


@dataclass(frozen=True)
class MacOuterPoint:
    """Per-correlation outer bounds (each the min of its two terms)."""

    rho0s: float
    m1: float
    m2: float
    m12: float

    def __post_init__(self):
        if abs(self.rho0s) > 1:
            raise ValueError(f"|rho0s| must be <= 1, got {self.rho0s}")


def outer_point(params: MacHelperParams, rho: float) -> MacOuterPoint:
    caps = [params.p1, params.p2, params.p1 + params.p2]
    m = [
        min(outer_first_term(params, p, rho), _nostate_rate(p))
        for p in caps
    ]
    return MacOuterPoint(rho, m[0], m[1], m[2])


def outer_envelope(
    params: MacHelperParams,
    rho_grid_size: int = DEFAULT_RHO_GRID,
    r1_grid_size: int = DEFAULT_R1_GRID,
) -> RateRegion:
    """Upper envelope of the per-correlation outer pentagons.

    The per-face optimal correlations are appended to the grid so the
    envelope attains max-R1 = min(max_rho helper term, no-state rate)
    exactly.
    """
    if rho_grid_size < 3:
        raise ValueError("rho grid must have at least 3 points")
    rhos = list(np.linspace(-1.0, 1.0, rho_grid_size))
    for p in (params.p1, params.p2, params.p1 + params.p2):
        rhos.append(rho_star(params, p)[0])
    faces = np.array(
        [[pt.m1, pt.m2, pt.m12] for pt in (outer_point(params, r) for r in rhos)]
    )
    return envelope_region(faces, r1_grid_size)


def _pentagon_at(params: MacHelperParams, alpha: float, beta: float) -> tuple[float, float, float]:
    vals = []
    for p in (params.p1, params.p2, params.p1 + params.p2):
        f, g = _fg_scalar(params, alpha, beta, p)
        vals.append(max(0.0, min(f, g)))
    return vals[0], vals[1], vals[2]


def _helper_optimal_point(params: MacHelperParams, p: float) -> tuple[float, float, float]:
    """(alpha_k, beta_k, rho_k*) realizing the helper-limited term as f."""
    rho, _ = rho_star(params, p)
    beta = rho * _beta_limit(params) if params.q > 0 else 0.0
    p0p = params.p0 - beta * beta * params.q
    alpha = (1.0 + beta) * p0p / (p0p + 1.0)
    return alpha, beta, rho


def c_condition(params: MacHelperParams, p: float) -> ConditionReport:
    """Full-cancellation condition for power p (label C when it passes).

    The margin p0'^2 - alpha^2*q*(p + 1 - p0') is scanned on Omega_alpha at
    4096 points and the best point is golden-refined (the margin is a smooth
    quartic in alpha, so refinement removes grid bias).
    """
    if params.q == 0:
        return ConditionReport(
            name=f"full-cancellation(p={p:g})",
            margin=params.p0 * params.p0,
            witness={"alpha": 1.0},
            extras={"omega_alpha": (1.0, 1.0), "stateless": True},
        )
    half = _beta_limit(params)
    lo, hi = 1.0 - half, 1.0 + half

    def margin(alpha: float) -> float:
        return float(kernels.c_margin_grid(params.p0, params.q, p, np.array([alpha]))[0])

    if lo == hi:
        best_a, best_m = lo, margin(lo)
    else:
        grid = kernels.c_margin_grid(
            params.p0, params.q, p, np.linspace(lo, hi, ALPHA_SCAN_SIZE)
        )
        best_a, best_m = search.maximize_1d(
            margin, lo, hi, tol=1e-10, grid_size=ALPHA_SCAN_SIZE, grid_values=grid
        )
    return ConditionReport(
        name=f"full-cancellation(p={p:g})",
        margin=best_m,
        witness={"alpha": best_a},
        extras={"omega_alpha": (lo, hi)},
    )


def a_condition(params: MacHelperParams, p: float) -> ConditionReport:
    """State-limited-face condition at the helper-optimal (alpha_k, beta_k).

    Passes when the f-route binds there (f <= g), in which case the face
    value f equals the helper-limited outer term.
    """
    alpha, beta, rho = _helper_optimal_point(params, p)
    if params.q == 0:
        f, g = math.inf, _nostate_rate(p)
    else:
        f, g = _fg_scalar(params, alpha, beta, p)
    return ConditionReport(
        name=f"state-limited(p={p:g})",
        margin=g - f,
        witness={"alpha": alpha, "beta": beta, "rho_star": rho},
        extras={"f": f, "g": g},
    )


@dataclass(frozen=True)
class MacClassification:
    """Labels for the three faces, with condition reports and witnesses."""

    labels: tuple[str, str, str]
    reports: Mapping[str, ConditionReport] = field(repr=False)

    @property
    def case_id(self) -> str:
        return f"{self.labels[0]}1&{self.labels[1]}2&{self.labels[2]}3"


def classify(params: MacHelperParams) -> MacClassification:
    """Assign A/B/C to the R1, R2 and sum faces.

    C takes precedence over A when both conditions hold (full cancellation
    pins the face to the no-state capacity).
    """
    labels = []
    reports: dict[str, ConditionReport] = {}
    for k, p in enumerate((params.p1, params.p2, params.p1 + params.p2), start=1):
        c_rep = c_condition(params, p)
        reports[f"c{k}"] = c_rep
        if c_rep.passed:
            labels.append("C")
            continue
        a_rep = a_condition(params, p)
        reports[f"a{k}"] = a_rep
        labels.append("A" if a_rep.passed else "B")
    return MacClassification(labels=(labels[0], labels[1], labels[2]), reports=reports)


def full_capacity_check(params: MacHelperParams) -> ConditionReport:
    """Whole-region test: passes iff the sum face is fully cancelable, in
    which case the no-state MAC pentagon is the exact capacity region."""
    rep = c_condition(params, params.p1 + params.p2)
    extras = dict(rep.extras)
    if rep.passed:
        extras["capacity_region"] = {
            "m1": _nostate_rate(params.p1),
            "m2": _nostate_rate(params.p2),
            "m12": _nostate_rate(params.p1 + params.p2),
        }
    return ConditionReport(
        name="full-capacity", margin=rep.margin, witness=rep.witness, extras=extras
    )


@dataclass(frozen=True)
class MacSegments:
    """Characterized capacity-boundary segments per face.

    ``values`` holds the face rate in bits for labels A and C and None for
    the uncharacterized label B.
    """

    classification: MacClassification
    values: tuple[float | None, float | None, float | None]

    @property
    def case_id(self) -> str:
        return self.classification.case_id


def capacity_segments(params: MacHelperParams) -> MacSegments:
    cls = classify(params)
    values: list[float | None] = []
    for k, p in enumerate((params.p1, params.p2, params.p1 + params.p2), start=1):
        label = cls.labels[k - 1]
        if label == "C":
            values.append(_nostate_rate(p))
        elif label == "A":
            rep = cls.reports[f"a{k}"]
            values.append(float(rep.extras["f"]))
        else:
            values.append(None)
    return MacSegments(classification=cls, values=(values[0], values[1], values[2]))


def max_min_rate(
    params: MacHelperParams,
    p: float,
    alpha_grid_size: int = DEFAULT_ALPHA_GRID,
    beta_grid_size: int = DEFAULT_BETA_GRID,
) -> tuple[float, float, float]:
    """Best achievable face value max_{alpha,beta} min(f, g)(p).

    Grid scan over the widened alpha window and legal beta interval, plus
    the helper-optimal point, the full-cancellation witness (when it
    exists), and a local coordinate-descent refinement of the best cell.
    Returns (alpha, beta, value).
    """
    if params.q == 0:
        return 0.0, 0.0, _nostate_rate(p)
    half = _beta_limit(params)
    alphas = np.linspace(-half, 2.0 + half, alpha_grid_size)
    betas = np.linspace(-half, half, beta_grid_size)
    fgrid, ggrid = kernels.fg_grid(params.p0, params.q, p, alphas, betas)
    mm = np.maximum(0.0, np.minimum(fgrid, ggrid))
    i, j = np.unravel_index(int(np.argmax(mm)), mm.shape)
    best = (float(alphas[i]), float(betas[j]), float(mm[i, j]))

    def objective(a: float, b: float) -> float:
        f, g = _fg_scalar(params, a, b, p)
        return max(0.0, min(f, g))

    da = alphas[1] - alphas[0] if alpha_grid_size > 1 else 1.0
    db = betas[1] - betas[0] if beta_grid_size > 1 else 0.0
    box = (
        max(float(alphas[0]), best[0] - 2 * da),
        min(float(alphas[-1]), best[0] + 2 * da),
        max(-half, best[1] - 2 * db),
        min(half, best[1] + 2 * db),
    )
    if box[1] > box[0] and box[3] > box[2]:
        ra, rb, rv = search.maximize_2d(objective, box, tol=1e-9, grid=(17, 17), max_rounds=8)
        if rv > best[2]:
            best = (ra, rb, rv)

    cand = [_helper_optimal_point(params, p)[:2]]
    c_rep = c_condition(params, p)
    if c_rep.passed:
        aw = float(c_rep.witness["alpha"])
        cand.append((aw, aw - 1.0))
    for a, b in cand:
        v = objective(a, b)
        if v > best[2]:
            best = (a, b, v)
    return best


def inner_envelope(
    params: MacHelperParams,
    alpha_grid_size: int = DEFAULT_ALPHA_GRID,
    beta_grid_size: int = DEFAULT_BETA_GRID,
    r1_grid_size: int = DEFAULT_R1_GRID,
) -> RateRegion:
    """Upper envelope of the achievable pentagons over the (alpha, beta) grid.

    Per-face optimal points (from :func:`max_min_rate`) are appended so each
    envelope extreme attains its refined value.
    """
    if params.q == 0:
        faces = np.array([[
            _nostate_rate(params.p1),
            _nostate_rate(params.p2),
            _nostate_rate(params.p1 + params.p2),
        ]])
        return envelope_region(faces, r1_grid_size)
    half = _beta_limit(params)
    alphas = np.linspace(-half, 2.0 + half, alpha_grid_size)
    betas = np.linspace(-half, half, beta_grid_size)
    mats = []
    for p in (params.p1, params.p2, params.p1 + params.p2):
        f, g = kernels.fg_grid(params.p0, params.q, p, alphas, betas)
        mats.append(np.maximum(0.0, np.minimum(f, g)).ravel())
    faces = np.stack(mats, axis=1)

    extra_points = [
        max_min_rate(params, p, alpha_grid_size, beta_grid_size)[:2]
        for p in (params.p1, params.p2, params.p1 + params.p2)
    ]
    extra_faces = np.array([_pentagon_at(params, a, b) for a, b in extra_points])
    faces = np.vstack([faces, extra_faces])
    return envelope_region(faces, r1_grid_size)


def nostate_pentagon(params: MacHelperParams) -> Pentagon:
    """Capacity pentagon of the same MAC without state."""
    return Pentagon(
        _nostate_rate(params.p1),
        _nostate_rate(params.p2),
        _nostate_rate(params.p1 + params.p2),
    )
