"""Deterministic scalar optimization and condition-interval finding.

All routines are grid-first with local refinement: a fixed uniform grid
locates the best bracket (or every sign change), then golden-section or
bisection polishes it.  No randomness, so identical inputs give bit-identical
outputs; default grid sizes are fixed for reproducibility and overridable
everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_GRID_1D = 1025
DEFAULT_GRID_2D = (257, 129)
DEFAULT_INTERVAL_GRID = 1025
BISECT_WIDTH = 1e-8


class NonFiniteObjectiveError(ValueError):
    """The objective returned NaN or +/-inf at a probed point."""


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval lo {self.lo} > hi {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _check_finite(x: float, v: float) -> float:
    if not math.isfinite(v):
        raise NonFiniteObjectiveError(f"objective is {v} at x={x}")
    return v


def _golden_max(
    fn: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Golden-section maximization on [lo, hi]; returns the best probed point."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = _check_finite(c, fn(c))
    fd = _check_finite(d, fn(d))
    best_x, best_v = (c, fc) if fc >= fd else (d, fd)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = _check_finite(c, fn(c))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = _check_finite(d, fn(d))
        x, v = (c, fc) if fc >= fd else (d, fd)
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v


def maximize_1d(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-8,
    grid_size: int = DEFAULT_GRID_1D,
    grid_values: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Maximize a scalar objective on [lo, hi] to within ``tol`` in x.

    A uniform grid of ``grid_size`` points brackets the maximum, then
    golden-section refinement polishes the best bracket.  Ties on the grid
    break toward smaller x.  ``grid_values`` may supply precomputed objective
    values on that exact uniform grid (for vectorized objectives).

    The returned value is the best objective value probed anywhere, so it is
    never below any grid sample.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if hi == lo:
        return lo, _check_finite(lo, objective(lo))

    xs = np.linspace(lo, hi, grid_size)
    if grid_values is None:
        vals = np.array([_check_finite(float(x), objective(float(x))) for x in xs])
    else:
        vals = np.asarray(grid_values, dtype=float)
        if vals.shape != xs.shape:
            raise ValueError("grid_values length must equal grid_size")
        if not np.all(np.isfinite(vals)):
            bad = int(np.argmax(~np.isfinite(vals)))
            raise NonFiniteObjectiveError(f"objective is {vals[bad]} at x={xs[bad]}")

    i = int(np.argmax(vals))  # first max -> smaller x on ties
    best_x, best_v = float(xs[i]), float(vals[i])
    blo = float(xs[max(i - 1, 0)])
    bhi = float(xs[min(i + 1, grid_size - 1)])
    if bhi > blo:
        gx, gv = _golden_max(objective, blo, bhi, tol)
        if gv > best_v:
            best_x, best_v = gx, gv
    return best_x, best_v


def maximize_2d(
    objective: Callable[[float, float], float],
    box: tuple[float, float, float, float],
    tol: float = 1e-8,
    grid: tuple[int, int] = DEFAULT_GRID_2D,
    max_rounds: int = 64,
) -> tuple[float, float, float]:
    """Maximize objective(x, y) on a box (local guarantee only).

    Dense grid scan followed by coordinate descent, each sweep a 1-D
    golden-refined line search.  ``box`` is (xlo, xhi, ylo, yhi).
    """
    xlo, xhi, ylo, yhi = box
    nx, ny = grid
    xs = np.linspace(xlo, xhi, nx)
    ys = np.linspace(ylo, yhi, ny)
    vals = np.empty((nx, ny))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            vals[i, j] = _check_finite(x, objective(float(x), float(y)))
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    bx, by, bv = float(xs[i]), float(ys[j]), float(vals[i, j])

    line_grid = max(33, min(nx, ny))
    for _ in range(max_rounds):
        px, py, pv = bx, by, bv
        x, vx = maximize_1d(lambda t: objective(t, by), xlo, xhi, tol, line_grid)
        if vx > bv:
            bx, bv = x, vx
        y, vy = maximize_1d(lambda t: objective(bx, t), ylo, yhi, tol, line_grid)
        if vy > bv:
            by, bv = y, vy
        if abs(bx - px) <= tol and abs(by - py) <= tol and bv - pv <= 0:
            break
    return bx, by, bv


def satisfied_intervals(
    margin_fn: Callable[[float], float],
    lo: float,
    hi: float,
    grid_size: int = DEFAULT_INTERVAL_GRID,
    bisect_width: float = BISECT_WIDTH,
) -> list[Interval]:
    """Maximal subintervals of [lo, hi] where the margin is >= 0.

    Sign changes located on a uniform grid are bisected to ``bisect_width``.
    Non-finite margin values are treated as unsatisfied.  The returned list
    is sorted and disjoint.
    """

    def val(x: float) -> float:
        v = margin_fn(float(x))
        return v if math.isfinite(v) else -math.inf

    xs = np.linspace(lo, hi, grid_size)
    vs = np.array([val(x) for x in xs])
    sat = vs >= 0.0

    def cross(a: float, b: float, a_sat: bool) -> float:
        # invariant: satisfied(a) == a_sat != satisfied(b)
        while (b - a) > bisect_width:
            m = 0.5 * (a + b)
            if (val(m) >= 0.0) == a_sat:
                a = m
            else:
                b = m
        return 0.5 * (a + b)

    out: list[Interval] = []
    start: float | None = xs[0] if sat[0] else None
    for k in range(1, grid_size):
        if sat[k] == sat[k - 1]:
            continue
        x = cross(float(xs[k - 1]), float(xs[k]), bool(sat[k - 1]))
        if sat[k]:
            start = x
        else:
            out.append(Interval(start if start is not None else float(xs[0]), x))
            start = None
    if start is not None:
        out.append(Interval(float(start), float(xs[-1])))
    return out
