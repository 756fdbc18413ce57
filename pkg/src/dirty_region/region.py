"""Rate-region geometry: pentagons, upper envelopes, and CSV/SVG export.

A pentagon is the rate set {r1 <= m1, r2 <= m2, r1 + r2 <= m12, r >= 0}.
Envelopes over pentagon families are sampled on an r1 grid; no convex hull /
time sharing is applied by default so plots show the per-parameter pentagons
themselves (pass ``convexify=True`` to apply the upper concave envelope).

CSV output uses 12 significant digits; SVG coordinates are rounded to 0.01
px and documents carry no timestamps, so identical inputs give byte-identical
files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MEMBER_TOL = 1e-9
DEFAULT_R1_GRID = 513

SVG_W, SVG_H = 800, 600
SVG_MARGIN = 60
SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
              "#e377c2", "#17becf")


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError(f"rates must be nonnegative, got ({self.r1}, {self.r2})")


@dataclass(frozen=True)
class Pentagon:
    """MAC-style rate constraints m1, m2, m12 in bits/channel-use."""

    m1: float
    m2: float
    m12: float

    def __post_init__(self):
        if self.m1 < 0 or self.m2 < 0 or self.m12 < 0:
            raise ValueError("pentagon faces must be nonnegative")

    def contains(self, r1: float, r2: float, tol: float = MEMBER_TOL) -> bool:
        return (
            r1 <= self.m1 + tol
            and r2 <= self.m2 + tol
            and r1 + r2 <= self.m12 + tol
        )


def pentagon_vertices(p: Pentagon) -> list[tuple[float, float]]:
    """Vertices counterclockwise from the origin; degenerate shapes collapse.

    A rectangle results when m12 >= m1 + m2; otherwise the sum face clips the
    top-right corner.
    """
    rect = [(0.0, 0.0), (p.m1, 0.0), (p.m1, p.m2), (0.0, p.m2)]
    # Sutherland-Hodgman clip by r1 + r2 <= m12
    out: list[tuple[float, float]] = []
    n = len(rect)
    for i in range(n):
        cur, nxt = rect[i], rect[(i + 1) % n]
        cur_in = cur[0] + cur[1] <= p.m12 + MEMBER_TOL
        nxt_in = nxt[0] + nxt[1] <= p.m12 + MEMBER_TOL
        if cur_in:
            out.append(cur)
        if cur_in != nxt_in:
            # segment crosses the sum face: cur + t*(nxt-cur) with sum = m12
            dx, dy = nxt[0] - cur[0], nxt[1] - cur[1]
            t = (p.m12 - cur[0] - cur[1]) / (dx + dy)
            out.append((cur[0] + t * dx, cur[1] + t * dy))
    dedup: list[tuple[float, float]] = []
    for v in out:
        if not any(abs(v[0] - w[0]) < 1e-12 and abs(v[1] - w[1]) < 1e-12 for w in dedup):
            dedup.append(v)
    return dedup


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled upper boundary: r1 strictly increasing, r2 nonincreasing.

    ``binding`` labels which constraint produced each point ('m2' when the
    per-user face binds, 'm12' when the sum face does).
    """

    r1: np.ndarray
    r2: np.ndarray
    binding: tuple[str, ...]

    def __post_init__(self):
        if len(self.r1) != len(self.r2) or len(self.r1) != len(self.binding):
            raise ValueError("curve arrays must have equal length")
        if len(self.r1) > 1:
            if not np.all(np.diff(self.r1) > 0):
                raise ValueError("r1 must be strictly increasing")
            if np.any(np.diff(self.r2) > 1e-12):
                raise ValueError("r2 must be nonincreasing")

    def __len__(self) -> int:
        return len(self.r1)


@dataclass(frozen=True)
class RateRegion:
    """Union of pentagons with its sampled upper boundary.

    ``faces`` is an (n, 3) array of (m1, m2, m12) rows.
    """

    faces: np.ndarray
    boundary: BoundaryCurve

    def contains(self, r1: float, r2: float, tol: float = MEMBER_TOL) -> bool:
        m1, m2, m12 = self.faces[:, 0], self.faces[:, 1], self.faces[:, 2]
        return bool(
            np.any((r1 <= m1 + tol) & (r2 <= m2 + tol) & (r1 + r2 <= m12 + tol))
        )

    @property
    def max_r1(self) -> float:
        return float(np.max(np.minimum(self.faces[:, 0], self.faces[:, 2])))

    @property
    def max_r2(self) -> float:
        return float(np.max(np.minimum(self.faces[:, 1], self.faces[:, 2])))


def _envelope_arrays(
    faces: np.ndarray, r1_grid_size: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m1, m2, m12 = faces[:, 0], faces[:, 1], faces[:, 2]
    top = float(np.max(np.minimum(m1, m12)))
    if top <= 0.0:
        r1 = np.zeros(1)  # zero-width region: a single boundary point
        r1_grid_size = 1
    else:
        r1 = np.linspace(0.0, top, r1_grid_size)
    best = np.full(r1.shape, -np.inf)
    best_idx = np.zeros(r1.shape, dtype=int)
    chunk = max(1, 2_000_000 // max(1, r1_grid_size))
    for lo in range(0, faces.shape[0], chunk):
        hi = min(lo + chunk, faces.shape[0])
        cand = np.minimum(m2[lo:hi, None], m12[lo:hi, None] - r1[None, :])
        cand = np.where(r1[None, :] <= np.minimum(m1, m12)[lo:hi, None] + MEMBER_TOL,
                        cand, -np.inf)
        idx = np.argmax(cand, axis=0)
        vals = cand[idx, np.arange(r1_grid_size)]
        replace = vals > best
        best = np.where(replace, vals, best)
        best_idx = np.where(replace, idx + lo, best_idx)
    best = np.maximum(best, 0.0)
    # enforce monotonicity against grid jitter
    best = np.maximum.accumulate(best[::-1])[::-1]
    return r1, best, best_idx


def upper_envelope(
    pentagons: Iterable[Pentagon] | np.ndarray,
    r1_grid_size: int = DEFAULT_R1_GRID,
    convexify: bool = False,
) -> BoundaryCurve:
    """Pointwise-max boundary of a pentagon family on an r1 grid.

    For each grid r1 the height is the largest min(m2, m12 - r1) among
    pentagons admitting that r1.  With ``convexify`` the upper concave
    envelope (time sharing) is applied afterwards.
    """
    if isinstance(pentagons, np.ndarray):
        faces = np.asarray(pentagons, dtype=float)
    else:
        faces = np.array([[p.m1, p.m2, p.m12] for p in pentagons], dtype=float)
    if faces.size == 0:
        raise ValueError("need at least one pentagon")
    r1, r2, idx = _envelope_arrays(faces, r1_grid_size)
    if convexify:
        r2 = _concave_majorant(r1, r2)
    binding = tuple(
        "m2" if faces[i, 1] <= faces[i, 2] - x else "m12"
        for i, x in zip(idx, r1)
    )
    return BoundaryCurve(r1=r1, r2=r2, binding=binding)


def _concave_majorant(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Upper concave envelope of sampled points (monotone-chain hull top)."""
    pts = list(zip(x, y))
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return np.interp(x, [h[0] for h in hull], [h[1] for h in hull])


def envelope_region(
    pentagons: Iterable[Pentagon] | np.ndarray,
    r1_grid_size: int = DEFAULT_R1_GRID,
    convexify: bool = False,
) -> RateRegion:
    if isinstance(pentagons, np.ndarray):
        faces = np.asarray(pentagons, dtype=float)
    else:
        faces = np.array([[p.m1, p.m2, p.m12] for p in pentagons], dtype=float)
    curve = upper_envelope(faces, r1_grid_size, convexify)
    return RateRegion(faces=faces, boundary=curve)


# --------------------------------------------------------------------------
# Export
# --------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isnan(x):
            return ""
        return f"{x:.12g}"
    return str(v)


def export_csv(curve: BoundaryCurve, destination) -> None:
    """Write a boundary curve as ``r1_bits,r2_bits,binding`` rows."""
    rows = [
        (float(a), float(b), lab)
        for a, b, lab in zip(curve.r1, curve.r2, curve.binding)
    ]
    write_table_csv(destination, ("r1_bits", "r2_bits", "binding"), rows)


def write_table_csv(destination, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Deterministic CSV writer (12 significant digits, LF line endings)."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


@dataclass(frozen=True)
class PlotSeries:
    name: str
    x: Sequence[float]
    y: Sequence[float]


@dataclass(frozen=True)
class PlotSpec:
    title: str
    xlabel: str
    ylabel: str
    series: tuple[PlotSeries, ...] = field(default_factory=tuple)


def _px(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = np.linspace(lo, hi, n)
    return [float(t) for t in raw]


def export_svg(spec: PlotSpec, destination) -> None:
    """Standalone 800x600 SVG: axes, one polyline per series, legend."""
    finite_pts = [
        (float(x), float(y))
        for s in spec.series
        for x, y in zip(s.x, s.y)
        if math.isfinite(float(x)) and math.isfinite(float(y))
    ]
    if finite_pts:
        xs, ys = zip(*finite_pts)
        xlo, xhi = min(xs), max(xs)
        ylo, yhi = min(ys), max(ys)
    else:
        xlo, xhi, ylo, yhi = 0.0, 1.0, 0.0, 1.0
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    pad_y = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad_y, yhi + pad_y

    inner_w = SVG_W - 2 * SVG_MARGIN
    inner_h = SVG_H - 2 * SVG_MARGIN

    def sx(x: float) -> float:
        return SVG_MARGIN + (x - xlo) / (xhi - xlo) * inner_w

    def sy(y: float) -> float:
        return SVG_H - SVG_MARGIN - (y - ylo) / (yhi - ylo) * inner_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_W} {SVG_H}">',
        f'<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>',
        f'<text x="{SVG_W // 2}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{spec.title}</text>',
        # axes
        f'<line x1="{SVG_MARGIN}" y1="{SVG_H - SVG_MARGIN}" x2="{SVG_W - SVG_MARGIN}" '
        f'y2="{SVG_H - SVG_MARGIN}" stroke="black"/>',
        f'<line x1="{SVG_MARGIN}" y1="{SVG_MARGIN}" x2="{SVG_MARGIN}" '
        f'y2="{SVG_H - SVG_MARGIN}" stroke="black"/>',
        f'<text x="{SVG_W // 2}" y="{SVG_H - 16}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{spec.xlabel}</text>',
        f'<text x="18" y="{SVG_H // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {SVG_H // 2})">{spec.ylabel}</text>',
    ]
    for t in _ticks(xlo, xhi):
        parts.append(
            f'<line x1="{_px(sx(t))}" y1="{SVG_H - SVG_MARGIN}" x2="{_px(sx(t))}" '
            f'y2="{SVG_H - SVG_MARGIN + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_px(sx(t))}" y="{SVG_H - SVG_MARGIN + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{t:.3g}</text>'
        )
    for t in _ticks(ylo, yhi):
        parts.append(
            f'<line x1="{SVG_MARGIN - 5}" y1="{_px(sy(t))}" x2="{SVG_MARGIN}" '
            f'y2="{_px(sy(t))}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{SVG_MARGIN - 8}" y="{_px(sy(t) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{t:.3g}</text>'
        )
    for k, s in enumerate(spec.series):
        color = SVG_COLORS[k % len(SVG_COLORS)]
        pts = [
            f"{_px(sx(float(x)))},{_px(sy(float(y)))}"
            for x, y in zip(s.x, s.y)
            if math.isfinite(float(x)) and math.isfinite(float(y))
        ]
        if pts:
            parts.append(
                f'<polyline points="{" ".join(pts)}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"/>'
            )
        ly = SVG_MARGIN + 14 + 18 * k
        lx = SVG_W - SVG_MARGIN - 170
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 30}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{s.name}</text>'
        )
    parts.append("</svg>")
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")
