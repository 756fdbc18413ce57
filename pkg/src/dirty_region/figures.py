"""Named figure presets: deterministic CSV + SVG reproductions.

Each preset hard-codes its channel parameters and grids so that a single
command regenerates the artifact; rerunning a preset produces byte-identical
files.  Every preset writes ``<name>.csv`` and ``<name>.svg`` into the
output directory and returns a summary dict (also written as
``<name>.json`` by the CLI).

Preset catalog:

* fig2_2 — helper-assisted MAC, bound crossover vs helper power.
* fig2_3 — helper-assisted MAC, (q, p0) classification map.
* fig3_2 — Z-IC very strong: minimal passing gain vs state correlation.
* fig3_3 — Z-IC very strong with q2 above the large-gain threshold
  (1+p2)/p2: the passing gain window is bounded above, so unlike fig3_2 a
  larger cross gain can break achievability.
* fig3_5 — Z-IC strong: achievable sum-face span vs correlation constant c
  (states' marginal variances held fixed; c beyond sqrt(q2/q1) admits no
  joint distribution and is reported infeasible with an empty span).
* fig4_2 — IC very strong: decodability margins vs cross gain b.
* fig4_3 — IC very strong: (a, b) achievability maps for three
  correlation levels.
* fig4_5 — strong-regime sum-face spans of the IC vs the Z-IC.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import ic as ic_mod
from . import mac_helper as mac
from . import search
from . import z_ic as zic_mod
from .channels import IcParams, MacHelperParams, ZicParams
from .region import PlotSeries, PlotSpec, export_svg, write_table_csv


def _path(outdir, name: str, ext: str):
    import os

    return os.path.join(outdir, f"{name}.{ext}")


# --------------------------------------------------------------------------
# fig2_2 — bound crossover vs helper power
# --------------------------------------------------------------------------

FIG2_2_P1 = 5.0
FIG2_2_P2 = 0.0   # with a single active user both readings of "P = 5" agree
FIG2_2_Q = 12.0


def _mac_at(p0: float) -> MacHelperParams:
    return MacHelperParams(p0, FIG2_2_P1, FIG2_2_P2, FIG2_2_Q)


def _bisect_last_true(pred: Callable[[float], bool], lo: float, hi: float,
                      tol: float = 1e-6) -> float:
    """Largest x in [lo, hi] with pred(x), assuming pred flips once."""
    if not pred(lo):
        return lo
    if pred(hi):
        return hi
    a, b = lo, hi
    while b - a > tol:
        m = 0.5 * (a + b)
        if pred(m):
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def fig2_2(outdir) -> dict:
    p0_grid = np.round(np.arange(0.0, 10.0 + 1e-9, 0.1), 10)
    rows = []
    inner_vals, upper_helper, upper_nostate = [], [], []
    cap1 = 0.5 * math.log2(1.0 + FIG2_2_P1)
    for p0 in p0_grid:
        params = _mac_at(float(p0))
        inner = mac.max_min_rate(params, FIG2_2_P1)[2]
        helper_term = mac.rho_star(params, FIG2_2_P1)[1]
        rows.append((float(p0), inner, helper_term, cap1))
        inner_vals.append(inner)
        upper_helper.append(helper_term)
        upper_nostate.append(cap1)
    write_table_csv(
        _path(outdir, "fig2_2", "csv"),
        ("p0", "inner_max_r1_bits", "upper_helper_bits", "upper_nostate_bits"),
        rows,
    )
    export_svg(
        PlotSpec(
            title="Helper-assisted MAC: R1 bounds vs helper power",
            xlabel="helper power p0",
            ylabel="rate (bits/channel use)",
            series=(
                PlotSeries("achievable max R1", p0_grid, inner_vals),
                PlotSeries("upper bound (helper-limited)", p0_grid, upper_helper),
                PlotSeries("upper bound (no state)", p0_grid, upper_nostate),
            ),
        ),
        _path(outdir, "fig2_2", "svg"),
    )
    t_state = _bisect_last_true(
        lambda p0: mac.a_condition(_mac_at(p0), FIG2_2_P1).passed, 0.0, 10.0
    )
    t_cancel = _bisect_last_true(
        lambda p0: not mac.c_condition(_mac_at(p0), FIG2_2_P1).passed, 0.0, 10.0
    )
    return {
        "state_limited_until_p0": t_state,
        "fully_canceled_from_p0": t_cancel,
    }


# --------------------------------------------------------------------------
# fig2_3 — (q, p0) classification map
# --------------------------------------------------------------------------

def fig2_3(outdir) -> dict:
    q_grid = np.round(np.linspace(0.5, 20.0, 40), 10)
    p0_grid = np.round(np.linspace(0.0, 10.0, 41), 10)
    rows = []
    for q in q_grid:
        for p0 in p0_grid:
            cls = mac.classify(MacHelperParams(float(p0), FIG2_2_P1, FIG2_2_P2, float(q)))
            rows.append((float(q), float(p0)) + cls.labels + (cls.case_id,))
    write_table_csv(
        _path(outdir, "fig2_3", "csv"),
        ("q", "p0", "label1", "label2", "label3", "case"),
        rows,
    )
    cancel_curve, limited_curve = [], []
    for q in q_grid:
        def c_holds(p0: float, q=float(q)) -> bool:
            return mac.c_condition(MacHelperParams(p0, FIG2_2_P1, FIG2_2_P2, q),
                                   FIG2_2_P1 + FIG2_2_P2).passed

        def a_holds(p0: float, q=float(q)) -> bool:
            return mac.a_condition(MacHelperParams(p0, FIG2_2_P1, FIG2_2_P2, q),
                                   FIG2_2_P1 + FIG2_2_P2).passed

        lo_c = _bisect_last_true(lambda p0: not c_holds(p0), 0.0, 10.0)
        hi_a = _bisect_last_true(a_holds, 0.0, 10.0)
        cancel_curve.append(lo_c)
        limited_curve.append(hi_a)
    export_svg(
        PlotSpec(
            title="Helper-assisted MAC: characterized parameter ranges",
            xlabel="state variance q",
            ylabel="helper power p0",
            series=(
                PlotSeries("full cancellation above", q_grid, cancel_curve),
                PlotSeries("state-limited below", q_grid, limited_curve),
            ),
        ),
        _path(outdir, "fig2_3", "svg"),
    )
    return {"rows": len(rows)}


# --------------------------------------------------------------------------
# fig3_2 / fig3_3 — Z-IC very strong achievability in (a, d)
# --------------------------------------------------------------------------

def _zic_vs_margin(p1, p2, q1, q2, d, a) -> float:
    rho = d * math.sqrt(q2 / q1) if q1 > 0 else 0.0
    rho = max(-1.0, min(1.0, rho))  # guard rounding at the feasibility edge
    return zic_mod.zic_vs_condition(ZicParams(a, p1, p2, q1, q2, rho)).margin


def fig3_2(outdir) -> dict:
    p1 = p2 = 2.0
    q1 = q2 = 1.0
    d_grid = np.round(np.arange(0.0, 1.0 + 1e-9, 0.1), 10)
    rows = []
    a_mins = []
    for d in d_grid:
        intervals = search.satisfied_intervals(
            lambda a: _zic_vs_margin(p1, p2, q1, q2, float(d), a),
            0.05,
            12.0,
            grid_size=1024,
            bisect_width=1e-6,
        )
        a_min = intervals[0].lo if intervals else None
        a_mins.append(a_min if a_min is not None else math.nan)
        rows.append((float(d), a_min))
    write_table_csv(_path(outdir, "fig3_2", "csv"), ("d", "a_min_passing"), rows)
    export_svg(
        PlotSpec(
            title="Z-IC very strong: minimal passing gain vs correlation",
            xlabel="correlation constant d",
            ylabel="cross gain a",
            series=(PlotSeries("condition boundary", d_grid, a_mins),),
        ),
        _path(outdir, "fig3_2", "svg"),
    )
    return {"a_min": [None if math.isnan(v) else v for v in a_mins]}


def fig3_3(outdir) -> dict:
    p1 = p2 = 2.0
    q1 = 1.0
    q2 = 1.8  # above the large-gain threshold (1+p2)/p2 = 1.5: a is capped
    d_max = math.sqrt(q1 / q2)
    d_grid = np.round(np.linspace(0.0, d_max, 21), 10)
    rows = []
    lo_curve, hi_curve = [], []
    for d in d_grid:
        intervals = search.satisfied_intervals(
            lambda a: _zic_vs_margin(p1, p2, q1, q2, float(d), a),
            0.05,
            12.0,
            grid_size=1024,
            bisect_width=1e-6,
        )
        if intervals:
            for iv in intervals:
                rows.append((float(d), iv.lo, iv.hi))
            lo_curve.append(intervals[0].lo)
            hi_curve.append(intervals[0].hi)
        else:
            rows.append((float(d), None, None))
            lo_curve.append(math.nan)
            hi_curve.append(math.nan)
    write_table_csv(_path(outdir, "fig3_3", "csv"), ("d", "a_lo", "a_hi"), rows)
    export_svg(
        PlotSpec(
            title="Z-IC very strong with q2 above threshold: bounded gain window",
            xlabel="correlation constant d",
            ylabel="cross gain a",
            series=(
                PlotSeries("window low edge", d_grid, lo_curve),
                PlotSeries("window high edge", d_grid, hi_curve),
            ),
        ),
        _path(outdir, "fig3_3", "svg"),
    )
    return {"rows": len(rows)}


# --------------------------------------------------------------------------
# fig3_5 / fig4_5 — strong-regime achievable spans vs correlation constant
# --------------------------------------------------------------------------

FIG3_5_PARAMS = dict(p1=1.0, p2=1.0, q1=2.0, q2=1.0, a=1.2)
FIG4_5_B = 1.2
STRONG_C_GRID = 21


def _strong_sweep(model: str, b: float | None, segment_grid: int = 513):
    p1, p2, q1, q2, a = (FIG3_5_PARAMS[k] for k in ("p1", "p2", "q1", "q2", "a"))
    c_max = math.sqrt(q2 / q1)
    c_grid = np.round(np.linspace(0.0, 1.0, STRONG_C_GRID), 10)
    out = []
    for c in c_grid:
        if c > c_max + 1e-12:
            out.append({"c": float(c), "feasible": False, "count": 0,
                        "r1_lo": None, "r1_hi": None})
            continue
        rho = max(-1.0, min(1.0, float(c) * math.sqrt(q1 / q2)))
        if model == "zic":
            seg = zic_mod.zic_strong_segment(
                ZicParams(a, p1, p2, q1, q2, rho), grid_size=segment_grid
            )
        else:
            seg = ic_mod.ic_strong_segment(
                IcParams(a, b, p1, p2, q1, q2, rho), grid_size=segment_grid
            )
        r1_lo, r1_hi = seg.r1_range if seg.r1_range else (None, None)
        out.append({"c": float(c), "feasible": True, "count": seg.count,
                    "r1_lo": r1_lo, "r1_hi": r1_hi})
    return c_grid, out


def fig3_5(outdir) -> dict:
    c_grid, data = _strong_sweep("zic", None)
    rows = [
        (d["c"], d["feasible"], d["count"], d["r1_lo"], d["r1_hi"]) for d in data
    ]
    write_table_csv(
        _path(outdir, "fig3_5", "csv"),
        ("c", "feasible", "achievable_points", "r1_lo_bits", "r1_hi_bits"),
        rows,
    )
    export_svg(
        PlotSpec(
            title="Z-IC strong: achievable sum-face span vs correlation constant",
            xlabel="correlation constant c",
            ylabel="R1 (bits/channel use)",
            series=(
                PlotSeries("span low edge", c_grid,
                           [d["r1_lo"] if d["r1_lo"] is not None else math.nan for d in data]),
                PlotSeries("span high edge", c_grid,
                           [d["r1_hi"] if d["r1_hi"] is not None else math.nan for d in data]),
            ),
        ),
        _path(outdir, "fig3_5", "svg"),
    )
    return {"counts": [d["count"] for d in data]}


def fig4_5(outdir) -> dict:
    c_grid, zdata = _strong_sweep("zic", None)
    _, idata = _strong_sweep("ic", FIG4_5_B)
    rows = [
        (z["c"], z["feasible"], z["count"], i["count"],
         z["r1_lo"], z["r1_hi"], i["r1_lo"], i["r1_hi"])
        for z, i in zip(zdata, idata)
    ]
    write_table_csv(
        _path(outdir, "fig4_5", "csv"),
        ("c", "feasible", "zic_points", "ic_points",
         "zic_r1_lo_bits", "zic_r1_hi_bits", "ic_r1_lo_bits", "ic_r1_hi_bits"),
        rows,
    )
    export_svg(
        PlotSpec(
            title="Strong regime: IC vs Z-IC achievable sum-face spans",
            xlabel="correlation constant c",
            ylabel="R1 (bits/channel use)",
            series=(
                PlotSeries("Z-IC span low", c_grid,
                           [d["r1_lo"] if d["r1_lo"] is not None else math.nan for d in zdata]),
                PlotSeries("Z-IC span high", c_grid,
                           [d["r1_hi"] if d["r1_hi"] is not None else math.nan for d in zdata]),
                PlotSeries("IC span low", c_grid,
                           [d["r1_lo"] if d["r1_lo"] is not None else math.nan for d in idata]),
                PlotSeries("IC span high", c_grid,
                           [d["r1_hi"] if d["r1_hi"] is not None else math.nan for d in idata]),
            ),
        ),
        _path(outdir, "fig4_5", "svg"),
    )
    return {
        "zic_counts": [d["count"] for d in zdata],
        "ic_counts": [d["count"] for d in idata],
    }


# --------------------------------------------------------------------------
# fig4_2 / fig4_3 — IC very strong conditions
# --------------------------------------------------------------------------

FIG4_2_B_MAX = 4.25


def _ic_margins_or_neg(params: IcParams) -> tuple[float, float]:
    try:
        rep1, rep2 = ic_mod.ic_vs_conditions(params)
    except ic_mod.SingularCoefficientError:
        return -math.inf, -math.inf
    return rep1.margin, rep2.margin


def fig4_2(outdir) -> dict:
    p1 = p2 = 1.0
    q1 = q2 = 0.9
    a = 1.6
    d_values = (0.99, 0.5, 0.1)
    b_grid = np.round(np.linspace(0.0, FIG4_2_B_MAX, 201), 10)
    rows = []
    series = []
    counts = {}
    for d in d_values:
        rho = d * math.sqrt(q2 / q1)
        margins = [
            _ic_margins_or_neg(IcParams(a, float(b), p1, p2, q1, q2, rho))
            for b in b_grid
        ]
        rows.extend(
            (d, float(b), m[0] if math.isfinite(m[0]) else None,
             m[1] if math.isfinite(m[1]) else None)
            for b, m in zip(b_grid, margins)
        )
        series.append(PlotSeries(
            f"decode-U margin, d={d}",
            b_grid,
            [m[0] if math.isfinite(m[0]) else math.nan for m in margins],
        ))
        intervals = search.satisfied_intervals(
            lambda b: _ic_margins_or_neg(IcParams(a, b, p1, p2, q1, q2, rho))[0],
            0.0,
            FIG4_2_B_MAX,
            grid_size=1025,
        )
        counts[str(d)] = len(intervals)
    write_table_csv(
        _path(outdir, "fig4_2", "csv"),
        ("d", "b", "decode_u_margin_bits", "decode_v_margin_bits"),
        rows,
    )
    series.append(PlotSeries("zero line", b_grid, [0.0] * len(b_grid)))
    export_svg(
        PlotSpec(
            title="IC very strong: decode-U condition margin vs cross gain b",
            xlabel="cross gain b",
            ylabel="margin (bits)",
            series=tuple(series),
        ),
        _path(outdir, "fig4_2", "svg"),
    )
    return {"interval_counts": counts}


def fig4_3(outdir) -> dict:
    p1 = p2 = 1.0
    q1 = q2 = 0.9
    d_values = (0.1, 0.5, 0.99)
    grid = np.round(np.linspace(0.05, 5.0, 41), 10)
    rows = []
    areas = {}
    count_curves = {d: [] for d in d_values}
    for av in grid:
        passing = {d: 0 for d in d_values}
        for bv in grid:
            flags = []
            for d in d_values:
                rho = d * math.sqrt(q2 / q1)
                params = IcParams(float(av), float(bv), p1, p2, q1, q2, rho)
                ok = False
                if ic_mod.ic_vs_gate(params):
                    m1, m2 = _ic_margins_or_neg(params)
                    ok = m1 >= 0 and m2 >= 0
                flags.append(ok)
                if ok:
                    passing[d] += 1
            rows.append((float(av), float(bv)) + tuple(flags))
        for d in d_values:
            count_curves[d].append(passing[d])
    for d in d_values:
        areas[str(d)] = int(np.sum(count_curves[d]))
    write_table_csv(
        _path(outdir, "fig4_3", "csv"),
        ("a", "b", "pass_d0.1", "pass_d0.5", "pass_d0.99"),
        rows,
    )
    export_svg(
        PlotSpec(
            title="IC very strong: capacity-achieving (a, b) cells per correlation",
            xlabel="cross gain a",
            ylabel="passing b count",
            series=tuple(
                PlotSeries(f"d={d}", grid, count_curves[d]) for d in d_values
            ),
        ),
        _path(outdir, "fig4_3", "svg"),
    )
    return {"areas": areas}


FIGURES: dict[str, Callable] = {
    "fig2_2": fig2_2,
    "fig2_3": fig2_3,
    "fig3_2": fig3_2,
    "fig3_3": fig3_3,
    "fig3_5": fig3_5,
    "fig4_2": fig4_2,
    "fig4_3": fig4_3,
    "fig4_5": fig4_5,
}
