"""Command-line surface.

    dirty-region <command> --scenario <file.json> [--out DIR] [--override k=v]...
    dirty-region fig <name> [--out DIR]
    dirty-region verify [--scenario <file.json>] [--out DIR]

Commands: mac-bounds, mac-classify, zic-verystrong, zic-strong, zic-weak,
ic-verystrong, ic-strong, ic-weak, sweep, verify, fig.

Scenario files are JSON (UTF-8, no comments), e.g.::

    {
      "model": "zic",
      "params": {"a": 1.2, "p1": 1, "p2": 1, "q1": 2, "q2": 1, "rho": 0.3},
      "analysis": "strong",
      "p1_dprime": 0.6,
      "sweep": [{"name": "a", "lo": 1.0, "hi": 1.3, "steps": 7}],
      "seed": 24301,
      "mc_samples": 1000000
    }

``--override key=value`` rewrites a params entry (or a top-level scenario
key).  All rates in reports are bits per channel use and every report
carries a ``units`` field.

Exit codes: 0 success; 1 analysis ran but a regime gate or condition failed
(the machine-readable report is still written); 2 usage or scenario errors;
3 numeric failure.  Sweeps run grid points concurrently up to ``--jobs``
(default from ``DIRTY_REGION_JOBS``); output order is axis-major regardless
of scheduling.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

import numpy as np

from . import figures
from . import ic as ic_mod
from . import mac_helper as mac
from . import mc_oracle
from . import z_ic as zic_mod
from .channels import (
    ChannelError,
    IcParams,
    MacHelperParams,
    ZicParams,
    build_ic_verystrong,
    build_mac_helper,
    build_zic_verystrong,
)
from .gauss_core import GaussCoreError, covariance
from .region import export_csv, export_svg, PlotSeries, PlotSpec, write_table_csv
from .reports import RegimeGateError
from .search import NonFiniteObjectiveError

EXIT_OK = 0
EXIT_CONDITION_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

UNITS = "bits/channel-use"

MODEL_PARAMS = {
    "mac_helper": MacHelperParams,
    "zic": ZicParams,
    "ic": IcParams,
}


class ScenarioError(Exception):
    pass


def _apply_overrides(scenario: dict, overrides: list[str]) -> dict:
    for item in overrides:
        if "=" not in item:
            raise ScenarioError(f"override must be key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        if key in scenario and key != "params":
            scenario[key] = value
        else:
            scenario["params"][key] = value
    return scenario


def _load_scenario(path: str, overrides: list[str]) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            scenario = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path!r}: {exc}") from exc
    if not isinstance(scenario, dict):
        raise ScenarioError("scenario root must be a JSON object")
    scenario.setdefault("params", {})
    return _apply_overrides(scenario, overrides)


def _params_from(scenario: dict, model: str):
    cls = MODEL_PARAMS[model]
    fields = cls.__dataclass_fields__
    given = scenario.get("params", {})
    unknown = set(given) - set(fields)
    if unknown:
        raise ScenarioError(f"unknown parameters for {model}: {sorted(unknown)}")
    try:
        return cls(**{k: float(v) for k, v in given.items()})
    except (TypeError, ChannelError, ValueError) as exc:
        raise ScenarioError(f"invalid parameters for {model}: {exc}") from exc


def _write_report(outdir: str, name: str, payload: dict) -> str:
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"{name}.json")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, allow_nan=True)
        fh.write("\n")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


# --------------------------------------------------------------------------
# Command implementations (each returns (exit_code, report_payload))
# --------------------------------------------------------------------------

def _cmd_mac_bounds(scenario: dict, outdir: str) -> tuple[int, dict]:
    params = _params_from(scenario, "mac_helper")
    grids = scenario.get("grids", {})
    inner = mac.inner_envelope(
        params,
        alpha_grid_size=int(grids.get("alpha", mac.DEFAULT_ALPHA_GRID)),
        beta_grid_size=int(grids.get("beta", mac.DEFAULT_BETA_GRID)),
        r1_grid_size=int(grids.get("r1", mac.DEFAULT_R1_GRID)),
    )
    outer = mac.outer_envelope(
        params,
        rho_grid_size=int(grids.get("rho", mac.DEFAULT_RHO_GRID)),
        r1_grid_size=int(grids.get("r1", mac.DEFAULT_R1_GRID)),
    )
    os.makedirs(outdir, exist_ok=True)
    export_csv(inner.boundary, os.path.join(outdir, "mac_inner.csv"))
    export_csv(outer.boundary, os.path.join(outdir, "mac_outer.csv"))
    export_svg(
        PlotSpec(
            title="Helper-assisted MAC rate region bounds",
            xlabel="R1 (bits/channel use)",
            ylabel="R2 (bits/channel use)",
            series=(
                PlotSeries("inner bound", inner.boundary.r1, inner.boundary.r2),
                PlotSeries("outer bound", outer.boundary.r1, outer.boundary.r2),
            ),
        ),
        os.path.join(outdir, "mac_bounds.svg"),
    )
    return EXIT_OK, {
        "inner_max_r1": inner.max_r1,
        "inner_max_r2": inner.max_r2,
        "outer_max_r1": outer.max_r1,
        "outer_max_r2": outer.max_r2,
        "files": ["mac_inner.csv", "mac_outer.csv", "mac_bounds.svg"],
    }


def _cmd_mac_classify(scenario: dict, outdir: str) -> tuple[int, dict]:
    params = _params_from(scenario, "mac_helper")
    segments = mac.capacity_segments(params)
    cls = segments.classification
    full = mac.full_capacity_check(params)
    return EXIT_OK, {
        "labels": list(cls.labels),
        "case": cls.case_id,
        "reports": {k: r.to_dict() for k, r in cls.reports.items()},
        "segments": {
            "r1": segments.values[0],
            "r2": segments.values[1],
            "sum": segments.values[2],
        },
        "full_capacity": full.to_dict(),
    }


def _cmd_zic_verystrong(scenario: dict, outdir: str) -> tuple[int, dict]:
    params = _params_from(scenario, "zic")
    result = zic_mod.zic_vs_capacity(params)
    payload = {
        "coefficients": asdict(result.coefficients),
        "condition": result.condition.to_dict(),
        "identity_residuals": dict(result.identity_residuals),
        "capacity_region": asdict(result.capacity_region)
        if result.capacity_region
        else None,
    }
    return (EXIT_OK if result.achieves_capacity else EXIT_CONDITION_FAILED), payload


def _segment_payload(seg) -> dict:
    return {
        "achievable_points": seg.count,
        "prefix_p1_dprime": list(seg.prefix) if seg.prefix else None,
        "passing_p1_dprime": [list(iv) for iv in seg.passing],
        "r1_range": list(seg.r1_range) if seg.r1_range else None,
        "prefix_violation": seg.prefix_violation,
    }


def _cmd_zic_strong(scenario: dict, outdir: str) -> tuple[int, dict]:
    params = _params_from(scenario, "zic")
    grids = scenario.get("grids", {})
    seg = zic_mod.zic_strong_segment(
        params, grid_size=int(grids.get("segment", zic_mod.DEFAULT_SEGMENT_GRID))
    )
    payload: dict = {"segment": _segment_payload(seg)}
    ok = not seg.empty
    if "p1_dprime" in scenario:
        point = zic_mod.zic_strong_point(params, float(scenario["p1_dprime"]))
        payload["point"] = {
            "rates": list(point.rates),
            "coefficients": asdict(point.coefficients),
            "condition": point.condition.to_dict(),
        }
        ok = point.achievable
    return (EXIT_OK if ok else EXIT_CONDITION_FAILED), payload


def _cmd_zic_weak(scenario: dict, outdir: str) -> tuple[int, dict]:
    params = _params_from(scenario, "zic")
    value = zic_mod.zic_weak_sum_capacity(params)
    return EXIT_OK, {"sum_capacity": value}


def _cmd_ic_verystrong(scenario: dict, outdir: str) -> tuple[int, dict]:
    params = _params_from(scenario, "ic")
    result = ic_mod.ic_vs_capacity(params)
    payload = {
        "coefficients": asdict(result.coefficients),
        "conditions": [r.to_dict() for r in result.conditions],
        "identity_residuals": dict(result.identity_residuals),
        "capacity_region": asdict(result.capacity_region)
        if result.capacity_region
        else None,
    }
    return (EXIT_OK if result.achieves_capacity else EXIT_CONDITION_FAILED), payload


def _cmd_ic_strong(scenario: dict, outdir: str) -> tuple[int, dict]:
    params = _params_from(scenario, "ic")
    grids = scenario.get("grids", {})
    seg = ic_mod.ic_strong_segment(
        params, grid_size=int(grids.get("segment", ic_mod.DEFAULT_SEGMENT_GRID))
    )
    payload: dict = {"segment": _segment_payload(seg)}
    ok = not seg.empty
    if "p1_dprime" in scenario:
        point = ic_mod.ic_strong_point(params, float(scenario["p1_dprime"]))
        payload["point"] = {
            "rates": list(point.split_point.rates),
            "margins": list(point.margins),
            "swapped": point.swapped,
        }
        ok = point.achievable
    return (EXIT_OK if ok else EXIT_CONDITION_FAILED), payload


def _cmd_ic_weak(scenario: dict, outdir: str) -> tuple[int, dict]:
    params = _params_from(scenario, "ic")
    value = ic_mod.ic_weak_sum_capacity(params)
    return EXIT_OK, {"sum_capacity": value}


COMMANDS = {
    "mac-bounds": ("mac_helper", _cmd_mac_bounds),
    "mac-classify": ("mac_helper", _cmd_mac_classify),
    "zic-verystrong": ("zic", _cmd_zic_verystrong),
    "zic-strong": ("zic", _cmd_zic_strong),
    "zic-weak": ("zic", _cmd_zic_weak),
    "ic-verystrong": ("ic", _cmd_ic_verystrong),
    "ic-strong": ("ic", _cmd_ic_strong),
    "ic-weak": ("ic", _cmd_ic_weak),
}


# --------------------------------------------------------------------------
# Sweep
# --------------------------------------------------------------------------

SWEEP_ANALYSES = {
    ("mac_helper", "classify"),
    ("mac_helper", "bounds"),
    ("zic", "verystrong"),
    ("zic", "strong"),
    ("zic", "weak"),
    ("ic", "verystrong"),
    ("ic", "strong"),
    ("ic", "weak"),
}


def _sweep_row(model: str, analysis: str, params) -> dict:
    """Flat per-point summary; gate violations become row fields, not errors."""
    try:
        if model == "mac_helper":
            if analysis == "classify":
                seg = mac.capacity_segments(params)
                return {
                    "label1": seg.classification.labels[0],
                    "label2": seg.classification.labels[1],
                    "label3": seg.classification.labels[2],
                    "case": seg.case_id,
                    "segment_r1": seg.values[0],
                    "segment_r2": seg.values[1],
                    "segment_sum": seg.values[2],
                }
            inner = mac.max_min_rate(params, params.p1)[2]
            helper_term = mac.rho_star(params, params.p1)[1]
            return {
                "inner_max_r1": inner,
                "upper_helper": helper_term,
                "upper_nostate": 0.5 * math.log2(1.0 + params.p1),
            }
        if model == "zic":
            if analysis == "verystrong":
                rep = zic_mod.zic_vs_condition(params)
                return {"margin": rep.margin, "passed": rep.passed}
            if analysis == "strong":
                seg = zic_mod.zic_strong_segment(params, grid_size=129)
                return {
                    "achievable_points": seg.count,
                    "r1_lo": seg.r1_range[0] if seg.r1_range else None,
                    "r1_hi": seg.r1_range[1] if seg.r1_range else None,
                }
            return {"sum_capacity": zic_mod.zic_weak_sum_capacity(params)}
        if analysis == "verystrong":
            rep1, rep2 = ic_mod.ic_vs_conditions(params)
            return {
                "margin_u": rep1.margin,
                "margin_v": rep2.margin,
                "passed": rep1.passed and rep2.passed,
            }
        if analysis == "strong":
            seg = ic_mod.ic_strong_segment(params, grid_size=129)
            return {
                "achievable_points": seg.count,
                "r1_lo": seg.r1_range[0] if seg.r1_range else None,
                "r1_hi": seg.r1_range[1] if seg.r1_range else None,
            }
        return {"sum_capacity": ic_mod.ic_weak_sum_capacity(params)}
    except (RegimeGateError, ic_mod.SingularCoefficientError) as exc:
        return {"gate_error": type(exc).__name__}


def _cmd_sweep(scenario: dict, outdir: str, jobs: int) -> tuple[int, dict]:
    model = scenario.get("model")
    if model not in MODEL_PARAMS:
        raise ScenarioError(f"sweep needs a model in {sorted(MODEL_PARAMS)}")
    analysis = scenario.get("analysis")
    if (model, analysis) not in SWEEP_ANALYSES:
        raise ScenarioError(
            f"analysis {analysis!r} not available for model {model!r}"
        )
    axes = scenario.get("sweep", [])
    if not 1 <= len(axes) <= 2:
        raise ScenarioError("sweep needs 1 or 2 axes")
    base = dict(scenario.get("params", {}))
    fields = MODEL_PARAMS[model].__dataclass_fields__
    grids = []
    for ax in axes:
        name = ax.get("name")
        if name not in fields:
            raise ScenarioError(f"sweep axis {name!r} is not a {model} parameter")
        steps = int(ax["steps"])
        if steps < 1:
            raise ScenarioError("sweep steps must be >= 1")
        grids.append((name, np.linspace(float(ax["lo"]), float(ax["hi"]), steps)))

    points = []
    if len(grids) == 1:
        name0, vals0 = grids[0]
        points = [{name0: float(v)} for v in vals0]
    else:
        (name0, vals0), (name1, vals1) = grids
        points = [
            {name0: float(v0), name1: float(v1)} for v0 in vals0 for v1 in vals1
        ]

    def evaluate(assignment: dict) -> dict:
        merged = {**base, **assignment}
        try:
            params = MODEL_PARAMS[model](**{k: float(v) for k, v in merged.items()})
        except (ChannelError, ValueError) as exc:
            return {**assignment, "gate_error": type(exc).__name__}
        return {**assignment, **_sweep_row(model, analysis, params)}

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(evaluate, points))
    else:
        rows = [evaluate(pt) for pt in points]

    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    table = [[row.get(col) for col in columns] for row in rows]
    os.makedirs(outdir, exist_ok=True)
    write_table_csv(os.path.join(outdir, "sweep.csv"), columns, table)
    return EXIT_OK, {"rows": len(rows), "columns": columns, "file": "sweep.csv"}


# --------------------------------------------------------------------------
# Verify: closed forms vs the Monte-Carlo oracle
# --------------------------------------------------------------------------

def _cmd_verify(scenario: dict, outdir: str) -> tuple[int, dict]:
    seed = int(scenario.get("seed", mc_oracle.DEFAULT_SEED))
    n = int(scenario.get("mc_samples", 1_000_000))
    cfg = mc_oracle.SampleConfig(n=n, seed=seed)
    mi_tol = float(scenario.get("mi_tolerance", 0.01))
    checks = []

    def record(name: str, closed: float, estimated: float, tol: float):
        checks.append(
            {
                "check": name,
                "closed_form": closed,
                "estimate": estimated,
                "error": abs(closed - estimated),
                "tolerance": tol,
                "passed": abs(closed - estimated) <= tol,
            }
        )

    mp = MacHelperParams(5.0, 2.5, 2.5, 12.0)
    msys = build_mac_helper(mp, 0.3, 0.2)
    names = ("U", "X0", "X1", "X2", "Y")
    exact_cov = covariance(msys, names)
    emp_cov = mc_oracle.sample_covariance(msys, names, cfg)
    se = np.sqrt((np.outer(np.diag(exact_cov), np.diag(exact_cov)) + exact_cov**2) / n)
    worst = float(np.max(np.abs(emp_cov - exact_cov) / (3.0 * se)))
    checks.append(
        {
            "check": "mac covariance (5x5) within 3 standard errors",
            "worst_ratio": worst,
            "tolerance": 1.0,
            "passed": worst <= 1.0,
        }
    )

    record(
        "mac f-route rate",
        mac.f_rate(mp, 0.3, 0.2, mp.p1),
        mc_oracle.cond_mi_estimate(msys, ("U", "X1"), "Y", "X2", cfg)
        - mc_oracle.mi_estimate(msys, "U", "S", cfg),
        2 * mi_tol,
    )
    record(
        "mac g-route rate",
        mac.g_rate(mp, 0.3, 0.2, mp.p1),
        mc_oracle.cond_mi_estimate(msys, "X1", "Y", ("X2", "U"), cfg),
        mi_tol,
    )

    zp = ZicParams(2.0, 2.0, 2.0, 1.0, 1.0, 0.5)
    zsys = build_zic_verystrong(zp, zic_mod.zic_vs_coefficients(zp))
    record(
        "zic decode rate identity (link 1)",
        0.5 * math.log2(1.0 + zp.p1),
        mc_oracle.mi_estimate(zsys, "U", ("V", "Y1"), cfg)
        - mc_oracle.mi_estimate(zsys, ("S1", "S2"), "U", cfg),
        2 * mi_tol,
    )
    record(
        "zic decode rate identity (link 2)",
        0.5 * math.log2(1.0 + zp.p2),
        mc_oracle.mi_estimate(zsys, "V", "Y2", cfg)
        - mc_oracle.mi_estimate(zsys, "S2", "V", cfg),
        2 * mi_tol,
    )

    ip = IcParams(1.6, 1.8, 1.0, 1.0, 0.9, 0.9, 0.5)
    isys = build_ic_verystrong(ip, ic_mod.ic_vs_coefficients(ip))
    rep1, rep2 = ic_mod.ic_vs_conditions(ip)
    record(
        "ic decode-U-at-rx2 margin",
        rep1.margin,
        mc_oracle.mi_estimate(isys, "U", "Y2", cfg)
        - mc_oracle.mi_estimate(isys, ("S1", "S2"), "U", cfg)
        - 0.5 * math.log2(1.0 + ip.p1),
        2 * mi_tol,
    )
    record(
        "ic decode-V-at-rx1 margin",
        rep2.margin,
        mc_oracle.mi_estimate(isys, "V", "Y1", cfg)
        - mc_oracle.mi_estimate(isys, ("S1", "S2"), "V", cfg)
        - 0.5 * math.log2(1.0 + ip.p2),
        2 * mi_tol,
    )

    all_passed = all(c["passed"] for c in checks)
    return (EXIT_OK if all_passed else EXIT_CONDITION_FAILED), {
        "seed": seed,
        "samples": n,
        "checks": checks,
        "all_passed": all_passed,
    }


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirty-region",
        description="Capacity bounds and regime analysis for state-dependent "
        "Gaussian channels (helper-assisted MAC, Z-IC, IC).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="K=V",
            help="override a scenario parameter",
        )
        p.add_argument(
            "--jobs",
            type=int,
            default=int(os.environ.get("DIRTY_REGION_JOBS", "1")),
            help="concurrent grid evaluations (sweep)",
        )

    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", required=True)
        common(p)

    p = sub.add_parser("sweep")
    p.add_argument("--scenario", required=True)
    common(p)

    p = sub.add_parser("verify")
    p.add_argument("--scenario", default=None)
    common(p)

    p = sub.add_parser("fig")
    p.add_argument("name", choices=sorted(figures.FIGURES))
    common(p)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0

    outdir = args.out
    report_name = args.command.replace("-", "_")
    try:
        if args.command == "fig":
            os.makedirs(outdir, exist_ok=True)
            summary = figures.FIGURES[args.name](outdir)
            _write_report(outdir, args.name, _jsonable({
                "command": "fig",
                "figure": args.name,
                "units": UNITS,
                "summary": summary,
            }))
            return EXIT_OK

        scenario: dict = {"params": {}}
        if getattr(args, "scenario", None):
            scenario = _load_scenario(args.scenario, args.override)
        elif args.override:
            scenario = _apply_overrides(scenario, args.override)

        if args.command == "sweep":
            code, payload = _cmd_sweep(scenario, outdir, max(1, args.jobs))
        elif args.command == "verify":
            code, payload = _cmd_verify(scenario, outdir)
        else:
            model, fn = COMMANDS[args.command]
            scenario.setdefault("model", model)
            if scenario["model"] != model:
                raise ScenarioError(
                    f"command {args.command} needs model {model!r}, "
                    f"scenario says {scenario['model']!r}"
                )
            code, payload = fn(scenario, outdir)
    except (ScenarioError, ChannelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegimeGateError as exc:
        _write_report(outdir, report_name, _jsonable({
            "command": args.command,
            "units": UNITS,
            "gate_error": str(exc),
        }))
        print(f"regime gate violated: {exc}", file=sys.stderr)
        return EXIT_CONDITION_FAILED
    except (GaussCoreError, ic_mod.SingularCoefficientError,
            NonFiniteObjectiveError, np.linalg.LinAlgError) as exc:
        _write_report(outdir, report_name, _jsonable({
            "command": args.command,
            "units": UNITS,
            "numeric_error": f"{type(exc).__name__}: {exc}",
        }))
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    payload = _jsonable({
        "command": args.command,
        "units": UNITS,
        "scenario": scenario if args.command != "fig" else None,
        "result": payload,
    })
    _write_report(outdir, report_name, payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
