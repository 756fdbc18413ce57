"""CLI surface: exit codes, reports, sweeps, figure presets, verify."""

import json
import math

import pytest

from dirty_region import cli, z_ic
from dirty_region.channels import ZicParams


def _scenario(tmp_path, payload, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


ZIC_WEAK = {
    "model": "zic",
    "params": {"a": 0.5, "p1": 1.0, "p2": 1.0, "q1": 1.0, "q2": 1.0, "rho": 0.2},
}


def test_unknown_command_exits_2(capsys):
    assert cli.main(["definitely-not-a-command"]) == 2


def test_missing_scenario_file_exits_2(tmp_path, capsys):
    assert cli.main(["zic-weak", "--scenario", str(tmp_path / "nope.json")]) == 2


def test_bad_override_exits_2(tmp_path, capsys):
    sc = _scenario(tmp_path, ZIC_WEAK)
    assert cli.main(["zic-weak", "--scenario", sc, "--override", "oops"]) == 2


def test_zic_weak_report_and_exit_codes(tmp_path, capsys):
    sc = _scenario(tmp_path, ZIC_WEAK)
    out = str(tmp_path)
    assert cli.main(["zic-weak", "--scenario", sc, "--out", out]) == 0
    report = json.loads((tmp_path / "zic_weak.json").read_text())
    assert report["units"] == "bits/channel-use"
    expected = z_ic.zic_weak_sum_capacity(ZicParams(**ZIC_WEAK["params"]))
    assert report["result"]["sum_capacity"] == pytest.approx(expected)

    # gate violation: report still written, exit 1
    assert cli.main(
        ["zic-weak", "--scenario", sc, "--override", "a=2.0", "--out", out]
    ) == 1
    report = json.loads((tmp_path / "zic_weak.json").read_text())
    assert "gate_error" in report


def test_zic_verystrong_condition_failure_exit_1(tmp_path, capsys):
    sc = _scenario(
        tmp_path,
        {
            "model": "zic",
            "params": {"a": 2.0, "p1": 2.0, "p2": 2.0, "q1": 1.0, "q2": 1.0, "rho": 0.0},
        },
    )
    out = str(tmp_path)
    assert cli.main(["zic-verystrong", "--scenario", sc, "--out", out]) == 1
    report = json.loads((tmp_path / "zic_verystrong.json").read_text())
    assert report["result"]["condition"]["passed"] is False
    assert report["result"]["capacity_region"] is None


def test_mac_classify_report(tmp_path, capsys):
    sc = _scenario(
        tmp_path,
        {"model": "mac_helper", "params": {"p0": 10.0, "p1": 2.0, "p2": 2.0, "q": 5.0}},
    )
    out = str(tmp_path)
    assert cli.main(["mac-classify", "--scenario", sc, "--out", out]) == 0
    report = json.loads((tmp_path / "mac_classify.json").read_text())
    assert report["result"]["labels"] == ["C", "C", "C"]
    assert report["result"]["segments"]["r1"] == pytest.approx(0.5 * math.log2(3.0))


def test_mac_bounds_writes_files(tmp_path, capsys):
    sc = _scenario(
        tmp_path,
        {
            "model": "mac_helper",
            "params": {"p0": 2.0, "p1": 2.0, "p2": 2.0, "q": 4.0},
            "grids": {"alpha": 65, "beta": 33, "rho": 33, "r1": 65},
        },
    )
    out = str(tmp_path)
    assert cli.main(["mac-bounds", "--scenario", sc, "--out", out]) == 0
    for name in ("mac_inner.csv", "mac_outer.csv", "mac_bounds.svg", "mac_bounds.json"):
        assert (tmp_path / name).exists()
    inner = (tmp_path / "mac_inner.csv").read_text().splitlines()
    assert inner[0] == "r1_bits,r2_bits,binding"
    assert len(inner) == 66


def test_sweep_two_axes_row_count(tmp_path, capsys):
    sc = _scenario(
        tmp_path,
        {
            "model": "zic",
            "analysis": "weak",
            "params": {"p1": 1.0, "p2": 1.0, "q1": 1.0, "q2": 1.0, "rho": 0.0},
            "sweep": [
                {"name": "a", "lo": 0.1, "hi": 0.9, "steps": 5},
                {"name": "p1", "lo": 0.5, "hi": 2.0, "steps": 3},
            ],
        },
    )
    out = str(tmp_path)
    assert cli.main(["sweep", "--scenario", sc, "--out", out]) == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert len(lines) == 1 + 5 * 3
    assert lines[0].startswith("a,p1,")


def test_single_point_sweep_matches_direct_call(tmp_path, capsys):
    sc = _scenario(
        tmp_path,
        {
            "model": "zic",
            "analysis": "weak",
            "params": {"p1": 1.0, "p2": 1.0, "q1": 1.0, "q2": 1.0, "rho": 0.0},
            "sweep": [{"name": "a", "lo": 0.5, "hi": 0.5, "steps": 1}],
        },
    )
    out = str(tmp_path)
    assert cli.main(["sweep", "--scenario", sc, "--out", out]) == 0
    line = (tmp_path / "sweep.csv").read_text().splitlines()[1]
    value = float(line.split(",")[1])
    direct = z_ic.zic_weak_sum_capacity(ZicParams(0.5, 1.0, 1.0, 1.0, 1.0, 0.0))
    assert value == pytest.approx(direct, abs=1e-10)


def test_sweep_jobs_output_identical(tmp_path, capsys):
    payload = {
        "model": "zic",
        "analysis": "verystrong",
        "params": {"p1": 2.0, "p2": 2.0, "q1": 1.0, "q2": 1.0, "rho": 0.5},
        "sweep": [{"name": "a", "lo": 1.8, "hi": 2.6, "steps": 9}],
    }
    sc = _scenario(tmp_path, payload)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert cli.main(["sweep", "--scenario", sc, "--out", str(out1), "--jobs", "1"]) == 0
    assert cli.main(["sweep", "--scenario", sc, "--out", str(out2), "--jobs", "4"]) == 0
    assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()


def test_sweep_classify_matches_module(tmp_path, capsys):
    from dirty_region import mac_helper
    from dirty_region.channels import MacHelperParams

    sc = _scenario(
        tmp_path,
        {
            "model": "mac_helper",
            "analysis": "classify",
            "params": {"p0": 5.0, "p1": 5.0, "p2": 0.0, "q": 12.0},
            "sweep": [{"name": "q", "lo": 2.0, "hi": 12.0, "steps": 3}],
        },
    )
    out = str(tmp_path)
    assert cli.main(["sweep", "--scenario", sc, "--out", out]) == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    header = lines[0].split(",")
    qcol, casecol = header.index("q"), header.index("case")
    for line in lines[1:]:
        cells = line.split(",")
        direct = mac_helper.classify(MacHelperParams(5.0, 5.0, 0.0, float(cells[qcol])))
        assert cells[casecol] == direct.case_id


def test_fig_preset_writes_files(tmp_path, capsys):
    out = str(tmp_path)
    assert cli.main(["fig", "fig3_2", "--out", out]) == 0
    assert (tmp_path / "fig3_2.csv").exists()
    assert (tmp_path / "fig3_2.svg").exists()
    assert (tmp_path / "fig3_2.json").exists()


def test_fig_unknown_name_exits_2(capsys):
    assert cli.main(["fig", "fig9_9"]) == 2


def test_verify_quick_run(tmp_path, capsys):
    sc = _scenario(tmp_path, {"mc_samples": 200_000, "seed": 77, "mi_tolerance": 0.02})
    out = str(tmp_path)
    assert cli.main(["verify", "--scenario", sc, "--out", out]) == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["result"]["all_passed"] is True
    assert len(report["result"]["checks"]) >= 6


def test_numeric_failure_exit_3(tmp_path, capsys):
    # singular joint-design denominator: (p1+1)(p2+1) = a*b*p1*p2
    sc = _scenario(
        tmp_path,
        {
            "model": "ic",
            "params": {"a": 2.0, "b": 2.0, "p1": 1.0, "p2": 1.0,
                        "q1": 1.0, "q2": 1.0, "rho": 0.0},
        },
    )
    out = str(tmp_path)
    assert cli.main(["ic-verystrong", "--scenario", sc, "--out", out]) == 3
    report = json.loads((tmp_path / "ic_verystrong.json").read_text())
    assert "numeric_error" in report


def test_invalid_split_exits_2(tmp_path, capsys):
    sc = _scenario(
        tmp_path,
        {
            "model": "zic",
            "params": {"a": 1.2, "p1": 1.0, "p2": 1.0, "q1": 2.0, "q2": 1.0, "rho": 0.4},
            "p1_dprime": 5.0,
        },
    )
    assert cli.main(["zic-strong", "--scenario", sc, "--out", str(tmp_path)]) == 2
