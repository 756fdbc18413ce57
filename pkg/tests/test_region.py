"""Rate-region geometry and exporters."""

import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from dirty_region.region import (
    BoundaryCurve,
    Pentagon,
    PlotSeries,
    PlotSpec,
    envelope_region,
    export_csv,
    export_svg,
    pentagon_vertices,
    upper_envelope,
    write_table_csv,
)

GOLDEN_CSV = """r1_bits,r2_bits,binding
0,1,m2
0.25,1,m2
0.5,1,m2
0.75,0.75,m12
1,0.5,m12
"""


def test_pentagon_vertices_clipped():
    verts = pentagon_vertices(Pentagon(0.5, 0.5, 0.79))
    expected = [(0, 0), (0.5, 0), (0.5, 0.29), (0.29, 0.5), (0, 0.5)]
    assert len(verts) == 5
    for v, e in zip(verts, expected):
        assert v[0] == pytest.approx(e[0], abs=1e-12)
        assert v[1] == pytest.approx(e[1], abs=1e-12)


def test_pentagon_vertices_rectangle():
    verts = pentagon_vertices(Pentagon(1.0, 2.0, 5.0))
    assert len(verts) == 4


def test_pentagon_vertices_strong_zic_corner():
    # strong Z-IC pentagon at p1 = p2 = 1, a = 1.2: the max-R2 sum corner
    m1 = m2 = 0.5 * math.log2(2.0)
    m12 = 0.5 * math.log2(1 + 1 + 1.44)
    verts = pentagon_vertices(Pentagon(m1, m2, m12))
    corner = (0.5 * math.log2(1.72), 0.5)
    assert any(
        v[0] == pytest.approx(corner[0], abs=1e-12)
        and v[1] == pytest.approx(corner[1], abs=1e-12)
        for v in verts
    )


def test_envelope_single_pentagon_is_own_boundary():
    p = Pentagon(1.0, 1.0, 1.5)
    curve = upper_envelope([p], r1_grid_size=101)
    for r1, r2 in zip(curve.r1, curve.r2):
        assert r2 == pytest.approx(min(p.m2, p.m12 - r1), abs=1e-12)


def test_envelope_nested_pentagons():
    inner = Pentagon(0.5, 0.5, 0.8)
    outer = Pentagon(1.0, 1.0, 1.6)
    curve = upper_envelope([inner, outer], r1_grid_size=101)
    ref = upper_envelope([outer], r1_grid_size=101)
    np.testing.assert_allclose(curve.r2, ref.r2, atol=1e-12)


def test_envelope_dominates_constituents():
    rng = np.random.default_rng(5)
    pentagons = [
        Pentagon(a, b, min(a + b, max(a, b) + rng.uniform(0, 0.5)))
        for a, b in rng.uniform(0.2, 2.0, size=(20, 2))
    ]
    region = envelope_region(pentagons, r1_grid_size=201)
    curve = region.boundary
    for p in pentagons:
        for r1, r2 in zip(curve.r1, curve.r2):
            if r1 <= min(p.m1, p.m12):
                assert r2 >= min(p.m2, p.m12 - r1) - 1e-9


def test_membership_consistency_of_boundary():
    pentagons = [Pentagon(1.0, 0.8, 1.4), Pentagon(0.7, 1.1, 1.5)]
    region = envelope_region(pentagons, r1_grid_size=101)
    curve = region.boundary
    for r1, r2 in zip(curve.r1, curve.r2):
        assert region.contains(r1, r2, tol=1e-9)
        assert not region.contains(r1, r2 + 1e-3, tol=1e-9)


def test_boundary_curve_invariants():
    with pytest.raises(ValueError):
        BoundaryCurve(np.array([0.0, 0.0]), np.array([1.0, 1.0]), ("m2", "m2"))
    with pytest.raises(ValueError):
        BoundaryCurve(np.array([0.0, 1.0]), np.array([0.5, 1.0]), ("m2", "m2"))


def test_export_csv_empty_and_single(tmp_path):
    empty = BoundaryCurve(np.array([]), np.array([]), ())
    path = tmp_path / "empty.csv"
    export_csv(empty, path)
    assert path.read_text() == "r1_bits,r2_bits,binding\n"

    one = BoundaryCurve(np.array([0.25]), np.array([0.5]), ("m2",))
    path = tmp_path / "one.csv"
    export_csv(one, path)
    assert path.read_text() == "r1_bits,r2_bits,binding\n0.25,0.5,m2\n"


def test_export_csv_golden(tmp_path):
    curve = upper_envelope([Pentagon(1.0, 1.0, 1.5)], r1_grid_size=5)
    path = tmp_path / "golden.csv"
    export_csv(curve, path)
    assert path.read_text() == GOLDEN_CSV


def test_export_csv_none_becomes_blank(tmp_path):
    path = tmp_path / "t.csv"
    write_table_csv(path, ("a", "b"), [(1.0, None), (float("nan"), "x")])
    assert path.read_text() == "a,b\n1,\n,x\n"


def test_export_svg_wellformed_and_deterministic(tmp_path):
    spec = PlotSpec(
        title="demo",
        xlabel="x",
        ylabel="y",
        series=(
            PlotSeries("s1", [0, 1, 2], [0.0, 1.0, 0.5]),
            PlotSeries("s2", [0, 1, 2], [0.5, 0.25, 0.75]),
        ),
    )
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    export_svg(spec, p1)
    export_svg(spec, p2)
    assert p1.read_bytes() == p2.read_bytes()
    root = ET.fromstring(p1.read_text())
    assert root.tag.endswith("svg")
    assert root.attrib["viewBox"] == "0 0 800 600"
    polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
    assert len(polylines) == 2


def test_convexified_envelope_is_concave():
    pentagons = [Pentagon(1.0, 0.3, 1.1), Pentagon(0.3, 1.0, 1.1)]
    curve = upper_envelope(pentagons, r1_grid_size=201, convexify=True)
    y = curve.r2
    # concavity: second differences nonpositive
    second = np.diff(y, 2)
    assert np.all(second <= 1e-9)
    plain = upper_envelope(pentagons, r1_grid_size=201)
    assert np.all(curve.r2 >= plain.r2 - 1e-12)
