import csv
import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull, cKDTree

from quasitop.errors import UnsupportedDimension
from quasitop.exact.linalg import dot
from quasitop.exact.numberfield import field_sign
from quasitop.pattern import PointPattern, export, generate_pattern, singularity_scan, zonotope_facets
from quasitop.scheme import ProjectionScheme, derive_internal

from conftest import load

# measured on the octagonal fixture at R = 12, then frozen
OCTAGONAL_MIN_DISTANCE = 0.5411961
OCTAGONAL_COVER_BOUND = 0.5


def perp_coords(data, x):
    """Orthonormal E-perp coordinates of x in floats."""
    return [float(dot(w, x)) / math.sqrt(float(dot(w, w))) for w in data.f_basis]


def hull_of_window(data):
    N = data.scheme.N
    nf = data.scheme.field
    verts = [perp_coords(data, [nf(c) for c in v]) for v in itertools.product((0, 1), repeat=N)]
    return ConvexHull(np.array(verts))


def unique_facets(hull, tol=1e-9):
    eqs = []
    for e in hull.equations:
        if not any(np.allclose(e, f, atol=tol) for f in eqs):
            eqs.append(e)
    return eqs


@pytest.mark.parametrize("name,count", [
    ("hexagonal.toml", 6),
    ("octagonal.toml", 8),
    ("penrose.toml", 20),
    ("ammann_kramer_scheme.toml", 30),
])
def test_facet_count_matches_hull(name, count):
    s = load(name)
    data = derive_internal(s)
    z = zonotope_facets(data)
    hull = hull_of_window(data)
    assert z.facet_count == len(unique_facets(hull))
    assert z.facet_count == count


def test_interval_window():
    s = load("fibonacci_scheme.toml")
    z = zonotope_facets(s)
    assert z.facet_count == 2


@pytest.mark.parametrize("name", ["hexagonal.toml", "octagonal.toml", "ammann_kramer_scheme.toml"])
def test_membership_matches_hull(name):
    s = load(name)
    data = derive_internal(s)
    nf = s.field
    zono = zonotope_facets(data)
    hull = hull_of_window(data)
    rng = random.Random(1)
    checked = 0
    for _ in range(300):
        x = [nf(Fraction(rng.randint(-8, 24), 16)) for _ in range(s.N)]
        y = np.array(perp_coords(data, x))
        slack = hull.equations[:, :-1] @ y + hull.equations[:, -1]
        if np.min(np.abs(slack)) < 1e-9:
            continue
        assert zono.contains(x) == bool(np.all(slack < 0))
        checked += 1
    assert checked > 250


def fibonacci_brute_force(s, R, reach=40):
    """Exact scan of a square of lattice points, independent of the facet code."""
    nf = s.field
    e = [row[0] for row in s.e_basis]
    w = [e[1], -e[0]]  # spans E-perp
    values = [w[0] * a + w[1] * b for a, b in itertools.product((0, 1), repeat=2)]
    lo = min(values, key=lambda v: v.enclosure()[0])
    hi = max(values, key=lambda v: v.enclosure()[1])
    ee = dot(e, e)
    out = []
    for z in itertools.product(range(-reach, reach + 1), repeat=2):
        x = [nf(z[i]) + s.u[i] for i in range(2)]
        t = dot(w, x)
        if field_sign(t - lo) < 0 or field_sign(hi - t) < 0:
            continue
        p = dot(e, x)
        if field_sign(nf(R * R) * ee - p * p) < 0:
            continue
        out.append(z)
    return out


def test_fibonacci_matches_brute_force():
    s = load("fibonacci_scheme.toml")
    pat = generate_pattern(s, None, 20)
    assert len(pat) == len(pat.projected_points)
    assert sorted(pat.strip_points) == sorted(fibonacci_brute_force(s, 20))
    assert len(pat) == 55


def test_radius_zero_gives_at_most_one_point():
    for name in ("fibonacci_scheme.toml", "octagonal.toml"):
        assert len(generate_pattern(load(name), None, 0)) <= 1


def test_translation_covariance():
    s = load("octagonal.toml")
    pat = generate_pattern(s, None, 6)
    for w in [(1, 0, 0, 0), (0, -2, 1, 3)]:
        moved = generate_pattern(s, [ui + wi for ui, wi in zip(s.u, w)], 6)
        assert moved.projected_points == pat.projected_points
        assert moved.strip_points == [tuple(a - b for a, b in zip(z, w)) for z in pat.strip_points]


def test_singularity_witnesses():
    s = load("fibonacci_scheme.toml")
    nf = s.field
    hits = singularity_scan(s, [nf.zero, nf.zero], 3)
    assert any(h["z"] == (0, 0) for h in hits)
    oc = load("octagonal.toml")
    # put u on the lower face of facet 0: the cube vertex minimising <eta, .>,
    # pushed into the face along the coordinates where eta vanishes
    eta = zonotope_facets(oc).facets[0].eta
    of = oc.field
    u = [of.one if x < 0 else (of(Fraction(1, 7)) if x == 0 else of.zero) for x in eta]
    hits = [h for h in singularity_scan(oc, u, 3) if h["z"] == (0, 0, 0, 0)]
    assert hits and hits[0]["facets"] == [(0, "lo")]
    assert singularity_scan(oc, None, 10) == []


def test_points_are_distinct_and_delone():
    s = load("octagonal.toml")
    data = derive_internal(s)
    pat = generate_pattern(data, None, 12)
    assert len(set(pat.projected_points)) == len(pat)
    scales = [1 / math.sqrt(float(dot(r, r))) for r in data.proj_E]
    pts = np.array([[float(q[i]) * scales[i] for i in range(2)] for q in pat.projected_points])
    tree = cKDTree(pts)
    d, _ = tree.query(pts, k=2)
    assert d[:, 1].min() == pytest.approx(OCTAGONAL_MIN_DISTANCE, abs=1e-6)
    grid = np.array([[x, y] for x in np.linspace(-8, 8, 81) for y in np.linspace(-8, 8, 81) if x * x + y * y <= 64])
    assert tree.query(grid)[0].max() <= OCTAGONAL_COVER_BOUND


def test_csv_export(tmp_path):
    s = load("fibonacci_scheme.toml")
    pat = generate_pattern(s, None, 20)
    path = tmp_path / "fib.csv"
    export(pat, "csv", path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["z1", "z2", "proj1", "proj1_decimal"]
    assert len(rows) - 1 == len(pat)
    empty = PointPattern(s, s.u, Fraction(0))
    export(empty, "csv", tmp_path / "empty.csv")
    assert (tmp_path / "empty.csv").read_text().strip() == "z1,z2,proj1,proj1_decimal"


def test_svg_export(tmp_path, tau_field):
    s = load("octagonal.toml")
    pat = generate_pattern(s, None, 5)
    path = tmp_path / "oct.svg"
    export(pat, "svg", path)
    text = path.read_text()
    assert text.count("<circle") == len(pat)
    import xml.etree.ElementTree as ET

    ET.fromstring(text.split("\n", 1)[1])
    big = ProjectionScheme.build(tau_field, [[1, 0, 0, 0]] * 5)
    with pytest.raises(UnsupportedDimension):
        export(PointPattern(big, (), Fraction(1)), "svg", tmp_path / "x.svg")
