import itertools
from fractions import Fraction

import pytest

from quasitop.errors import DimensionMismatch, RationalDirection
from quasitop.exact import Lattice
from quasitop.exact.linalg import dot, rank
from quasitop.scheme import (
    Codim1Domain,
    ProjectionScheme,
    codim1_domain,
    codim1_orbit_count,
    derive_hyperplane_classes,
    derive_internal,
    enumerate_orientations,
    to_arrangement,
    validate_scheme,
)

from conftest import load


@pytest.fixture(scope="module")
def penrose():
    return load("penrose.toml")


@pytest.fixture(scope="module")
def octagonal():
    return load("octagonal.toml")


@pytest.fixture(scope="module")
def ak_scheme():
    return load("ammann_kramer_scheme.toml")


def test_validation(ak_scheme, penrose, tau_field):
    assert validate_scheme(ak_scheme).ok
    assert validate_scheme(penrose).ok
    e1 = ProjectionScheme.build(tau_field, [[1], [0], [0]])
    diag = validate_scheme(e1)
    assert not diag.ok and isinstance(diag.error, RationalDirection)
    with pytest.raises(RationalDirection):
        derive_internal(e1)
    # E spanned by (1, tau, 0) and (0, 0, 1) still contains e3
    s = ProjectionScheme.build(tau_field, [[1, 0], [tau_field.gen, 0], [0, 1]])
    assert isinstance(validate_scheme(s).error, RationalDirection)
    with pytest.raises(DimensionMismatch):
        ProjectionScheme.build(tau_field, [[1, 0], [0]])
    dep = ProjectionScheme.build(tau_field, [[1, 2], [tau_field.gen, 2 * tau_field.gen], [0, 0]])
    assert isinstance(validate_scheme(dep).error, DimensionMismatch)


def test_derived_data(ak_scheme, octagonal, penrose):
    for s, expect in [(ak_scheme, (0, 3, 6, 2)), (octagonal, (0, 2, 4, 2)), (penrose, (1, 2, 4, 2))]:
        data = derive_internal(s)
        assert (data.rk_delta, data.dim_v, data.gamma_rank, data.nu) == expect
        assert data.dim_v + s.d + data.rk_delta == s.N
    pen = derive_internal(penrose)
    assert pen.delta == Lattice.from_generators([[1, 1, 1, 1, 1]])


def test_orientations(ak_scheme, penrose, octagonal):
    istar, istar_v = enumerate_orientations(derive_internal(ak_scheme))
    assert istar == istar_v and len(istar) == 15
    istar, istar_v = enumerate_orientations(derive_internal(penrose))
    assert istar == istar_v == list(itertools.combinations(range(5), 2))
    istar, _ = enumerate_orientations(derive_internal(octagonal))
    assert len(istar) == 4


def test_degenerate_orientation_excluded(tau_field):
    # E = span(e1 + tau e2) makes pi-perp(e1) and pi-perp(e2) parallel
    s = ProjectionScheme.build(tau_field, [[1], [tau_field.gen], [0], [0]])
    istar, _ = enumerate_orientations(derive_internal(s))
    assert (0, 1) not in istar
    assert istar == [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_hyperplane_classes(ak_scheme, octagonal, penrose):
    ak = to_arrangement(derive_internal(ak_scheme))
    assert len(ak.hyperplanes) == 15
    oc = derive_hyperplane_classes(derive_internal(octagonal))
    assert len(oc) == 4
    pen = derive_hyperplane_classes(derive_internal(penrose))
    assert len(pen) == 10


def test_duplicate_hyperplanes_are_merged(ak):
    from quasitop.arrangement import Arrangement

    doubled = Arrangement(ak.field, ak.dim_v, ak.gamma, list(ak.hyperplanes) * 2)
    assert len(doubled.hyperplanes) == 15


def test_normals_vanish_on_their_edges(ak_scheme, octagonal):
    for s in (ak_scheme, octagonal):
        data = derive_internal(s)
        nf = s.field
        for h in derive_hyperplane_classes(data):
            for J in h.provenance:
                for j in J:
                    e = [nf.one if i == j else nf.zero for i in range(s.N)]
                    assert dot(h.normal, data.to_v(e)) == 0


@pytest.mark.parametrize("name", ["octagonal.toml", "ammann_kramer_scheme.toml"])
def test_classes_follow_u_by_translation(name):
    s = load(name)
    nf = s.field
    u2 = [nf(Fraction(1, 3 + i)) + nf.gen / (5 + i) for i in range(s.N)]
    a = derive_internal(s)
    b = derive_internal(s.with_offset(u2))
    ha = {h.provenance: h for h in derive_hyperplane_classes(a)}
    hb = {h.provenance: h for h in derive_hyperplane_classes(b)}
    assert ha.keys() == hb.keys()
    # with Delta = 0 a new offset translates the whole family by t
    t = a.to_v([x - y for x, y in zip(u2, s.u)])
    for key in ha:
        assert ha[key].normal == hb[key].normal
        assert hb[key].offset - ha[key].offset + dot(ha[key].normal, t) == 0


def _permuted(s, perm):
    rows = [s.e_basis[p] for p in perm]
    u = [s.u[p] for p in perm]
    return ProjectionScheme.build(s.field, rows, u, s.label)


@pytest.mark.parametrize("name", ["penrose.toml", "octagonal.toml"])
def test_permutation_invariance(name):
    s = load(name)
    base = derive_internal(s)
    arr = to_arrangement(base)
    tables = arr.tables()
    for perm in [(1, 0) + tuple(range(2, s.N)), tuple(reversed(range(s.N)))]:
        t = derive_internal(_permuted(s, perm))
        assert t.summary() == base.summary()
        # Gamma_T pulled back through the permutation is the same lattice
        back = [[row[perm.index(i)] for i in range(s.N)] for row in t.gamma_lattice.basis]
        assert Lattice.from_generators(back, s.N) == base.gamma_lattice
        assert Lattice.from_generators([[row[perm.index(i)] for i in range(s.N)] for row in t.delta.basis],
                                       s.N) == base.delta
        other = to_arrangement(t)
        assert len(other.hyperplanes) == len(arr.hyperplanes)
        ot = other.tables()
        for l in range(arr.dim_v):
            assert ot.count(l) == tables.count(l)
            assert sorted(c.stabilizer_rank for c in ot.levels[l]) == sorted(c.stabilizer_rank for c in tables.levels[l])


def test_codim1_orbit_count(tau_field):
    tau = tau_field.gen
    one = tau_field.one
    half = tau_field(Fraction(1, 2))
    assert Codim1Domain.build(tau_field, [[0, 1 + tau]], [one, tau]).k == 1
    assert codim1_orbit_count(Codim1Domain.build(tau_field, [[0, half]], [one, tau])) == 2
    assert codim1_orbit_count(Codim1Domain.build(tau_field, [[0, 1]], [one, tau])) == 1


def test_codim1_from_scheme():
    s = load("fibonacci_scheme.toml")
    dom = codim1_domain(s)
    assert dom.N == 2 and codim1_orbit_count(dom) == 1
    assert rank([list(dom.gamma)], s.field) == 1
