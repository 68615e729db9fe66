import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasitop.errors import NotASubgroup, RefinementBudgetExceeded
from quasitop.exact import (
    INFINITE,
    Lattice,
    NumberField,
    coset_representatives,
    field_sign,
    hnf,
    integer_kernel,
    rational_coordinates,
    saturation,
    snf,
    snf_diagonal,
    span_rank,
    subgroup_index,
    wedge_coordinates,
)
from quasitop.exact.lattice import det_int, matmul
from quasitop.selftest import check_matrix, random_unimodular


def frac_det(m):
    """Plain Gaussian elimination over Q, used as an independent oracle."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def determinant_divisors(m):
    """Invariant factors from gcds of k x k minors."""
    r, c = len(m), len(m[0])
    dk = [1]
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = math.gcd(g, int(frac_det([[m[i][j] for j in cols] for i in rows])))
        if g == 0:
            break
        dk.append(g)
    factors = [dk[i] // dk[i - 1] for i in range(1, len(dk))]
    return factors + [0] * (min(r, c) - len(factors))


small_matrix = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


# -- worked examples ---------------------------------------------------------------

def test_hnf_examples():
    h, u = hnf([[1, 0], [0, 1]])
    assert h == [[1, 0], [0, 1]] and u == [[1, 0], [0, 1]]
    h, u = hnf([[2], [3]])
    assert h == [[1], [0]]
    assert matmul(u, [[2], [3]]) == h
    h, u = hnf([[2, 0], [0, 3]])
    assert h == [[2, 0], [0, 3]] and u == [[1, 0], [0, 1]]


def test_snf_examples():
    assert snf_diagonal([[2, 0], [0, 3]]) == [1, 6]
    assert snf([[0, 0], [0, 0]])[0] == [[0, 0], [0, 0]]
    assert snf_diagonal([[2, 4], [6, 8]]) == [2, 4]


def test_subgroup_index_examples():
    z2 = Lattice.standard(2)
    assert subgroup_index(Lattice.from_generators([[2, 0], [0, 3]]), z2) == 6
    assert subgroup_index(z2, z2) == 1
    assert subgroup_index(Lattice.from_generators([[1, 0]], 2), z2) == INFINITE
    with pytest.raises(NotASubgroup):
        subgroup_index(z2, Lattice.from_generators([[2, 0], [0, 1]]))


def test_integer_kernel_examples():
    assert integer_kernel([[1, -1]]).int_basis() == [[1, 1]]
    assert integer_kernel([[1, 0], [0, 1]]).rank == 0
    assert integer_kernel([[Fraction(1, 2), Fraction(-1, 3)]]).int_basis() == [[2, 3]]


def test_rational_coordinates_examples(tau_field):
    tau = tau_field.gen
    assert rational_coordinates([tau]) == (0, 1)
    assert rational_coordinates([1 + 2 * tau, tau_field(3)]) == (1, 2, 3, 0)
    assert rational_coordinates([tau_field.zero] * 2) == (0, 0, 0, 0)


def test_field_sign_examples(tau_field):
    tau = tau_field.gen
    assert field_sign(tau) == 1
    assert field_sign(tau * tau + tau - 1) == 0
    assert field_sign(-1 - tau) == -1


def test_wedge_and_span_examples():
    assert wedge_coordinates([[1, 0, 0], [0, 1, 0]]) == (1, 0, 0)
    assert wedge_coordinates([[0, 1, 0], [1, 0, 0]]) == (-1, 0, 0)
    assert wedge_coordinates([[1, 1, 0], [0, 1, 1]]) == (1, 1, 1)
    assert span_rank([]) == 0
    assert span_rank([[1, 0], [1, 0], [2, 0]]) == 1
    assert span_rank([[1, 1, 0], [0, 1, 1], [1, 0, -1]]) == 2


# -- oracles and properties ------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(small_matrix)
def test_snf_matches_determinant_divisors(m):
    assert snf_diagonal(m) == determinant_divisors(m)


@settings(max_examples=200, deadline=None)
@given(small_matrix, st.integers(0, 2**32))
def test_factor_identities(m, seed):
    assert check_matrix(m, random.Random(seed)) == []


@settings(max_examples=150, deadline=None)
@given(small_matrix, st.integers(0, 2**32))
def test_hnf_is_canonical_under_left_unimodular(m, seed):
    u = random_unimodular(random.Random(seed), len(m))
    assert hnf(matmul(u, m))[0] == hnf(m)[0]


@settings(max_examples=150, deadline=None)
@given(small_matrix, st.integers(0, 2**32))
def test_snf_invariant_under_both_sides(m, seed):
    rng = random.Random(seed)
    u = random_unimodular(rng, len(m))
    v = random_unimodular(rng, len(m[0]))
    assert snf_diagonal(matmul(matmul(u, m), v)) == snf_diagonal(m)


def test_det_int_matches_fraction_oracle():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 6)
        m = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(n)]
        assert det_int(m) == frac_det(m)


@settings(max_examples=100, deadline=None)
@given(small_matrix)
def test_kernel_is_saturated(m):
    ker = integer_kernel(m, len(m[0]))
    assert subgroup_index(ker, saturation(ker)) == 1


def test_coset_representatives_distinct():
    sup = Lattice.standard(2)
    sub = Lattice.from_generators([[2, 1], [0, 3]])
    reps = coset_representatives(sub, sup)
    assert len(reps) == 6
    keys = {sub.reduce(r) for r in reps}
    assert len(keys) == 6


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=4),
       st.integers(1, 3))
def test_wedge_vanishes_iff_dependent(vs, k):
    vs = vs[:k]
    w = wedge_coordinates(vs)
    assert (not any(w)) == (span_rank(vs) < len(vs))


def test_wedges_of_a_basis_have_full_rank():
    rng = random.Random(11)
    for _ in range(30):
        s = rng.randint(1, 4)
        lat = Lattice.from_generators([[rng.randint(-6, 6) for _ in range(5)] for _ in range(s)], 5)
        basis = lat.int_basis()
        for k in range(1, lat.rank + 1):
            ws = [wedge_coordinates(c) for c in itertools.combinations(basis, k)]
            assert span_rank(ws) == math.comb(lat.rank, k)


nonzero_coeffs = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=12), min_size=3, max_size=3)


@pytest.fixture(scope="module")
def cubic():
    return NumberField([-2, 0, 0, 1], ("1", "2"))


@settings(max_examples=150, deadline=None)
@given(nonzero_coeffs, nonzero_coeffs)
def test_field_arithmetic(cubic, a, b):
    x, y = cubic.from_coeffs(a), cubic.from_coeffs(b)
    if x.is_zero() or y.is_zero():
        return
    assert (x * y) * x.inverse() == y
    assert field_sign(x) * field_sign(y) == field_sign(x * y)
    # sign agrees with a float embedding when the value is clearly away from zero
    root = 2 ** (1 / 3)
    val = sum(float(c) * root**i for i, c in enumerate(x.coeffs))
    if abs(val) > 1e-6:
        assert field_sign(x) == (1 if val > 0 else -1)


def test_number_field_rejects_bad_input():
    with pytest.raises(ValueError):
        NumberField([-1, 0, 2], (0, 1))  # not monic
    with pytest.raises(ValueError):
        NumberField([-1, 0, 1], ("-2", "2"))  # two roots inside
    with pytest.raises(ValueError):
        NumberField([2, -3, 1], ("3/2", "5/2"))  # reducible


def test_refinement_cap():
    nf = NumberField([-2, 0, 1], ("1", "2"), bisection_cap=3)
    x = nf.from_coeffs([Fraction(-141421356237, 10**11), 1])  # sqrt 2 minus a close rational
    with pytest.raises(RefinementBudgetExceeded):
        field_sign(x)
