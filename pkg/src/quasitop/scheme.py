"""Projection data (Z^N, E, u) with the canonical window, the internal
datum (V, Gamma, Delta) and the hyperplane family it induces on V.

The internal space E-perp is F.  Delta is the integer part of F, V is
the orthocomplement of span(Delta) inside F and Gamma is the image of
Gamma_T = Z^N intersected with Delta-perp, which lands in V.  All bases
are orthogonal but unnormalized so coordinates stay in the number field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement, HyperplaneClass
from .errors import (
    DimensionMismatch,
    EmptyWindow,
    HypothesisViolated,
    InfiniteFamily,
    QuasitopError,
    RationalDirection,
)
from .exact.lattice import INFINITE, Lattice, coset_representatives, integer_kernel
from .exact.linalg import dot, gram_schmidt, nullspace, rank
from .exact.numberfield import FieldElement, NumberField

__all__ = [
    "Codim1Domain",
    "Diagnostics",
    "HyperplaneClass",
    "InternalData",
    "ProjectionScheme",
    "codim1_domain",
    "codim1_orbit_count",
    "derive_hyperplane_classes",
    "derive_internal",
    "enumerate_orientations",
    "to_arrangement",
    "validate_scheme",
]


@dataclass(frozen=True)
class ProjectionScheme:
    N: int
    d: int
    field: NumberField
    e_basis: tuple[tuple[FieldElement, ...], ...]  # N rows, d columns
    u: tuple[FieldElement, ...]
    label: str = ""

    @classmethod
    def build(cls, field: NumberField, e_basis, u=None, label: str = "") -> "ProjectionScheme":
        rows = tuple(tuple(field(x) for x in row) for row in e_basis)
        N = len(rows)
        if N == 0:
            raise DimensionMismatch("E_basis is empty")
        d = len(rows[0])
        if any(len(r) != d for r in rows):
            raise DimensionMismatch("E_basis rows differ in length")
        if u is None:
            u = [0] * N
        if len(u) != N:
            raise DimensionMismatch("u must have N coordinates")
        return cls(N, d, field, rows, tuple(field(x) for x in u), label)

    def columns(self) -> list[list[FieldElement]]:
        return [[self.e_basis[i][j] for i in range(self.N)] for j in range(self.d)]

    def with_offset(self, u) -> "ProjectionScheme":
        return ProjectionScheme(self.N, self.d, self.field, self.e_basis,
                                tuple(self.field(x) for x in u), self.label)


@dataclass
class Diagnostics:
    ok: bool
    reasons: list[str] = field(default_factory=list)
    error: QuasitopError | None = None

    def raise_for_failure(self) -> None:
        if self.error is not None:
            raise self.error


@dataclass(frozen=True)
class InternalData:
    scheme: ProjectionScheme
    f_basis: tuple[tuple[FieldElement, ...], ...]  # orthogonal basis of E-perp in R^N
    delta: Lattice
    v_basis: tuple[tuple[FieldElement, ...], ...]  # orthogonal basis of V in R^N
    proj_V: tuple[tuple[FieldElement, ...], ...]  # dim V x N, coordinates on V
    proj_E: tuple[tuple[FieldElement, ...], ...]  # d x N, coordinates on E
    proj_F: tuple[tuple[FieldElement, ...], ...]  # n x N, coordinates on E-perp
    gamma_lattice: Lattice  # Gamma_T inside Z^N
    gamma_generators: tuple[tuple[FieldElement, ...], ...]

    @property
    def rk_delta(self) -> int:
        return self.delta.rank

    @property
    def delta_tilde_rank(self) -> int:
        return self.delta.rank

    @property
    def dim_v(self) -> int:
        return len(self.v_basis)

    @property
    def gamma_rank(self) -> int:
        return len(self.gamma_generators)

    @property
    def nu(self) -> Fraction:
        return Fraction(self.gamma_rank, self.dim_v)

    def to_v(self, x: Sequence) -> tuple[FieldElement, ...]:
        """V-coordinates of a vector of R^N (only meaningful on V)."""
        return tuple(dot(row, x) for row in self.proj_V)

    def summary(self) -> dict:
        s = self.scheme
        return {"N": s.N, "d": s.d, "rk_delta": self.rk_delta, "dim_v": self.dim_v,
                "rk_gamma": self.gamma_rank, "nu": self.nu}


def _coordinate_rows(basis, field: NumberField):
    """Rows b / <b, b> so that x -> (rows . x) gives coordinates in an orthogonal basis."""
    out = []
    for b in basis:
        inv = dot(b, b).inverse()
        out.append(tuple(x * inv for x in b))
    return tuple(out)


def _pairing_matrix(vectors, N: int, field: NumberField) -> list[list[Fraction]]:
    """Rational matrix of z -> expanded(<z, w> for w in vectors) on Z^N."""
    rows = []
    for w in vectors:
        for t in range(field.degree):
            rows.append([w[i].coeffs[t] for i in range(N)])
    return rows


def validate_scheme(s: ProjectionScheme) -> Diagnostics:
    reasons = []
    if not 1 <= s.d < s.N:
        err = DimensionMismatch(f"need 1 <= d < N, got d={s.d}, N={s.N}")
        return Diagnostics(False, [str(err)], err)
    cols = s.columns()
    if rank(cols, s.field) != s.d:
        err = DimensionMismatch("columns of E_basis are linearly dependent")
        return Diagnostics(False, [str(err)], err)
    reasons.append(f"E has dimension {s.d} in R^{s.N}")
    f_raw = nullspace(cols, s.N, s.field)
    rational = integer_kernel(_pairing_matrix(f_raw, s.N, s.field), s.N)
    if rational.rank:
        vec = [int(x) for x in rational.basis[0]]
        err = RationalDirection(f"E contains the integer vector {vec}")
        return Diagnostics(False, reasons + [str(err)], err)
    reasons.append("E meets Z^N only in 0")
    if rank(f_raw, s.field) != s.N - s.d:
        err = EmptyWindow("canonical window has empty interior")
        return Diagnostics(False, reasons + [str(err)], err)
    reasons.append("canonical window has nonempty interior")
    return Diagnostics(True, reasons)


def derive_internal(s: ProjectionScheme) -> InternalData:
    validate_scheme(s).raise_for_failure()
    nf = s.field
    N = s.N
    cols = s.columns()
    f_basis = tuple(tuple(v) for v in gram_schmidt(nullspace(cols, N, nf)))
    delta = integer_kernel(_pairing_matrix(cols, N, nf), N)
    delta_rows = [[nf(x) for x in row] for row in delta.basis]
    v_basis = tuple(tuple(v) for v in gram_schmidt(nullspace(cols + delta_rows, N, nf)))
    if len(v_basis) != N - s.d - delta.rank:
        raise QuasitopError("dimension count for V failed")
    if not v_basis:
        raise HypothesisViolated("internal space V is zero")
    if delta.rank:
        gamma_lattice = integer_kernel(delta.basis, N)
    else:
        gamma_lattice = Lattice.standard(N)
    proj_V = _coordinate_rows(v_basis, nf)
    gens = tuple(tuple(dot(row, [nf(x) for x in z]) for row in proj_V) for z in gamma_lattice.basis)
    e_orth = gram_schmidt(cols)
    data = InternalData(
        scheme=s,
        f_basis=f_basis,
        delta=delta,
        v_basis=v_basis,
        proj_V=proj_V,
        proj_E=_coordinate_rows(e_orth, nf),
        proj_F=_coordinate_rows(f_basis, nf),
        gamma_lattice=gamma_lattice,
        gamma_generators=gens,
    )
    return data


def _f_image(data: InternalData, j: int) -> list[FieldElement]:
    """E-perp coordinates (up to positive scaling per axis) of pi-perp(e_j)."""
    return [w[j] for w in data.f_basis]


def enumerate_orientations(data: InternalData) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    s = data.scheme
    nf = s.field
    n = s.N - s.d
    if n < 2:
        raise HypothesisViolated("orientations need codimension >= 2; use the codimension-1 path")
    istar = []
    istar_v = []
    vrows = [list(v) for v in data.v_basis]
    m = data.dim_v
    for J in itertools.combinations(range(s.N), n - 1):
        # P_J = pi-perp(e^J), as vectors of R^N inside E-perp
        pj = []
        for j in J:
            pj.append([sum((w[j] * w[i] / dot(w, w) for w in data.f_basis), nf.zero) for i in range(s.N)])
        if rank(pj, nf) != n - 1:
            continue
        istar.append(J)
        by_dim = (n - 1) + m - rank(pj + vrows, nf) == m - 1
        by_containment = any(rank(pj + [v], nf) > n - 1 for v in vrows)
        if by_dim != by_containment:
            raise QuasitopError(f"orientation tests disagree on {J}")
        if by_dim:
            istar_v.append(J)
    return istar, istar_v


def _eta(data: InternalData, J: Sequence[int]) -> list[FieldElement]:
    """Nonzero eta in E-perp orthogonal to e_j for j in J."""
    s = data.scheme
    nf = s.field
    unit = lambda j: [nf.one if i == j else nf.zero for i in range(s.N)]
    rows = s.columns() + [unit(j) for j in J]
    sol = nullspace(rows, s.N, nf)
    if len(sol) != 1:
        raise QuasitopError(f"orientation {tuple(J)} does not determine a hyperplane")
    return sol[0]


def derive_hyperplane_classes(data: InternalData) -> list[HyperplaneClass]:
    """Gamma-classes of the hyperplanes pi'(e^J + v - u) meeting V, for J in I*(V).

    Raises InfiniteFamily when one orientation yields infinitely many classes.
    """
    s = data.scheme
    nf = s.field
    _, istar_v = enumerate_orientations(data)
    out: list[HyperplaneClass] = []
    for J in istar_v:
        eta = _eta(data, J)
        normal = [dot(eta, v) for v in data.v_basis]
        all_offsets = Lattice.from_generators([x.coeffs for x in eta], nf.degree)
        gamma_offsets = Lattice.from_generators(
            [dot(eta, [nf(c) for c in z]).coeffs for z in data.gamma_lattice.basis], nf.degree)
        reps = coset_representatives(gamma_offsets, all_offsets)
        if reps == INFINITE:
            raise InfiniteFamily(J)
        base = -dot(eta, s.u)
        for rep in reps:
            out.append(HyperplaneClass.normalized(normal, base + nf(list(rep)), (J,)))
    return out


def to_arrangement(data: InternalData, **kwargs) -> Arrangement:
    return Arrangement(data.scheme.field, data.dim_v, data.gamma_generators,
                       derive_hyperplane_classes(data), **kwargs)


# -- codimension one ---------------------------------------------------------

@dataclass(frozen=True)
class Codim1Domain:
    field: NumberField
    endpoints: tuple[FieldElement, ...]
    gamma: tuple[FieldElement, ...]  # images of the standard basis on the internal line

    @classmethod
    def build(cls, field: NumberField, intervals, gamma) -> "Codim1Domain":
        pts = []
        for pair in intervals:
            if len(pair) != 2:
                raise DimensionMismatch("each interval needs two endpoints")
            a, b = field(pair[0]), field(pair[1])
            if not a < b:
                raise ValueError("interval endpoints must be ascending with nonempty interior")
            pts.extend([a, b])
        if any(not x < y for x, y in zip(pts, pts[1:])):
            raise ValueError("intervals must be ascending and disjoint")
        if not gamma:
            raise DimensionMismatch("gamma must list the images of the standard basis")
        return cls(field, tuple(pts), tuple(field(g) for g in gamma))

    @property
    def N(self) -> int:
        return len(self.gamma)

    @property
    def k(self) -> int:
        return codim1_orbit_count(self)


def codim1_domain(s: ProjectionScheme) -> Codim1Domain:
    """The canonical window of a scheme with d = N - 1, in the coordinate <w, .>
    where w spans E-perp; pi'(e_i) then sits at w_i."""
    if s.d != s.N - 1:
        raise DimensionMismatch("codimension-1 path needs d = N - 1")
    validate_scheme(s).raise_for_failure()
    nf = s.field
    w = nullspace(s.columns(), s.N, nf)[0]
    lo = sum((x for x in w if x < 0), nf.zero)
    hi = sum((x for x in w if x > 0), nf.zero)
    return Codim1Domain(nf, (lo, hi), tuple(w))


def codim1_orbit_count(dom: Codim1Domain, s: ProjectionScheme | None = None) -> int:
    """Number of pi'(Z^N)-orbits among the interval endpoints."""
    lat = Lattice.from_generators([g.coeffs for g in dom.gamma], dom.field.degree)
    reps: list[FieldElement] = []
    for p in dom.endpoints:
        if not any(lat.coordinates((p - q).coeffs) is not None for q in reps):
            reps.append(p)
    return len(reps)


def codim1_arrangement(dom: Codim1Domain) -> Arrangement:
    """The line V with one point class per endpoint orbit."""
    nf = dom.field
    hyper = [HyperplaneClass((nf.one,), p) for p in dom.endpoints]
    return Arrangement(nf, 1, [(g,) for g in dom.gamma], hyper)
