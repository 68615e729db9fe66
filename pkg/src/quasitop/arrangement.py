"""Orbit classes of singular spaces for a dense lattice acting on a
finite family of hyperplane classes.

The datum is a vector space V (field coordinates), a dense lattice Gamma
given by r generator vectors, and hyperplanes W_i = {x : <n_i, x> = c_i}.
Normals are covectors, so nothing here depends on a choice of inner
product.

A singular l-space is pinned down by the values of a canonical basis of
its normal space (the field RREF of the defining normals).  For a defining
subset A those values form a coset of the offset group
sum_i <n_i, Gamma>; Gamma-orbits are cosets of the projected lattice
P(Gamma) inside it, enumerated through Smith coordinates and keyed by the
Hermite-reduced representative.  Relative tables inside a space Theta use
the same routine with Theta's normal rows held fixed and the stabilizer
of Theta as acting group.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    Incomplete,
    InfiniteOrbitSet,
    NotSpanning,
    NotTransversal,
    QuasitopError,
)
from .exact.lattice import INFINITE, Lattice, coset_representatives, integer_kernel, span_rank
from .exact.linalg import canonical_span_key, dot, rank, rref, solve
from .exact.numberfield import FieldElement, NumberField, rational_coordinates

log = logging.getLogger(__name__)

DEFAULT_SUBSET_CAP = 200_000


@dataclass(frozen=True)
class HyperplaneClass:
    normal: tuple[FieldElement, ...]
    offset: FieldElement
    provenance: tuple = ()

    @classmethod
    def normalized(cls, normal: Sequence[FieldElement], offset, provenance=()) -> "HyperplaneClass":
        """Scale so the first nonzero normal coordinate is 1."""
        lead = next((x for x in normal if x != 0), None)
        if lead is None:
            raise ValueError("hyperplane normal must be nonzero")
        inv = lead.inverse()
        return cls(tuple(x * inv for x in normal), offset * inv, tuple(provenance))


@dataclass(frozen=True)
class SingularOrbitClass:
    id: str
    level: int
    normal_basis: tuple[tuple[FieldElement, ...], ...]
    offset_values: tuple[FieldElement, ...]
    offset_point: tuple[FieldElement, ...]
    stabilizer: Lattice
    provenance: tuple[tuple[int, ...], ...]
    incident_hyperplanes: int
    direction_key: tuple = field(repr=False, compare=False, default=())

    @property
    def stabilizer_rank(self) -> int:
        return self.stabilizer.rank


@dataclass(frozen=True)
class ProjectedGroup:
    subset: tuple[int, ...]
    complement: tuple[int, ...]
    images: tuple[tuple[FieldElement, ...], ...]
    rank: int


@dataclass
class OrbitTables:
    dim_v: int
    levels: dict[int, list[SingularOrbitClass]]
    relative: dict[str, dict[int, list[str]]]
    index: dict[str, SingularOrbitClass]

    def count(self, level: int) -> int:
        return len(self.levels[level])

    def relative_count(self, theta_id: str, level: int) -> int:
        return len(self.relative[theta_id][level])

    def relative_members(self, theta_id: str, level: int) -> list[SingularOrbitClass]:
        return [self.index[i] for i in self.relative[theta_id][level]]


@dataclass
class _SpaceRecord:
    dir_key: tuple
    normal_basis: list
    offset_key: tuple
    values: list
    provenance: list


def _chunk(vec: Sequence[Fraction], nf: NumberField) -> tuple[FieldElement, ...]:
    q = nf.degree
    return tuple(FieldElement(nf, tuple(vec[i:i + q])) for i in range(0, len(vec), q))


class Arrangement:
    """The datum (V, Gamma, W) with Gamma-inequivalent hyperplane classes."""

    def __init__(self, field: NumberField, dim_v: int, gamma: Sequence[Sequence],
                 hyperplanes: Iterable[HyperplaneClass], *, subset_cap: int = DEFAULT_SUBSET_CAP):
        self.field = field
        self.dim_v = int(dim_v)
        self.gamma: tuple[tuple[FieldElement, ...], ...] = tuple(tuple(field(x) for x in g) for g in gamma)
        if any(len(g) != self.dim_v for g in self.gamma):
            raise DimensionMismatch("gamma generators must have dim_v coordinates")
        self.subset_cap = subset_cap
        self._offset_lattices: dict[tuple, Lattice] = {}
        self._projected: dict[tuple, Lattice] = {}
        self._stabilizers: dict[tuple, Lattice] = {}
        raw = [HyperplaneClass.normalized([field(x) for x in h.normal], field(h.offset), h.provenance)
               for h in hyperplanes]
        if any(len(h.normal) != self.dim_v for h in raw):
            raise DimensionMismatch("hyperplane normals must have dim_v coordinates")
        if rank([list(h.normal) for h in raw], field) != self.dim_v:
            raise NotSpanning("hyperplane normals do not span V")
        self.hyperplanes: tuple[HyperplaneClass, ...] = tuple(self._dedupe(raw))

    # -- basic data ---------------------------------------------------------

    @property
    def gamma_rank(self) -> int:
        return len(self.gamma)

    @property
    def nu(self) -> Fraction:
        return Fraction(self.gamma_rank, self.dim_v)

    @property
    def normals(self) -> list[tuple[FieldElement, ...]]:
        return [h.normal for h in self.hyperplanes]

    def _pairings(self, normal: Sequence[FieldElement]) -> list[FieldElement]:
        return [dot(normal, g) for g in self.gamma]

    def offset_lattice(self, normal: Sequence[FieldElement]) -> Lattice:
        """<n, Gamma> as a lattice in the expanded coordinates of the field."""
        key = tuple(x.coeffs for x in normal)
        lat = self._offset_lattices.get(key)
        if lat is None:
            lat = Lattice.from_generators([p.coeffs for p in self._pairings(normal)], self.field.degree)
            self._offset_lattices[key] = lat
        return lat

    def _dedupe(self, hyperplanes: list[HyperplaneClass]) -> list[HyperplaneClass]:
        seen: dict[tuple, int] = {}
        out: list[HyperplaneClass] = []
        for h in hyperplanes:
            key = (tuple(x.coeffs for x in h.normal), self.offset_lattice(h.normal).reduce(h.offset.coeffs))
            if key in seen:
                i = seen[key]
                merged = out[i].provenance + h.provenance
                out[i] = HyperplaneClass(out[i].normal, out[i].offset, merged)
                continue
            seen[key] = len(out)
            out.append(h)
        return out

    def group_vector(self, coeffs: Sequence[int]) -> tuple[FieldElement, ...]:
        """The element sum_k c_k g_k of V."""
        acc = [self.field.zero] * self.dim_v
        for c, g in zip(coeffs, self.gamma):
            if c:
                acc = [a + c * x for a, x in zip(acc, g)]
        return tuple(acc)

    # -- stabilizers and projections -----------------------------------------

    def stabilizer(self, normals: Sequence[Sequence[FieldElement]]) -> Lattice:
        """Saturated sublattice of Z^r translating into the common kernel of ``normals``."""
        r = self.gamma_rank
        if not normals:
            return Lattice.standard(r)
        key = canonical_span_key(normals, self.field)
        lat = self._stabilizers.get(key)
        if lat is not None:
            return lat
        rows: list[list[Fraction]] = []
        for n in normals:
            cols = [p.coeffs for p in self._pairings(n)]
            for t in range(self.field.degree):
                rows.append([cols[k][t] for k in range(r)])
        lat = integer_kernel(rows, r)
        self._stabilizers[key] = lat
        return lat

    def _projected_lattice(self, dir_key: tuple, basis_rows: Sequence[Sequence[FieldElement]],
                           group: Sequence[Sequence[FieldElement]], group_key) -> Lattice:
        key = (dir_key, group_key)
        lat = self._projected.get(key)
        if lat is None:
            gens = [rational_coordinates([dot(b, g) for b in basis_rows]) for g in group]
            lat = Lattice.from_generators(gens, len(basis_rows) * self.field.degree)
            self._projected[key] = lat
        return lat

    def projected_group(self, transversal: Sequence[int], subset: Sequence[int]) -> ProjectedGroup:
        """Gamma_A: Gamma projected onto dir(W_A) along dir(W_{A^c}).

        ``transversal`` lists m hyperplane indices with independent normals;
        ``subset`` gives positions (0-based) inside it.
        """
        m = self.dim_v
        if len(transversal) != m:
            raise NotTransversal("need exactly dim V hyperplanes")
        rows = [list(self.hyperplanes[i].normal) for i in transversal]
        if rank(rows, self.field) != m:
            raise NotTransversal("normals of the chosen hyperplanes are dependent")
        a = tuple(sorted(set(subset)))
        comp = tuple(i for i in range(m) if i not in a)
        images = []
        for g in self.gamma:
            rhs = [self.field.zero if i in a else dot(rows[i], g) for i in range(m)]
            x = solve(rows, rhs, self.field)
            images.append(tuple(x))
        rk = span_rank([rational_coordinates(x) for x in images]) if images else 0
        return ProjectedGroup(a, comp, tuple(images), rk)

    # -- core enumeration ---------------------------------------------------

    def _subsets(self, size: int, fixed_rows: Sequence[Sequence[FieldElement]]):
        """Lexicographic index subsets whose normals, with ``fixed_rows``,
        are linearly independent.  Dependent prefixes are pruned."""
        normals = self.normals
        f = len(self.hyperplanes)

        def reduce_row(basis, pivots, row):
            row = list(row)
            for b, p in zip(basis, pivots):
                c = row[p]
                if c != 0:
                    row = [x - c * y for x, y in zip(row, b)]
            return row

        def add_row(basis, pivots, row):
            p = next((j for j, x in enumerate(row) if x != 0), None)
            if p is None:
                return None
            inv = row[p].inverse()
            row = [x * inv for x in row]
            return basis + [row], pivots + [p]

        base_basis: list = []
        base_piv: list = []
        for row in fixed_rows:
            res = add_row(base_basis, base_piv, reduce_row(base_basis, base_piv, row))
            if res is None:
                raise DimensionMismatch("fixed rows are dependent")
            base_basis, base_piv = res

        def rec(start, chosen, basis, pivots):
            if len(chosen) == size:
                yield tuple(chosen)
                return
            for i in range(start, f - (size - len(chosen)) + 1):
                res = add_row(basis, pivots, reduce_row(basis, pivots, normals[i]))
                if res is None:
                    continue
                yield from rec(i + 1, chosen + [i], res[0], res[1])

        if size == 0:
            yield ()
            return
        yield from rec(0, [], base_basis, base_piv)

    def _subset_orbits(self, subset: Sequence[int], level: int, fixed_rows=(), fixed_values=(),
                       group=None, group_key="gamma"):
        """Orbit classes contributed by one defining subset.

        Returns (dir_key, basis_rows, projected lattice, [(offset_key, values)]),
        or INFINITE as the class list when the coset count is infinite.
        """
        nf = self.field
        group = self.gamma if group is None else group
        rows = [list(r) for r in fixed_rows] + [list(self.hyperplanes[i].normal) for i in subset]
        values = list(fixed_values) + [self.hyperplanes[i].offset for i in subset]
        red, _, trans = rref(rows, nf, with_transform=True)
        if len(red) != len(rows):
            raise DimensionMismatch("defining normals are dependent")
        dir_key = tuple(tuple(x.coeffs for x in row) for row in red)
        k = len(red)
        base = [dot(trans[j], values) for j in range(k)]
        gens = []
        nfixed = len(fixed_rows)
        for t, i in enumerate(subset):
            col = [trans[j][nfixed + t] for j in range(k)]
            for o in self.offset_lattice(self.hyperplanes[i].normal).basis:
                oe = FieldElement(nf, tuple(o))
                gens.append(rational_coordinates([c * oe for c in col]))
        pg = self._projected_lattice(dir_key, red, group, group_key)
        offsets = Lattice.from_generators(gens + list(pg.basis), k * nf.degree)
        reps = coset_representatives(pg, offsets)
        if reps == INFINITE:
            return dir_key, red, pg, INFINITE
        base_e = rational_coordinates(base)
        out = []
        for rep in reps:
            pt = tuple(a + b for a, b in zip(base_e, rep))
            key = pg.reduce(pt)
            out.append((key, _chunk(key, nf)))
        return dir_key, red, pg, out

    def _collect(self, level: int, fixed_rows=(), fixed_values=(), group=None, group_key="gamma"):
        m = self.dim_v
        size = m - level - len(fixed_rows)
        if size < 0:
            raise DimensionMismatch("level above the ambient space")
        records: dict[tuple, _SpaceRecord] = {}
        dir_order: list[tuple] = []
        count = 0
        for subset in self._subsets(size, fixed_rows):
            count += 1
            if count > self.subset_cap:
                raise Incomplete(f"more than {self.subset_cap} generating subsets at level {level}")
            dir_key, red, _, classes = self._subset_orbits(subset, level, fixed_rows, fixed_values,
                                                            group, group_key)
            if classes == INFINITE:
                raise InfiniteOrbitSet(subset, level)
            if dir_key not in dir_order:
                dir_order.append(dir_key)
            for key, vals in classes:
                rec = records.get((dir_key, key))
                if rec is None:
                    records[(dir_key, key)] = _SpaceRecord(dir_key, red, key, list(vals), [subset])
                elif subset not in rec.provenance:
                    rec.provenance.append(subset)
        rank_of = {d: i for i, d in enumerate(dir_order)}
        return sorted(records.values(), key=lambda r: (rank_of[r.dir_key], r.offset_key))

    def _point_on(self, basis_rows, values) -> tuple[FieldElement, ...]:
        return tuple(solve([list(r) for r in basis_rows], list(values), self.field))

    def _incident(self, basis_rows) -> int:
        k = len(basis_rows)
        return sum(1 for n in self.normals
                   if rank([list(r) for r in basis_rows] + [list(n)], self.field) == k)

    def enumerate_level(self, level: int) -> list[SingularOrbitClass]:
        """Gamma-orbit classes of singular ``level``-spaces (ids are stable)."""
        if not 0 <= level <= self.dim_v - 1:
            raise DimensionMismatch("level must lie in 0..dim V - 1")
        records = self._collect(level)
        out = []
        for i, rec in enumerate(records):
            out.append(SingularOrbitClass(
                id=f"L{level}-{i:03d}",
                level=level,
                normal_basis=tuple(tuple(r) for r in rec.normal_basis),
                offset_values=tuple(rec.values),
                offset_point=self._point_on(rec.normal_basis, rec.values),
                stabilizer=self.stabilizer(rec.normal_basis),
                provenance=tuple(rec.provenance),
                incident_hyperplanes=self._incident(rec.normal_basis),
                direction_key=rec.dir_key,
            ))
        return out

    def point_orbits_on(self, transversal: Sequence[int]):
        """Orbit classes of points cut out by one transversal m-subset:
        SNF coset representatives (field vectors), or INFINITE."""
        if len(transversal) != self.dim_v:
            raise NotTransversal("need exactly dim V hyperplanes")
        rows = [list(self.hyperplanes[i].normal) for i in transversal]
        if rank(rows, self.field) != self.dim_v:
            raise NotTransversal("normals of the chosen hyperplanes are dependent")
        _, _, _, classes = self._subset_orbits(tuple(transversal), 0)
        if classes == INFINITE:
            return INFINITE
        return [vals for _, vals in classes]

    def global_key(self, cls_or_rows, values=None) -> tuple:
        if isinstance(cls_or_rows, SingularOrbitClass):
            rows, values = cls_or_rows.normal_basis, cls_or_rows.offset_values
        else:
            rows = cls_or_rows
        dir_key = tuple(tuple(x.coeffs for x in row) for row in rows)
        pg = self._projected_lattice(dir_key, rows, self.gamma, "gamma")
        return dir_key, pg.reduce(rational_coordinates(values))

    def relative_level(self, theta: SingularOrbitClass, level: int,
                       global_index: dict | None = None) -> list[tuple[tuple, str | None]]:
        """Gamma^Theta-orbits of singular ``level``-spaces inside W_Theta.

        Each entry is (relative key, id of the global class) - the global id
        is looked up in ``global_index`` (global key -> id) when supplied.
        """
        if level >= theta.level:
            raise DimensionMismatch("relative level must be below the level of Theta")
        group = [self.group_vector(c) for c in theta.stabilizer.int_basis()]
        records = self._collect(level, theta.normal_basis, theta.offset_values, group,
                                group_key=("stab", theta.direction_key))
        out = []
        for rec in records:
            gid = None
            if global_index is not None:
                gkey = self.global_key(rec.normal_basis, rec.values)
                gid = global_index.get(gkey)
                if gid is None:
                    raise QuasitopError(f"relative class inside {theta.id} has no global class")
            out.append(((rec.dir_key, rec.offset_key), gid))
        return out

    def equivalent(self, rows1, values1, rows2, values2) -> bool:
        """Whether two singular spaces (normal rows + values) lie in one Gamma-orbit."""
        if len(rows1) != len(rows2):
            return False
        k1 = canonical_span_key(rows1, self.field)
        if k1 != canonical_span_key(rows2, self.field):
            return False
        p1 = self._point_on(rows1, values1)
        p2 = self._point_on(rows2, values2)
        red, _ = rref([list(r) for r in rows1], self.field)
        diff = [dot(r, [a - b for a, b in zip(p1, p2)]) for r in red]
        pg = self._projected_lattice(k1, red, self.gamma, "gamma")
        return rational_coordinates(diff) in pg

    def tables(self) -> OrbitTables:
        """All global levels plus every relative table."""
        m = self.dim_v
        levels = {l: self.enumerate_level(l) for l in range(m)}
        index = {c.id: c for cs in levels.values() for c in cs}
        gindex = {self.global_key(c): c.id for cs in levels.values() for c in cs}
        relative: dict[str, dict[int, list[str]]] = {}
        for top in range(1, m):
            for theta in levels[top]:
                relative[theta.id] = {}
                for l in range(top):
                    entries = self.relative_level(theta, l, gindex)
                    ids = [gid for _, gid in entries]
                    if len(set(ids)) != len(ids):
                        raise QuasitopError(f"two Gamma^Theta classes in {theta.id} share a Gamma-orbit")
                    relative[theta.id][l] = sorted(ids)
        return OrbitTables(m, levels, relative, index)


def indecomposable_components(normals: Sequence[Sequence[FieldElement]], field: NumberField) -> list[list[int]]:
    """Partition of the normal indices into indecomposable blocks.

    Picks the greedy basis B (by index), expresses every other normal in
    B-coordinates and joins two basis vectors whenever some other normal
    has nonzero coordinates on both.
    """
    normals = [list(n) for n in normals]
    dim = len(normals[0]) if normals else 0
    if rank(normals, field) != dim:
        raise NotSpanning("normals do not span V")
    basis: list[int] = []
    for i, n in enumerate(normals):
        if rank([normals[j] for j in basis] + [n], field) > len(basis):
            basis.append(i)
        if len(basis) == dim:
            break
    parent = {b: b for b in basis}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    bmat = [[normals[b][j] for b in basis] for j in range(dim)]  # columns are basis vectors
    support: dict[int, list[int]] = {}
    for i, n in enumerate(normals):
        if i in parent:
            continue
        coeffs = solve(bmat, n, field)
        sup = [basis[k] for k, c in enumerate(coeffs) if c != 0]
        support[i] = sup
        for a, b in itertools.combinations(sup, 2):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    blocks: dict[int, list[int]] = {}
    for b in basis:
        blocks.setdefault(find(b), []).append(b)
    for i, sup in support.items():
        blocks[find(sup[0])].append(i)
    parts = sorted(sorted(v) for v in blocks.values())
    # sanity: distinct blocks span independent subspaces
    ranks = [rank([normals[i] for i in p], field) for p in parts]
    if sum(ranks) != dim:
        raise QuasitopError("decomposition blocks are not independent")
    return parts


def is_indecomposable(normals, field: NumberField) -> bool:
    return len(indecomposable_components(normals, field)) == 1
