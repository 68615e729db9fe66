"""Integer lattice algebra: Hermite and Smith normal forms, kernels,
saturation, indices and coset enumeration.

Matrices are plain lists of row lists.  A :class:`Lattice` may live in
Q^n (rational entries); it is always stored by its row Hermite basis, so
two lattices are equal exactly when their stored bases are.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DimensionMismatch, NotASubgroup

INFINITE = "INFINITE"


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    if any(len(row) != inner for row in a):
        raise DimensionMismatch("inner dimensions differ")
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def transpose(m: Sequence[Sequence], cols: int | None = None) -> list[list]:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form: returns (H, U) with U unimodular and U*M = H.

    H is in echelon form with positive pivots, every entry above a pivot
    reduced into [0, pivot), and zero rows at the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [[int(x) for x in row] for row in m]
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            b = h[i][c]
            if b == 0:
                continue
            a = h[r][c]
            g, x, y = xgcd(a, b)
            p, q = -b // g, a // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [p * s + q * t for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [p * s + q * t for s, t in zip(ur, ui)]
        piv = h[r][c]
        if piv == 0:
            continue
        if piv < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
            piv = -piv
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def snf(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form: returns (S, U, V) with U*M*V = S, U and V unimodular,
    S diagonal with d_1 | d_2 | ... and nonnegative entries."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = [[int(x) for x in row] for row in m]
    u = identity(rows)
    v = identity(cols)

    def row_combine(i, j, x, y, p, q):
        # (row_i, row_j) <- (x*row_i + y*row_j, p*row_i + q*row_j)
        for mat in (s, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * a + y * b for a, b in zip(ri, rj)]
            mat[j] = [p * a + q * b for a, b in zip(ri, rj)]

    def col_combine(i, j, x, y, p, q):
        for mat in (s, v):
            for row in mat:
                a, b = row[i], row[j]
                row[i] = x * a + y * b
                row[j] = p * a + q * b

    for t in range(min(rows, cols)):
        # choose the smallest nonzero entry of the remaining block as pivot
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            row_combine(t, i, 0, 1, 1, 0)
        if j != t:
            col_combine(t, j, 0, 1, 1, 0)
        while True:
            for i in range(t + 1, rows):
                b = s[i][t]
                if b:
                    a = s[t][t]
                    if b % a == 0:
                        row_combine(t, i, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = xgcd(a, b)
                        row_combine(t, i, x, y, -b // g, a // g)
            for j in range(t + 1, cols):
                b = s[t][j]
                if b:
                    a = s[t][t]
                    if b % a == 0:
                        col_combine(t, j, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = xgcd(a, b)
                        col_combine(t, j, x, y, -b // g, a // g)
            if any(s[i][t] for i in range(t + 1, rows)):
                continue
            piv = s[t][t]
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if s[i][j] % piv), None)
            if bad is None:
                break
            row_combine(t, bad[0], 1, 1, 0, 1)
        if s[t][t] < 0:
            for mat in (s, u):
                mat[t] = [-x for x in mat[t]]
    return s, u, v


def snf_diagonal(m: Sequence[Sequence[int]]) -> list[int]:
    s, _, _ = snf(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def unimodular_inverse(u: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(u)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(u)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = [[x for x in row[n:]] for row in aug]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


# -- rational helpers ---------------------------------------------------------

def _lcm_denominator(rows: Iterable[Sequence]) -> int:
    d = 1
    for row in rows:
        for x in row:
            if isinstance(x, Fraction):
                d = d * x.denominator // math.gcd(d, x.denominator)
    return d


def clear_denominators(rows: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    d = _lcm_denominator(rows)
    return [[int(Fraction(x) * d) for x in row] for row in rows], d


def rational_rank(rows: Sequence[Sequence]) -> int:
    work = [[Fraction(x) for x in row] for row in rows if any(row)]
    if not work:
        return 0
    rank = 0
    cols = len(work[0])
    for c in range(cols):
        p = next((i for i in range(rank, len(work)) if work[i][c] != 0), None)
        if p is None:
            continue
        work[rank], work[p] = work[p], work[rank]
        pr = work[rank]
        inv = 1 / pr[c]
        for i in range(rank + 1, len(work)):
            f = work[i][c]
            if f:
                f *= inv
                work[i] = [x - f * y for x, y in zip(work[i], pr)]
        rank += 1
        if rank == len(work):
            break
    return rank


def span_rank(vs: Sequence[Sequence]) -> int:
    """Rank over Q of the span of the given rational vectors."""
    if not vs:
        return 0
    n = len(vs[0])
    if any(len(v) != n for v in vs):
        raise DimensionMismatch("vectors have different lengths")
    return rational_rank(vs)


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x in Q^ncols : rows . x = 0}."""
    work = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -work[i][f]
        basis.append(x)
    return basis


# -- lattices ----------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Finitely generated subgroup of Q^n stored by its row Hermite basis."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence], ambient_dim: int | None = None) -> "Lattice":
        gens = [tuple(Fraction(x) for x in g) for g in gens]
        if ambient_dim is None:
            if not gens:
                raise DimensionMismatch("ambient dimension needed for an empty generator list")
            ambient_dim = len(gens[0])
        if any(len(g) != ambient_dim for g in gens):
            raise DimensionMismatch("generator length differs from ambient dimension")
        gens = [g for g in gens if any(g)]
        if not gens:
            return cls(ambient_dim, ())
        ints, d = clear_denominators(gens)
        h, _ = hnf(ints)
        basis = tuple(tuple(Fraction(x, d) for x in row) for row in h if any(row))
        return cls(ambient_dim, basis)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Lattice":
        return cls(ambient_dim, ())

    @classmethod
    def standard(cls, ambient_dim: int) -> "Lattice":
        return cls(ambient_dim, tuple(tuple(Fraction(int(i == j)) for j in range(ambient_dim))
                                      for i in range(ambient_dim)))

    def _pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(row) if x != 0) for row in self.basis]

    def reduce(self, v: Sequence) -> tuple[Fraction, ...]:
        """Canonical representative of the coset v + L."""
        v = [Fraction(x) for x in v]
        for row, p in zip(self.basis, self._pivots()):
            q = math.floor(v[p] / row[p])
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def coordinates(self, v: Sequence) -> tuple[int, ...] | None:
        """Integer coordinates of v in the stored basis, or None if v is not in L."""
        v = [Fraction(x) for x in v]
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length differs from ambient dimension")
        coords = []
        for row, p in zip(self.basis, self._pivots()):
            q = v[p] / row[p]
            if q.denominator != 1:
                return None
            coords.append(int(q))
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        if any(v):
            return None
        return tuple(coords)

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(b in self for b in other.basis)

    def join(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(list(self.basis) + list(other.basis), self.ambient_dim)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.basis for x in row)

    def int_basis(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("lattice is not contained in Z^n")
        return [[int(x) for x in row] for row in self.basis]

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.basis]


def integer_kernel(m: Sequence[Sequence], ncols: int | None = None) -> Lattice:
    """Lattice {c in Z^ncols : M c = 0}; saturated by construction."""
    if ncols is None:
        if not m:
            raise DimensionMismatch("column count needed for an empty matrix")
        ncols = len(m[0])
    rows = [row for row in m if any(row)]
    if any(len(row) != ncols for row in rows):
        raise DimensionMismatch("matrix rows differ in length")
    if not rows:
        return Lattice.standard(ncols)
    ints = [clear_denominators([row])[0][0] for row in rows]
    h, u = hnf(transpose(ints))
    kernel = [u[i] for i in range(ncols) if not any(h[i])]
    return Lattice.from_generators(kernel, ncols)


def saturation(lat: Lattice) -> Lattice:
    """Z^n intersected with the rational span of ``lat``."""
    if lat.rank == 0:
        return lat
    perp = rational_nullspace(lat.basis, lat.ambient_dim)
    return integer_kernel(perp, lat.ambient_dim)


def subgroup_index(sub: Lattice, sup: Lattice):
    """[sup : sub] as an int, or INFINITE when the ranks differ."""
    if sub.ambient_dim != sup.ambient_dim:
        raise DimensionMismatch("lattices live in different ambient spaces")
    coords = []
    for b in sub.basis:
        c = sup.coordinates(b)
        if c is None:
            raise NotASubgroup("sub is not contained in sup")
        coords.append(c)
    if sub.rank < sup.rank:
        return INFINITE
    if sup.rank == 0:
        return 1
    diag = snf_diagonal(coords)
    return math.prod(diag)


def coset_representatives(sub: Lattice, sup: Lattice) -> list[tuple[Fraction, ...]]:
    """Representatives of sup/sub ordered by their Smith coordinates.

    Raises NotASubgroup on failed containment; returns INFINITE on a rank
    deficit.
    """
    idx = subgroup_index(sub, sup)
    if idx == INFINITE:
        return INFINITE  # type: ignore[return-value]
    if sup.rank == 0:
        return [tuple(Fraction(0) for _ in range(sup.ambient_dim))]
    coords = [sup.coordinates(b) for b in sub.basis]
    s, _, v = snf(coords)
    vinv = unimodular_inverse(v)
    diag = [s[i][i] for i in range(sup.rank)]
    reps = []
    for y in itertools.product(*(range(d) for d in diag)):
        x = [sum(y[k] * vinv[k][j] for k in range(len(y))) for j in range(sup.rank)]
        vec = tuple(sum((x[k] * sup.basis[k][j] for k in range(sup.rank)), Fraction(0))
                    for j in range(sup.ambient_dim))
        reps.append(vec)
    return reps


def wedge_coordinates(vs: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Plucker coordinates of v_1 ^ ... ^ v_k over lexicographic k-subsets."""
    k = len(vs)
    if k == 0:
        raise DimensionMismatch("need at least one vector")
    r = len(vs[0])
    if any(len(v) != r for v in vs) or k > r:
        raise DimensionMismatch("wedge needs k <= r vectors of a common length r")
    out = []
    for cols in itertools.combinations(range(r), k):
        out.append(det_int([[int(v[c]) for c in cols] for v in vs]))
    return tuple(out)
