"""Gaussian elimination over an exact field (Fractions or FieldElements)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .numberfield import FieldElement, NumberField, rational_coordinates


def _unit(field: NumberField | None):
    if field is None:
        return Fraction(0), Fraction(1)
    return field.zero, field.one


def rref(rows: Sequence[Sequence], field: NumberField | None = None, *,
         with_transform: bool = False):
    """Reduced row echelon form.

    Returns (R, pivots) or, with ``with_transform``, (R, pivots, T) where
    T*rows = R.  Zero rows are dropped from R (and from T).
    """
    zero, one = _unit(field)
    n = len(rows)
    work = [list(r) for r in rows]
    trans = [[one if i == j else zero for j in range(n)] for i in range(n)] if with_transform else None
    ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, n) if work[i][c] != 0), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        if trans is not None:
            trans[r], trans[p] = trans[p], trans[r]
        inv = one / work[r][c]
        work[r] = [x * inv for x in work[r]]
        if trans is not None:
            trans[r] = [x * inv for x in trans[r]]
        for i in range(n):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
                if trans is not None:
                    trans[i] = [x - f * y for x, y in zip(trans[i], trans[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    if with_transform:
        return work[:r], pivots, trans[:r]
    return work[:r], pivots


def rank(rows: Sequence[Sequence], field: NumberField | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, field)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, field: NumberField | None = None) -> list[list]:
    """Basis of {x : rows . x = 0}."""
    zero, one = _unit(field)
    if not rows:
        return [[one if i == j else zero for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for i, pc in enumerate(pivots):
            x[pc] = -red[i][f]
        basis.append(x)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, field: NumberField | None = None):
    """One solution x of rows . x = rhs (free variables zero), or None."""
    zero, _ = _unit(field)
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return x


def dot(a: Sequence, b: Sequence):
    acc = None
    for x, y in zip(a, b):
        term = x * y
        acc = term if acc is None else acc + term
    return acc if acc is not None else 0


def gram_schmidt(vs: Sequence[Sequence[FieldElement]]) -> list[list[FieldElement]]:
    """Orthogonal (not normalized) basis of the span, no square roots."""
    out: list[list[FieldElement]] = []
    norms = []
    for v in vs:
        w = list(v)
        for u, nu in zip(out, norms):
            c = dot(w, u) / nu
            w = [a - c * b for a, b in zip(w, u)]
        if any(x != 0 for x in w):
            out.append(w)
            norms.append(dot(w, w))
    return out


def expand(vectors: Sequence[Sequence[FieldElement]]) -> list[tuple[Fraction, ...]]:
    return [rational_coordinates(v) for v in vectors]


def canonical_span_key(rows: Sequence[Sequence[FieldElement]], field: NumberField) -> tuple:
    """Hashable key identifying the field span of ``rows``."""
    red, _ = rref(rows, field)
    return tuple(tuple(x.coeffs for x in row) for row in red)
