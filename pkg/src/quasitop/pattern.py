"""Point patterns of a projection scheme with the canonical window.

The window K = pi-perp([0,1]^N) is a zonotope; it is handled through its
facet inequalities lo <= <eta, y> <= hi with eta in E-perp, so for
x in R^N the test pi-perp(x) in K reads lo <= <eta, x> <= hi directly.
Candidate lattice points are pruned with outward-rounded fixed-point
enclosures and then filtered exactly.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import IOFailure, UnsupportedDimension
from .exact.linalg import dot, nullspace
from .exact.numberfield import FieldElement, field_sign
from .scheme import InternalData, ProjectionScheme, derive_internal

PRECISION_BITS = 64
DECIMAL_DIGITS = 12


@dataclass(frozen=True)
class Facet:
    eta: tuple[FieldElement, ...]  # vector of R^N inside E-perp
    normal: tuple[FieldElement, ...]  # coordinates of eta in the E-perp basis
    lo: FieldElement
    hi: FieldElement


@dataclass(frozen=True)
class ZonotopeH:
    facets: tuple[Facet, ...]

    @property
    def facet_count(self) -> int:
        return 2 * len(self.facets)

    def contains(self, x: Sequence[FieldElement]) -> bool:
        for f in self.facets:
            v = dot(f.eta, x)
            if field_sign(v - f.lo) < 0 or field_sign(f.hi - v) < 0:
                return False
        return True

    def tight(self, x: Sequence[FieldElement]) -> list[tuple[int, str]]:
        out = []
        for i, f in enumerate(self.facets):
            v = dot(f.eta, x)
            if v == f.lo:
                out.append((i, "lo"))
            if v == f.hi:
                out.append((i, "hi"))
        return out


@dataclass
class PointPattern:
    scheme: ProjectionScheme
    u: tuple[FieldElement, ...]
    radius: Fraction
    strip_points: list[tuple[int, ...]] = field(default_factory=list)
    projected_points: list[tuple[FieldElement, ...]] = field(default_factory=list)

    def __len__(self):
        return len(self.strip_points)


def _internal(s) -> InternalData:
    return s if isinstance(s, InternalData) else derive_internal(s)


def zonotope_facets(s) -> ZonotopeH:
    data = _internal(s)
    sch = data.scheme
    nf = sch.field
    n = sch.N - sch.d
    cols = sch.columns()
    seen = set()
    facets = []
    for J in itertools.combinations(range(sch.N), n - 1):
        unit = [[nf.one if i == j else nf.zero for i in range(sch.N)] for j in J]
        sol = nullspace(cols + unit, sch.N, nf)
        if len(sol) != 1:
            continue  # pi-perp(e^J) has dimension below n - 1
        eta = sol[0]
        if next(x for x in eta if x != 0) < 0:
            eta = [-x for x in eta]
        lead = next(x for x in eta if x != 0)
        key = tuple((x / lead).coeffs for x in eta)
        if key in seen:
            continue
        seen.add(key)
        lo = sum((x for x in eta if x < 0), nf.zero)
        hi = sum((x for x in eta if x > 0), nf.zero)
        normal = tuple(dot(row, eta) for row in data.proj_F)
        facets.append(Facet(tuple(eta), normal, lo, hi))
    return ZonotopeH(tuple(facets))


# -- fixed-point enclosures ----------------------------------------------------

def _enc(x, bits=PRECISION_BITS) -> tuple[int, int]:
    """Integer interval containing x * 2^bits."""
    if isinstance(x, FieldElement):
        lo, hi = x.enclosure(Fraction(1, 1 << (bits + 2)))
    else:
        lo = hi = Fraction(x)
    scale = 1 << bits
    return math.floor(lo * scale), math.ceil(hi * scale)


def _imul(z: int, iv: tuple[int, int]) -> tuple[int, int]:
    a, b = z * iv[0], z * iv[1]
    return (a, b) if a <= b else (b, a)


def _iadd(a, b):
    return a[0] + b[0], a[1] + b[1]


def _range_mul(iv, zlo: int, zhi: int):
    """Enclosure of z * c for z in [zlo, zhi] and c in iv."""
    cands = [zlo * iv[0], zlo * iv[1], zhi * iv[0], zhi * iv[1]]
    return min(cands), max(cands)


def generate_pattern(s, u=None, radius=0) -> PointPattern:
    """Lattice points z with pi-perp(z + u) in K and |pi(z + u)| <= radius."""
    data = _internal(s)
    sch = data.scheme
    nf = sch.field
    N = sch.N
    u = tuple(nf(x) for x in (sch.u if u is None else u))
    R = Fraction(radius)
    if R < 0:
        raise ValueError("radius must be nonnegative")
    zono = zonotope_facets(data)
    # |z + u|^2 = |pi(z+u)|^2 + |pi-perp(z+u)|^2 <= R^2 + rho^2, rho bounding K
    rho = Fraction(0)
    for i in range(N):
        sq = sum((w[i] * w[i] / dot(w, w) for w in data.f_basis), nf.zero)
        rho += Fraction(math.isqrt(math.ceil(sq.enclosure(Fraction(1, 1 << 20))[1] * (1 << 40))) + 1, 1 << 20)
    big = R * R + rho * rho
    bound = Fraction(math.isqrt(math.ceil(big * (1 << 40))) + 1, 1 << 20)
    u_enc = [x.enclosure(Fraction(1, 1 << 40)) for x in u]
    box = [(math.ceil(-bound - ue[1]), math.floor(bound - ue[0])) for ue in u_enc]

    bits = PRECISION_BITS
    scale = 1 << bits
    eta_enc = [[_enc(x) for x in f.eta] for f in zono.facets]
    lo_enc = [_enc(f.lo) for f in zono.facets]
    hi_enc = [_enc(f.hi) for f in zono.facets]
    u_fx = [_enc(x) for x in u]
    # contribution of coordinate i to <eta, z + u>: eta_i * z_i + eta_i * u_i
    shift = []
    for fe in eta_enc:
        acc = (0, 0)
        for i in range(N):
            e, ue = fe[i], u_fx[i]
            prods = [e[0] * ue[0], e[0] * ue[1], e[1] * ue[0], e[1] * ue[1]]
            acc = _iadd(acc, (min(prods) // scale, -((-max(prods)) // scale)))
        shift.append(acc)
    # remaining[i][f]: enclosure of sum_{j >= i} eta_j z_j over the box
    remaining = [[(0, 0)] * len(eta_enc) for _ in range(N + 1)]
    for i in range(N - 1, -1, -1):
        remaining[i] = [_iadd(remaining[i + 1][k], _range_mul(eta_enc[k][i], *box[i]))
                        for k in range(len(eta_enc))]

    candidates: list[tuple[int, ...]] = []
    nfac = len(eta_enc)

    ball = (bound * scale) ** 2

    def sq_low(zi, i):
        a, b = zi * scale + u_fx[i][0], zi * scale + u_fx[i][1]
        return 0 if a <= 0 <= b else min(a * a, b * b)

    def rec(i, z, partial, sq):
        if i == N:
            candidates.append(tuple(z))
            return
        for zi in range(box[i][0], box[i][1] + 1):
            sq_i = sq + sq_low(zi, i)
            if sq_i > ball:
                continue
            nxt = []
            ok = True
            for k in range(nfac):
                p = _iadd(partial[k], _imul(zi, eta_enc[k][i]))
                rest = _iadd(p, remaining[i + 1][k])
                tot = _iadd(rest, shift[k])
                if tot[1] < lo_enc[k][0] - 2 or tot[0] > hi_enc[k][1] + 2:
                    ok = False
                    break
                nxt.append(p)
            if ok:
                z.append(zi)
                rec(i + 1, z, nxt, sq_i)
                z.pop()

    rec(0, [], [(0, 0)] * nfac, 0)

    pat = PointPattern(sch, u, R)
    r2 = nf(R * R)
    for z in candidates:
        x = [nf(zi) + ui for zi, ui in zip(z, u)]
        if not zono.contains(x):
            continue
        proj = tuple(dot(row, x) for row in data.proj_E)
        norm2 = _norm_sq(data, x)
        if field_sign(r2 - norm2) < 0:
            continue
        pat.strip_points.append(z)
        pat.projected_points.append(proj)
    return pat


def _norm_sq(data: InternalData, x) -> FieldElement:
    nf = data.scheme.field
    total = nf.zero
    for row in data.proj_E:
        # row = e'/|e'|^2, so <x, row>^2 / <row, row> = <x, e'>^2 / |e'|^2
        c = dot(row, x)
        total = total + c * c / dot(row, row)
    return total


def singularity_scan(s, u=None, radius=0) -> list[dict]:
    """Lattice points in the window whose internal image lies on a facet.

    An empty result only means no witness within the radius.
    """
    data = _internal(s)
    zono = zonotope_facets(data)
    pat = generate_pattern(data, u, radius)
    nf = data.scheme.field
    out = []
    for z in pat.strip_points:
        x = [nf(zi) + ui for zi, ui in zip(z, pat.u)]
        tight = zono.tight(x)
        if tight:
            out.append({"z": z, "facets": tight})
    return out


# -- export ------------------------------------------------------------------

def export(p: PointPattern, fmt: str, path, *, axes: tuple[int, int] = (0, 1)) -> None:
    fmt = fmt.lower()
    try:
        if fmt == "csv":
            _write_csv(p, Path(path))
        elif fmt == "svg":
            _write_svg(p, Path(path), axes)
        else:
            raise ValueError(f"unknown export format {fmt!r}")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def _header(p: PointPattern) -> list[str]:
    N, d = p.scheme.N, p.scheme.d
    return ([f"z{i + 1}" for i in range(N)] + [f"proj{j + 1}" for j in range(d)]
            + [f"proj{j + 1}_decimal" for j in range(d)])


def _field_str(x: FieldElement) -> str:
    return " ".join(str(c) for c in x.coeffs)


def _write_csv(p: PointPattern, path: Path) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_header(p))
        for z, proj in zip(p.strip_points, p.projected_points):
            w.writerow([str(v) for v in z] + [_field_str(x) for x in proj]
                       + [x.to_decimal(DECIMAL_DIGITS) for x in proj])


def _write_svg(p: PointPattern, path: Path, axes) -> None:
    d = p.scheme.d
    if d > 3:
        raise UnsupportedDimension(f"SVG export supports d <= 3, got d = {d}")
    data = derive_internal(p.scheme)
    # orthonormal display coordinates: a_j * |e'_j|
    scales = [math.sqrt(1.0 / float(dot(row, row))) for row in data.proj_E]
    if d == 1:
        pts = [(float(q[0]) * scales[0], 0.0) for q in p.projected_points]
    else:
        a, b = axes
        pts = [(float(q[a]) * scales[a], float(q[b]) * scales[b]) for q in p.projected_points]
    R = float(p.radius) or 1.0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{-R:.6f} {-R:.6f} {2 * R:.6f} {2 * R:.6f}">',
    ]
    r = R / 200
    for x, y in pts:
        lines.append(f'  <circle cx="{x:.6f}" cy="{-y:.6f}" r="{r:.6f}"/>')
    lines.append("</svg>")
    path.write_text("\n".join(lines) + "\n")
