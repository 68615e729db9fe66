"""Rank formulas for the pattern homology in codimension 1 to 3, the
Euler characteristic as a signed chain count, K-theory rank assembly and
the finite-generation obstruction checks."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .arrangement import Arrangement, OrbitTables, indecomposable_components
from .errors import (
    HypothesisViolated,
    Incomplete,
    InfiniteFamily,
    InfiniteOrbitSet,
    InfiniteTables,
)
from .exact.lattice import Lattice, span_rank, wedge_coordinates
from .exact.linalg import canonical_span_key

log = logging.getLogger(__name__)

NO_OBSTRUCTION = "NO_OBSTRUCTION"
INFINITELY_GENERATED = "INFINITELY_GENERATED"
UNKNOWN = "UNKNOWN"

IMPLICATION = ("infinitely generated cohomology: the pattern is not a substitution tiling "
               "(nor topologically conjugate to one)")


@dataclass
class RankReport:
    codim: int
    nu: Fraction
    D: list[int] | None
    e: int
    aux: dict = field(default_factory=dict)
    k0_rank: int | None = None
    k1_rank: int | None = None
    flags: dict = field(default_factory=dict)
    free_abelian: bool = True
    closed_formula: bool = True
    cohomology: list[int] | None = None
    notes: list[str] = field(default_factory=list)
    rule: str | None = None


@dataclass
class Reason:
    rule: str
    kind: str  # "violation", "pass" or "note"
    message: str
    witness: dict = field(default_factory=dict)


@dataclass
class ObstructionVerdict:
    verdict: str
    reasons: list[Reason]
    implication: str | None = None

    def failures(self) -> list[Reason]:
        return [r for r in self.reasons if r.kind == "violation"]


def _binom(n, k) -> int:
    if k < 0 or n < 0:
        return 0
    return comb(n, k)


def _integral_nu(nu: Fraction) -> int:
    if nu.denominator != 1:
        raise HypothesisViolated(f"dim V does not divide rk Gamma (nu = {nu})")
    return int(nu)


# -- exterior powers ---------------------------------------------------------

def wedge_span_rank(stabs: Sequence[Lattice], k: int) -> int:
    """Rank of the span of Lambda_k of every lattice in ``stabs`` inside Lambda_k Z^r."""
    if k < 0:
        return 0
    stabs = list(stabs)
    if not stabs:
        return 0
    if k == 0:
        return 1
    vectors = []
    seen = set()
    for lat in stabs:
        if lat.rank < k:
            continue
        key = lat.basis
        if key in seen:
            continue
        seen.add(key)
        basis = lat.int_basis()
        for combo in itertools.combinations(basis, k):
            vectors.append(wedge_coordinates(combo))
    return span_rank(vectors) if vectors else 0


def ktheory_ranks(D: Sequence[int]) -> tuple[int, int]:
    return sum(D[0::2]), sum(D[1::2])


# -- Euler characteristic ----------------------------------------------------

def euler_chain(tables: OrbitTables) -> int:
    """Signed count of singular chains, (-1)^(|c| + dim V) summed over all chains.

    g(T) is the signed count of chains ending at T; chains through a
    relative class continue in the relative table of its global class.
    """
    m = tables.dim_v
    g: dict[str, int] = {}
    for level in range(m):
        for cls in tables.levels[level]:
            if level == 0:
                g[cls.id] = -1
                continue
            rel = tables.relative.get(cls.id)
            if rel is None:
                raise InfiniteTables(f"relative table of {cls.id} missing")
            g[cls.id] = -sum(g[i] for l in range(level) for i in rel[l])
    total = sum(g.values())
    return total if m % 2 == 0 else -total


def euler_closed_form(tables: OrbitTables) -> int | None:
    """The per-codimension expressions for e (codim 1 to 3), else None."""
    m = tables.dim_v
    L0 = tables.count(0)
    if m == 1:
        return L0
    if m == 2:
        return -L0 + sum(tables.relative_count(a.id, 0) for a in tables.levels[1])
    if m == 3:
        s_alpha = sum(tables.relative_count(a.id, 0) for a in tables.levels[2])
        s_nested = sum(tables.relative_count(t, 0)
                       for a in tables.levels[2] for t in tables.relative[a.id][1])
        s_theta = sum(tables.relative_count(t.id, 0) for t in tables.levels[1])
        return L0 - s_alpha + s_nested - s_theta
    return None


# -- closed formulas -------------------------------------------------------

def ranks_codim1(nu, L0: int, N: int | None = None) -> RankReport:
    n = _integral_nu(Fraction(nu))
    if n < 1 or L0 < 1:
        raise HypothesisViolated("need nu >= 1 and L0 >= 1")
    D = [n - 1 + L0] + [_binom(n, p + 1) for p in range(1, n)]
    D = _trim(D)
    rep = RankReport(codim=1, nu=Fraction(n), D=D, e=L0, rule="III.3.1")
    rep.k0_rank, rep.k1_rank = ktheory_ranks(D)
    if N is not None:
        rep.cohomology = codim1_cohomology(N, L0)
    rep.flags = {"indecomposable": True, "L0_finite": True}
    _check_report(rep)
    return rep


def codim1_cohomology(N: int, k: int) -> list[int]:
    """Ranks of H^0 .. H^(N-1) for an N-torus with k punctures."""
    return [_binom(N, j) for j in range(N - 1)] + [N + k - 1]


def codim2_ranks(nu: int, L1: int, e: int, r) -> list[int]:
    """``r(p)`` returns r_p."""
    top = 2 * nu
    D = [_binom(2 * nu, 2) - 2 * nu + 1 + L1 * (nu - 1) + e - r(1)]
    for p in range(1, top + 1):
        D.append(_binom(2 * nu, p + 2) + L1 * _binom(nu, p + 1) - r(p + 1) - r(p))
    return _trim(D)


def codim3_ranks(nu: int, L2: int, L1_tilde: int, e: int, R) -> list[int]:
    """``R(p)`` returns R_p."""
    top = 3 * nu
    d0 = (sum((-1) ** j * _binom(3 * nu, 3 - j) for j in range(4))
          + L2 * sum((-1) ** j * _binom(2 * nu, 2 - j) for j in range(3))
          + L1_tilde * sum((-1) ** j * _binom(nu, 1 - j) for j in range(2))
          + e - R(1))
    D = [d0]
    for p in range(1, top + 1):
        D.append(_binom(3 * nu, p + 3) + L2 * _binom(2 * nu, p + 2)
                 + L1_tilde * _binom(nu, p + 1) - R(p) - R(p + 1))
    return _trim(D)


def _trim(D: list[int]) -> list[int]:
    while len(D) > 1 and D[-1] == 0:
        D.pop()
    return D


def _check_report(rep: RankReport) -> None:
    if rep.D is None:
        return
    if any(x < 0 for x in rep.D):
        raise AssertionError(f"negative rank in {rep.D}: orbit tables are inconsistent")
    alt = sum((-1) ** p * x for p, x in enumerate(rep.D))
    if alt != rep.e:
        raise AssertionError(f"alternating sum {alt} differs from Euler characteristic {rep.e}")


def _stabs(classes) -> list[Lattice]:
    return [c.stabilizer for c in classes]


def ranks_codim2(tables: OrbitTables, nu, indecomposable: bool) -> RankReport:
    if not indecomposable:
        raise HypothesisViolated("normals of the hyperplanes are decomposable")
    n = _integral_nu(Fraction(nu))
    e = euler_chain(tables)
    e_closed = euler_closed_form(tables)
    if e != e_closed:
        raise AssertionError(f"chain Euler characteristic {e} differs from closed form {e_closed}")
    I1 = _stabs(tables.levels[1])
    cache: dict[int, int] = {}

    def r(p):
        if p not in cache:
            cache[p] = wedge_span_rank(I1, p + 1)
        return cache[p]

    D = codim2_ranks(n, tables.count(1), e, r)
    rep = RankReport(codim=2, nu=Fraction(n), D=D, e=e, rule="V.2.6")
    rep.aux = {"r": [r(p) for p in range(1, 2 * n + 2)], "L0": tables.count(0), "L1": tables.count(1),
               "e_closed_form": e_closed}
    rep.k0_rank, rep.k1_rank = ktheory_ranks(D)
    rep.flags = {"indecomposable": True, "L0_finite": True}
    _check_report(rep)
    return rep


def ranks_codim3(tables: OrbitTables, nu, indecomposable: bool) -> RankReport:
    if not indecomposable:
        raise HypothesisViolated("normals of the hyperplanes are decomposable")
    n = _integral_nu(Fraction(nu))
    e = euler_chain(tables)
    e_closed = euler_closed_form(tables)
    if e != e_closed:
        raise AssertionError(f"chain Euler characteristic {e} differs from closed form {e_closed}")
    I2 = tables.levels[2]
    I1 = tables.levels[1]
    L1_tilde = -len(I1) + sum(tables.relative_count(a.id, 1) for a in I2)
    cache: dict[int, int] = {}

    def R(p):
        if p not in cache:
            val = wedge_span_rank(_stabs(I2), p + 2) - wedge_span_rank(_stabs(I1), p + 1)
            for a in I2:
                val += wedge_span_rank(_stabs(tables.relative_members(a.id, 1)), p + 1)
            cache[p] = val
        return cache[p]

    D = codim3_ranks(n, len(I2), L1_tilde, e, R)
    rep = RankReport(codim=3, nu=Fraction(n), D=D, e=e, rule="V.2.7")
    rep.aux = {"R": [R(p) for p in range(1, 3 * n + 2)], "L1_tilde": L1_tilde,
               "L0": tables.count(0), "L1": len(I1), "L2": len(I2), "e_closed_form": e_closed}
    rep.k0_rank, rep.k1_rank = ktheory_ranks(D)
    rep.flags = {"indecomposable": True, "L0_finite": True}
    _check_report(rep)
    return rep


def rank_report(arr: Arrangement, tables: OrbitTables | None = None) -> RankReport:
    """Dispatch on the codimension; codim >= 4 yields only e and the flags."""
    m = arr.dim_v
    if tables is None:
        tables = arr.tables()
    indec = len(indecomposable_components(arr.normals, arr.field)) == 1
    if m == 1:
        rep = ranks_codim1(arr.nu, tables.count(0))
        e_chain = euler_chain(tables)
        if e_chain != rep.e:
            raise AssertionError("chain Euler characteristic differs from L0")
        return rep
    if m == 2:
        return ranks_codim2(tables, arr.nu, indec)
    if m == 3:
        return ranks_codim3(tables, arr.nu, indec)
    e = euler_chain(tables)
    rep = RankReport(codim=m, nu=arr.nu, D=None, e=e, closed_formula=False, rule="V.2.8")
    rep.flags = {"indecomposable": indec, "L0_finite": True}
    rep.notes.append("no closed formula implemented for codimension >= 4; only e is reported")
    return rep


# -- obstruction -------------------------------------------------------------

def _stabilizer_conformance(arr: Arrangement, reasons: list[Reason]) -> bool:
    """rk Gamma^A = l * nu for every defining subset A (per direction)."""
    m = arr.dim_v
    nu = arr.nu
    ok = True
    checked = 0
    for level in range(m):
        seen = set()
        for subset in arr._subsets(m - level, ()):
            rows = [arr.hyperplanes[i].normal for i in subset]
            key = canonical_span_key(rows, arr.field)
            if key in seen:
                continue
            seen.add(key)
            checked += 1
            rk = arr.stabilizer(rows).rank
            if rk != level * nu:
                ok = False
                reasons.append(Reason("IV.6.7", "violation",
                                      f"stabilizer of a singular {level}-space has rank {rk}, expected {level * nu}",
                                      {"subset": list(subset), "level": level, "stabilizer_rank": rk,
                                       "expected": str(level * nu)}))
                return ok
    reasons.append(Reason("IV.6.7", "pass", f"{checked} singular directions conform to rk = l * nu",
                          {"directions_checked": checked}))
    return ok


def _projection_probes(arr: Arrangement, reasons: list[Reason]) -> bool:
    """rk Gamma^A = rk Gamma_A for every transversal m-subset and every A inside it."""
    m = arr.dim_v
    field = arr.field
    seen = set()
    probes = 0
    for trans in arr._subsets(m, ()):
        for size in range(1, m):
            for pos in itertools.combinations(range(m), size):
                rows_a = [arr.hyperplanes[trans[i]].normal for i in pos]
                rows_c = [arr.hyperplanes[trans[i]].normal for i in range(m) if i not in pos]
                key = (canonical_span_key(rows_a, field), canonical_span_key(rows_c, field))
                if key in seen:
                    continue
                seen.add(key)
                probes += 1
                rk_stab = arr.stabilizer(rows_a).rank
                rk_proj = arr.projected_group(trans, pos).rank
                if rk_stab < rk_proj:
                    reasons.append(Reason("IV.6.3", "violation",
                                          f"stabilizer rank {rk_stab} below projected rank {rk_proj}",
                                          {"transversal": list(trans), "subset": list(pos),
                                           "stabilizer_rank": rk_stab, "projected_rank": rk_proj}))
                    return False
    reasons.append(Reason("IV.6.3", "pass", f"{probes} projection probes with rk Gamma^A = rk Gamma_A",
                          {"probes": probes}))
    return True


def obstruction_check(arr: Arrangement | None, *, scheme_info: dict | None = None,
                      family_error: InfiniteFamily | None = None,
                      tables: OrbitTables | None = None) -> ObstructionVerdict:
    """Decide finite generation from the divisibility, stabilizer and projection tests.

    ``scheme_info`` (keys N, d, rk_delta, rk_gamma, dim_v) switches the
    divisibility test to the scheme form.  ``family_error`` records that
    the hyperplane family could not be made finite.  Precomputed ``tables``
    spare the point enumeration.
    """
    reasons: list[Reason] = []
    failed = False
    if arr is None and scheme_info is None:
        raise ValueError("need an arrangement or scheme data")

    if scheme_info is not None:
        rk, dim = scheme_info["rk_gamma"], scheme_info["dim_v"]
        if rk % dim:
            failed = True
            reasons.append(Reason("IV.6.8", "violation",
                                  f"N - rk Delta = {rk} is not divisible by N - rk Delta - d = {dim}",
                                  {"N": scheme_info["N"], "d": scheme_info["d"],
                                   "rk_delta": scheme_info["rk_delta"], "rk_gamma": rk, "dim_v": dim}))
        else:
            reasons.append(Reason("IV.6.8", "pass", f"dim V = {dim} divides rk Gamma = {rk}",
                                  {"rk_gamma": rk, "dim_v": dim}))

    if family_error is not None:
        reasons.append(Reason("IV.2.5", "note", "hyperplane family is not finite; arrangement tests skipped",
                              {"orientation": list(family_error.orientation)}))

    indec = None
    L0_finite = False
    conform = False
    if arr is not None:
        indec = len(indecomposable_components(arr.normals, arr.field)) == 1
        if scheme_info is None and indec and arr.gamma_rank % arr.dim_v:
            failed = True
            reasons.append(Reason("IV.6.7", "violation",
                                  f"dim V = {arr.dim_v} does not divide rk Gamma = {arr.gamma_rank}",
                                  {"rk_gamma": arr.gamma_rank, "dim_v": arr.dim_v}))
        if indec:
            if not failed:
                conform = _stabilizer_conformance(arr, reasons)
                failed = failed or not conform
        else:
            reasons.append(Reason("IV.6.7", "note", "normals are decomposable; stabilizer conformance skipped"))
        if not failed:
            failed = not _projection_probes(arr, reasons)
        if not failed:
            try:
                n0 = tables.count(0) if tables is not None else len(arr.enumerate_level(0))
                L0_finite = True
                reasons.append(Reason("IV.2.8", "pass", f"L0 = {n0} point orbit classes", {"L0": n0}))
            except InfiniteOrbitSet as exc:
                failed = True
                reasons.append(Reason("IV.6.3", "violation", "a transversal subset meets infinitely many point orbits",
                                      {"subset": list(exc.subset), "level": exc.level}))
            except Incomplete as exc:
                reasons.append(Reason("IV.2.8", "note", f"point enumeration incomplete: {exc}"))

    if failed and scheme_info is not None and scheme_info["N"] > scheme_info["d"] + 1:
        reasons.append(Reason("IV.6.10", "note",
                              "consistent with the generic-position theorem for N > d + 1"))

    if failed:
        return ObstructionVerdict(INFINITELY_GENERATED, reasons, IMPLICATION)
    if L0_finite and conform:
        return ObstructionVerdict(NO_OBSTRUCTION, reasons)
    return ObstructionVerdict(UNKNOWN, reasons)
