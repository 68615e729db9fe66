"""End-to-end analysis of a loaded scheme file."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arrangement import Arrangement, OrbitTables
from .errors import HypothesisViolated, Incomplete, InfiniteFamily, InfiniteOrbitSet, QuasitopError
from .invariants import ObstructionVerdict, RankReport, obstruction_check, rank_report, ranks_codim1
from .scheme import (
    Codim1Domain,
    InternalData,
    ProjectionScheme,
    codim1_arrangement,
    codim1_domain,
    codim1_orbit_count,
    derive_internal,
    to_arrangement,
)

UNVERIFIED_NOTE = "Delta != 0: hyperplane classes follow the coset reading of the family; no reference table exists"
PARITY_NOTE = ("K-theory parity (even p into K0) is pinned on a 3-dimensional pattern; "
               "the grading for pattern dimension {d} is not re-derived")


@dataclass
class Analysis:
    kind: str
    derived: dict
    arrangement: Arrangement | None = None
    internal: InternalData | None = None
    tables: OrbitTables | None = None
    report: RankReport | None = None
    verdict: ObstructionVerdict | None = None
    k: int | None = None
    errors: list[QuasitopError] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def _arrangement_summary(arr: Arrangement) -> dict:
    return {"dim_v": arr.dim_v, "rk_gamma": arr.gamma_rank, "nu": arr.nu, "hyperplane_classes": len(arr.hyperplanes)}


def _finish(a: Analysis, scheme_info=None, codim1_N: int | None = None, with_ranks=True,
            pattern_dim: int | None = None) -> Analysis:
    arr = a.arrangement
    try:
        a.tables = arr.tables()
    except (InfiniteOrbitSet, Incomplete) as exc:
        a.errors.append(exc)
    if a.tables is not None and with_ranks:
        try:
            if codim1_N is not None:
                a.report = ranks_codim1(arr.nu, a.tables.count(0), N=codim1_N)
            else:
                a.report = rank_report(arr, a.tables)
        except HypothesisViolated as exc:
            a.errors.append(exc)
    if a.report is not None and a.report.D is not None and pattern_dim not in (None, 3):
        a.report.notes.append(PARITY_NOTE.format(d=pattern_dim))
    a.verdict = obstruction_check(arr, scheme_info=scheme_info, tables=a.tables)
    return a


def analyze(obj, *, with_ranks: bool = True) -> Analysis:
    if isinstance(obj, Arrangement):
        a = Analysis("arrangement", _arrangement_summary(obj), arrangement=obj)
        return _finish(a, with_ranks=with_ranks)
    if isinstance(obj, Codim1Domain):
        k = codim1_orbit_count(obj)
        arr = codim1_arrangement(obj)
        a = Analysis("codim1", {"N": obj.N, "dim_v": 1, "rk_gamma": arr.gamma_rank, "nu": arr.nu,
                                "endpoints": len(obj.endpoints)}, arrangement=arr, k=k)
        return _finish(a, codim1_N=obj.N, with_ranks=with_ranks, pattern_dim=obj.N - 1)
    if isinstance(obj, ProjectionScheme):
        data = derive_internal(obj)
        derived = data.summary()
        a = Analysis("scheme", derived, internal=data)
        if data.rk_delta:
            a.notes.append(UNVERIFIED_NOTE)
        if obj.d == obj.N - 1:
            dom = codim1_domain(obj)
            a.k = codim1_orbit_count(dom)
            a.arrangement = codim1_arrangement(dom)
            return _finish(a, scheme_info=derived, codim1_N=obj.N, with_ranks=with_ranks, pattern_dim=obj.d)
        try:
            a.arrangement = to_arrangement(data)
        except InfiniteFamily as exc:
            a.errors.append(exc)
            a.verdict = obstruction_check(None, scheme_info=derived, family_error=exc)
            return a
        a.derived["hyperplane_classes"] = len(a.arrangement.hyperplanes)
        return _finish(a, scheme_info=derived, with_ranks=with_ranks, pattern_dim=obj.d)
    raise TypeError(f"cannot analyze {type(obj).__name__}")
