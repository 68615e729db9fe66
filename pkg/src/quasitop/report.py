"""JSON serialization of orbit tables, rank reports and verdicts.

Every integer is written as a decimal string and every field element as
its list of power-basis coefficients ("p/q" strings), so reports round
trip losslessly.  Output is sorted and carries no timestamps, which keeps
repeated runs byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from . import __version__
from .arrangement import Arrangement, OrbitTables
from .exact.linalg import nullspace
from .invariants import ObstructionVerdict, RankReport

SCHEMA_VERSION = "1"


def num(x) -> str:
    return str(Fraction(x)) if not isinstance(x, int) else str(x)


def felem(x) -> list[str]:
    return [str(c) for c in x.coeffs]


def fvec(v) -> list[list[str]]:
    return [felem(x) for x in v]


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def tables_json(arr: Arrangement, tables: OrbitTables) -> dict:
    levels = {}
    for l, classes in sorted(tables.levels.items()):
        items = []
        for c in classes:
            direction = nullspace([list(r) for r in c.normal_basis], arr.dim_v, arr.field) if c.normal_basis else []
            items.append({
                "id": c.id,
                "level": num(c.level),
                "normal_basis": [fvec(r) for r in c.normal_basis],
                "direction": [fvec(r) for r in direction],
                "offset_point": fvec(c.offset_point),
                "stabilizer_rank": num(c.stabilizer_rank),
                "stabilizer_basis": [[num(x) for x in row] for row in c.stabilizer.int_basis()],
                "incident_hyperplanes": num(c.incident_hyperplanes),
                "provenance": [[num(i) for i in s] for s in c.provenance],
            })
        levels[str(l)] = items
    relative = {pid: {str(l): ids for l, ids in sorted(rel.items())}
                for pid, rel in sorted(tables.relative.items())}
    return {"counts": {str(l): num(len(cs)) for l, cs in sorted(tables.levels.items())},
            "levels": levels, "relative": relative}


def orbit_summary(tables: OrbitTables) -> dict:
    m = tables.dim_v
    out = {"L": {str(l): num(tables.count(l)) for l in range(m)}, "relative_sums": {}}
    for top in range(1, m):
        for l in range(top):
            total = sum(tables.relative_count(t.id, l) for t in tables.levels[top])
            out["relative_sums"][f"{l}in{top}"] = num(total)
    return out


def rank_json(rep: RankReport) -> dict:
    aux = {}
    for k, v in sorted(rep.aux.items()):
        aux[k] = [num(x) for x in v] if isinstance(v, list) else num(v)
    return {
        "codim": num(rep.codim),
        "nu": num(rep.nu),
        "D": [num(x) for x in rep.D] if rep.D is not None else None,
        "e": num(rep.e),
        "aux": aux,
        "k0_rank": num(rep.k0_rank) if rep.k0_rank is not None else None,
        "k1_rank": num(rep.k1_rank) if rep.k1_rank is not None else None,
        "cohomology": [num(x) for x in rep.cohomology] if rep.cohomology else None,
        "flags": {k: bool(v) for k, v in sorted(rep.flags.items())},
        "free_abelian": rep.free_abelian,
        "closed_formula": rep.closed_formula,
        "rule": rep.rule,
        "notes": list(rep.notes),
    }


def _witness(w):
    if isinstance(w, bool) or w is None:
        return w
    if isinstance(w, (int, Fraction)):
        return num(w)
    if isinstance(w, dict):
        return {k: _witness(v) for k, v in sorted(w.items())}
    if isinstance(w, (list, tuple)):
        return [_witness(x) for x in w]
    return str(w)


def verdict_json(v: ObstructionVerdict) -> dict:
    return {
        "verdict": v.verdict,
        "reasons": [{"rule": r.rule, "kind": r.kind, "message": r.message, "witness": _witness(r.witness)}
                    for r in v.reasons],
        "implication": v.implication,
    }


def envelope(command: str, input_digest: str | None, **body) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": command,
           "input_digest": input_digest}
    out.update(body)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"
