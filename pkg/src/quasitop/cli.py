"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors (a JSON object on stderr),
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import report
from .arrangement import Arrangement
from .errors import IOFailure, ParseError, QuasitopError
from .pipeline import Analysis, analyze
from .scheme import ProjectionScheme
from .schemefile import _element, load_scheme

RULE = "-" * 60


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasitop", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    v = sub.add_parser("validate", help="parse a scheme file and report derived data")
    v.add_argument("file")

    inv = sub.add_parser("invariants", help="orbit counts, rank report and verdict")
    inv.add_argument("file")
    inv.add_argument("--json", action="store_true", help="write the JSON report to stdout")
    inv.add_argument("--out", help="also write the JSON report to this path")

    arr = sub.add_parser("arrangement", help="hyperplane classes and singular orbit tables")
    arr.add_argument("file")
    arr.add_argument("--json", action="store_true")

    ob = sub.add_parser("obstruction", help="finite-generation obstruction check")
    ob.add_argument("file")
    ob.add_argument("--json", action="store_true")

    pat = sub.add_parser("pattern", help="generate a point pattern")
    pat.add_argument("file")
    pat.add_argument("--radius", required=True, type=Fraction)
    pat.add_argument("--offset", help="comma separated offset u (rationals or JSON list)")
    pat.add_argument("--format", choices=("csv", "svg"))
    pat.add_argument("--out", required=True)
    pat.add_argument("--axes", default="1,2", help="projected axes for SVG of 3-d patterns")

    st = sub.add_parser("selftest", help="run the golden suites")
    st.add_argument("--seed", type=int)
    st.add_argument("--threads", type=int, default=1)
    return p


def _load(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc
    return load_scheme(path), report.digest(data)


def _kind(obj) -> str:
    if isinstance(obj, ProjectionScheme):
        return "scheme"
    if isinstance(obj, Arrangement):
        return "arrangement"
    return "codim1"


def _derived_json(derived: dict) -> dict:
    return {k: report.num(v) for k, v in sorted(derived.items())}


def _flags(a: Analysis) -> dict:
    flags = {"L0_finite": a.tables is not None}
    if a.report is not None:
        flags.update(a.report.flags)
    elif a.arrangement is not None:
        from .arrangement import is_indecomposable
        flags["indecomposable"] = is_indecomposable(a.arrangement.normals, a.arrangement.field)
    nu = a.derived.get("nu")
    if nu is not None:
        flags["nu_integral"] = Fraction(nu).denominator == 1
    if "rk_delta" in a.derived:
        flags["delta_zero"] = a.derived["rk_delta"] == 0
    return flags


def _errors_json(a: Analysis) -> list[dict]:
    return [{"type": type(e).__name__, "message": str(e)} for e in a.errors]


def analysis_json(command: str, a: Analysis, digest: str) -> dict:
    body = {
        "input_kind": a.kind,
        "derived": _derived_json(a.derived),
        "flags": _flags(a),
        "orbit_summary": report.orbit_summary(a.tables) if a.tables is not None else None,
        "rank_report": report.rank_json(a.report) if a.report is not None else None,
        "verdict": report.verdict_json(a.verdict) if a.verdict is not None else None,
        "errors": _errors_json(a),
        "notes": list(a.notes),
    }
    if a.k is not None:
        body["derived"]["k"] = report.num(a.k)
    return report.envelope(command, digest, **body)


# -- human output ----------------------------------------------------------------

def _fmt(v) -> str:
    return str(v)


def _print_analysis(a: Analysis, out) -> None:
    w = lambda s="": print(s, file=out)  # noqa: E731
    w(f"input: {a.kind}")
    for k, v in sorted(a.derived.items()):
        w(f"  {k} = {_fmt(v)}")
    if a.k is not None:
        w(f"  k = {a.k}")
    for n in a.notes:
        w(f"note: {n}")
    if a.tables is not None:
        t = a.tables
        w(RULE)
        w("orbit counts")
        for l in range(t.dim_v):
            w(f"  L{l} = {t.count(l)}")
        for top in range(1, t.dim_v):
            for l in range(top):
                total = sum(t.relative_count(c.id, l) for c in t.levels[top])
                vals = sorted({t.relative_count(c.id, l) for c in t.levels[top]})
                w(f"  sum over I{top} of L{l}^Theta = {total}   (values {vals})")
    rep = a.report
    if rep is not None:
        w(RULE)
        for key in ("r", "R"):
            if key in rep.aux:
                vals = rep.aux[key]
                w("  " + ", ".join(f"{key}{p + 1} = {x}" for p, x in enumerate(vals)))
        if "L1_tilde" in rep.aux:
            w(f"  L1~ = {rep.aux['L1_tilde']}")
        w(f"  e = {rep.e}")
        if rep.D is not None:
            w(RULE)
            w("  " + ", ".join(f"D{p} = {x}" for p, x in enumerate(rep.D)))
            if rep.cohomology:
                w("  H = (" + ", ".join(f"Z^{x}" for x in rep.cohomology) + ")")
            w(RULE)
            w(f"  K0 = Z^{rep.k0_rank}   K1 = Z^{rep.k1_rank}")
        for n in rep.notes:
            w(f"note: {n}")
    for e in a.errors:
        w(f"not computed: {type(e).__name__}: {e}")
    if a.verdict is not None:
        w(RULE)
        _print_verdict(a.verdict, out)


def _print_verdict(v, out) -> None:
    print(f"verdict: {v.verdict}", file=out)
    for r in v.reasons:
        print(f"  [{r.kind}] {r.rule}: {r.message}", file=out)
    if v.implication:
        print(f"  {v.implication}", file=out)


# -- commands ------------------------------------------------------------------

def cmd_validate(args, out) -> int:
    obj, dig = _load(args.file)
    kind = _kind(obj)
    print(f"ok: {kind} ({dig})", file=out)
    if isinstance(obj, ProjectionScheme):
        from .scheme import derive_internal
        for k, v in derive_internal(obj).summary().items():
            print(f"  {k} = {v}", file=out)
    elif isinstance(obj, Arrangement):
        print(f"  dim_v = {obj.dim_v}", file=out)
        print(f"  rk_gamma = {obj.gamma_rank}", file=out)
        print(f"  hyperplane_classes = {len(obj.hyperplanes)}", file=out)
    else:
        print(f"  N = {obj.N}", file=out)
        print(f"  endpoints = {len(obj.endpoints)}", file=out)
    return 0


def _write_json(doc: dict, path: str) -> None:
    try:
        Path(path).write_text(report.dumps(doc))
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def cmd_invariants(args, out) -> int:
    obj, dig = _load(args.file)
    a = analyze(obj)
    doc = analysis_json("invariants", a, dig)
    if args.out:
        _write_json(doc, args.out)
    if args.json:
        out.write(report.dumps(doc))
    else:
        _print_analysis(a, out)
    if a.report is None and a.errors:
        raise a.errors[0]
    return 0


def cmd_arrangement(args, out) -> int:
    obj, dig = _load(args.file)
    a = analyze(obj, with_ranks=False)
    if a.arrangement is None:
        raise a.errors[0]
    arr = a.arrangement
    if a.tables is None:
        raise a.errors[0]
    if args.json:
        hyper = [{"normal": report.fvec(h.normal), "offset": report.felem(h.offset),
                  "provenance": [[report.num(i) for i in p] for p in h.provenance]}
                 for h in arr.hyperplanes]
        doc = report.envelope("arrangement", dig, input_kind=a.kind, derived=_derived_json(a.derived),
                              hyperplanes=hyper, tables=report.tables_json(arr, a.tables),
                              orbit_summary=report.orbit_summary(a.tables))
        out.write(report.dumps(doc))
        return 0
    print(f"dim V = {arr.dim_v}, rk Gamma = {arr.gamma_rank}, nu = {arr.nu}", file=out)
    print(f"hyperplane classes: {len(arr.hyperplanes)}", file=out)
    for i, h in enumerate(arr.hyperplanes):
        print(f"  H{i}: normal {[str(x) for x in h.normal]}, offset {h.offset}", file=out)
    print(RULE, file=out)
    for l in range(arr.dim_v - 1, -1, -1):
        classes = a.tables.levels[l]
        print(f"level {l}: {len(classes)} classes", file=out)
        for c in classes:
            print(f"  {c.id}  stabilizer rank {c.stabilizer_rank}  hyperplanes {c.incident_hyperplanes}", file=out)
    return 0


def cmd_obstruction(args, out) -> int:
    obj, dig = _load(args.file)
    a = analyze(obj, with_ranks=False)
    if args.json:
        doc = report.envelope("obstruction", dig, input_kind=a.kind, derived=_derived_json(a.derived),
                              flags=_flags(a), verdict=report.verdict_json(a.verdict),
                              errors=_errors_json(a), notes=list(a.notes))
        out.write(report.dumps(doc))
    else:
        _print_verdict(a.verdict, out)
    return 0


def _parse_offset(text: str, nf, N: int):
    text = text.strip()
    if text.startswith("["):
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--offset: {exc}") from exc
    else:
        values = [x.strip() for x in text.split(",") if x.strip()]
    if len(values) != N:
        raise UsageError(f"--offset needs {N} entries, got {len(values)}")
    try:
        return [_element(nf, x, f"offset[{i}]") for i, x in enumerate(values)]
    except ParseError as exc:
        raise UsageError(str(exc)) from exc


def cmd_pattern(args, out) -> int:
    from .pattern import export, generate_pattern

    if args.radius <= 0:
        raise UsageError("--radius must be positive")
    fmt = args.format or ("svg" if args.out.lower().endswith(".svg") else "csv")
    try:
        axes = tuple(int(x) - 1 for x in args.axes.split(","))
    except ValueError as exc:
        raise UsageError(f"--axes: {exc}") from exc
    obj, _ = _load(args.file)
    if not isinstance(obj, ProjectionScheme):
        raise QuasitopError(f"pattern generation needs a [scheme] file, got {_kind(obj)}")
    u = _parse_offset(args.offset, obj.field, obj.N) if args.offset else None
    pat = generate_pattern(obj, u, args.radius)
    export(pat, fmt, args.out, axes=axes)
    print(f"{len(pat)} points written to {args.out} ({fmt})", file=out)
    return 0


def cmd_selftest(args, out) -> int:
    from . import selftest

    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    seed = selftest.DEFAULT_SEED if args.seed is None else args.seed
    print(f"seed = {seed}, threads = {args.threads}", file=out)
    res = selftest.run(seed, args.threads, log=lambda s: print(s, file=out, flush=True))
    passed = sum(c.ok for c in res.checks)
    print(f"{passed}/{len(res.checks)} checks passed", file=out)
    return 0 if res.ok else 1


COMMANDS = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "arrangement": cmd_arrangement,
    "obstruction": cmd_obstruction,
    "pattern": cmd_pattern,
    "selftest": cmd_selftest,
}


def error_json(exc: BaseException) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        err["line"] = exc.line
        err["column"] = exc.column
    for attr in ("orientation", "subset", "level"):
        if hasattr(exc, attr):
            val = getattr(exc, attr)
            err[attr] = list(val) if isinstance(val, tuple) else val
    return {"error": err}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"quasitop {args.command}: error: {exc}", file=err)
        return 2
    except QuasitopError as exc:
        err.write(json.dumps(error_json(exc), sort_keys=True) + "\n")
        return 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
