"""Versioned TOML scheme files.

A file carries a ``[field]`` table and exactly one payload table:
``[scheme]``, ``[arrangement]`` or ``[codim1]``.  Field elements are
written as an integer, a "p/q" string, or a list of such power-basis
coefficients (ascending).
"""

from __future__ import annotations

import re
import sys
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .arrangement import Arrangement, HyperplaneClass
from .errors import DimensionMismatch, IOFailure, ParseError, QuasitopError, VersionMismatch
from .exact.numberfield import NumberField
from .scheme import Codim1Domain, ProjectionScheme

SCHEMA_NAME = "quasitop-scheme"
SUPPORTED_VERSION = 1
PAYLOADS = ("scheme", "arrangement", "codim1")


def _line_of(text: str, key: str) -> int | None:
    pat = re.compile(r"^[ \t]*\[?[ \t]*" + re.escape(key) + r"\b", re.M)
    m = pat.search(text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _element(nf: NumberField, value, where: str):
    try:
        if isinstance(value, list):
            return nf.from_coeffs([Fraction(str(c)) if not isinstance(c, int) else c for c in value])
        if isinstance(value, bool):
            raise ValueError("booleans are not numbers")
        if isinstance(value, (int, str)):
            return nf(Fraction(str(value)))
        raise ValueError(f"unsupported value {value!r}")
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {exc}") from exc


def _vector(nf, value, where):
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list")
    return [_element(nf, x, f"{where}[{i}]") for i, x in enumerate(value)]


def parse_scheme_text(text: str):
    """Parse file contents into a ProjectionScheme, Arrangement or Codim1Domain."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(getattr(exc, "msg", str(exc)), getattr(exc, "lineno", None),
                         getattr(exc, "colno", None)) from exc
    version = doc.get("version")
    if version is None:
        raise ParseError("missing top-level 'version' key", 1, 1)
    if doc.get("schema", SCHEMA_NAME) != SCHEMA_NAME:
        raise VersionMismatch(f"unknown schema {doc.get('schema')!r}")
    if version != SUPPORTED_VERSION:
        raise VersionMismatch(f"file version {version!r}, supported version {SUPPORTED_VERSION}")
    present = [k for k in PAYLOADS if k in doc]
    if len(present) != 1:
        line = _line_of(text, present[1]) if len(present) > 1 else None
        raise ParseError(f"exactly one of [scheme], [arrangement], [codim1] is required, found {present}",
                         line, 1 if line else None)
    if "field" not in doc:
        raise ParseError("missing [field] table")
    fld = doc["field"]
    try:
        nf = NumberField(fld["min_poly"], fld.get("root_interval"))
    except KeyError as exc:
        raise ParseError(f"[field] is missing {exc}", _line_of(text, "field")) from exc
    except (ValueError, TypeError) as exc:
        raise ParseError(f"[field]: {exc}", _line_of(text, "field")) from exc

    kind = present[0]
    body = doc[kind]
    line = _line_of(text, kind)
    try:
        if kind == "scheme":
            N, d = int(body["N"]), int(body["d"])
            rows = body["E_basis"]
            if len(rows) != N or any(len(r) != d for r in rows):
                raise ParseError(f"E_basis must be {N} rows of {d} entries", line)
            e_basis = [_vector(nf, r, f"E_basis[{i}]") for i, r in enumerate(rows)]
            u = _vector(nf, body.get("u", [0] * N), "u")
            return ProjectionScheme.build(nf, e_basis, u, str(body.get("label", "")))
        if kind == "arrangement":
            m = int(body["dim_v"])
            gamma = [_vector(nf, g, f"gamma[{i}]") for i, g in enumerate(body["gamma"])]
            hyper = []
            for i, h in enumerate(body["hyperplanes"]):
                normal = _vector(nf, h["normal"], f"hyperplanes[{i}].normal")
                offset = _element(nf, h.get("offset", 0), f"hyperplanes[{i}].offset")
                hyper.append(HyperplaneClass(tuple(normal), offset, ((i,),)))
            return Arrangement(nf, m, gamma, hyper)
        intervals = [[_element(nf, x, f"intervals[{i}]") for x in pair]
                     for i, pair in enumerate(body["intervals"])]
        gamma = _vector(nf, body["gamma"], "gamma")
        return Codim1Domain.build(nf, intervals, gamma)
    except KeyError as exc:
        raise ParseError(f"[{kind}] is missing key {exc}", line) from exc
    except DimensionMismatch as exc:
        raise ParseError(f"[{kind}]: {exc}", line) from exc
    except (ValueError, TypeError) as exc:
        if isinstance(exc, QuasitopError):
            raise
        raise ParseError(f"[{kind}]: {exc}", line) from exc


def load_scheme(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc
    return parse_scheme_text(text)


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture file."""
    return Path(__file__).parent / "fixtures" / name
