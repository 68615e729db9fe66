import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

import quasitop
from quasitop.cli import run
from quasitop.errors import ParseError, VersionMismatch
from quasitop.schemefile import fixture_path, parse_scheme_text

FIXTURES = sorted(p.name for p in (Path(quasitop.__file__).parent / "fixtures").glob("*.toml"))
SCHEMA = json.loads((Path(quasitop.__file__).parent / "schemas" / "report.schema.json").read_text())

HEADER = 'schema = "quasitop-scheme"\nversion = 1\n\n[field]\nmin_poly = [-1, 1, 1]\nroot_interval = ["1/2", "1"]\n'
SCHEME = '\n[scheme]\nN = 2\nd = 1\nE_basis = [[[0, -1]], [1]]\n'
ARRANGEMENT = '\n[arrangement]\ndim_v = 1\ngamma = [[1], [[0, 1]]]\nhyperplanes = [{ normal = [1], offset = 0 }]\n'


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def ak_invariants():
    return cli("invariants", fixture_path("ammann_kramer.toml"), "--json")


def test_ak_invariants_json(ak_invariants):
    code, out, _ = ak_invariants
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    rep = doc["rank_report"]
    assert rep["D"] == ["180", "71", "12", "1"]
    assert (rep["k0_rank"], rep["k1_rank"]) == ("192", "72")
    assert doc["orbit_summary"]["L"] == {"0": "32", "1": "46", "2": "15"}
    assert doc["verdict"]["verdict"] == "NO_OBSTRUCTION"


@pytest.mark.parametrize("name", [f for f in FIXTURES if not f.startswith("ammann")])
def test_reports_validate_and_are_deterministic(name):
    path = fixture_path(name)
    for command in ("invariants", "obstruction", "arrangement"):
        first = cli(command, path, "--json")
        second = cli(command, path, "--json")
        assert first == second
        code, out, err = first
        assert code in (0, 1)
        if code == 1:
            assert "error" in json.loads(err)
        if out:
            jsonschema.validate(json.loads(out), SCHEMA)


def test_ak_arrangement_json_validates():
    code, out, _ = cli("arrangement", fixture_path("ammann_kramer.toml"), "--json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["tables"]["counts"] == {"0": "32", "1": "46", "2": "15"}


def test_out_file_matches_stdout(tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = cli("invariants", fixture_path("octagonal.toml"), "--json", "--out", target)
    assert code == 0 and target.read_text() == out


def test_human_layout_order():
    code, out, _ = cli("invariants", fixture_path("octagonal.toml"))
    assert code == 0
    order = [out.index(key) for key in ("L0 =", "r1 =", "D0 =", "K0 =", "verdict:")]
    assert order == sorted(order)


def test_obstruction_generic():
    code, out, _ = cli("obstruction", fixture_path("penrose_generic5.toml"), "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["verdict"]["verdict"] == "INFINITELY_GENERATED"
    assert doc["verdict"]["reasons"][0]["rule"] == "IV.6.8"


def test_domain_errors_exit_one(tmp_path):
    code, out, err = cli("invariants", fixture_path("toy_codim2_obstruction.toml"))
    assert code == 1
    assert json.loads(err)["error"]["type"] == "InfiniteOrbitSet"
    code, _, err = cli("validate", tmp_path / "missing.toml")
    assert code == 1 and json.loads(err)["error"]["type"] == "IOFailure"
    bad = tmp_path / "bad.toml"
    bad.write_text(HEADER + SCHEME + ARRANGEMENT)
    code, _, err = cli("validate", bad)
    e = json.loads(err)["error"]
    assert code == 1 and e["type"] == "ParseError" and e["line"] is not None


def test_usage_errors_exit_two(tmp_path, capsys):
    assert cli("frobnicate")[0] == 2
    assert cli("invariants", fixture_path("fibonacci.toml"), "--bogus")[0] == 2
    assert cli("pattern", fixture_path("fibonacci_scheme.toml"), "--out", tmp_path / "x.csv")[0] == 2
    assert cli("pattern", fixture_path("fibonacci_scheme.toml"), "--radius", "0", "--out", tmp_path / "x.csv")[0] == 2
    assert cli("pattern", fixture_path("fibonacci_scheme.toml"), "--radius", "2", "--offset", "1,2,3",
               "--out", tmp_path / "x.csv")[0] == 2
    assert cli("selftest", "--threads", "0")[0] == 2


def test_validate_and_pattern(tmp_path):
    code, out, _ = cli("validate", fixture_path("penrose.toml"))
    assert code == 0 and "rk_delta = 1" in out
    target = tmp_path / "fib.csv"
    code, out, _ = cli("pattern", fixture_path("fibonacci_scheme.toml"), "--radius", "20", "--out", target)
    assert code == 0
    assert len(target.read_text().strip().splitlines()) == 56
    code, _, _ = cli("pattern", fixture_path("fibonacci_scheme.toml"), "--radius", "5", "--offset", "1/3, 1/5",
                     "--format", "svg", "--out", tmp_path / "fib.svg")
    assert code == 0 and (tmp_path / "fib.svg").read_text().startswith("<?xml")


def test_parse_errors():
    with pytest.raises(ParseError) as exc:
        parse_scheme_text(HEADER + SCHEME + ARRANGEMENT)
    assert exc.value.line == 13
    with pytest.raises(ParseError) as exc:
        parse_scheme_text(HEADER + "\n[scheme\nN = 2\n")
    assert exc.value.line == 8 and exc.value.column is not None
    with pytest.raises(ParseError):
        parse_scheme_text(HEADER.replace("version = 1\n", ""))
    with pytest.raises(VersionMismatch):
        parse_scheme_text(HEADER.replace("version = 1", "version = 2") + SCHEME)
    with pytest.raises(ParseError):
        parse_scheme_text(HEADER + "\n[scheme]\nN = 2\nd = 1\nE_basis = [[1, 2]]\n")
    assert parse_scheme_text(HEADER + SCHEME).N == 2


def test_bundled_fixture_kinds():
    from quasitop import load_scheme
    from quasitop.arrangement import Arrangement
    from quasitop.scheme import Codim1Domain

    ak = load_scheme(fixture_path("ammann_kramer.toml"))
    assert isinstance(ak, Arrangement) and ak.gamma_rank == 6 and len(ak.hyperplanes) == 15
    assert isinstance(load_scheme(fixture_path("fibonacci.toml")), Codim1Domain)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quasitop", "validate", str(fixture_path("fibonacci.toml"))],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("ok: codim1")


def test_selftest_command():
    code, out, _ = cli("selftest", "--seed", "7")
    assert code == 0
    assert "seed = 7" in out and "FAIL" not in out
