"""Built-in golden checks: Ammann-Kramer numbers, codimension-1 cases, the
Euler cross-check on bundled fixtures and a seeded exact-arithmetic battery."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .exact.lattice import (
    Lattice,
    det_int,
    hnf,
    integer_kernel,
    matmul,
    rational_rank,
    saturation,
    snf,
    subgroup_index,
)
from .invariants import euler_chain, euler_closed_form
from .schemefile import fixture_path, load_scheme

DEFAULT_SEED = 20240601

AK_GOLDEN = {
    "L": [32, 46, 15],
    "L1_by_plane": 8,
    "L0_by_plane": 8,
    "sum_L0_over_lines": 152,
    "sum_L0_over_plane_lines": 24,
    "L1_tilde": 74,
    "R": [69, 9],
    "e": 120,
    "D": [180, 71, 12, 1],
    "K": (192, 72),
}

EULER_FIXTURES = ["fibonacci.toml", "codim1_two_interval.toml", "fibonacci_scheme.toml",
                  "octagonal.toml", "penrose.toml"]


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class SelftestResult:
    seed: int
    threads: int
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


# -- random integer matrices ---------------------------------------------------

def random_matrix(rng: random.Random, max_dim: int = 8, bound: int = 20) -> list[list[int]]:
    r, c = rng.randint(1, max_dim), rng.randint(1, max_dim)
    mode = rng.random()
    rows = [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)]
    if mode < 0.2 and r > 1:
        # force a rank drop
        a, b = rng.sample(range(r), 2)
        k = rng.randint(-3, 3)
        rows[b] = [k * x for x in rows[a]]
    elif mode < 0.3:
        # sparse
        rows = [[x if rng.random() < 0.3 else 0 for x in row] for row in rows]
    return rows


def random_unimodular(rng: random.Random, n: int, steps: int = 12, bound: int = 3) -> list[list[int]]:
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return [[rng.choice((1, -1))]]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-bound, bound)
        u[i] = [a + k * b for a, b in zip(u[i], u[j])]
        if rng.random() < 0.2:
            u[i], u[j] = u[j], u[i]
    return u


def _is_unimodular(u) -> bool:
    return len(u) == len(u[0]) and abs(det_int(u)) == 1


def _is_hnf(h) -> bool:
    last = -1
    zero_seen = False
    for row in h:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            zero_seen = True
            continue
        if zero_seen:
            return False
        p = nz[0]
        if p <= last or row[p] <= 0:
            return False
        for prev in h[: h.index(row)]:
            if not 0 <= prev[p] < row[p]:
                return False
        last = p
    return True


def check_matrix(m: list[list[int]], rng: random.Random) -> list[str]:
    """Exact identities for one matrix; returns the list of failures."""
    bad = []
    r, c = len(m), len(m[0])
    h, u = hnf(m)
    if not _is_unimodular(u):
        bad.append("hnf: U not unimodular")
    if matmul(u, m) != h:
        bad.append("hnf: U*M != H")
    if not _is_hnf(h):
        bad.append("hnf: H not in Hermite form")

    s, su, sv = snf(m)
    if not (_is_unimodular(su) and _is_unimodular(sv)):
        bad.append("snf: U or V not unimodular")
    if matmul(matmul(su, m), sv) != s:
        bad.append("snf: U*M*V != S")
    k = min(r, c)
    if any(s[i][j] for i in range(r) for j in range(c) if i != j):
        bad.append("snf: S not diagonal")
    diag = [s[i][i] for i in range(k)]
    if any(x < 0 for x in diag):
        bad.append("snf: negative diagonal")
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a and b % a):
            bad.append("snf: divisibility chain broken")
            break
    rk = rational_rank(m)
    if sum(1 for x in diag if x) != rk:
        bad.append("snf: rank mismatch")

    ker = integer_kernel(m, c)
    if ker.rank != c - rk:
        bad.append("kernel: wrong rank")
    if any(sum(a * b for a, b in zip(row, v)) for v in ker.int_basis() for row in m):
        bad.append("kernel: vector not annihilated")
    if saturation(ker) != ker:
        bad.append("kernel: not saturated")

    # index of the row lattice inside its saturation, in two bases
    lat = Lattice.from_generators(m, c)
    if lat.rank:
        sat = saturation(lat)
        idx = subgroup_index(lat, sat)
        w = random_unimodular(rng, lat.rank)
        moved = Lattice.from_generators(matmul(w, lat.int_basis()), c)
        if moved != lat or subgroup_index(moved, sat) != idx:
            bad.append("index: depends on the basis")
        nonzero = [x for x in diag if x]
        prod = 1
        for x in nonzero:
            prod *= x
        if idx != prod:
            bad.append("index: differs from product of invariant factors")
    return bad


def exact_battery(seed: int, count: int = 1000, max_dim: int = 8, bound: int = 20) -> tuple[int, list[str]]:
    rng = random.Random(seed)
    failures = []
    for n in range(count):
        m = random_matrix(rng, max_dim, bound)
        for msg in check_matrix(m, rng):
            failures.append(f"matrix {n}: {msg}")
    return count, failures


# -- golden suites ---------------------------------------------------------------

def ak_golden() -> list[Check]:
    from .invariants import rank_report

    arr = load_scheme(fixture_path("ammann_kramer.toml"))
    tables = arr.tables()
    rep = rank_report(arr, tables)
    out = []
    got_L = [tables.count(l) for l in range(3)]
    out.append(Check("ak: L0, L1, L2", got_L == AK_GOLDEN["L"], str(got_L)))
    l1a = {tables.relative_count(a.id, 1) for a in tables.levels[2]}
    l0a = {tables.relative_count(a.id, 0) for a in tables.levels[2]}
    out.append(Check("ak: L1^alpha = L0^alpha = 8", l1a == {8} and l0a == {8}, f"{sorted(l1a)} {sorted(l0a)}"))
    s = sum(tables.relative_count(t.id, 0) for t in tables.levels[1])
    out.append(Check("ak: sum of L0 over lines", s == AK_GOLDEN["sum_L0_over_lines"], str(s)))
    per_plane = {sum(tables.relative_count(t, 0) for t in tables.relative[a.id][1]) for a in tables.levels[2]}
    out.append(Check("ak: sum of L0 over lines in each plane", per_plane == {24}, str(sorted(per_plane))))
    out.append(Check("ak: L1 tilde", rep.aux["L1_tilde"] == AK_GOLDEN["L1_tilde"], str(rep.aux["L1_tilde"])))
    out.append(Check("ak: R1, R2", rep.aux["R"][:2] == AK_GOLDEN["R"], str(rep.aux["R"][:2])))
    out.append(Check("ak: e", rep.e == AK_GOLDEN["e"], str(rep.e)))
    alt = sum((-1) ** p * x for p, x in enumerate(rep.D))
    chain, closed = euler_chain(tables), euler_closed_form(tables)
    out.append(Check("euler: ammann_kramer.toml", alt == chain == closed == rep.e,
                     f"alt={alt} chain={chain} closed={closed}"))
    out.append(Check("ak: D", rep.D == AK_GOLDEN["D"], str(rep.D)))
    out.append(Check("ak: K0, K1", (rep.k0_rank, rep.k1_rank) == AK_GOLDEN["K"], f"{rep.k0_rank} {rep.k1_rank}"))
    return out


def codim1_cases() -> list[Check]:
    from .pipeline import analyze

    out = []
    a = analyze(load_scheme(fixture_path("fibonacci.toml")))
    ok = a.k == 1 and a.report.cohomology == [1, 2]
    out.append(Check("codim1: Fibonacci k = 1, H = (Z, Z^2)", ok, f"k={a.k} H={a.report.cohomology}"))
    a = analyze(load_scheme(fixture_path("codim1_two_interval.toml")))
    N = a.derived["N"]
    ok = a.k == 2 and a.report.cohomology[-1] == N + 1
    out.append(Check("codim1: two intervals k = 2, H^1 = Z^(N+1)", ok, f"k={a.k} H={a.report.cohomology}"))
    return out


def euler_cross(names=EULER_FIXTURES) -> list[Check]:
    from .pipeline import analyze

    out = []
    for name in names:
        a = analyze(load_scheme(fixture_path(name)))
        rep, tables = a.report, a.tables
        alt = sum((-1) ** p * x for p, x in enumerate(rep.D))
        chain = euler_chain(tables)
        closed = euler_closed_form(tables)
        ok = alt == chain == closed == rep.e
        out.append(Check(f"euler: {name}", ok, f"alt={alt} chain={chain} closed={closed}"))
    return out


def run(seed: int = DEFAULT_SEED, threads: int = 1, *, battery_size: int = 1000, log=None) -> SelftestResult:
    res = SelftestResult(seed, threads)

    def add(checks):
        for c in checks:
            res.checks.append(c)
            if log:
                log(f"{'PASS' if c.ok else 'FAIL'}  {c.name}  {c.detail}")

    n, failures = exact_battery(seed, battery_size)
    add([Check(f"exact: {n} seeded matrices", not failures, "; ".join(failures[:5]))])
    add(codim1_cases())
    add(euler_cross())
    add(ak_golden())
    return res
