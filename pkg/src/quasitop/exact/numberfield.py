"""Exact arithmetic in Q[x]/(m(x)) with a designated real embedding.

Elements are stored as canonical power-basis coefficient tuples, so zero
testing and equality are syntactic.  Signs (and therefore ordering) are
decided by refining an isolating interval of the chosen real root until
an interval enclosure of the element excludes zero.
"""

from __future__ import annotations

import threading
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from ..errors import RefinementBudgetExceeded

DEFAULT_BISECTION_CAP = 256


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


# -- dense polynomial helpers (ascending coefficients) -----------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = [Fraction(c) for c in a]
    _trim(a)
    b = _trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        coef = a[-1] / lead
        q[shift] = coef
        for i, c in enumerate(b):
            a[i + shift] -= coef * c
        _trim(a)
    return _trim(q), a


def _poly_derivative(p: Sequence) -> list:
    return _trim([i * p[i] for i in range(1, len(p))])


def sturm_sequence(p: Sequence) -> list[list]:
    seq = [_trim([Fraction(c) for c in p])]
    seq.append(_poly_derivative(seq[0]))
    while seq[-1]:
        _, r = _poly_divmod(seq[-2], seq[-1])
        seq.append([-c for c in r])
    return seq[:-1]


def _sign_changes(values: Iterable) -> int:
    changes, last = 0, 0
    for v in values:
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            changes += 1
        last = s
    return changes


def count_real_roots(p: Sequence, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p)
    return _sign_changes(_poly_eval(s, lo) for s in seq) - _sign_changes(_poly_eval(s, hi) for s in seq)


def _interval_mul(a: tuple, b: tuple) -> tuple:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def _interval_eval(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction) -> tuple:
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _interval_mul(acc, (lo, hi))
        acc = (acc[0] + c, acc[1] + c)
    return acc


class NumberField:
    """Q[x]/(m(x)) for a monic irreducible integer polynomial m with one
    distinguished real root isolated by ``root_interval``."""

    def __init__(self, min_poly: Sequence[int], root_interval=None, *,
                 bisection_cap: int = DEFAULT_BISECTION_CAP, check_irreducible: bool = True):
        poly = [int(c) for c in min_poly]
        if len(poly) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if poly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.min_poly: tuple[int, ...] = tuple(poly)
        self.degree = len(poly) - 1
        self.bisection_cap = bisection_cap
        if self.degree == 1:
            root = Fraction(-poly[0])
            self.root_interval = (root, root)
        else:
            if root_interval is None:
                raise ValueError("an isolating interval is required for degree > 1")
            lo, hi = (as_fraction(x) for x in root_interval)
            if not lo < hi:
                raise ValueError("root interval must satisfy lo < hi")
            m_lo, m_hi = _poly_eval(poly, lo), _poly_eval(poly, hi)
            if m_lo * m_hi >= 0:
                raise ValueError("root interval endpoints must give opposite signs of m")
            if count_real_roots(poly, lo, hi) != 1:
                raise ValueError("root interval does not isolate exactly one root")
            if check_irreducible:
                import sympy

                x = sympy.Symbol("x")
                if not sympy.Poly(list(reversed(poly)), x, domain="QQ").is_irreducible:
                    raise ValueError("minimal polynomial is reducible over Q")
            self.root_interval = (lo, hi)
        self._lo, self._hi = self.root_interval
        self._sign_lo = 1 if _poly_eval(poly, self._lo) > 0 else -1
        self._halvings = 0
        self._lock = threading.Lock()
        # x^k mod m for k = degree .. 2*degree - 2
        self._reductions: list[tuple[Fraction, ...]] = []
        cur = [Fraction(-c) for c in poly[:-1]]  # x^deg = -(m0 + m1 x + ...)
        for _ in range(max(self.degree - 1, 0)):
            self._reductions.append(tuple(cur))
            # multiply by x and reduce
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [cur[i] - top * poly[i] for i in range(self.degree)]
        self.zero = FieldElement(self, (Fraction(0),) * self.degree)
        self.one = self(1)

    # -- identity -----------------------------------------------------------

    def _key(self):
        return (self.min_poly, self.root_interval)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"NumberField(min_poly={list(self.min_poly)}, root_interval=({self.root_interval[0]}, {self.root_interval[1]}))"

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls([0, 1])

    # -- element construction -----------------------------------------------

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        c = as_fraction(value)
        return FieldElement(self, (c,) + (Fraction(0),) * (self.degree - 1))

    def from_coeffs(self, coeffs: Sequence) -> "FieldElement":
        """Element from (possibly unreduced) ascending power-basis coefficients."""
        cs = [as_fraction(c) for c in coeffs]
        if len(cs) <= self.degree:
            cs = cs + [Fraction(0)] * (self.degree - len(cs))
            return FieldElement(self, tuple(cs))
        _, r = _poly_divmod(cs, self.min_poly)
        r = r + [Fraction(0)] * (self.degree - len(r))
        return FieldElement(self, tuple(r))

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self(Fraction(-self.min_poly[0]))
        return self.from_coeffs([0, 1])

    # -- arithmetic kernels -------------------------------------------------

    def _mul(self, a: tuple, b: tuple) -> tuple:
        n = self.degree
        if n == 1:
            return (a[0] * b[0],)
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
        out = prod[:n]
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                red = self._reductions[k - n]
                for i in range(n):
                    out[i] += c * red[i]
        return tuple(out)

    def _inverse(self, a: tuple) -> tuple:
        if self.degree == 1:
            return (1 / a[0],)
        # extended Euclid: find s with s*a = 1 mod m
        r0, r1 = [Fraction(c) for c in self.min_poly], _trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("element is not invertible (minimal polynomial reducible?)")
        inv = [c / r1[0] for c in s1]
        _, inv = _poly_divmod(inv, self.min_poly)
        return tuple(inv + [Fraction(0)] * (self.degree - len(inv)))

    # -- real embedding -----------------------------------------------------

    def _bisect(self) -> None:
        if self._halvings >= self.bisection_cap:
            raise RefinementBudgetExceeded(
                f"root interval refinement exceeded {self.bisection_cap} halvings")
        mid = (self._lo + self._hi) / 2
        v = _poly_eval(self.min_poly, mid)
        if v == 0:  # only possible for reducible input
            self._lo = self._hi = mid
        elif (v > 0) == (self._sign_lo > 0):
            self._lo = mid
        else:
            self._hi = mid
        self._halvings += 1

    def enclosure(self, coeffs: Sequence[Fraction], width: Fraction | None = None) -> tuple[Fraction, Fraction]:
        """Rational interval containing the embedded value of ``coeffs``.

        If ``width`` is given the root interval is refined until the
        enclosure is at most that wide.
        """
        with self._lock:
            while True:
                lo, hi = _interval_eval(coeffs, self._lo, self._hi)
                if width is None or hi - lo <= width:
                    return lo, hi
                self._bisect()

    def sign(self, coeffs: Sequence[Fraction]) -> int:
        if not any(coeffs):
            return 0
        if self.degree == 1:
            return 1 if coeffs[0] > 0 else -1
        with self._lock:
            while True:
                lo, hi = _interval_eval(coeffs, self._lo, self._hi)
                if lo > 0:
                    return 1
                if hi < 0:
                    return -1
                self._bisect()


class FieldElement:
    """Immutable element of a :class:`NumberField`."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # coercion
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mixing elements of different number fields")
            return other.coeffs
        if isinstance(other, (int, Fraction, Rational)):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(b - a for a, b in zip(self.coeffs, o)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coeffs, o))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        return FieldElement(self.field, self.field._inverse(self.coeffs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, tuple(a / other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * FieldElement(self.field, o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.coeffs == other.coeffs and other.field == self.field
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs[0]) if self.is_rational() else hash(self.coeffs)
        return self._hash

    def sign(self) -> int:
        return self.field.sign(self.coeffs)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def enclosure(self, width: Fraction | None = None) -> tuple[Fraction, Fraction]:
        return self.field.enclosure(self.coeffs, width)

    def to_decimal(self, digits: int = 12) -> str:
        lo, hi = self.enclosure(Fraction(1, 10 ** (digits + 3)))
        mid = (lo + hi) / 2
        with localcontext() as ctx:
            ctx.prec = digits + 30
            value = Decimal(mid.numerator) / Decimal(mid.denominator)
            return f"{value:.{digits}f}"

    def __float__(self):
        lo, hi = self.enclosure(Fraction(1, 1 << 60))
        return float((lo + hi) / 2)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if i == 0 else f"{c}*x" if i == 1 else f"{c}*x^{i}")
        return "FieldElement(" + (" + ".join(terms) or "0") + ")"


def field_sign(x: FieldElement, nf: NumberField | None = None) -> int:
    if nf is not None and x.field != nf:
        raise ValueError("element does not belong to the given field")
    return x.sign()


def rational_coordinates(v: Sequence[FieldElement], nf: NumberField | None = None) -> tuple[Fraction, ...]:
    """Concatenate the power-basis coordinates of every entry of ``v``."""
    out: list[Fraction] = []
    for x in v:
        if isinstance(x, FieldElement):
            out.extend(x.coeffs)
        else:
            if nf is None:
                raise TypeError("rational entries need an explicit field")
            out.extend(nf(x).coeffs)
    return tuple(out)
