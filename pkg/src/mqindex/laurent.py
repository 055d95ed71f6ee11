"""Exact arithmetic over the integral Laurent ring Z[t, t^-1].

Polynomials are immutable and canonically trimmed, so equality and hashing
are structural.  Matrices are small (desk-scale knot presentations), so
determinants use fraction-free elimination directly on Laurent entries.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import ZZ
from sympy.polys import galoistools as gt


@dataclass(frozen=True)
class LaurentPoly:
    """sum(coefficients[i] * t**(min_degree + i)), trimmed at both ends."""

    min_degree: int = 0
    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        lo, hi = 0, len(coeffs)
        while lo < hi and coeffs[lo] == 0:
            lo += 1
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            object.__setattr__(self, "min_degree", 0)
            object.__setattr__(self, "coefficients", ())
        else:
            object.__setattr__(self, "min_degree", self.min_degree + lo)
            object.__setattr__(self, "coefficients", coeffs[lo:hi])

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls(0, (c,))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> "LaurentPoly":
        return cls(degree, (c,))

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "LaurentPoly":
        terms = {k: v for k, v in terms.items() if v}
        if not terms:
            return ZERO
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(k, 0) for k in range(lo, hi + 1)))

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        if isinstance(x, str):
            return parse_laurent(x)
        raise TypeError(f"cannot coerce {x!r} to LaurentPoly")

    # -- structure ------------------------------------------------------
    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.coefficients) - 1

    @property
    def span(self) -> int:
        """Width max_degree - min_degree; -1 for zero."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_unit(self) -> bool:
        return len(self.coefficients) == 1 and abs(self.coefficients[0]) == 1

    def to_dict(self) -> dict[int, int]:
        return {self.min_degree + i: c for i, c in enumerate(self.coefficients) if c}

    def shift(self, k: int) -> "LaurentPoly":
        if self.is_zero():
            return self
        return LaurentPoly(self.min_degree + k, self.coefficients)

    def content(self) -> int:
        return math.gcd(*self.coefficients) if self.coefficients else 0

    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def trailing(self) -> int:
        return self.coefficients[0] if self.coefficients else 0

    def bar(self) -> "LaurentPoly":
        """Involution t -> t^-1."""
        if self.is_zero():
            return self
        return LaurentPoly(-self.max_degree, self.coefficients[::-1])

    def __call__(self, value):
        """Evaluate at an int or Fraction (negative powers via Fraction)."""
        if self.is_zero():
            return 0
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * value + c
        if self.min_degree >= 0:
            return acc * value ** self.min_degree
        return Fraction(acc) / Fraction(value) ** (-self.min_degree)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _combine(self, other, 1)

    __radd__ = __add__

    def __neg__(self):
        return _trusted(self.min_degree, tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _combine(self, other, -1)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _combine(other, self, -1)

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        a, b = self.coefficients, other.coefficients
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        # leading/trailing products are nonzero, so no trimming is needed
        return _trusted(self.min_degree + other.min_degree, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise ValueError("only units have negative powers")
            return LaurentPoly(self.min_degree * n, (self.coefficients[0] ** n,))
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit")
        return LaurentPoly(-self.min_degree, self.coefficients)

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"


def _trusted(min_degree: int, coeffs: tuple[int, ...]) -> LaurentPoly:
    """Build without trimming; caller guarantees nonzero end coefficients."""
    obj = object.__new__(LaurentPoly)
    object.__setattr__(obj, "min_degree", min_degree if coeffs else 0)
    object.__setattr__(obj, "coefficients", coeffs)
    return obj


def _combine(f: LaurentPoly, g: LaurentPoly, sign: int) -> LaurentPoly:
    """f + sign * g."""
    if g.is_zero():
        return f
    if f.is_zero():
        return g if sign > 0 else -g
    lo = min(f.min_degree, g.min_degree)
    hi = max(f.max_degree, g.max_degree)
    out = [0] * (hi - lo + 1)
    off = f.min_degree - lo
    for i, c in enumerate(f.coefficients):
        out[off + i] = c
    off = g.min_degree - lo
    if sign > 0:
        for i, c in enumerate(g.coefficients):
            out[off + i] += c
    else:
        for i, c in enumerate(g.coefficients):
            out[off + i] -= c
    a, b = 0, len(out)
    while a < b and out[a] == 0:
        a += 1
    while b > a and out[b - 1] == 0:
        b -= 1
    return _trusted(lo + a, tuple(out[a:b]))


def _coerce_or_none(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    return None


ZERO = LaurentPoly()
ONE = LaurentPoly(0, (1,))
T = LaurentPoly(1, (1,))


# -- text form -------------------------------------------------------------

def format_laurent(f: LaurentPoly, var: str = "t") -> str:
    """Descending-degree text, e.g. ``t^2 - t + 1`` or ``-t^-1 + 3``."""
    if f.is_zero():
        return "0"
    parts = []
    for k in range(f.max_degree, f.min_degree - 1, -1):
        c = f.coefficients[k - f.min_degree]
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


_TERM = re.compile(
    r"([+-]?)\s*(\d*)\s*\*?\s*(?:(t)\s*(?:\^\s*\(?\s*([+-]?\d+)\s*\)?)?)?\s*"
)


def parse_laurent(text: str, var: str = "t") -> LaurentPoly:
    """Parse ``t^2 - t + 1``, ``1-t+ t^2``, ``2*t^-1 + 3`` and similar."""
    s = text.replace(var, "t").replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial text")
    terms: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse Laurent polynomial {text!r} at {pos}")
        sign, digits, tee, exp = m.groups()
        coeff = int(digits) if digits else 1
        if sign == "-":
            coeff = -coeff
        degree = 0 if not tee else (int(exp) if exp is not None else 1)
        terms[degree] = terms.get(degree, 0) + coeff
        pos = m.end()
    return LaurentPoly.from_dict(terms)


# -- normal forms and gcd ------------------------------------------------------

def normalize_unit(f: LaurentPoly) -> LaurentPoly:
    """Associate of f with min_degree 0 and positive constant term."""
    if f.is_zero():
        return f
    coeffs = f.coefficients
    if coeffs[0] < 0:
        coeffs = tuple(-c for c in coeffs)
    return LaurentPoly(0, coeffs)


def associates(f: LaurentPoly, g: LaurentPoly) -> bool:
    return normalize_unit(f) == normalize_unit(g)


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of ascending coefficient lists (b nonzero)."""
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and any(r):
        shift = len(r) - 1 - db
        lr = r[-1]
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[shift + i] -= lr * c
        while r and r[-1] == 0:
            r.pop()
    return r


def _primitive(a: list[int]) -> list[int]:
    g = math.gcd(*a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _gcd_pair(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    if f.is_zero():
        return normalize_unit(g)
    if g.is_zero():
        return normalize_unit(f)
    cont = math.gcd(f.content(), g.content())
    a = _primitive(list(f.coefficients))
    b = _primitive(list(g.coefficients))
    if len(a) < len(b):
        a, b = b, a
    while True:
        if len(b) == 1:
            return LaurentPoly.const(cont)
        r = _prem(a, b)
        if not r:
            return normalize_unit(LaurentPoly(0, tuple(c * cont for c in _primitive(b))))
        a, b = b, _primitive(r)


def poly_gcd(fs: Iterable[LaurentPoly]) -> LaurentPoly:
    fs = [LaurentPoly.coerce(f) for f in fs]
    if not fs:
        raise ValueError("poly_gcd of an empty sequence")
    g = ZERO
    for f in fs:
        g = _gcd_pair(g, f)
        if g == ONE:
            break
    return normalize_unit(g)


def exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """f / g, raising ValueError if g does not divide f in Z[t, t^-1]."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return ZERO
    if len(g.coefficients) == 1:
        c = g.coefficients[0]
        if any(x % c for x in f.coefficients):
            raise ValueError(f"{g} does not divide {f}")
        return LaurentPoly(f.min_degree - g.min_degree, tuple(x // c for x in f.coefficients))
    r = list(f.coefficients)
    b = g.coefficients
    lb = b[-1]
    q = [0] * max(len(r) - len(b) + 1, 0)
    for shift in range(len(q) - 1, -1, -1):
        lead = r[shift + len(b) - 1]
        if lead % lb:
            raise ValueError(f"{g} does not divide {f}")
        c = lead // lb
        q[shift] = c
        if c:
            for i, x in enumerate(b):
                r[shift + i] -= c * x
    if any(r):
        raise ValueError(f"{g} does not divide {f}")
    return LaurentPoly(f.min_degree - g.min_degree, tuple(q))


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        while a and a[-1] == 0:
            a.pop()
    return q, a


def bezout(f: LaurentPoly, g: LaurentPoly):
    """Integral Laurent (u, v) with u*f + v*g == 1, or None.

    Works on the shifted polynomials a, b (nonzero constant terms): for each
    n >= 0 the Bezout pair for t^n with deg u < deg b is unique over Q, and
    it is tried for integrality; dividing by t^n then gives the answer.
    None means no pair was found, not that none exists.
    """
    if f.is_zero() or g.is_zero():
        return None
    if f.span == 0 and g.span == 0:
        d, x, y = _int_xgcd(f.coefficients[0], g.coefficients[0])
        if d != 1:
            return None
        return LaurentPoly(-f.min_degree, (x,)), LaurentPoly(-g.min_degree, (y,))
    a = [Fraction(c) for c in f.coefficients]
    b = [Fraction(c) for c in g.coefficients]
    r0, r1 = a, b
    s0, s1 = [Fraction(1)], []
    while r1 and any(r1):
        q, r = _qpoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub(s0, _qmul(q, s1))
    if len(r0) != 1:
        return None
    u0 = [x / r0[0] for x in s0]
    for n in range(len(a) + len(b)):
        target = [Fraction(0)] * n + [Fraction(1)]
        u = _qpoly_divmod([Fraction(0)] * n + u0, b)[1] if len(b) > 1 else []
        rest = _qsub(target, _qmul(u, a))
        v, rem = _qpoly_divmod(rest, b)
        assert not any(rem)
        if any(x.denominator != 1 for x in u + v):
            continue
        u_poly = LaurentPoly(-f.min_degree - n, tuple(int(x) for x in u))
        v_poly = LaurentPoly(-g.min_degree - n, tuple(int(x) for x in v))
        assert u_poly * f + v_poly * g == ONE
        return u_poly, v_poly
    return None


def _int_xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _qmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _qsub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


# -- finite-field specialization ----------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The residue field Z[t, t^-1] / (p, modulus(t)).

    ``modulus`` holds ascending coefficients of a monic irreducible
    polynomial over Z/p with nonzero constant term.
    """

    p: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        mod = tuple(int(c) % self.p for c in self.modulus)
        while mod and mod[-1] == 0:
            mod = mod[:-1]
        object.__setattr__(self, "modulus", mod)
        if len(mod) < 2 or mod[-1] != 1:
            raise ValueError(f"modulus {self.modulus} must be monic of degree >= 1")
        if mod[0] == 0:
            raise ValueError("modulus(0) must be nonzero so that t is invertible")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not gt.gf_irreducible_p(list(reversed(mod)), self.p, ZZ):
            raise ValueError(f"modulus {mod} is reducible mod {self.p}")

    @classmethod
    def from_poly(cls, p: int, modulus) -> "FieldSpec":
        m = LaurentPoly.coerce(modulus)
        return cls(p, tuple(m.to_dict().get(k, 0) for k in range(0, m.max_degree + 1)))

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def order(self) -> int:
        return self.p ** self.degree

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.degree

    @property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.degree - 1)

    @property
    def t_image(self) -> tuple[int, ...]:
        if self.degree == 1:
            return ((-self.modulus[0]) % self.p,)
        return (0, 1) + (0,) * (self.degree - 2)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def scale(self, a, c: int):
        return tuple((x * c) % self.p for x in a)

    def mul(self, a, b):
        d, p, mod = self.degree, self.p, self.modulus
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(d + 1):
                    prod[k - d + i] -= c * mod[i]
        return tuple(c % p for c in prod[:d])

    def pow(self, a, n: int):
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero in finite field")
        return self.pow(a, self.order - 2)

    def is_zero(self, a) -> bool:
        return not any(a)

    def __str__(self):
        mod = LaurentPoly(0, self.modulus)
        return f"(p={self.p}, {format_laurent(mod)})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def specialize(f: LaurentPoly, spec: FieldSpec) -> tuple[int, ...]:
    """Image of f in F_p[t]/(modulus), as ascending coefficients."""
    f = LaurentPoly.coerce(f)
    if f.is_zero():
        return spec.zero
    t = spec.t_image
    acc = spec.zero
    for c in reversed(f.coefficients):
        acc = spec.add(spec.mul(acc, t), spec.scale(spec.one, c))
    k = f.min_degree
    if k > 0:
        acc = spec.mul(acc, spec.pow(t, k))
    elif k < 0:
        acc = spec.mul(acc, spec.pow(spec.inv(t), -k))
    return acc


def irreducible_factors_mod_p(f: LaurentPoly, p: int, max_degree: int = 4) -> list[FieldSpec]:
    """Distinct monic irreducible factors of f mod p (excluding t), as fields."""
    f = normalize_unit(LaurentPoly.coerce(f))
    coeffs = [c % p for c in reversed(f.coefficients)]
    coeffs = gt.gf_strip(coeffs)
    if len(coeffs) <= 1:
        return []
    _, factors = gt.gf_factor(coeffs, p, ZZ)
    out = []
    for g, _mult in factors:
        if 1 <= len(g) - 1 <= max_degree and g[-1] % p:
            out.append(FieldSpec(p, tuple(reversed(g))))
    return out


def default_battery(delta: LaurentPoly, primes: Sequence[int] = (2, 3, 5, 7, 11, 13),
                    max_degree: int = 4) -> list[FieldSpec]:
    """Residue fields (p, pi) with pi | delta mod p; the only candidates for E_k != R."""
    battery = []
    for p in primes:
        battery.extend(irreducible_factors_mod_p(delta, p, max_degree))
    return battery


# -- matrices ----------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: tuple[LaurentPoly, ...]

    def __post_init__(self):
        entries = tuple(LaurentPoly.coerce(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ValueError(f"{len(entries)} entries for a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(e for r in rows for e in r))

    @classmethod
    def diag(cls, *entries) -> "PolyMatrix":
        n = len(entries)
        return cls.from_rows([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls.diag(*([1] * n))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[LaurentPoly]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
                                    self.rows)

    def delete_column(self, j: int) -> "PolyMatrix":
        return PolyMatrix.from_rows([r[:j] + r[j + 1:] for r in self.to_rows()], self.cols - 1)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix.from_rows([[self[i, j] for j in cols] for i in rows], len(cols))

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.to_rows())


def block_diag(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    rows = [r + [ZERO] * b.cols for r in a.to_rows()]
    rows += [[ZERO] * a.cols + r for r in b.to_rows()]
    return PolyMatrix.from_rows(rows, a.cols + b.cols)


def det(rows: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Determinant: cofactor expansion up to 3x3, Bareiss elimination above."""
    n = len(rows)
    if n == 0:
        return ONE
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        total = ZERO
        for j in range(3):
            minor = [[rows[i][k] for k in range(3) if k != j] for i in (1, 2)]
            term = rows[0][j] * det(minor)
            total = total + term if j % 2 == 0 else total - term
        return total
    return _unit_pivot_det([list(r) for r in rows])


def _unit_pivot_det(m: list[list[LaurentPoly]]) -> LaurentPoly:
    """Expand along unit entries (exact, no division), then Bareiss the rest."""
    scale = ONE
    while len(m) > 3:
        pos = next(((i, j) for i, r in enumerate(m) for j, e in enumerate(r) if e.is_unit()), None)
        if pos is None:
            break
        i, j = pos
        u = m[i][j]
        inv = u.unit_inverse()
        prow = m[i]
        rest = []
        for k, r in enumerate(m):
            if k == i:
                continue
            f = r[j]
            if not f.is_zero():
                c = f * inv
                r = [x - c * y for x, y in zip(r, prow)]
            rest.append(r[:j] + r[j + 1:])
        scale = scale * u if (i + j) % 2 == 0 else scale * (-u)
        m = rest
    if len(m) <= 3:
        return scale * det(m)
    return scale * _bareiss(m)


def _bareiss(m: list[list[LaurentPoly]]) -> LaurentPoly:
    n = len(m)
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = exact_div(pivot * m[i][j] - m[i][k] * m[k][j], prev)
        prev = pivot
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def minors(m: PolyMatrix, k: int) -> list[LaurentPoly]:
    """All k x k minors, rows-major over combinations; k = 0 gives [1]."""
    if not 0 <= k <= min(m.rows, m.cols):
        raise ValueError(f"minor size {k} out of range for {m.rows}x{m.cols} matrix")
    if k == 0:
        return [ONE]
    rows = m.to_rows()
    out = []
    for ri in itertools.combinations(range(m.rows), k):
        for ci in itertools.combinations(range(m.cols), k):
            out.append(det([[rows[i][j] for j in ci] for i in ri]))
    return out


def rank_over_field(m: PolyMatrix, spec: FieldSpec) -> int:
    a = [[specialize(e, spec) for e in r] for r in m.to_rows()]
    rank = 0
    for col in range(m.cols):
        pivot = next((i for i in range(rank, m.rows) if not spec.is_zero(a[i][col])), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = spec.inv(a[rank][col])
        a[rank] = [spec.mul(x, inv) for x in a[rank]]
        for i in range(m.rows):
            if i != rank and not spec.is_zero(a[i][col]):
                factor = a[i][col]
                a[i] = [spec.sub(x, spec.mul(factor, y)) for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


# -- module-preserving reduction -------------------------------------------------

_SMALL_UNITS = tuple(LaurentPoly.monomial(k, s) for k in range(-2, 3) for s in (1, -1))


def smith_reduce_heuristic(m: PolyMatrix) -> PolyMatrix:
    """Shrink a presentation matrix without changing the presented module.

    Rows are relations, columns are generators.  Unit pivots eliminate one
    generator and one relation each; when none is present, row/column
    operations that manufacture a unit are attempted (small unit multiples
    of another line, then Bezout combinations).  A square matrix with unit
    determinant presents the zero module and collapses to 0 x 0.
    """
    rows = [list(r) for r in m.to_rows()]
    ncols = m.cols
    while True:
        rows = [r for r in rows if any(not e.is_zero() for e in r)]
        if ncols == 0:
            return PolyMatrix(len(rows), 0, ())
        if not rows:
            return PolyMatrix(0, ncols, ())
        pos = _find_unit(rows)
        if pos is None and _make_unit(rows, ncols):
            pos = _find_unit(rows)
        if pos is None:
            break
        rows, ncols = _eliminate(rows, ncols, *pos)
    if len(rows) == ncols and ncols <= 6 and det(rows).is_unit():
        return PolyMatrix(0, 0, ())
    return PolyMatrix.from_rows(rows, ncols)


def _find_unit(rows):
    best = None
    for i, r in enumerate(rows):
        for j, e in enumerate(r):
            if e.is_unit():
                # prefer the sparsest row/column to limit fill-in
                weight = sum(not x.is_zero() for x in r) + sum(not rr[j].is_zero() for rr in rows)
                if best is None or weight < best[0]:
                    best = (weight, i, j)
    return None if best is None else best[1:]


def _eliminate(rows, ncols, pi, pj):
    inv = rows[pi][pj].unit_inverse()
    prow = [e * inv for e in rows[pi]]
    out = []
    for i, r in enumerate(rows):
        if i == pi:
            continue
        f = r[pj]
        if f.is_zero():
            new = r
        else:
            new = [x - f * y for x, y in zip(r, prow)]
        out.append(new[:pj] + new[pj + 1:])
    return out, ncols - 1


def _make_unit(rows, ncols) -> bool:
    """Apply one invertible row or column operation that creates a unit entry."""
    n = len(rows)
    # row_a += u * row_b
    for j in range(ncols):
        for a in range(n):
            for b in range(n):
                if a == b or rows[b][j].is_zero():
                    continue
                for u in _SMALL_UNITS:
                    if (rows[a][j] + u * rows[b][j]).is_unit():
                        rows[a] = [x + u * y for x, y in zip(rows[a], rows[b])]
                        return True
    # col_a += u * col_b
    for i in range(n):
        for a in range(ncols):
            for b in range(ncols):
                if a == b or rows[i][b].is_zero():
                    continue
                for u in _SMALL_UNITS:
                    if (rows[i][a] + u * rows[i][b]).is_unit():
                        for r in rows:
                            r[a] = r[a] + u * r[b]
                        return True
    if _column_bezout(rows, ncols) or _row_bezout(rows, ncols):
        return True
    # mix two rows (or columns) first so that a Bezout pair shares a line
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            trial = [list(r) for r in rows]
            trial[a] = [x + y for x, y in zip(rows[a], rows[b])]
            if _column_bezout(trial, ncols, only_row=a):
                rows[:] = trial
                return True
    for a in range(ncols):
        for b in range(ncols):
            if a == b:
                continue
            trial = [list(r) for r in rows]
            for r in trial:
                r[a] = r[a] + r[b]
            if _row_bezout(trial, ncols, only_col=a):
                rows[:] = trial
                return True
    return _shear_search(rows, ncols)


_SCREEN_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


def _shear_multipliers():
    yield from _SMALL_UNITS
    for lo, hi, c in ((-1, 1, 1), (-1, 1, 2), (-2, 2, 1), (-2, 2, 2)):
        for coeffs in itertools.product(range(-c, c + 1), repeat=hi - lo + 1):
            f = LaurentPoly(lo, coeffs)
            if not f.is_zero() and not f.is_unit():
                yield f


def _maybe_unit_ideal(gens) -> bool:
    """Cheap necessary test: no small prime (nor Q) sees a common factor."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    if any(g.is_unit() for g in gens):
        return True
    for p in _SCREEN_PRIMES:
        acc = []
        for g in gens:
            acc = gt.gf_gcd(acc, gt.gf_strip([c % p for c in reversed(g.coefficients)]), p, ZZ)
            if len(acc) == 1:
                break
        if len(acc) != 1:
            return False
    return poly_gcd(gens).span == 0


def _shear_search(rows, ncols, budget: int = 12) -> bool:
    """col_b -= y * col_a for a small Laurent y, chosen so that column b
    generates the unit ideal, followed by row operations exposing a unit.

    Aimed at locally cyclic modules whose generator is not a coordinate
    vector of the current presentation.  ``budget`` caps how many screened
    candidates get the (costly) Bezout search.
    """
    n = len(rows)
    if not _maybe_unit_ideal([e for r in rows for e in r]):
        return False  # E_{cols-1} is not the unit ideal, so no column can go
    for a in range(ncols):
        for b in range(ncols):
            if a == b:
                continue
            for y in _shear_multipliers():
                col = [r[b] - y * r[a] for r in rows]
                if not _maybe_unit_ideal(col):
                    continue
                budget -= 1
                if budget < 0:
                    return False
                trial = [list(r) for r in rows]
                for r in trial:
                    r[b] = r[b] - y * r[a]
                if _find_unit(trial) is not None or _row_bezout(trial, ncols, only_col=b):
                    rows[:] = trial
                    return True
                for i in range(n):
                    for k in range(n):
                        if i == k or trial[k][b].is_zero():
                            continue
                        for s in (ONE, -ONE):
                            mixed = [list(r) for r in trial]
                            mixed[i] = [x + s * z for x, z in zip(trial[i], trial[k])]
                            if _row_bezout(mixed, ncols, only_col=b):
                                rows[:] = mixed
                                return True
    return False


def _column_bezout(rows, ncols, only_row=None) -> bool:
    """Unimodular column pair transform turning u*f + v*g = 1 into an entry 1."""
    for i in range(len(rows)) if only_row is None else (only_row,):
        for a in range(ncols):
            for b in range(a + 1, ncols):
                f, g = rows[i][a], rows[i][b]
                uv = bezout(f, g)
                if uv is None:
                    continue
                u, v = uv
                for r in rows:
                    x, y = r[a], r[b]
                    r[a], r[b] = u * x + v * y, f * y - g * x
                return True
    return False


def _row_bezout(rows, ncols, only_col=None) -> bool:
    for j in range(ncols) if only_col is None else (only_col,):
        for a in range(len(rows)):
            for b in range(a + 1, len(rows)):
                f, g = rows[a][j], rows[b][j]
                uv = bezout(f, g)
                if uv is None:
                    continue
                u, v = uv
                ra, rb = rows[a], rows[b]
                rows[a] = [u * x + v * y for x, y in zip(ra, rb)]
                rows[b] = [f * y - g * x for x, y in zip(ra, rb)]
                return True
    return False


# -- integer matrices --------------------------------------------------------------

def smith_invariants(m: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Nonzero invariant factors of an integer matrix and its column nullity.

    The cokernel of the row space is Z^nullity plus the cyclic groups
    Z/d for each returned factor d.
    """
    a = [list(r) for r in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    factors = []
    r0 = 0
    for c0 in range(ncols):
        if r0 >= nrows:
            break
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(r0, nrows) for j in range(c0, ncols) if a[i][j]]
            if not nz:
                return sorted(factors), ncols - len(factors)
            _, pi, pj = min(nz)
            a[r0], a[pi] = a[pi], a[r0]
            for r in a:
                r[c0], r[pj] = r[pj], r[c0]
            p = a[r0][c0]
            dirty = False
            for i in range(r0 + 1, nrows):
                q = a[i][c0] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r0])]
                dirty |= a[i][c0] != 0
            for j in range(c0 + 1, ncols):
                q = a[r0][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[c0]
                dirty |= a[r0][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(r0 + 1, nrows) for j in range(c0 + 1, ncols)
                        if a[i][j] % p), None)
            if bad is not None:
                a[r0] = [x + y for x, y in zip(a[r0], a[bad[0]])]
                continue
            factors.append(abs(p))
            r0 += 1
            break
    return sorted(factors), ncols - len(factors)


@dataclass
class MultiLaurent:
    """Integer Laurent polynomial in commuting variables t_1..t_r."""

    terms: dict[tuple[int, ...], int]

    def __post_init__(self):
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def monomial(cls, exps: tuple[int, ...], c: int = 1) -> "MultiLaurent":
        return cls({tuple(exps): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MultiLaurent") -> "MultiLaurent":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return MultiLaurent(out)

    def __neg__(self):
        return MultiLaurent({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "MultiLaurent") -> "MultiLaurent":
        out: dict[tuple[int, ...], int] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return MultiLaurent(out)

    def __eq__(self, other):
        return isinstance(other, MultiLaurent) and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms):
            c = self.terms[exps]
            mono = "*".join(f"t{i + 1}" if e == 1 else f"t{i + 1}^{e}" for i, e in enumerate(exps) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")
