"""Sparse multivariate polynomials over F_p with positive rational variable weights."""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from functools import reduce
from math import gcd

from .field import PrimeField


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


NONHOMOGENEOUS = _Marker("NONHOMOGENEOUS")
BOTTOM = _Marker("BOTTOM")


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def common_denominator(values) -> int:
    return reduce(_lcm, (Fraction(v).denominator for v in values), 1)


class MonomialOrder:
    """Weighted degree reverse lexicographic order.

    Monomials are compared first by weighted degree, then reverse
    lexicographically: the monomial with the smaller exponent in the last
    variable where they differ is the larger one.
    """

    __slots__ = ("weights", "_iw")

    def __init__(self, weights):
        self.weights = tuple(Fraction(w) for w in weights)
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        den = common_denominator(self.weights)
        self._iw = tuple(int(w * den) for w in self.weights)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.weights == self.weights

    def __hash__(self):
        return hash(self.weights)

    def key(self, m: tuple) -> tuple:
        d = 0
        for e, w in zip(m, self._iw):
            d += e * w
        return (d,) + tuple(-e for e in reversed(m))


def monomial_compare(a: tuple, b: tuple, order: MonomialOrder) -> Ordering:
    if len(a) != len(b) or len(a) != len(order.weights):
        raise ValueError("monomials live in different ambients")
    ka, kb = order.key(a), order.key(b)
    if ka == kb:
        return Ordering.EQ
    return Ordering.GT if ka > kb else Ordering.LT


class PolyRing:
    """F_p[x_1..x_n] with positive rational weights."""

    def __init__(self, p, names, weights=None):
        self.field = p if isinstance(p, PrimeField) else PrimeField(p)
        self.p = self.field.p
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if weights is None:
            weights = [1] * len(self.names)
        self.weights = tuple(Fraction(w) for w in weights)
        if len(self.weights) != len(self.names):
            raise ValueError("one weight per variable required")
        self.order = MonomialOrder(self.weights)
        self.denominator = common_denominator(self.weights)
        self.int_weights = tuple(int(w * self.denominator) for w in self.weights)
        self.nvars = len(self.names)
        self._hash = hash((self.p, self.names, self.weights))

    def __eq__(self, other):
        return self is other or (isinstance(other, PolyRing) and other.p == self.p
                                 and other.names == self.names and other.weights == self.weights)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        vs = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"PolyRing(F_{self.p}[{vs}])"

    # construction helpers
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c: int) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: c})

    def gens(self) -> list[Polynomial]:
        return [self.var(i) for i in range(self.nvars)]

    def var(self, i) -> Polynomial:
        if isinstance(i, str):
            i = self.names.index(i)
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, {tuple(m): 1})

    def monomial(self, exps, coeff: int = 1) -> Polynomial:
        return Polynomial(self, {tuple(exps): coeff})

    def __call__(self, text) -> Polynomial:
        if isinstance(text, Polynomial):
            if text.ring != self:
                raise ValueError("polynomial from another ring")
            return text
        if isinstance(text, int):
            return self.constant(text)
        return parse_polynomial(text, self)

    def mono_degree(self, m: tuple) -> Fraction:
        return Fraction(sum(e * w for e, w in zip(m, self.int_weights)), self.denominator)

    def mono_int_degree(self, m: tuple) -> int:
        """Weighted degree scaled by the common denominator."""
        d = 0
        for e, w in zip(m, self.int_weights):
            d += e * w
        return d

    def mono_str(self, m: tuple) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


class Polynomial:
    """Immutable polynomial; terms live in a dict from exponent tuples to coefficients."""

    __slots__ = ("ring", "_d", "_sorted", "_hash")

    def __init__(self, ring: PolyRing, terms: dict, _clean: bool = False):
        self.ring = ring
        if _clean:
            self._d = terms
        else:
            p = ring.p
            n = ring.nvars
            d = {}
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n or any(e < 0 for e in m):
                    raise ValueError(f"bad exponent vector {m}")
                c %= p
                if c:
                    d[m] = c
            self._d = d
        self._sorted = None
        self._hash = None

    # canonical form
    @property
    def terms(self) -> tuple:
        if self._sorted is None:
            key = self.ring.order.key
            self._sorted = tuple(sorted(self._d.items(), key=lambda t: key(t[0]), reverse=True))
        return self._sorted

    def as_dict(self) -> dict:
        return dict(self._d)

    def monomials(self):
        return [m for m, _ in self.terms]

    def coefficient(self, m) -> int:
        return self._d.get(tuple(m), 0)

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self):
        return bool(self._d)

    def __len__(self):
        return len(self._d)

    def is_constant(self) -> bool:
        return not self._d or (len(self._d) == 1 and not any(next(iter(self._d))))

    def constant_term(self) -> int:
        return self._d.get((0,) * self.ring.nvars, 0)

    def lead_monomial(self):
        return self.terms[0][0] if self._d else None

    def lead_coefficient(self) -> int:
        return self.terms[0][1] if self._d else 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._d.items())))
        return self._hash

    # arithmetic
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("ambient mismatch")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.p
        d = dict(self._d)
        for m, c in other._d.items():
            v = (d.get(m, 0) + c) % p
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Polynomial(self.ring, d, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self._d.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {m: (a * c) % self.ring.p for m, a in self._d.items()},
                              _clean=True)
        return poly_multiply(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale_monomial(self, m, c: int = 1) -> Polynomial:
        """Multiply by the term c*x^m."""
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {tuple(a + b for a, b in zip(k, m)): (v * c) % p
                                      for k, v in self._d.items()}, _clean=True)

    # gradings
    def weighted_degree(self):
        return weighted_degree(self)

    def is_homogeneous(self) -> bool:
        return weighted_degree(self) is not NONHOMOGENEOUS

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for m, c in self._d.items():
            parts.setdefault(self.ring.mono_degree(m), {})[m] = c
        return {d: Polynomial(self.ring, t, _clean=True) for d, t in parts.items()}

    def substitute(self, images, target: PolyRing, reducer=None) -> Polynomial:
        """Evaluate at images[i] for variable i; reducer (optional) reduces intermediates."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        cache = [dict() for _ in images]
        red = reducer or (lambda f: f)

        def power(i, e):
            c = cache[i]
            if e not in c:
                if e == 0:
                    c[e] = target.one()
                elif e == 1:
                    c[e] = red(images[i])
                else:
                    half = power(i, e // 2)
                    val = red(half * half)
                    if e % 2:
                        val = red(val * power(i, 1))
                    c[e] = val
            return c[e]

        total = target.zero()
        for m, a in self._d.items():
            term = target.constant(a)
            for i, e in enumerate(m):
                if e:
                    term = red(term * power(i, e))
            total = total + term
        return red(total)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self._d:
            return "0"
        out = []
        for m, c in self.terms:
            ms = self.ring.mono_str(m)
            if ms == "1":
                out.append(str(c))
            elif c == 1:
                out.append(ms)
            else:
                out.append(f"{c}*{ms}")
        return " + ".join(out)


def poly_multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.ring != g.ring:
        raise ValueError("ambient mismatch")
    p = f.ring.p
    d: dict = {}
    for m1, c1 in f._d.items():
        for m2, c2 in g._d.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            d[m] = (d.get(m, 0) + c1 * c2) % p
    return Polynomial(f.ring, {m: c for m, c in d.items() if c}, _clean=True)


def weighted_degree(f: Polynomial):
    if not f._d:
        return BOTTOM
    ring = f.ring
    it = iter(f._d)
    d0 = ring.mono_int_degree(next(it))
    for m in it:
        if ring.mono_int_degree(m) != d0:
            return NONHOMOGENEOUS
    return Fraction(d0, ring.denominator)


# --- parsing -----------------------------------------------------------------

class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.message = message
        self.column = column


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        col = m.start(m.lastindex) + 1 if m.lastindex else pos + 1
        if m.group(1):
            out.append(("num", int(m.group(1)), col))
        elif m.group(2):
            out.append(("name", m.group(2), col))
        elif m.group(3):
            if m.group(3) not in "+-*^()":
                raise PolynomialSyntaxError(f"unexpected character {m.group(3)!r}", col)
            out.append((m.group(3), m.group(3), col))
        pos = m.end()
    out.append(("end", None, len(text) + 1))
    return out


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse ASCII like 'v^2 + u*w - 3*(x+y)^2'."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None):
        nonlocal i
        t = toks[i]
        if kind is not None and t[0] != kind:
            raise PolynomialSyntaxError(f"expected {kind!r}, found {t[1]!r}", t[2])
        i += 1
        return t

    def expr():
        sign = 1
        if peek()[0] in "+-":
            sign = -1 if take()[0] == "-" else 1
        acc = term() * sign
        while peek()[0] in ("+", "-"):
            op = take()[0]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while peek()[0] == "*":
            take()
            acc = acc * factor()
        return acc

    def factor():
        base = atom()
        if peek()[0] == "^":
            take()
            e = take("num")[1]
            base = base ** e
        return base

    def atom():
        t = peek()
        if t[0] == "num":
            take()
            return ring.constant(t[1])
        if t[0] == "name":
            take()
            if t[1] not in ring.names:
                raise PolynomialSyntaxError(f"unknown variable {t[1]!r}", t[2])
            return ring.var(t[1])
        if t[0] == "(":
            take()
            v = expr()
            take(")")
            return v
        raise PolynomialSyntaxError(f"unexpected token {t[1]!r}", t[2])

    result = expr()
    if peek()[0] != "end":
        t = peek()
        raise PolynomialSyntaxError(f"trailing input {t[1]!r}", t[2])
    return result
