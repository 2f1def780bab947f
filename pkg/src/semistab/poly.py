"""Sparse multivariate polynomials over QQ and prime fields.

Monomials are plain exponent tuples.  The monomial order is degree reverse
lexicographic with the variables ordered as declared (the first variable is
the largest).  Coefficients are :class:`fractions.Fraction` over QQ and
canonical residues ``0 <= c < p`` over GF(p).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping

Monomial = tuple


class RationalField:
    """The field QQ of exact rationals."""

    characteristic = 0

    def __call__(self, c) -> Fraction:
        return Fraction(c)

    def inv(self, c):
        return 1 / Fraction(c)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The prime field GF(p).  Primality of ``p`` is the caller's promise."""

    def __init__(self, p: int):
        if p < 2:
            raise ValueError(f"invalid characteristic {p}")
        self.characteristic = p

    def __call__(self, c) -> int:
        p = self.characteristic
        if isinstance(c, Fraction):
            if c.denominator % p == 0:
                raise ZeroDivisionError(f"{c} has no image in GF({p})")
            return c.numerator * pow(c.denominator, -1, p) % p
        return int(c) % p

    def inv(self, c):
        return pow(c, -1, self.characteristic)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})"


QQ = RationalField()


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the fixed bases are exact below 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def GF(p: int) -> PrimeField:
    return PrimeField(p)


# -- monomials -------------------------------------------------------------

def drevlex_key(m: Monomial):
    """Sort key: ascending keys are ascending monomials in degrevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x + y for x, y in zip(a, b)])


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when ``a`` divides ``b``."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple([y - x for x, y in zip(a, b)])


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([max(x, y) for x, y in zip(a, b)])


@lru_cache(maxsize=None)
def monomials_of_degree(arity: int, d: int) -> tuple:
    """All exponent vectors of total degree ``d``, ascending in degrevlex."""
    if d < 0 or arity < 1:
        return ()
    out = []
    for combo in combinations_with_replacement(range(arity), d):
        e = [0] * arity
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=drevlex_key)
    return tuple(out)


# -- rings and polynomials -------------------------------------------------

class PolynomialRing:
    """K[x_1, ..., x_v] with named variables."""

    def __init__(self, field, names: Iterable[str]):
        self.field = field
        self.names = tuple(names)
        if not self.names:
            raise ValueError("at least one variable is required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"invalid variable name {name!r}")
        self.nvars = len(self.names)

    def __eq__(self, other):
        return (isinstance(other, PolynomialRing) and self.field == other.field
                and self.names == other.names)

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"PolynomialRing({self.field!r}, {list(self.names)})"

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps: Monomial, c=1) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def gens(self) -> list:
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.monomial(tuple(e)))
        return out

    def from_dict(self, terms: Mapping) -> "Polynomial":
        f = self.field
        clean = {}
        for m, c in terms.items():
            c = f(c)
            if c:
                clean[tuple(m)] = c
        return Polynomial(self, clean)

    def monomials_of_degree(self, d: int) -> tuple:
        return monomials_of_degree(self.nvars, d)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()


class Polynomial:
    """An immutable polynomial: a map from monomials to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hdeg")

    def __init__(self, ring: PolynomialRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hdeg = False

    # structure

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if not self.terms:
            return other == 0
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    @property
    def homogeneous_degree(self):
        """Common degree of all terms, or None when not homogeneous or zero."""
        if self._hdeg is False:
            degs = {sum(m) for m in self.terms}
            self._hdeg = degs.pop() if len(degs) == 1 else None
        return self._hdeg

    def is_homogeneous(self) -> bool:
        return not self.terms or self.homogeneous_degree is not None

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=drevlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def sorted_terms(self, descending=True) -> list:
        return sorted(self.terms.items(), key=lambda t: drevlex_key(t[0]),
                      reverse=descending)

    # arithmetic

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.field.characteristic
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if p:
                s %= p
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()})
        return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c=1) -> "Polynomial":
        """Product with the single term ``c * mono``."""
        p = self.ring.field.characteristic
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        out = {}
        for m, v in self.terms.items():
            v = v * c
            if p:
                v %= p
            out[mono_mul(m, mono)] = v
        return Polynomial(self.ring, out)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        p = self.ring.field.characteristic
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        if p:
            out = {m: c % p for m, c in out.items()}
        return Polynomial(self.ring, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def diff(self, i: int) -> "Polynomial":
        """Partial derivative with respect to the i-th variable."""
        f = self.ring.field
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                v = f(c * m[i])
                if v:
                    e = list(m)
                    e[i] -= 1
                    out[tuple(e)] = v
        return Polynomial(self.ring, out)


# -- text syntax -----------------------------------------------------------

def _format_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def format_monomial(m: Monomial, names) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    """Canonical text form, terms in descending monomial order."""
    if not f.terms:
        return "0"
    names = f.ring.names
    out = []
    for m, c in f.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(m, names)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if out:
            out.append(("-" if neg else "+") + body)
        else:
            out.append(("-" if neg else "") + body)
    return "".join(out)


class PolynomialSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        self.pos = pos
        super().__init__(f"{message} at column {pos + 1} in {text!r}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    """Recursive descent over  expr := term (('+'|'-') term)*,
    term := factor ('*'? factor)*,  factor := atom ('^' int)?."""

    def __init__(self, ring: PolynomialRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = self._tokenize(text)
        self.i = 0

    def _split_identifier(self, word, pos):
        names = sorted(self.ring.names, key=len, reverse=True)
        out = []
        j = 0
        while j < len(word):
            for name in names:
                if word.startswith(name, j):
                    out.append(("var", name, pos + j))
                    j += len(name)
                    break
            else:
                raise PolynomialSyntaxError(f"unknown variable in {word!r}", self.text, pos + j)
        return out

    def _tokenize(self, text):
        tokens = []
        pos = 0
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if mt is None:
                break
            if mt.group(1) is not None:
                tokens.append(("int", int(mt.group(1)), mt.start(1)))
            elif mt.group(2) is not None:
                tokens.extend(self._split_identifier(mt.group(2), mt.start(2)))
            elif mt.group(3) is not None:
                ch = mt.group(3)
                if ch not in "+-*/^()":
                    raise PolynomialSyntaxError(f"unexpected character {ch!r}", text, mt.start(3))
                tokens.append(("op", ch, mt.start(3)))
            pos = mt.end()
        tokens.append(("end", None, len(text)))
        return tokens

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise PolynomialSyntaxError(f"expected {want!r}", self.text, tok[2])
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise PolynomialSyntaxError("empty polynomial", self.text, 0)
        f = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return f

    def expr(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                g = self.term()
                f = f + g if tok[1] == "+" else f - g
            else:
                return f

    def term(self) -> Polynomial:
        f = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                f = f * self.factor()
            elif tok[0] in ("int", "var") or (tok[0] == "op" and tok[1] == "("):
                f = f * self.factor()
            else:
                return f

    def factor(self) -> Polynomial:
        f = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            e = self.expect("int")[1]
            f = f ** e
        return f

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.take()
                den = self.expect("int")[1]
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator", self.text, nxt[2])
                return self.ring.constant(Fraction(val, den))
            return self.ring.constant(val)
        if kind == "var":
            e = [0] * self.ring.nvars
            e[self.ring.names.index(val)] = 1
            return self.ring.monomial(tuple(e))
        if kind == "op" and val == "(":
            f = self.expr()
            self.expect("op", ")")
            return f
        raise PolynomialSyntaxError(f"unexpected {val!r}" if val else "unexpected end", self.text, pos)
