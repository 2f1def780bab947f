"""Reduced Groebner bases of homogeneous ideals and graded quotient rings.

Buchberger's algorithm with the normal selection strategy and both of
Buchberger's criteria.  The Hilbert function of ``S = K[x]/I`` is computed
exactly from the Hilbert series of the leading-term ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .poly import (
    Monomial,
    Polynomial,
    PolynomialRing,
    drevlex_key,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    monomials_of_degree,
)


class NotHomogeneousError(ValueError):
    pass


class NotACurveError(ValueError):
    """The quotient ring has Krull dimension larger than two."""


def _monic(f: Polynomial) -> Polynomial:
    lc = f.leading_coefficient()
    if lc == 1:
        return f
    return f.scale(f.ring.field.inv(lc))


def reduce_full(f: Polynomial, basis: Sequence[Polynomial], leads: Sequence[Monomial]) -> Polynomial:
    """Remainder of ``f`` under multivariate division by a monic ``basis``."""
    ring = f.ring
    p = ring.field.characteristic
    work = dict(f.terms)
    rem = {}
    while work:
        m = max(work, key=drevlex_key)
        c = work.pop(m)
        for g, lm in zip(basis, leads):
            if mono_divides(lm, m):
                u = mono_div(m, lm)
                for t, a in g.terms.items():
                    if t == lm:
                        continue
                    tm = mono_mul(t, u)
                    v = work.get(tm, 0) - c * a
                    if p:
                        v %= p
                    if v:
                        work[tm] = v
                    else:
                        work.pop(tm, None)
                break
        else:
            rem[m] = c
    return Polynomial(ring, rem)


def _spoly(f: Polynomial, g: Polynomial, lf: Monomial, lg: Monomial) -> Polynomial:
    lcm = mono_lcm(lf, lg)
    return f.mul_term(mono_div(lcm, lf)) - g.mul_term(mono_div(lcm, lg))


def buchberger(gens: Sequence[Polynomial]) -> list:
    """Reduced Groebner basis of the ideal generated by homogeneous ``gens``.

    The result is sorted by ascending leading monomial; every element is monic.
    """
    gens = [g for g in gens if g]
    for g in gens:
        if not g.is_homogeneous():
            raise NotHomogeneousError(f"generator {g} is not homogeneous")
    if not gens:
        return []
    basis: list = []
    leads: list = []
    pairs: set = set()

    def add(h):
        h = _monic(h)
        basis.append(h)
        leads.append(h.leading_monomial())
        new = len(basis) - 1
        for i in range(new):
            pairs.add((i, new))

    for g in sorted(gens, key=lambda f: (f.homogeneous_degree, drevlex_key(f.leading_monomial()))):
        h = reduce_full(g, basis, leads)
        if h:
            add(h)

    while pairs:
        # normal strategy: smallest lcm first
        i, j = min(pairs, key=lambda ij: (drevlex_key(mono_lcm(leads[ij[0]], leads[ij[1]])), ij))
        pairs.discard((i, j))
        li, lj = leads[i], leads[j]
        lcm = mono_lcm(li, lj)
        if mono_mul(li, lj) == lcm:
            continue
        # chain criterion
        chain = False
        for k in range(len(basis)):
            if k in (i, j) or not mono_divides(leads[k], lcm):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        h = reduce_full(_spoly(basis[i], basis[j], li, lj), basis, leads)
        if h:
            add(h)

    # minimalize, then interreduce
    keep = []
    for i, lm in enumerate(leads):
        if any(j != i and mono_divides(leads[j], lm) and (leads[j] != lm or j < i)
               for j in range(len(leads))):
            continue
        keep.append(i)
    minimal = [basis[i] for i in keep]
    mleads = [leads[i] for i in keep]
    reduced = []
    for idx, g in enumerate(minimal):
        others = [h for k, h in enumerate(minimal) if k != idx]
        oleads = [l for k, l in enumerate(mleads) if k != idx]
        lm = mleads[idx]
        tail = g - g.ring.monomial(lm, g.terms[lm])
        r = reduce_full(tail, others, oleads)
        reduced.append(_monic(r + g.ring.monomial(lm, 1)))
    reduced.sort(key=lambda f: drevlex_key(f.leading_monomial()))
    return reduced


# -- Hilbert series of monomial ideals -------------------------------------

def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for m in gens:
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def hilbert_numerator(gens: Sequence[Monomial]) -> list:
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^v of K[x]/(gens).

    Coefficients are returned lowest degree first.  Uses the pivot recursion
    N(M) = N(M + (x)) + t * N(M : x) on a variable shared by two generators.
    """
    gens = _minimalize(gens)
    if not gens:
        return [1]
    if any(sum(m) == 0 for m in gens):
        return [0]
    nv = len(gens[0])
    counts = [0] * nv
    for m in gens:
        for i, e in enumerate(m):
            if e:
                counts[i] += 1
    if max(counts) <= 1:
        out = [1]
        for m in gens:
            d = sum(m)
            out = _poly_mul(out, [1] + [0] * (d - 1) + [-1])
        return out
    x = max(range(nv), key=lambda i: (counts[i], -i))
    unit = tuple(1 if i == x else 0 for i in range(nv))
    plus = hilbert_numerator(list(gens) + [unit])
    colon = hilbert_numerator([tuple(e - 1 if (i == x and e) else e for i, e in enumerate(m))
                               for m in gens])
    return _poly_add(plus, [0] + colon)


@dataclass(frozen=True)
class HilbertData:
    """Hilbert function of a graded quotient of Krull dimension at most two.

    For ``d >= stabilization_degree`` the Hilbert function equals
    ``stabilized_slope * d + stabilized_intercept``.
    """

    dimension: int
    stabilized_slope: int
    stabilized_intercept: int
    stabilization_degree: int
    values: dict = field(default_factory=dict, compare=False)

    def value(self, d: int) -> int:
        if d < 0:
            return 0
        if d >= self.stabilization_degree:
            return self.stabilized_slope * d + self.stabilized_intercept
        return self.values[d]


def hilbert_from_leading_terms(leads: Sequence[Monomial], nvars: int) -> HilbertData:
    num = hilbert_numerator(list(leads))
    if not any(num):
        return HilbertData(0, 0, 0, 0, {0: 0})
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    dim = nvars
    while dim > 0 and sum(num) == 0 and any(num):
        # divide by (1 - t)
        q = []
        acc = 0
        for c in num[:-1]:
            acc += c
            q.append(acc)
        num = q or [0]
        dim -= 1
    if dim > 2:
        raise NotACurveError(f"quotient has Krull dimension {dim}; not a curve or point scheme")
    degn = len(num) - 1
    n1 = sum(num)
    dn1 = sum(k * c for k, c in enumerate(num))
    if dim == 2:
        slope, intercept = n1, n1 - dn1
    elif dim == 1:
        slope, intercept = 0, n1
    else:
        slope, intercept = 0, 0
    stab = max(0, degn - dim + 1)

    def hf(d):
        return sum(c * comb(d - k + dim - 1, dim - 1) for k, c in enumerate(num)
                   if d - k >= 0) if dim else (num[d] if d <= degn else 0)

    values = {d: hf(d) for d in range(stab + 1)}
    return HilbertData(dim, slope, intercept, stab, values)


# -- graded quotient rings -------------------------------------------------

class GradedRing:
    """A standard graded quotient ``S = K[x_1..x_v]/I`` with its reduced GB."""

    def __init__(self, poly_ring: PolynomialRing, generators: Sequence[Polynomial] = ()):
        self.poly_ring = poly_ring
        self.field = poly_ring.field
        self.nvars = poly_ring.nvars
        self.generators = tuple(generators)
        for g in self.generators:
            if g.ring != poly_ring:
                raise ValueError("generator from a different polynomial ring")
        self.gb = buchberger(self.generators)
        self.leads = [g.leading_monomial() for g in self.gb]
        self._tails = [[(t, c) for t, c in g.terms.items() if t != lm]
                       for g, lm in zip(self.gb, self.leads)]
        self._nf_cache: dict = {}
        self._basis_cache: dict = {}
        self._index_cache: dict = {}
        self._hilbert = None

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"GradedRing({self.field!r}, {list(self.poly_ring.names)}, [{gens}])"

    def parse(self, text: str) -> Polynomial:
        return self.poly_ring.parse(text)

    def is_standard(self, m: Monomial) -> bool:
        for lm in self.leads:
            if mono_divides(lm, m):
                return False
        return True

    def _divisor(self, m: Monomial):
        for k, lm in enumerate(self.leads):
            if mono_divides(lm, m):
                return k
        return None

    def monomial_nf(self, m: Monomial) -> dict:
        """Normal form of a monomial as a read-only ``{monomial: coeff}`` map."""
        cache = self._nf_cache
        hit = cache.get(m)
        if hit is not None:
            return hit
        p = self.field.characteristic
        one = self.field(1)
        stack = [m]
        while stack:
            top = stack[-1]
            if top in cache:
                stack.pop()
                continue
            k = self._divisor(top)
            if k is None:
                cache[top] = {top: one}
                stack.pop()
                continue
            u = mono_div(top, self.leads[k])
            tail = [(mono_mul(t, u), c) for t, c in self._tails[k]]
            missing = [t for t, _ in tail if t not in cache]
            if missing:
                stack.extend(missing)
                continue
            out: dict = {}
            for t, c in tail:
                for mm, cc in cache[t].items():
                    out[mm] = out.get(mm, 0) - c * cc
            if p:
                out = {mm: v % p for mm, v in out.items()}
            cache[top] = {mm: v for mm, v in out.items() if v}
            stack.pop()
        return cache[m]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if not self.gb:
            return f
        p = self.field.characteristic
        out: dict = {}
        for m, c in f.terms.items():
            for mm, cc in self.monomial_nf(m).items():
                out[mm] = out.get(mm, 0) + c * cc
        if p:
            out = {mm: v % p for mm, v in out.items()}
        return Polynomial(self.poly_ring, {mm: v for mm, v in out.items() if v})

    def contains(self, f: Polynomial) -> bool:
        """Ideal membership of ``f`` in I."""
        return not self.normal_form(f)

    def graded_basis(self, d: int) -> tuple:
        """Standard monomials of degree ``d`` in ascending degrevlex order."""
        hit = self._basis_cache.get(d)
        if hit is None:
            hit = tuple(m for m in monomials_of_degree(self.nvars, d) if self.is_standard(m))
            self._basis_cache[d] = hit
        return hit

    def basis_index(self, d: int) -> dict:
        hit = self._index_cache.get(d)
        if hit is None:
            hit = {m: i for i, m in enumerate(self.graded_basis(d))}
            self._index_cache[d] = hit
        return hit

    def hilbert(self) -> HilbertData:
        if self._hilbert is None:
            self._hilbert = hilbert_from_leading_terms(self.leads, self.nvars)
        return self._hilbert

    def quotient(self, extra: Sequence[Polynomial]) -> "GradedRing":
        """The ring ``S/(extra)``."""
        return GradedRing(self.poly_ring, list(self.gb) + list(extra))
