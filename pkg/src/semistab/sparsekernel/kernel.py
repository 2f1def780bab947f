"""Exact kernel dimension and kernel basis of a :class:`ScalarMatrix`.

Over GF(p) the Markowitz elimination is run directly.  Over QQ the default
``"auto"`` strategy is certified modular elimination:

* rank mod p never exceeds the rank over QQ, so a trivial kernel mod p proves
  a trivial kernel over QQ;
* otherwise the kernel basis (identity on the free columns) is lifted from
  several primes by CRT and rational reconstruction, and every lifted vector
  is checked to annihilate the matrix in exact integer arithmetic.  Verified
  independent vectors bound the nullity from below; the modular nullity bounds
  it from above.

When lifting does not converge the fraction-free integer elimination is
used.  ``strategy="exact"`` uses it unconditionally.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd, isqrt

from ..poly import is_prime
from . import eliminate_modp, padic_solver
from ._markowitz import eliminate as _eliminate_py
from .scalar import ScalarMatrix, SectionSpace

log = logging.getLogger(__name__)

MAX_LIFT_PRIMES = 48
# single vectors on their own support are cheap per prime but can need
# thousands of bits
MAX_VECTOR_LIFT_PRIMES = 256
MAX_PADIC_DIGITS = 1024


def lift_primes():
    """Primes below 2**31 in descending order."""
    n = 2 ** 31 - 1
    while n > 2:
        if is_prime(n):
            yield n
        n -= 2


_PRIMES = [p for p, _ in zip(lift_primes(), range(MAX_VECTOR_LIFT_PRIMES + 1))]


def _inverse_matrix_modp(T, p):
    n = len(T)
    A = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(T)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] % p), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = pow(A[col][col], -1, p)
        A[col] = [v * inv % p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [(a - f * b) % p for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _normalize_on(kernel, free, p):
    """Change basis so that the vectors restrict to the identity on ``free``."""
    T = [[v.get(f, 0) for f in free] for v in kernel]
    Tinv = _inverse_matrix_modp(T, p)
    if Tinv is None:
        return None
    out = []
    for i in range(len(free)):
        w: dict = {}
        for a, coef in enumerate(Tinv[i]):
            if coef:
                for j, val in kernel[a].items():
                    w[j] = (w.get(j, 0) + coef * val) % p
        out.append({j: v for j, v in w.items() if v})
    return out


def _rat_recon(a, m, bound):
    """n/d with |n|, d <= bound and n = a*d mod m, or None."""
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _reconstruct(vec, m):
    # reconstruct against the running common denominator so that later
    # entries only need to recover the remaining factor
    bound = isqrt(m // 2)
    den = 1
    out = {}
    for j in sorted(vec):
        x = _rat_recon(vec[j] * den % m, m, bound)
        if x is None:
            return None
        out[j] = x / den
        den *= x.denominator
    return out


def _annihilates(int_rows, vec) -> bool:
    den = 1
    for v in vec.values():
        den = den * v.denominator // gcd(den, v.denominator)
    w = {j: int(v * den) for j, v in vec.items()}
    for row in int_rows:
        s = 0
        for c, a in row:
            x = w.get(c)
            if x:
                s += a * x
        if s:
            return False
    return True


def _crt_merge(acc, m, new, p):
    minv = pow(m, -1, p)
    keys = set(acc) | set(new)
    out = {}
    for j in keys:
        a = acc.get(j, 0)
        b = new.get(j, 0)
        x = a + m * ((b - a) * minv % p)
        if x:
            out[j] = x
    return out


def _lift(ncols, rows, nnz_cap, e, primes, max_primes=MAX_LIFT_PRIMES):
    """Lift the kernel of ``e`` (an elimination mod some prime) to QQ.

    Returns ``(upper, vectors)`` where ``vectors`` are verified kernel vectors
    over QQ and ``upper`` is the smallest nullity seen modulo any prime, or
    None when lifting did not converge.
    """
    free = e.free_columns()
    acc = e.kernel
    m = e.modulus
    for _ in range(max_primes):
        lifted = [_reconstruct(v, m) for v in acc]
        if all(v is not None for v in lifted) and all(_annihilates(rows, v) for v in lifted):
            return len(free), lifted
        p = next(primes)
        e = eliminate_modp(ncols, rows, p, nnz_cap=nnz_cap, kernel=True)
        if e.nullity < len(free):
            log.info("nullity drops to %d at p=%d; restarting lift", e.nullity, p)
            if e.nullity == 0:
                return 0, []
            free, acc, m = e.free_columns(), e.kernel, p
            continue
        if e.nullity > len(free):
            continue
        normed = _normalize_on(e.kernel, free, p)
        if normed is None:
            continue
        acc = [_crt_merge(a, m, b, p) for a, b in zip(acc, normed)]
        m *= p
    return None


def _restrict(rows, cols, by_col):
    """Rows of the column submatrix on ``cols`` (sorted), renumbered."""
    pos = {c: t for t, c in enumerate(cols)}
    touched = sorted(set().union(*(by_col[c] for c in cols)))
    return [[(pos[c], v) for c, v in rows[r] if c in pos] for r in touched]


def _lift_on(ncols, rows, cols, by_col, p, nnz_cap, max_primes=MAX_LIFT_PRIMES):
    sub = _restrict(rows, cols, by_col)
    es = eliminate_modp(len(cols), sub, p, nnz_cap=nnz_cap, kernel=True)
    if es.nullity == 0:
        return None
    res = _lift(len(cols), sub, nnz_cap, es, iter(_PRIMES[1:]), max_primes)
    if res is None:
        return None
    return [{cols[t]: v for t, v in vec.items()} for vec in res[1]]


def _padic_vector(ncols, rows, f, p, sample):
    """Kernel vector with a 1 in column ``f`` by p-adic lifting, or None.

    Full reconstruction is only attempted once the entries in ``sample``
    reconstruct to the same values at two consecutive precisions.
    """
    solver = padic_solver(ncols, rows, f, p)
    if solver is None or not solver.ok:
        return None
    digits = []
    xs = dict.fromkeys(sample, 0)
    pk = 1
    prev = None
    next_full = 0
    while len(digits) < MAX_PADIC_DIGITS:
        for y in solver.digits(2):
            for j in xs:
                xs[j] += y[j] * pk
            digits.append(y)
            pk *= p
        rec = _reconstruct(xs, pk)
        if rec is None or rec != prev or len(digits) < next_full:
            prev = rec
            continue
        next_full = len(digits) + len(digits) // 4 + 2
        X = [0] * ncols
        for y in reversed(digits):
            X = [x * p + d for x, d in zip(X, y)]
        vec = _reconstruct({j: x for j, x in enumerate(X) if x}, pk)
        if vec is not None:
            vec[f] = Fraction(1)
            if _annihilates(rows, vec):
                return vec
    return None


def _certified_qq(B: ScalarMatrix, nnz_cap: int):
    rows = B.integer_rows()
    primes = iter(_PRIMES)
    e = eliminate_modp(B.ncols, rows, next(primes), nnz_cap=nnz_cap, kernel=True)
    d = e.nullity
    if d == 0:
        return 0, []
    # Kernel vectors of a column submatrix, padded by zeros, are kernel
    # vectors of B.  Each modular basis vector meets exactly one free column,
    # so lifting it on its own support gives a rational kernel vector that is
    # nonzero there and zero on the other free columns: d of those are
    # independent.  Small supports keep the heights, and the primes, down.
    by_col = [[] for _ in range(B.ncols)]
    for r, row in enumerate(rows):
        for c, _ in row:
            by_col[c].append(r)
    free = set(e.free_columns())
    found = []
    cache = {}
    for v in e.kernel:
        (f,) = [c for c in v if c in free]
        cols = sorted(v)
        w = None
        if not nnz_cap:
            sub = _restrict(rows, cols, by_col)
            loc = cols.index(f)
            sample = [t for t in range(0, len(cols), max(1, len(cols) // 3)) if t != loc][:3]
            w = _padic_vector(len(cols), sub, loc, e.modulus, sample)
            if w is not None:
                w = {cols[t]: x for t, x in w.items()}
        if w is None:
            key = tuple(cols)
            if key not in cache:
                cache[key] = _lift_on(B.ncols, rows, cols, by_col, e.modulus, nnz_cap,
                                      MAX_VECTOR_LIFT_PRIMES)
            w = next((w for w in cache[key] or () if w.get(f)), None)
        if w is None:
            found = None
            break
        found.append(w)
    if found is not None:
        return d, found
    log.info("per-vector lift failed; lifting on the joint support")
    support = sorted(set().union(*e.kernel))
    if len(support) < B.ncols:
        vecs = _lift_on(B.ncols, rows, support, by_col, e.modulus, nnz_cap)
        if vecs is not None and len(vecs) == d:
            return d, vecs
    log.info("support lift failed; lifting on the full matrix")
    res = _lift(B.ncols, rows, nnz_cap, e, primes)
    if res is None:
        log.info("modular lift did not converge; falling back to exact elimination")
    return res


def _exact_qq(B: ScalarMatrix, nnz_cap: int, want_basis: bool):
    e = _eliminate_py(B.ncols, B.integer_rows(), 0, nnz_cap=nnz_cap, kernel=want_basis)
    if not want_basis:
        return e.nullity, None
    return e.nullity, e.kernel


def _primitive(vec) -> dict:
    """Scale a rational vector to coprime integers, first entry positive."""
    den = 1
    for v in vec.values():
        den = den * v.denominator // gcd(den, v.denominator)
    w = {j: int(v * den) for j, v in vec.items()}
    g = 0
    for v in w.values():
        g = gcd(g, v)
    if w[min(w)] < 0:
        g = -g
    return {j: v // g for j, v in sorted(w.items())}


def nullspace(B: ScalarMatrix, *, basis: bool = False, strategy: str = "auto",
              nnz_cap: int = 0):
    """``(nullity, vectors)`` with vectors as ``{column: coefficient}`` dicts.

    Over QQ the vectors are primitive integer vectors.  ``vectors`` may be
    None when ``basis`` is false and the strategy did not produce them.
    """
    if strategy not in ("auto", "exact"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if B.ncols == 0:
        return 0, []
    p = B.field.characteristic
    if p:
        e = eliminate_modp(B.ncols, B.rows, p, nnz_cap=nnz_cap, kernel=basis)
        return e.nullity, e.kernel
    if strategy == "auto":
        res = _certified_qq(B, nnz_cap)
        if res is not None:
            return res[0], [_primitive(v) for v in res[1]]
    return _exact_qq(B, nnz_cap, basis)


def kernel_dimension(B: ScalarMatrix, *, strategy: str = "auto", nnz_cap: int = 0) -> int:
    return nullspace(B, strategy=strategy, nnz_cap=nnz_cap)[0]


def rank(B: ScalarMatrix, **kw) -> int:
    return B.ncols - kernel_dimension(B, **kw)


def sections_from_vectors(B: ScalarMatrix, vectors) -> list:
    """Map scalar kernel vectors to tuples of polynomials, one per matrix column."""
    M = B.source
    ring = M.ring.poly_ring
    out = []
    for vec in vectors:
        terms = [dict() for _ in range(M.ncols)]
        for c, v in vec.items():
            i, mono = B.col_origin(c)
            terms[i][mono] = v
        out.append(tuple(ring.from_dict(t) for t in terms))
    return out


def kernel_basis(B: ScalarMatrix, *, strategy: str = "auto", nnz_cap: int = 0) -> SectionSpace:
    dim, vecs = nullspace(B, basis=True, strategy=strategy, nnz_cap=nnz_cap)
    if dim == 0:
        return SectionSpace(0, B.twist, [])
    if B.source is None:
        return SectionSpace(dim, B.twist, vecs)
    return SectionSpace(dim, B.twist, sections_from_vectors(B, vecs))
