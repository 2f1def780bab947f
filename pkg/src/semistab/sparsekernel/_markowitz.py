"""Right-looking sparse Gaussian elimination with Markowitz pivoting.

Pure-Python reference for the compiled ``_modp`` kernel, which makes
identical pivot choices, and the only engine for exact integer elimination.

The Markowitz search is restricted to two candidates per step: the shortest
active row paired with its sparsest column, and the sparsest column paired
with its shortest row.  The candidate with the smaller ``(r-1)(c-1)`` wins;
ties go to the row candidate.  Inside a candidate, ties break on coefficient
bit-length (integer mode only), then on the lowest index.
"""

from __future__ import annotations

import heapq
from math import gcd


class NnzCapExceeded(MemoryError):
    """Stored nonzeros exceeded the configured cap during elimination."""

    def __init__(self, nnz, cap):
        self.nnz = nnz
        self.cap = cap
        super().__init__(f"elimination stored {nnz} nonzeros, cap is {cap}")


class Elimination:
    """Outcome of an elimination: pivots in order and the pivot rows as they
    stood when chosen (each holds its pivot column plus later columns)."""

    __slots__ = ("ncols", "pivot_cols", "pivot_rows", "modulus", "kernel")

    def __init__(self, ncols, pivot_cols, pivot_rows, modulus):
        self.ncols = ncols
        self.pivot_cols = pivot_cols
        self.pivot_rows = pivot_rows
        self.modulus = modulus
        # kernel basis, one dict per free column, when requested
        self.kernel = None

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    @property
    def nullity(self) -> int:
        return self.ncols - len(self.pivot_cols)

    def free_columns(self) -> list:
        done = set(self.pivot_cols)
        return [c for c in range(self.ncols) if c not in done]


def _content_normalize(row: dict) -> None:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for j in row:
            row[j] //= g


def eliminate(ncols: int, rows, modulus: int = 0, nnz_cap: int = 0,
              keep_pivots: bool = False, kernel: bool = False) -> Elimination:
    """Eliminate an integer matrix given as rows of ``(col, value)`` pairs.

    ``modulus > 0`` works in GF(modulus); ``modulus == 0`` does fraction-free
    integer elimination with content normalization after each update.
    """
    p = modulus
    keep = keep_pivots or kernel
    R = []
    for row in rows:
        d = {}
        for c, v in row:
            if p:
                v %= p
            if v:
                d[c] = v
        R.append(d)
    nrows = len(R)
    active = [bool(r) for r in R]
    cols = [set() for _ in range(ncols)]
    for i, r in enumerate(R):
        for c in r:
            cols[c].add(i)
    rowq = [(len(r), i) for i, r in enumerate(R) if r]
    colq = [(len(s), c) for c, s in enumerate(cols) if s]
    heapq.heapify(rowq)
    heapq.heapify(colq)
    nnz = sum(len(r) for r in R)
    pivot_cols: list = []
    pivot_rows: list = []

    def bits(v):
        return abs(v).bit_length()

    while True:
        while rowq:
            L, r = rowq[0]
            if active[r] and len(R[r]) == L:
                break
            heapq.heappop(rowq)
        if not rowq:
            break
        L0, r0 = rowq[0]
        if p:
            c_r = min(R[r0], key=lambda c: (len(cols[c]), c))
        else:
            c_r = min(R[r0], key=lambda c: (len(cols[c]), bits(R[r0][c]), c))
        cost_r = (L0 - 1) * (len(cols[c_r]) - 1)
        pr, pc = r0, c_r
        if cost_r > 0:
            while colq:
                C, c = colq[0]
                if C and len(cols[c]) == C:
                    break
                heapq.heappop(colq)
            if colq:
                C0, c0 = colq[0]
                if p:
                    r_c = min(cols[c0], key=lambda i: (len(R[i]), i))
                else:
                    r_c = min(cols[c0], key=lambda i: (len(R[i]), bits(R[i][c0]), i))
                cost_c = (len(R[r_c]) - 1) * (C0 - 1)
                if cost_c < cost_r:
                    pr, pc = r_c, c0

        prow = R[pr]
        pv = prow[pc]
        active[pr] = False
        R[pr] = {}
        dirty = set()
        for j in prow:
            cols[j].discard(pr)
            dirty.add(j)
        if p:
            inv = pow(pv, -1, p)
        for i in sorted(cols[pc]):
            ri = R[i]
            a = ri[pc]
            before = len(ri)
            if p:
                f = a * inv % p
                for j, v in prow.items():
                    nv = (ri.get(j, 0) - f * v) % p
                    if nv:
                        if j not in ri:
                            cols[j].add(i)
                            dirty.add(j)
                        ri[j] = nv
                    elif j in ri:
                        del ri[j]
                        cols[j].discard(i)
                        dirty.add(j)
            else:
                g = gcd(pv, a)
                s, t = pv // g, a // g
                if s != 1:
                    for j in ri:
                        ri[j] *= s
                for j, v in prow.items():
                    nv = ri.get(j, 0) - t * v
                    if nv:
                        if j not in ri:
                            cols[j].add(i)
                            dirty.add(j)
                        ri[j] = nv
                    elif j in ri:
                        del ri[j]
                        cols[j].discard(i)
                        dirty.add(j)
                _content_normalize(ri)
            nnz += len(ri) - before
            if ri:
                heapq.heappush(rowq, (len(ri), i))
            else:
                active[i] = False
        for j in dirty:
            if cols[j]:
                heapq.heappush(colq, (len(cols[j]), j))
        pivot_cols.append(pc)
        if keep:
            pivot_rows.append(prow)
        else:
            nnz -= len(prow)
        if nnz_cap and nnz > nnz_cap:
            raise NnzCapExceeded(nnz, nnz_cap)
    elim = Elimination(ncols, pivot_cols, pivot_rows, p)
    if kernel:
        elim.kernel = backsolve_modp(elim) if p else backsolve_exact(elim)
    if not keep_pivots:
        elim.pivot_rows = []
    return elim


def backsolve_modp(elim: Elimination, free=None) -> list:
    """Kernel basis mod p, one vector per free column (identity there)."""
    p = elim.modulus
    if free is None:
        free = elim.free_columns()
    out = []
    steps = list(zip(elim.pivot_cols, elim.pivot_rows))[::-1]
    for f in free:
        x = {f: 1}
        for pc, row in steps:
            s = 0
            for j, v in row.items():
                if j != pc:
                    xj = x.get(j)
                    if xj:
                        s += v * xj
            s %= p
            if s:
                x[pc] = (p - s) * pow(row[pc], -1, p) % p
        out.append(x)
    return out


def backsolve_exact(elim: Elimination, free=None) -> list:
    """Kernel basis over QQ (as primitive integer vectors) from an integer
    elimination, one vector per free column."""
    from fractions import Fraction

    if free is None:
        free = elim.free_columns()
    steps = list(zip(elim.pivot_cols, elim.pivot_rows))[::-1]
    out = []
    for f in free:
        x = {f: Fraction(1)}
        for pc, row in steps:
            s = 0
            for j, v in row.items():
                if j != pc:
                    xj = x.get(j)
                    if xj:
                        s += v * xj
            if s:
                x[pc] = -s / row[pc]
        den = 1
        for v in x.values():
            den = den * v.denominator // gcd(den, v.denominator)
        vec = {j: int(v * den) for j, v in x.items()}
        g = 0
        for v in vec.values():
            g = gcd(g, v)
        out.append({j: v // g for j, v in vec.items()})
    return out
