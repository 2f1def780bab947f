"""Symmetric and exterior power matrices of a :class:`SheafMap`.

If ``F = ker A`` then ``Sym^q F = ker A_q`` and ``wedge^s F = ker A_wedge_s``.
Columns of ``A_q`` are multi-indices ``a`` with ``|a| = q`` (lexicographically
descending), rows are pairs ``(b, j)`` with ``|b| = q - 1``; the entry at
``((b, j), a)`` is ``a_i * A[j][i]`` when ``a = b + unit_i`` and zero otherwise.
"""

from __future__ import annotations

from itertools import combinations

from .sheafmap import SheafMap


def compositions(q: int, n: int) -> list:
    """All ``a`` in N^n with sum ``q``, lexicographically descending."""
    if n == 0:
        return [()] if q == 0 else []
    if n == 1:
        return [(q,)]
    out = []
    for first in range(q, -1, -1):
        for rest in compositions(q - first, n - 1):
            out.append((first,) + rest)
    return out


class PowerMatrix(SheafMap):
    """A SheafMap whose rows and columns carry power-construction labels."""

    def __init__(self, base, kind, degree, rows, col_labels, row_labels, col_twists, row_twists):
        super().__init__(base.ring, rows, col_twists, row_twists, check=False)
        self.base = base
        self.kind = kind
        self.power = degree
        self.col_labels = col_labels
        self.row_labels = row_labels

    def dump(self) -> str:
        """Labelled text rendering, one matrix row per line."""
        lines = ["cols: " + "  ".join(f"{_label(c)}:O({-e})"
                                     for c, e in zip(self.col_labels, self.col_twists))]
        for (lab, d, row) in zip(self.row_labels, self.row_twists, self.rows):
            cells = [str(row[i]) if i in row else "0" for i in range(self.ncols)]
            lines.append(f"{_label(lab)}:O({-d}) | " + ", ".join(cells))
        return "\n".join(lines)

    def __repr__(self):
        return f"PowerMatrix({self.kind}^{self.power}, {self.nrows}x{self.ncols})"


def _label(lab):
    return str(lab).replace(" ", "")


def sym_power(A: SheafMap, q: int) -> PowerMatrix:
    if q < 1:
        raise ValueError(f"symmetric power exponent must be >= 1, got {q}")
    n, m = A.ncols, A.nrows
    cols = compositions(q, n)
    bs = compositions(q - 1, n)
    b_index = {b: t for t, b in enumerate(bs)}
    row_labels = [(b, j) for b in bs for j in range(m)]
    e = A.col_twists
    col_twists = [sum(ai * ei for ai, ei in zip(a, e)) for a in cols]
    row_twists = [sum(bi * ei for bi, ei in zip(b, e)) + A.row_twists[j] for b, j in row_labels]
    acols = A.columns()
    rows = [dict() for _ in row_labels]
    for c, a in enumerate(cols):
        for i, ai in enumerate(a):
            if not ai or not acols[i]:
                continue
            b = a[:i] + (ai - 1,) + a[i + 1:]
            base = b_index[b] * m
            for j, f in acols[i]:
                g = f if ai == 1 else f.scale(ai)
                if g:
                    rows[base + j][c] = g
    return PowerMatrix(A, "sym", q, rows, cols, row_labels, col_twists, row_twists)


def ext_power(A: SheafMap, s: int) -> PowerMatrix:
    n, m = A.ncols, A.nrows
    if not 1 <= s <= n:
        raise ValueError(f"exterior power {s} out of range 1..{n}")
    cols = list(combinations(range(n), s))
    js = list(combinations(range(n), s - 1))
    j_index = {J: t for t, J in enumerate(js)}
    row_labels = [(J, j) for J in js for j in range(m)]
    e = A.col_twists
    col_twists = [sum(e[i] for i in I) for I in cols]
    row_twists = [sum(e[i] for i in J) + A.row_twists[j] for J, j in row_labels]
    acols = A.columns()
    rows = [dict() for _ in row_labels]
    for c, I in enumerate(cols):
        for pos, i in enumerate(I):
            # (-1)^(pos) with 0-based positions: the alternating sum starts at +1
            J = I[:pos] + I[pos + 1:]
            base = j_index[J] * m
            for j, f in acols[i]:
                rows[base + j][c] = -f if pos % 2 else f
    return PowerMatrix(A, "ext", s, rows, cols, row_labels, col_twists, row_twists)


def sym_of_ext(A: SheafMap, s: int, q: int) -> PowerMatrix:
    """``Sym^q`` of the exterior power matrix; its kernel is ``Sym^q(wedge^s F)``."""
    if s == 1:
        return sym_power(A, q)
    return sym_power(ext_power(A, s), q)
