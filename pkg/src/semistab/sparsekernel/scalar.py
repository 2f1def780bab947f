"""The field-coefficient matrix of a twisted sheaf map on global sections."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from math import lcm

from ..poly import mono_mul


class ScalarMatrix:
    """Sparse matrix over the coefficient field, stored by rows.

    ``rows[r]`` is a list of ``(col, coeff)`` pairs sorted by column with no
    zero coefficients.  Scalar column ``c`` corresponds to basis monomial
    ``col_bases[i][c - col_offsets[i]]`` of matrix column ``i``; rows likewise.
    """

    def __init__(self, field, ncols, rows, *, twist=None, source=None,
                 col_bases=None, row_bases=None):
        self.field = field
        self.ncols = ncols
        self.rows = rows
        self.nrows = len(rows)
        self.twist = twist
        self.source = source
        self.col_bases = col_bases
        self.row_bases = row_bases
        self.col_offsets = _offsets(col_bases) if col_bases is not None else None
        self.row_offsets = _offsets(row_bases) if row_bases is not None else None
        self._int_rows = None

    @classmethod
    def from_triplets(cls, field, nrows, ncols, triplets) -> "ScalarMatrix":
        acc = [dict() for _ in range(nrows)]
        for r, c, v in triplets:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            acc[r][c] = field(acc[r].get(c, 0) + field(v))
        rows = [sorted((c, v) for c, v in d.items() if v) for d in acc]
        return cls(field, ncols, rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def entries(self):
        for r, row in enumerate(self.rows):
            for c, v in row:
                yield r, c, v

    def to_dense(self) -> list:
        out = [[self.field(0)] * self.ncols for _ in range(self.nrows)]
        for r, c, v in self.entries():
            out[r][c] = v
        return out

    def col_origin(self, c: int):
        """``(matrix column, basis monomial)`` of scalar column ``c``."""
        i = bisect_right(self.col_offsets, c) - 1
        return i, self.col_bases[i][c - self.col_offsets[i]]

    def row_origin(self, r: int):
        i = bisect_right(self.row_offsets, r) - 1
        return i, self.row_bases[i][r - self.row_offsets[i]]

    def integer_rows(self) -> list:
        """Rows scaled to integer entries (row scaling keeps the kernel)."""
        if self._int_rows is None:
            if self.field.characteristic:
                self._int_rows = self.rows
            else:
                out = []
                for row in self.rows:
                    den = 1
                    for _, v in row:
                        den = lcm(den, Fraction(v).denominator)
                    out.append([(c, int(v * den)) for c, v in row])
                self._int_rows = out
        return self._int_rows

    def write_triplets(self, path) -> None:
        """``rows cols nnz`` header, then ``row col value`` lines (0-based)."""
        with open(path, "w") as fh:
            fh.write(f"{self.nrows} {self.ncols} {self.nnz}\n")
            for r, c, v in self.entries():
                fh.write(f"{r} {c} {_fmt(v)}\n")

    @classmethod
    def read_triplets(cls, field, path) -> "ScalarMatrix":
        with open(path) as fh:
            header = fh.readline().split()
            nrows, ncols, nnz = (int(x) for x in header)
            trip = []
            for line in fh:
                if line.strip():
                    r, c, v = line.split()
                    trip.append((int(r), int(c), Fraction(v)))
        if len(trip) != nnz:
            raise ValueError(f"header announces {nnz} entries, found {len(trip)}")
        return cls.from_triplets(field, nrows, ncols, trip)

    def __repr__(self):
        return f"ScalarMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, {self.field!r})"


def _fmt(v):
    if isinstance(v, Fraction) and v.denominator != 1:
        return f"{v.numerator}/{v.denominator}"
    return str(int(v))


def _offsets(bases):
    return [0] + list(accumulate(len(b) for b in bases))[:-1] if bases else []


def scalarize(M, k: int) -> ScalarMatrix:
    """Matrix of ``H^0(M (x) O(k))``: sections ``(+) S_{k-e_i} -> (+) S_{k-d_j}``.

    Each block multiplies a basis monomial by the entry polynomial, reduces to
    normal form, and reads coefficients in the row's monomial basis.
    """
    ring = M.ring
    p = ring.field.characteristic
    col_bases = [ring.graded_basis(k - e) for e in M.col_twists]
    row_bases = [ring.graded_basis(k - d) for d in M.row_twists]
    col_off = _offsets(col_bases)
    row_off = _offsets(row_bases)
    nrows = sum(len(b) for b in row_bases)
    ncols = sum(len(b) for b in col_bases)
    acc = [dict() for _ in range(nrows)]
    nf = ring.monomial_nf
    for c, entries in enumerate(M.columns()):
        basis = col_bases[c]
        if not basis:
            continue
        c0 = col_off[c]
        for r, f in entries:
            index = ring.basis_index(k - M.row_twists[r])
            r0 = row_off[r]
            fterms = list(f.terms.items())
            for t, mono in enumerate(basis):
                col = c0 + t
                for fm, fc in fterms:
                    for mm, cc in nf(mono_mul(mono, fm)).items():
                        row = acc[r0 + index[mm]]
                        row[col] = row.get(col, 0) + fc * cc
    rows = []
    for d in acc:
        if p:
            rows.append(sorted((c, v % p) for c, v in d.items() if v % p))
        else:
            rows.append(sorted((c, v) for c, v in d.items() if v))
    return ScalarMatrix(ring.field, ncols, rows, twist=k, source=M,
                        col_bases=col_bases, row_bases=row_bases)


@dataclass
class SectionSpace:
    """Global sections of a twisted kernel sheaf."""

    dimension: int
    twist: int | None = None
    # one tuple of polynomials (a value per matrix column) per basis vector
    basis: list | None = None
