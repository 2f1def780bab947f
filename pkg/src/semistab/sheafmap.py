"""Polynomial matrices presenting kernel sheaves and their invariants.

A :class:`SheafMap` is a map ``(+)_i O_X(-e_i) -> (+)_j O_X(-d_j)``; the entry
in row ``j`` and column ``i`` is homogeneous of degree ``e_i - d_j``.
Entries are stored sparsely, one ``{column: polynomial}`` dict per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .curve import CurveInvariants, invariants
from .groebner import GradedRing
from .poly import Polynomial


class SheafMap:
    def __init__(self, ring: GradedRing, rows: Sequence, col_twists: Sequence[int],
                 row_twists: Sequence[int], *, check: bool = True):
        self.ring = ring
        self.col_twists = tuple(col_twists)
        self.row_twists = tuple(row_twists)
        self.nrows = len(self.row_twists)
        self.ncols = len(self.col_twists)
        if len(rows) != self.nrows:
            raise ValueError("row count does not match row twists")
        self.rows = []
        for j, row in enumerate(rows):
            if not isinstance(row, dict):
                if len(row) != self.ncols:
                    raise ValueError(f"row {j} has {len(row)} entries, expected {self.ncols}")
                row = {i: f for i, f in enumerate(row)}
            self.rows.append({i: f for i, f in row.items() if f})
        if check:
            for j, row in enumerate(self.rows):
                for i, f in row.items():
                    want = self.col_twists[i] - self.row_twists[j]
                    if f.homogeneous_degree != want:
                        raise ValueError(
                            f"entry ({j}, {i}) = {f} is not homogeneous of degree {want}")

    @classmethod
    def from_row(cls, ring: GradedRing, entries: Sequence[Polynomial], row_twist: int = 0) -> "SheafMap":
        """The map ``(f_1, ..., f_n)`` with column twists ``deg f_i + row_twist``."""
        twists = []
        for f in entries:
            if not f or f.homogeneous_degree is None:
                raise ValueError(f"entry {f} is zero or not homogeneous; give explicit twists")
            twists.append(f.homogeneous_degree + row_twist)
        return cls(ring, [list(entries)], twists, [row_twist])

    def entry(self, j: int, i: int) -> Polynomial:
        f = self.rows[j].get(i)
        return f if f is not None else self.ring.poly_ring.zero()

    def to_dense(self) -> list:
        return [[self.entry(j, i) for i in range(self.ncols)] for j in range(self.nrows)]

    def columns(self) -> list:
        """Column-major view: for each column, a list of ``(row, polynomial)``."""
        cols = [[] for _ in range(self.ncols)]
        for j, row in enumerate(self.rows):
            for i, f in row.items():
                cols[i].append((j, f))
        return cols

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def is_zero(self) -> bool:
        return all(not self.ring.normal_form(f) for row in self.rows for f in row.values())

    def __repr__(self):
        return f"SheafMap({self.nrows}x{self.ncols})"


@dataclass(frozen=True)
class KernelInvariants:
    rank: int
    degree: int
    slope: Fraction

    def __post_init__(self):
        if self.slope != Fraction(self.degree, self.rank):
            raise ValueError("slope must equal degree / rank")


def entry_ideal_correction(A: SheafMap) -> int:
    """Constant value of the Hilbert polynomial of S/J, J the entry ideal.

    Zero exactly when J is primary to the irrelevant ideal.
    """
    entries = [f for row in A.rows for f in row.values()]
    h = A.ring.quotient(entries).hilbert()
    if h.dimension == 2:
        raise ValueError("entries generate the zero ideal of S")
    return h.stabilized_intercept if h.dimension == 1 else 0


def kernel_invariants(A: SheafMap, curve: CurveInvariants | None = None) -> KernelInvariants:
    """Rank, degree and slope of ``ker A`` for a one-row map.

    deg F = -deg X * sum(e_i) + deg X * d + HP(S/J), where HP(S/J) is the
    constant Hilbert polynomial of the quotient by the entry ideal.
    """
    if A.nrows != 1:
        raise ValueError("kernel invariants are only available for one-row maps")
    if A.is_zero():
        raise ValueError("the map is zero")
    curve = curve or invariants(A.ring)
    c = entry_ideal_correction(A)
    rank = A.ncols - 1
    degree = -curve.degree * sum(A.col_twists) + curve.degree * A.row_twists[0] + c
    if rank == 0:
        raise ValueError("a single nonzero entry has zero kernel")
    return KernelInvariants(rank, degree, Fraction(degree, rank))


def twist(A: SheafMap, k: int) -> SheafMap:
    """``A (x) O(k)``: every twist shifts by ``-k``; entries are unchanged."""
    out = SheafMap.__new__(type(A))
    out.__dict__.update(A.__dict__)
    out.col_twists = tuple(e - k for e in A.col_twists)
    out.row_twists = tuple(d - k for d in A.row_twists)
    return out
