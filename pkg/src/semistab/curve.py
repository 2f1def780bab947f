"""Degree, genus and smoothness of X = Proj S."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .groebner import GradedRing, NotACurveError
from .poly import Polynomial


@dataclass(frozen=True)
class CurveInvariants:
    degree: int
    genus: int


@dataclass(frozen=True)
class SmoothnessResult:
    ok: bool
    # degree at which the singular-locus quotient is still nonzero
    witness_degree: int | None = None

    def __bool__(self):
        return self.ok


def invariants(ring: GradedRing) -> CurveInvariants:
    """Read ``deg X`` and ``g`` off the Hilbert polynomial ``deg X * t + 1 - g``.

    Only the Hilbert data is checked; normality of S is the caller's promise.
    """
    h = ring.hilbert()
    if h.dimension != 2 or h.stabilized_slope <= 0:
        raise NotACurveError(
            f"Proj S is not a curve (Krull dimension {h.dimension}, "
            f"Hilbert slope {h.stabilized_slope})")
    genus = 1 - h.stabilized_intercept
    if genus < 0:
        raise NotACurveError(f"negative arithmetic genus {genus}; not an integral curve")
    return CurveInvariants(h.stabilized_slope, genus)


def determinant(rows: list) -> Polynomial:
    """Laplace expansion along the first row; fine for the small minors used here."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        a = rows[0][j]
        if not a:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * determinant(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return rows[0][0].ring.zero()
    return total


def jacobian_minors(ring: GradedRing, size: int) -> list:
    gens = list(ring.gb)
    jac = [[g.diff(i) for i in range(ring.nvars)] for g in gens]
    minors = []
    for rs in combinations(range(len(gens)), size):
        for cs in combinations(range(ring.nvars), size):
            d = determinant([[jac[r][c] for c in cs] for r in rs])
            if d:
                minors.append(d)
    return minors


def check_smooth(ring: GradedRing) -> SmoothnessResult:
    """Jacobian criterion: I plus the codim-sized Jacobian minors must be
    primary to the irrelevant ideal, i.e. its quotient has Hilbert function
    eventually zero."""
    invariants(ring)
    codim = ring.nvars - 2
    if codim == 0:
        return SmoothnessResult(True)
    sing = ring.quotient(jacobian_minors(ring, codim))
    h = sing.hilbert()
    if h.dimension == 0:
        return SmoothnessResult(True)
    return SmoothnessResult(False, h.stabilization_degree)
