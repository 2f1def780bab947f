from __future__ import annotations

from fractions import Fraction

import pytest

from semistab.groebner import GradedRing
from semistab.poly import QQ, PolynomialRing
from semistab.sheafmap import SheafMap

QUARTIC = "x^4+y^3*z+z^4"
SEGRE_VARS = ["z00", "z01", "z10", "z11"]
SEGRE_IDEAL = [
    "z11*z00-z10*z01",
    "z00^2*(z00+z01)+z10*z11*(z10+2*z11)",
    "z00*z01*(z00+z01)+z11^2*(z10+2*z11)",
]
NONIC_MAP = ["z^2*y^2+x^4", "y^4", "z^4", "x^7"]


def make_ring(ideal, names="xyz", field=QQ) -> GradedRing:
    R = PolynomialRing(field, list(names))
    return GradedRing(R, [R.parse(g) for g in ideal])


def make_map(ideal, entries, names="xyz", field=QQ) -> SheafMap:
    S = make_ring(ideal, names, field)
    return SheafMap.from_row(S, [S.parse(e) for e in entries])


def dense_nullity(rows, ncols, p=0) -> int:
    """Dense Gauss-Jordan oracle over QQ (p == 0) or GF(p)."""
    M = [[Fraction(0)] * ncols if not p else [0] * ncols for _ in rows]
    for r, row in enumerate(rows):
        for c, v in row:
            M[r][c] = Fraction(v) if not p else v % p
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = 1 / M[rank][c] if not p else pow(M[rank][c], -1, p)
        for r in range(len(M)):
            if r != rank and M[r][c]:
                f = M[r][c] * inv
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
                if p:
                    M[r] = [a % p for a in M[r]]
        rank += 1
    return ncols - rank


@pytest.fixture(scope="session")
def nonic_map():
    return make_map(["x^9+y^9+z^9"], NONIC_MAP)


# acceptance criteria report one line each at the end of the run; a
# criterion passes when every recorded part passed
ACCEPTANCE: dict = {}


class criterion:
    """Context manager recording one part of an acceptance criterion."""

    def __init__(self, key, detail=""):
        self.key = str(key)
        self.detail = detail

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ACCEPTANCE.setdefault(self.key, []).append((exc_type is None, self.detail))
        return False


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k), k)):
        parts = ACCEPTANCE[key]
        ok = all(p for p, _ in parts)
        failed = [d for p, d in parts if not p]
        shown = failed if failed else [d for _, d in parts if d]
        detail = "; ".join(dict.fromkeys(shown))
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  "
                                    f"({len(parts)} checks) {detail}")
