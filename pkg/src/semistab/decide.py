"""Semistability decisions for kernel sheaves.

A negative-slope sheaf with a nonzero global section is not semistable, and
symmetric/exterior powers (char 0) or Frobenius pullbacks (char p) of a
semistable sheaf stay semistable.  The theorem parameters choose a power and
a twist at which a semistable sheaf has no sections while every destabilizing
subsheaf forces one, so a single kernel dimension decides the question.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd

from .curve import CurveInvariants, invariants
from .powers import sym_of_ext, sym_power
from .sheafmap import KernelInvariants, SheafMap, entry_ideal_correction, kernel_invariants
from .sparsekernel import NnzCapExceeded, SectionSpace, nullspace, scalarize
from .sparsekernel.kernel import sections_from_vectors

log = logging.getLogger(__name__)

SEMISTABLE = "semistable"
NOT_SEMISTABLE = "not_semistable"
STRONGLY_SEMISTABLE = "strongly_semistable"
NOT_STRONGLY_SEMISTABLE = "not_strongly_semistable"
INCONCLUSIVE = "inconclusive"
VERDICTS = (SEMISTABLE, NOT_SEMISTABLE, STRONGLY_SEMISTABLE, NOT_STRONGLY_SEMISTABLE, INCONCLUSIVE)


@dataclass(frozen=True)
class DecisionParams:
    mode: str
    rank: int
    deg_F: int
    slope: Fraction
    n: int
    q: int
    k: int
    s: int | None = None
    p: int | None = None
    e: int | None = None


@dataclass
class Probe:
    """One kernel computation: ``dim H^0`` of a power (or pullback) at twist ``k``."""

    q: int
    k: int
    dim: int | None
    seconds: float
    shape: tuple = (0, 0)
    s: int | None = None
    e: int | None = None
    error: str | None = None


@dataclass
class DecisionReport:
    verdict: str
    mode: str
    curve: CurveInvariants
    sheaf: KernelInvariants | None
    params: list = field(default_factory=list)
    probes: list = field(default_factory=list)
    witness: SectionSpace | None = None
    witness_probe: Probe | None = None
    note: str = ""

    @property
    def q_min(self):
        return self.witness_probe.q if self.witness_probe else None


def twist_for(q: int, slope: Fraction, deg_x: int, s: int = 1) -> int:
    """``ceil(-q s mu / deg X) - 1``, exactly."""
    return ceil(Fraction(-q * s) * slope / deg_x) - 1


def probe_slope(q: int, k: int, slope: Fraction, deg_x: int, s: int = 1) -> Fraction:
    """Slope of the probed sheaf ``Sym^q(wedge^s F)(k)``; negative by construction."""
    return q * s * slope + k * deg_x


def params_sym(inv: KernelInvariants, curve: CurveInvariants) -> DecisionParams:
    r = inv.rank
    if r < 2:
        raise ValueError("rank-1 sheaves need no parameters")
    n = r * (r - 1) // gcd(r, inv.degree)
    q = (curve.genus - 1 + curve.degree) * n + 1
    return DecisionParams("sym", r, inv.degree, inv.slope, n, q,
                          twist_for(q, inv.slope, curve.degree))


def params_ext(inv: KernelInvariants, curve: CurveInvariants, s: int) -> DecisionParams:
    r = inv.rank
    if not 1 <= s < r:
        raise ValueError(f"exterior degree must satisfy 1 <= s < {r}, got {s}")
    n = r // gcd(r, s * inv.degree)
    q = (curve.genus - 1 + curve.degree) * n + 1
    return DecisionParams("ext", r, inv.degree, inv.slope, n, q,
                          twist_for(q, inv.slope, curve.degree, s), s=s)


def frobenius_threshold(inv: KernelInvariants, curve: CurveInvariants) -> int:
    """Smallest admissible ``p^e``: ``(g - 1 + deg X) n + 1`` with the sym ``n``."""
    n = inv.rank * (inv.rank - 1) // gcd(inv.rank, inv.degree)
    return (curve.genus - 1 + curve.degree) * n + 1


def section_annihilated(M: SheafMap, section) -> bool:
    """Whether ``sum_i M[j][i] * section[i]`` vanishes in the ring for every row."""
    ring = M.ring
    zero = ring.poly_ring.zero()
    for row in M.rows:
        acc = zero
        for i, f in row.items():
            if section[i]:
                acc = acc + f * section[i]
        if ring.normal_form(acc):
            return False
    return True


def probe(M: SheafMap, k: int, *, q: int = 1, s: int | None = None, e: int | None = None,
          witness: bool = True, nnz_cap: int = 0, strategy: str = "auto"):
    """Scalarize ``M`` at twist ``k`` and compute its kernel.

    Returns ``(Probe, SectionSpace or None)``; the section space is only
    materialized when the kernel is nonzero and ``witness`` is set.
    """
    t0 = time.perf_counter()
    B = scalarize(M, k)
    dim, vecs = nullspace(B, basis=witness, strategy=strategy, nnz_cap=nnz_cap)
    space = None
    if dim and witness:
        space = SectionSpace(dim, k, sections_from_vectors(B, vecs))
    pr = Probe(q, k, dim, time.perf_counter() - t0, B.shape, s=s, e=e)
    log.info("probe q=%s s=%s e=%s k=%d %dx%d -> %d (%.3fs)",
             q, s, e, k, B.nrows, B.ncols, dim, pr.seconds)
    return pr, space


def _char0(A: SheafMap, mode: str):
    if A.ring.field.characteristic:
        raise ValueError(f"{mode} mode needs characteristic 0; use frobenius mode over GF(p)")


def _setup(A, curve):
    curve = curve or invariants(A.ring)
    return curve, kernel_invariants(A, curve)


def decide_sym(A: SheafMap, incremental: bool = True, *, max_q: int | None = None,
               nnz_cap: int = 0, witness: bool = True, curve: CurveInvariants | None = None,
               strategy: str = "auto") -> DecisionReport:
    """Symmetric-power test: no section of ``Sym^q F (k)`` at the theorem ``q``."""
    _char0(A, "sym")
    curve, inv = _setup(A, curve)
    if inv.rank == 1:
        return DecisionReport(SEMISTABLE, "sym", curve, inv, note="rank 1")
    par = params_sym(inv, curve)
    report = DecisionReport(INCONCLUSIVE, "sym", curve, inv, params=[par])
    qs = range(1, par.q + 1) if incremental else [par.q]
    for q in qs:
        if max_q is not None and q > max_q:
            report.note = f"stopped at max_q={max_q} below q={par.q}"
            return report
        k = twist_for(q, inv.slope, curve.degree)
        try:
            pr, space = probe(sym_power(A, q), k, q=q, witness=witness,
                              nnz_cap=nnz_cap, strategy=strategy)
        except NnzCapExceeded as exc:
            report.probes.append(Probe(q, k, None, 0.0, error=str(exc)))
            report.note = str(exc)
            return report
        report.probes.append(pr)
        if pr.dim:
            report.verdict = NOT_SEMISTABLE
            report.witness, report.witness_probe = space, pr
            return report
    report.verdict = SEMISTABLE
    return report


def decide_ext(A: SheafMap, incremental: bool = True, *, max_q: int | None = None,
               nnz_cap: int = 0, witness: bool = True, curve: CurveInvariants | None = None,
               threads: int = 1, strategy: str = "auto") -> DecisionReport:
    """Exterior-power test, run over all ``s < r``.

    Probes are ordered by ``q`` first and ``s`` second, so a section of a
    low power of a higher exterior power is found before the high symmetric
    powers of ``F`` itself.
    """
    _char0(A, "ext")
    curve, inv = _setup(A, curve)
    if inv.rank == 1:
        return DecisionReport(SEMISTABLE, "ext", curve, inv, note="rank 1")
    pars = [params_ext(inv, curve, s) for s in range(1, inv.rank)]
    report = DecisionReport(INCONCLUSIVE, "ext", curve, inv, params=pars)
    top = max(p.q for p in pars)
    qs = range(1, top + 1) if incremental else sorted({p.q for p in pars})
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for q in qs:
            if max_q is not None and q > max_q:
                report.note = f"stopped at max_q={max_q}"
                return report
            batch = [p for p in pars if (q <= p.q if incremental else q == p.q)]

            def run(p, q=q):
                k = twist_for(q, inv.slope, curve.degree, p.s)
                try:
                    return probe(sym_of_ext(A, p.s, q), k, q=q, s=p.s, witness=witness,
                                 nnz_cap=nnz_cap, strategy=strategy)
                except NnzCapExceeded as exc:
                    return Probe(q, k, None, 0.0, s=p.s, error=str(exc)), None

            results = list(pool.map(run, batch)) if pool else [run(p) for p in batch]
            # deterministic reduction: lowest failing s wins
            for pr, space in results:
                report.probes.append(pr)
            for pr, space in results:
                if pr.error:
                    report.note = pr.error
                    return report
                if pr.dim:
                    report.verdict = NOT_SEMISTABLE
                    report.witness, report.witness_probe = space, pr
                    return report
    finally:
        if pool:
            pool.shutdown()
    report.verdict = SEMISTABLE
    return report


def frobenius_pullback(A: SheafMap, e: int) -> SheafMap:
    """Raise every entry to the ``p^e``-th power and scale all twists by ``p^e``."""
    p = A.ring.field.characteristic
    if not p:
        raise ValueError("Frobenius pullback needs a field of positive characteristic")
    if e < 0:
        raise ValueError("exponent must be non-negative")
    if e == 0:
        return A
    pe = p ** e
    rows = [{i: f ** pe for i, f in row.items()} for row in A.rows]
    return SheafMap(A.ring, rows, [t * pe for t in A.col_twists],
                    [t * pe for t in A.row_twists], check=False)


def decide_frobenius(A: SheafMap, e_max: int, *, nnz_cap: int = 0, witness: bool = True,
                     curve: CurveInvariants | None = None,
                     strategy: str = "auto") -> DecisionReport:
    """Probe ``F^{e*}F (k_e)`` for ``e = 0..e_max``.

    A section refutes strong semistability.  With no sections and
    ``p^e_max`` at or above the threshold the sheaf is semistable; strong
    semistability itself is never claimed for a bounded ``e``.
    """
    p = A.ring.field.characteristic
    if not p:
        raise ValueError("frobenius mode needs a field of positive characteristic")
    if A.nrows != 1:
        raise ValueError("frobenius mode needs a one-row map")
    if entry_ideal_correction(A):
        raise ValueError("entries are not primary to the irrelevant ideal: the pullback "
                         "of the kernel is not the kernel of the powered entries")
    curve, inv = _setup(A, curve)
    if inv.rank == 1:
        return DecisionReport(STRONGLY_SEMISTABLE, "frobenius", curve, inv,
                              note="rank 1: every pullback is a line bundle")
    threshold = frobenius_threshold(inv, curve)
    report = DecisionReport(INCONCLUSIVE, "frobenius", curve, inv)
    for e in range(e_max + 1):
        pe = p ** e
        k = twist_for(pe, inv.slope, curve.degree)
        n = inv.rank * (inv.rank - 1) // gcd(inv.rank, inv.degree)
        report.params.append(DecisionParams("frobenius", inv.rank, inv.degree, inv.slope,
                                            n, 1, k, p=p, e=e))
        try:
            pr, space = probe(frobenius_pullback(A, e), k, q=1, e=e, witness=witness,
                              nnz_cap=nnz_cap, strategy=strategy)
        except NnzCapExceeded as exc:
            report.probes.append(Probe(1, k, None, 0.0, e=e, error=str(exc)))
            report.note = str(exc)
            return report
        report.probes.append(pr)
        if pr.dim:
            report.verdict = NOT_STRONGLY_SEMISTABLE
            report.witness, report.witness_probe = space, pr
            return report
    if p ** e_max >= threshold:
        report.verdict = SEMISTABLE
    else:
        report.note = f"p^e_max = {p ** e_max} is below the threshold {threshold}"
    return report
