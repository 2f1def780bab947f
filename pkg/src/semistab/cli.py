"""Command-line front end.

Problem files hold one statement per line (or separated by ``;``)::

    field Q                      # or a prime, e.g. "field 7"
    vars x, y, z
    ideal x^4+y^3*z+z^4
    matrix [x^3, y^3, z^2]       # further rows: [..] [..]
    coltwists 3, 3, 2            # optional, default: entry degrees
    rowtwists 0                  # optional, default: all 0

Exit codes: 0 semistable-type verdict, 1 not semistable, 2 inconclusive,
3 parse/usage error, 4 invalid problem (not a smooth curve, bad map).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .curve import check_smooth, invariants
from .decide import (INCONCLUSIVE, NOT_SEMISTABLE, NOT_STRONGLY_SEMISTABLE, SEMISTABLE,
                     STRONGLY_SEMISTABLE, DecisionReport, decide_ext, decide_frobenius,
                     decide_sym)
from .groebner import GradedRing, NotACurveError
from .poly import GF, QQ, PolynomialRing, PolynomialSyntaxError, format_poly, is_prime
from .sheafmap import SheafMap

log = logging.getLogger("semistab")

EXIT_CODES = {SEMISTABLE: 0, STRONGLY_SEMISTABLE: 0, NOT_SEMISTABLE: 1,
              NOT_STRONGLY_SEMISTABLE: 1, INCONCLUSIVE: 2}
EXIT_PARSE = 3
EXIT_INVALID = 4


class ProblemError(ValueError):
    """Malformed problem text, with a 1-based line and column."""

    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class InvalidProblem(ValueError):
    pass


@dataclass
class Problem:
    ring: GradedRing
    matrix: SheafMap


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _statements(text):
    """Split into ``(offset, statement)`` at newlines and ``;`` outside brackets."""
    out = []
    depth = 0
    start = 0
    i = 0
    while i <= len(text):
        ch = text[i] if i < len(text) else "\n"
        if ch == "#":
            j = text.find("\n", i)
            j = len(text) if j < 0 else j
            text = text[:i] + " " * (j - i) + text[j:]
            ch = text[i] if i < len(text) else "\n"
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ProblemError("unbalanced ']'", *_position(text, i))
        elif ch in ";\n" and depth == 0:
            chunk = text[start:i]
            if chunk.strip():
                lead = len(chunk) - len(chunk.lstrip())
                out.append((start + lead, chunk.strip()))
            start = i + 1
        i += 1
    if depth:
        raise ProblemError("unclosed '['", *_position(text, len(text)))
    return out, text


def _split_items(body, base):
    """Comma-separated items of ``body`` with their absolute offsets."""
    items = []
    start = 0
    for i, ch in enumerate(body + ","):
        if ch == ",":
            chunk = body[start:i]
            lead = len(chunk) - len(chunk.lstrip())
            items.append((base + start + lead, chunk.strip()))
            start = i + 1
    return items


def parse_problem(text: str, *, skip_checks: bool = False) -> Problem:
    """Parse and validate a problem; see the module docstring for the format."""
    stmts, text = _statements(text)
    seen: dict = {}
    for off, stmt in stmts:
        parts = stmt.split(None, 1)
        key = parts[0].lower()
        rest = parts[1] if len(parts) > 1 else ""
        if key not in ("field", "vars", "ideal", "matrix", "coltwists", "rowtwists"):
            raise ProblemError(f"unknown statement {key!r}", *_position(text, off))
        if key in seen:
            raise ProblemError(f"repeated statement {key!r}", *_position(text, off))
        body_off = off + len(stmt) - len(rest.lstrip()) if rest.strip() else off + len(stmt)
        seen[key] = (body_off, rest.strip(), off)
    for key in ("field", "vars", "matrix"):
        if key not in seen:
            raise ProblemError(f"missing '{key}' statement", *_position(text, len(text)))

    off, body, _ = seen["field"]
    if body in ("Q", "QQ"):
        field = QQ
    else:
        try:
            p = int(body)
        except ValueError:
            raise ProblemError(f"bad field {body!r}", *_position(text, off)) from None
        if not is_prime(p):
            raise ProblemError(f"field characteristic {p} is not prime", *_position(text, off))
        field = GF(p)

    off, body, _ = seen["vars"]
    names = [name for _, name in _split_items(body, off)]
    for o, name in _split_items(body, off):
        if not name.isidentifier():
            raise ProblemError(f"bad variable name {name!r}", *_position(text, o))
    try:
        R = PolynomialRing(field, names)
    except ValueError as exc:
        raise ProblemError(str(exc), *_position(text, off)) from None

    def poly(o, s):
        try:
            return R.parse(s)
        except PolynomialSyntaxError as exc:
            raise ProblemError(str(exc).split(" at column")[0], *_position(text, o + exc.pos)) from None

    ideal = []
    if "ideal" in seen:
        off, body, _ = seen["ideal"]
        ideal = [poly(o, s) for o, s in _split_items(body, off)]
    for g in ideal:
        if not g.is_homogeneous():
            raise InvalidProblem(f"ideal generator {format_poly(g)} is not homogeneous")
    S = GradedRing(R, ideal)

    off, body, _ = seen["matrix"]
    rows = []
    pos = 0
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        if body[pos] != "[":
            raise ProblemError("expected '[' starting a matrix row", *_position(text, off + pos))
        end = body.index("]", pos)
        rows.append([poly(o, s) for o, s in _split_items(body[pos + 1:end], off + pos + 1)])
        pos = end + 1
    if not rows:
        raise ProblemError("empty matrix", *_position(text, off))
    ncols = len(rows[0])
    for j, row in enumerate(rows):
        if len(row) != ncols:
            raise InvalidProblem(f"matrix row {j} has {len(row)} entries, expected {ncols}")

    def twists(key, count):
        o, b, _ = seen[key]
        try:
            vals = [int(s) for _, s in _split_items(b, o)]
        except ValueError:
            raise ProblemError(f"{key} must be integers", *_position(text, o)) from None
        if len(vals) != count:
            raise InvalidProblem(f"{key} lists {len(vals)} values, expected {count}")
        return vals

    row_twists = twists("rowtwists", len(rows)) if "rowtwists" in seen else [0] * len(rows)
    if "coltwists" in seen:
        col_twists = twists("coltwists", ncols)
    else:
        col_twists = []
        for i in range(ncols):
            nz = [(j, rows[j][i]) for j in range(len(rows)) if rows[j][i]]
            if not nz:
                raise InvalidProblem(f"column {i} is zero; give coltwists explicitly")
            j, f = nz[0]
            if f.homogeneous_degree is None:
                raise InvalidProblem(f"entry ({j}, {i}) = {format_poly(f)} is not homogeneous")
            col_twists.append(f.homogeneous_degree + row_twists[j])
    try:
        A = SheafMap(S, rows, col_twists, row_twists)
    except ValueError as exc:
        raise InvalidProblem(str(exc)) from None

    if not skip_checks:
        try:
            invariants(S)
        except NotACurveError as exc:
            raise InvalidProblem(str(exc)) from None
        sm = check_smooth(S)
        if not sm:
            raise InvalidProblem("the curve is singular: the Jacobian quotient is nonzero "
                                 f"in degree {sm.witness_degree}")
    return Problem(S, A)


def report_to_dict(report: DecisionReport, *, field, witness: bool, elapsed: float) -> dict:
    sheaf = None
    if report.sheaf is not None:
        mu = report.sheaf.slope
        sheaf = {"rank": report.sheaf.rank, "degree": report.sheaf.degree,
                 "slope": f"{mu.numerator}/{mu.denominator}"}
    out = {
        "version": __version__,
        "field": "Q" if not field.characteristic else field.characteristic,
        "mode": report.mode,
        "curve": {"degree": report.curve.degree, "genus": report.curve.genus},
        "sheaf": sheaf,
        "params": [{"n": p.n, "q": p.q, "k": p.k, "s": p.s, "p": p.p, "e": p.e}
                   for p in report.params],
        "probes": [{"q": p.q, "s": p.s, "e": p.e, "k": p.k, "dim": p.dim,
                    "rows": p.shape[0], "cols": p.shape[1],
                    "time_ms": round(p.seconds * 1000, 3), "error": p.error}
                   for p in report.probes],
        "verdict": report.verdict,
        "exit_code": EXIT_CODES[report.verdict],
        "witness": None,
        "note": report.note,
        "timings": {"total_ms": round(elapsed * 1000, 3)},
    }
    if witness and report.witness is not None:
        wp = report.witness_probe
        out["witness"] = {
            "q": wp.q, "s": wp.s, "e": wp.e, "k": wp.k,
            "dimension": report.witness.dimension,
            "sections": [[format_poly(f) for f in sec] for sec in report.witness.basis],
        }
    return out


def format_human(d: dict) -> str:
    lines = [f"curve: degree {d['curve']['degree']}, genus {d['curve']['genus']}"]
    if d["sheaf"]:
        s = d["sheaf"]
        lines.append(f"kernel sheaf: rank {s['rank']}, degree {s['degree']}, slope {s['slope']}")
    for p in d["params"]:
        extra = "".join(f", {key}={p[key]}" for key in ("s", "p", "e") if p[key] is not None)
        lines.append(f"theorem parameters: n={p['n']}, q={p['q']}, k={p['k']}{extra}")
    for p in d["probes"]:
        tag = "".join(f" {key}={p[key]}" for key in ("s", "e") if p[key] is not None)
        dim = p["dim"] if p["error"] is None else f"aborted ({p['error']})"
        lines.append(f"probe q={p['q']}{tag} k={p['k']} B {p['rows']}x{p['cols']}: "
                     f"dim ker = {dim} [{p['time_ms']:.1f} ms]")
    if d["witness"]:
        w = d["witness"]
        lines.append(f"witness: {w['dimension']}-dimensional section space at k={w['k']}")
        for sec in w["sections"]:
            lines.append("  (" + ", ".join(sec) + ")")
    if d["note"]:
        lines.append(f"note: {d['note']}")
    lines.append(f"verdict: {d['verdict']}")
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    # exit code 2 means "inconclusive" here, so usage errors use 3
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="semistab", description="Decide semistability of a "
                                 "kernel sheaf on a smooth projective curve.")
    ap.add_argument("problem", help="problem file, or '-' for stdin")
    ap.add_argument("--mode", choices=("sym", "ext", "frob"), default="sym")
    ap.add_argument("--incremental", action=argparse.BooleanOptionalAction, default=True,
                    help="probe q' = 1, 2, ... before the theorem power (default on)")
    ap.add_argument("--max-q", type=int, default=None, help="cap on probed powers")
    ap.add_argument("--e-max", type=int, default=None,
                    help="largest Frobenius exponent (default: first e reaching the threshold)")
    ap.add_argument("--skip-checks", action="store_true", help="skip curve and smoothness checks")
    ap.add_argument("--json", action="store_true", help="print the report as JSON")
    ap.add_argument("--witness", action="store_true", help="include destabilizing sections")
    ap.add_argument("--nnz-cap", type=int, default=0, help="abort eliminations above this many nonzeros")
    ap.add_argument("--threads", type=int, default=1, help="parallel probes in ext mode")
    ap.add_argument("--strategy", choices=("auto", "exact"), default="auto",
                    help="kernel strategy over QQ (auto: certified modular)")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def _default_e_max(A) -> int:
    from .decide import frobenius_threshold
    from .sheafmap import kernel_invariants

    curve = invariants(A.ring)
    inv = kernel_invariants(A, curve)
    if inv.rank < 2:
        return 0
    t = frobenius_threshold(inv, curve)
    p = A.ring.field.characteristic
    e = 0
    while p ** e < t:
        e += 1
    return e


def run(args) -> int:
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    t0 = time.perf_counter()
    try:
        text = sys.stdin.read() if args.problem == "-" else Path(args.problem).read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        prob = parse_problem(text, skip_checks=args.skip_checks)
    except ProblemError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidProblem as exc:
        print(f"invalid problem: {exc}", file=sys.stderr)
        return EXIT_INVALID
    A = prob.matrix
    common = dict(nnz_cap=args.nnz_cap, witness=True, strategy=args.strategy)
    try:
        if args.mode == "sym":
            rep = decide_sym(A, args.incremental, max_q=args.max_q, **common)
        elif args.mode == "ext":
            rep = decide_ext(A, args.incremental, max_q=args.max_q, threads=args.threads, **common)
        else:
            e_max = args.e_max if args.e_max is not None else _default_e_max(A)
            rep = decide_frobenius(A, e_max, **common)
    except (ValueError, NotACurveError) as exc:
        print(f"invalid problem: {exc}", file=sys.stderr)
        return EXIT_INVALID
    d = report_to_dict(rep, field=A.ring.field, witness=args.witness,
                       elapsed=time.perf_counter() - t0)
    print(json.dumps(d, indent=2) if args.json else format_human(d))
    return d["exit_code"]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
