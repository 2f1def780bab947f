"""Compare the compiled and pure-Python GF(p) elimination engines.

The matrices are the scalarized symmetric powers B_q(k) of the degree-9
Fermat example (the map (x^4+y^2z^2, y^4, z^4, x^7)).  Both engines run on
identical integer rows and must agree on the nullity.

    python benchmarks/bench_elimination.py --q 3 4 5 6 7 --repeat 3
"""

import argparse
import statistics
import time

from semistab.decide import twist_for
from semistab.groebner import GradedRing
from semistab.poly import QQ, PolynomialRing
from semistab.powers import sym_power
from semistab.sheafmap import SheafMap, kernel_invariants
from semistab.sparsekernel import ENGINE, eliminate_modp, scalarize

P = 2 ** 31 - 1


def fermat_map():
    R = PolynomialRing(QQ, "xyz")
    S = GradedRing(R, [R.parse("x^9+y^9+z^9")])
    return SheafMap.from_row(S, [S.parse(f) for f in ("x^4+y^2*z^2", "y^4", "z^4", "x^7")])


def timed(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return out, statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, nargs="+", default=[2, 3, 4, 5, 6, 7])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-pure-above", type=int, default=200000,
                    help="skip the pure engine on matrices with more nonzeros")
    args = ap.parse_args(argv)
    if ENGINE != "compiled":
        ap.error("compiled engine not available; build the extension first")

    A = fermat_map()
    mu = kernel_invariants(A).slope
    print(f"{'q':>3} {'k':>4} {'rows x cols':>15} {'nnz':>8} {'nullity':>7} "
          f"{'compiled':>10} {'python':>10} {'speedup':>8}")
    for q in args.q:
        k = twist_for(q, mu, 9)
        B = scalarize(sym_power(A, q), k)
        rows = [[(c, v % P) for c, v in row] for row in B.integer_rows()]
        ec, tc = timed(lambda: eliminate_modp(B.ncols, rows, P, engine="compiled"), args.repeat)
        if B.nnz <= args.skip_pure_above:
            ep, tp = timed(lambda: eliminate_modp(B.ncols, rows, P, engine="python"), args.repeat)
            assert ep.nullity == ec.nullity and ep.pivot_cols == ec.pivot_cols
            py, ratio = f"{tp * 1000:9.1f}ms", f"{tp / tc:7.1f}x"
        else:
            py, ratio = f"{'-':>11}", f"{'-':>8}"
        shape = f"{B.nrows}x{B.ncols}"
        print(f"{q:>3} {k:>4} {shape:>15} {B.nnz:>8} {ec.nullity:>7} "
              f"{tc * 1000:9.1f}ms {py} {ratio}", flush=True)


if __name__ == "__main__":
    main()
