"""Scalarization of sheaf maps and exact sparse kernel computations.

The GF(p) elimination core is the compiled ``_modp`` extension when it can be
imported (and ``SEMISTAB_PURE`` is unset), else the pure-Python
``_markowitz`` module.  Both make the same pivot choices.
"""

from __future__ import annotations

import os

from . import _markowitz
from ._markowitz import Elimination, NnzCapExceeded

_compiled = None
if not os.environ.get("SEMISTAB_PURE"):
    try:
        from . import _modp as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None

ENGINE = "compiled" if _compiled is not None else "python"


def eliminate_modp(ncols, rows, p, *, nnz_cap=0, kernel=False, keep_pivots=False,
                   engine=None) -> Elimination:
    """Markowitz elimination over GF(p) with the selected engine."""
    engine = engine or ENGINE
    if engine == "compiled" and _compiled is not None and p < 2 ** 31:
        return _compiled.eliminate(ncols, rows, p, nnz_cap, keep_pivots, kernel)
    if engine not in ("compiled", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    return _markowitz.eliminate(ncols, rows, p, nnz_cap=nnz_cap,
                                keep_pivots=keep_pivots, kernel=kernel)


def padic_solver(ncols, rows, free_col, p):
    """Compiled p-adic solver for one kernel vector, or None without the extension."""
    if _compiled is None or ENGINE != "compiled" or p >= 2 ** 31:
        return None
    return _compiled.PadicSolver(ncols, rows, free_col, p)


from .scalar import ScalarMatrix, SectionSpace, scalarize  # noqa: E402
from .kernel import kernel_basis, kernel_dimension, nullspace, rank  # noqa: E402

__all__ = [
    "ENGINE", "Elimination", "NnzCapExceeded", "ScalarMatrix", "SectionSpace",
    "eliminate_modp", "kernel_basis", "kernel_dimension", "nullspace", "rank",
    "scalarize",
]
