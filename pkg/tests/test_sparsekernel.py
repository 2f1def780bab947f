import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semistab.poly import GF, QQ, format_poly
from semistab.powers import sym_power
from semistab.sparsekernel import (ENGINE, NnzCapExceeded, ScalarMatrix, eliminate_modp,
                                   kernel_basis, kernel_dimension, nullspace, rank, scalarize)
from semistab.sparsekernel import _markowitz
from semistab.sparsekernel.kernel import _certified_qq, _exact_qq

from conftest import dense_nullity, make_map

# B(6): nonzero entries (all equal to 1) as (row monomial, column block, column monomial)
B6_ENTRIES = [
    ("z^6", 2, "z^2"), ("y*z^5", 2, "y*z"), ("x*z^5", 2, "x*z"),
    ("y^2*z^4", 0, "z^2"), ("y^2*z^4", 2, "y^2"), ("x*y*z^4", 2, "x*y"), ("x^2*z^4", 2, "x^2"),
    ("y^3*z^3", 0, "y*z"), ("x*y^2*z^3", 0, "x*z"),
    ("y^4*z^2", 0, "y^2"), ("y^4*z^2", 1, "z^2"), ("x*y^3*z^2", 0, "x*y"),
    ("x^2*y^2*z^2", 0, "x^2"), ("x^4*z^2", 0, "z^2"),
    ("y^5*z", 1, "y*z"), ("x*y^4*z", 1, "x*z"), ("x^4*y*z", 0, "y*z"), ("x^5*z", 0, "x*z"),
    ("y^6", 1, "y^2"), ("x*y^5", 1, "x*y"), ("x^2*y^4", 1, "x^2"),
    ("x^4*y^2", 0, "y^2"), ("x^5*y", 0, "x*y"), ("x^6", 0, "x^2"),
]
B6_ROWS = [
    "z^6", "y*z^5", "x*z^5", "y^2*z^4", "x*y*z^4", "x^2*z^4", "y^3*z^3", "x*y^2*z^3",
    "x^2*y*z^3", "x^3*z^3", "y^4*z^2", "x*y^3*z^2", "x^2*y^2*z^2", "x^3*y*z^2", "x^4*z^2",
    "y^5*z", "x*y^4*z", "x^2*y^3*z", "x^3*y^2*z", "x^4*y*z", "x^5*z", "y^6", "x*y^5",
    "x^2*y^4", "x^3*y^3", "x^4*y^2", "x^5*y", "x^6",
]


def _name(ring, m):
    return format_poly(ring.poly_ring.monomial(m))


def test_b6_fixture(nonic_map):
    B = scalarize(nonic_map, 6)
    assert B.shape == (28, 18)
    S = nonic_map.ring
    assert [_name(S, B.row_origin(r)[1]) for r in range(28)] == B6_ROWS
    cols = [(B.col_origin(c)[0], _name(S, B.col_origin(c)[1])) for c in range(18)]
    assert [name for _, name in cols[:6]] == ["z^2", "y*z", "x*z", "y^2", "x*y", "x^2"]
    got = sorted((_name(S, B.row_origin(r)[1]), cols[c][0], cols[c][1], v)
                 for r, c, v in B.entries())
    assert got == sorted((r, b, c, 1) for r, b, c in B6_ENTRIES)
    assert kernel_dimension(B) == 0


def test_b2_12_shape(nonic_map):
    assert scalarize(sym_power(nonic_map, 2), 12).shape == (156, 99)


def test_below_all_twists_is_empty(nonic_map):
    B = scalarize(nonic_map, 2)
    assert B.ncols == 0
    assert kernel_dimension(B) == 0


def test_trivial_examples():
    eye = ScalarMatrix.from_triplets(QQ, 5, 5, [(i, i, 1) for i in range(5)])
    assert kernel_dimension(eye) == 0
    zero = ScalarMatrix.from_triplets(QQ, 0, 7, [])
    assert kernel_dimension(zero) == 7
    assert rank(eye) == 5


def _random_rows(rng, m, n, density, lo=-4, hi=4):
    rows = []
    for _ in range(m):
        row = [(c, rng.randint(lo, hi)) for c in range(n) if rng.random() < density]
        rows.append([(c, v) for c, v in row if v])
    return rows


@pytest.mark.parametrize("field", [QQ, GF(7)], ids=["QQ", "GF7"])
def test_random_matrices_match_dense_oracle(field):
    rng = random.Random(20240611)
    p = field.characteristic
    for _ in range(100):
        m, n = rng.randint(1, 60), rng.randint(1, 60)
        rows = _random_rows(rng, m, n, rng.choice([0.05, 0.15, 0.4]))
        # low-rank products make nontrivial kernels common
        if rng.random() < 0.4:
            k = rng.randint(1, max(1, min(m, n) // 2))
            U = _random_rows(rng, m, k, 0.5)
            V = _random_rows(rng, k, n, 0.3)
            rows = []
            for urow in U:
                acc = {}
                for i, a in urow:
                    for c, b in V[i]:
                        acc[c] = acc.get(c, 0) + a * b
                rows.append([(c, v) for c, v in sorted(acc.items()) if v])
        B = ScalarMatrix.from_triplets(field, m, n, [(r, c, v) for r, row in enumerate(rows)
                                                     for c, v in row])
        expect = dense_nullity(B.rows, n, p)
        dim, vecs = nullspace(B, basis=True)
        assert dim == expect
        assert len(vecs) == dim
        for v in vecs:
            for row in B.rows:
                s = sum(a * v.get(c, 0) for c, a in row)
                assert (s % p if p else s) == 0


def test_rational_entries_are_scaled_per_row():
    B = ScalarMatrix.from_triplets(QQ, 2, 3, [(0, 0, Fraction(1, 2)), (0, 1, Fraction(1, 3)),
                                             (1, 2, Fraction(2, 5))])
    assert B.integer_rows() == [[(0, 3), (1, 2)], [(2, 2)]]
    dim, vecs = nullspace(B, basis=True)
    assert dim == 1 and vecs == [{0: 2, 1: -3}]


def test_exact_and_certified_agree(nonic_map):
    B = scalarize(sym_power(nonic_map, 3), 18)
    assert _exact_qq(B, 0, False)[0] == _certified_qq(B, 0)[0] == 0
    S = make_map(["x^4+y^3*z+z^4"], ["x^3", "y^3", "z^2"])
    B = scalarize(sym_power(S, 4), 15)
    d1, v1 = _exact_qq(B, 0, True)
    d2, v2 = nullspace(B, basis=True)
    assert d1 == d2 == 1
    assert v1 == v2 or v1 == [{j: -x for j, x in v2[0].items()}]
    assert kernel_dimension(B, strategy="exact") == 1


def test_kernel_basis_contains_the_deg4_section():
    A = make_map(["x^4+y^3*z+z^4"], ["x^3", "y^3", "z^2"])
    space = kernel_basis(scalarize(A, 4))
    assert space.twist == 4 and space.dimension == len(space.basis) >= 1
    target = tuple(A.ring.parse(s) for s in ("x", "z", "z^2"))
    assert any(tuple(sec) == target or tuple(-f for f in sec) == target for sec in space.basis)


def test_engines_agree_on_pivots():
    rng = random.Random(7)
    for _ in range(50):
        m, n = rng.randint(1, 40), rng.randint(1, 40)
        rows = _random_rows(rng, m, n, rng.random())
        a = eliminate_modp(n, rows, 2147483647, kernel=True, engine="python")
        b = eliminate_modp(n, rows, 2147483647, kernel=True)
        assert a.pivot_cols == b.pivot_cols
        assert a.kernel == b.kernel


def test_compiled_engine_is_built():
    assert ENGINE == "compiled"


def test_nnz_cap_aborts():
    rng = random.Random(3)
    rows = _random_rows(rng, 60, 60, 0.3)
    with pytest.raises(NnzCapExceeded) as info:
        eliminate_modp(60, rows, 101, nnz_cap=50)
    assert info.value.cap == 50
    with pytest.raises(NnzCapExceeded):
        _markowitz.eliminate(60, rows, 0, nnz_cap=50)
    B = ScalarMatrix.from_triplets(QQ, 60, 60, [(r, c, v) for r, row in enumerate(rows)
                                                for c, v in row])
    with pytest.raises(NnzCapExceeded):
        kernel_dimension(B, nnz_cap=50)


def test_triplet_roundtrip(tmp_path, nonic_map):
    B = scalarize(sym_power(nonic_map, 2), 12)
    path = tmp_path / "b.txt"
    B.write_triplets(path)
    assert path.read_text().splitlines()[0] == f"156 99 {B.nnz}"
    C = ScalarMatrix.read_triplets(QQ, path)
    assert C.rows == B.rows
    Q = ScalarMatrix.from_triplets(QQ, 1, 2, [(0, 0, Fraction(-3, 4))])
    Q.write_triplets(path)
    assert path.read_text().splitlines()[1] == "0 0 -3/4"


def test_compiled_kernel_rejects_bad_modulus():
    from semistab.sparsekernel import _modp

    with pytest.raises(ValueError):
        _modp.eliminate(2, [[(0, 1)]], 2 ** 33)
    # large primes route to the pure engine
    big = 2 ** 61 - 1
    assert eliminate_modp(2, [[(0, 1), (1, 1)]], big).nullity == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.tuples(st.integers(0, 11), st.integers(-3, 3)), max_size=6),
                min_size=1, max_size=12))
def test_integer_elimination_rank_matches_modular(rows):
    clean = []
    for row in rows:
        d = {}
        for c, v in row:
            d[c] = v
        clean.append([(c, v) for c, v in sorted(d.items()) if v])
    exact = _markowitz.eliminate(12, clean, 0, kernel=True)
    assert exact.nullity == dense_nullity(clean, 12)
    for vec in exact.kernel:
        for row in clean:
            assert sum(a * vec.get(c, 0) for c, a in row) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 25), st.integers(0, 10 ** 6))
def test_padic_vector_matches_exact(n, seed):
    from semistab.sparsekernel.kernel import _padic_vector

    rng = random.Random(seed)
    # n - 1 random rows plus a dependent one: generically a 1-dim kernel
    rows = _random_rows(rng, n - 1, n, 0.6, -9, 9)
    rows.append([(c, v) for c, v in enumerate(
        [sum(a * dict(r).get(c, 0) for a, r in zip((2, -3), rows)) for c in range(n)]) if v])
    exact = _markowitz.eliminate(n, rows, 0, kernel=True)
    if exact.nullity != 1:
        return
    (v,) = exact.kernel
    f = max(v)
    got = _padic_vector(n, rows, f, 2147483647, [0])
    if got is None:
        # p divides a pivot of the factorization; the caller falls back
        return
    assert {j: x for j, x in got.items() if x} == {j: Fraction(x, v[f]) for j, x in v.items()}


def test_certified_without_padic(monkeypatch, nonic_map):
    import semistab.sparsekernel.kernel as K

    B = scalarize(sym_power(nonic_map, 10), 63)
    monkeypatch.setattr(K, "padic_solver", lambda *a: None)
    d, vecs = K._certified_qq(B, 0)
    assert d == 2 and len(vecs) == 2
    rows = B.integer_rows()
    assert all(K._annihilates(rows, v) for v in vecs)


def test_padic_solver_rejects_rank_deficiency():
    from semistab.sparsekernel import padic_solver

    # columns 1 and 2 are equal, so dropping column 0 leaves a dependency
    S = padic_solver(3, [[(0, 1), (1, 1), (2, 1)], [(1, 2), (2, 2)]], 0, 101)
    assert S is not None and not S.ok
    with pytest.raises(ValueError):
        S.digits(1)
