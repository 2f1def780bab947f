from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semistab.groebner import (GradedRing, NotACurveError, buchberger, hilbert_from_leading_terms,
                               reduce_full)
from semistab.poly import GF, QQ, PolynomialRing, format_poly, mono_divides, mono_lcm, monomials_of_degree

from conftest import SEGRE_IDEAL, SEGRE_VARS, make_ring

R = PolynomialRing(QQ, "xyz")


def _spoly_reduces(gb):
    leads = [g.leading_monomial() for g in gb]
    for (f, lf), (g, lg) in combinations(zip(gb, leads), 2):
        L = mono_lcm(lf, lg)
        s = f.mul_term(tuple(a - b for a, b in zip(L, lf)), 1 / f.leading_coefficient()) - \
            g.mul_term(tuple(a - b for a, b in zip(L, lg)), 1 / g.leading_coefficient())
        if reduce_full(s, gb, leads):
            return False
    return True


def test_hand_traced_basis():
    gb = buchberger([R.parse("x*y-z^2"), R.parse("x")])
    assert [format_poly(g) for g in gb] == ["x", "z^2"]


def test_segre_basis_is_reduced_groebner():
    S = make_ring(SEGRE_IDEAL, SEGRE_VARS)
    assert len(S.gb) == 3
    assert _spoly_reduces(S.gb)
    for i, g in enumerate(S.gb):
        assert g.leading_coefficient() == 1
        others = [h.leading_monomial() for j, h in enumerate(S.gb) if j != i]
        for m in g.terms:
            assert not any(mono_divides(lm, m) for lm in others)


def test_normal_form_on_quartic():
    S = make_ring(["x^4+y^3*z+z^4"])
    assert format_poly(S.normal_form(R.parse("x^4"))) == "-y^3*z-z^4"
    assert S.contains(R.parse("x^5+x*y^3*z+x*z^4"))


def test_graded_basis_counts():
    S = make_ring(["x^9+y^9+z^9"])
    assert len(S.graded_basis(6)) == 28
    assert len(S.graded_basis(2)) == 6
    assert S.graded_basis(-1) == ()
    assert len(S.graded_basis(20)) == 9 * 20 - 27


@pytest.mark.parametrize("ideal,slope,intercept", [
    (["x^4+y^3*z+z^4"], 4, -2),
    (["x^2+y^2+z^2"], 2, 1),
    (["x^9+y^9+z^9"], 9, -27),
    (["x+y+z"], 1, 1),
])
def test_plane_curve_hilbert_polynomials(ideal, slope, intercept):
    h = make_ring(ideal).hilbert()
    assert (h.dimension, h.stabilized_slope, h.stabilized_intercept) == (2, slope, intercept)


def test_zero_dimensional_and_unit_quotients():
    S = make_ring(["x^2+y^2+z^2"])
    # x = y = 0 misses the conic; x = 0 meets it in two points
    assert S.quotient([R.parse("x"), R.parse("y")]).hilbert().dimension == 0
    J = S.quotient([R.parse("x")])
    assert J.hilbert().dimension == 1
    assert J.hilbert().stabilized_intercept == 2
    assert S.quotient([R.parse("x"), R.parse("y"), R.parse("z")]).hilbert().dimension == 0
    assert make_ring(["1"]).hilbert().dimension == 0


def test_ambient_plane_is_not_a_curve():
    with pytest.raises(NotACurveError):
        make_ring([]).hilbert()


def test_prime_field_groebner():
    S = make_ring(["x^2+y^2+z^2"], field=GF(5))
    assert S.normal_form(S.parse("x^2")) == S.parse("4*y^2+4*z^2")


monomial_sets = st.lists(st.tuples(*[st.integers(0, 4)] * 3).filter(any), min_size=1, max_size=5)


@settings(max_examples=80, deadline=None)
@given(monomial_sets)
def test_hilbert_matches_brute_force_count(gens):
    h = hilbert_from_leading_terms(gens, 3)
    for d in range(0, 14):
        count = sum(1 for m in monomials_of_degree(3, d)
                    if not any(mono_divides(g, m) for g in gens))
        assert h.value(d) == count


polys = st.lists(st.tuples(st.tuples(*[st.integers(0, 3)] * 3), st.integers(-3, 3)),
                 min_size=1, max_size=4)


def _homog(terms, d):
    out = {}
    for m, c in terms:
        s = sum(m)
        if s <= d and c:
            m = (m[0] + d - s, m[1], m[2])
            out[m] = out.get(m, 0) + c
    return R.from_dict(out)


@settings(max_examples=40, deadline=None)
@given(polys, polys, st.integers(2, 3), st.integers(2, 3))
def test_random_ideals_give_groebner_bases(a, b, da, db):
    gens = [f for f in (_homog(a, da), _homog(b, db)) if f]
    if not gens:
        return
    gb = buchberger(gens)
    assert _spoly_reduces(gb)
    leads = [g.leading_monomial() for g in gb]
    for f in gens:
        assert not reduce_full(f, gb, leads)


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_normal_form_is_linear_and_idempotent(a, b):
    S = make_ring(["x^4+y^3*z+z^4"])
    f, g = _homog(a, 5), _homog(b, 5)
    nf = S.normal_form
    assert nf(f + g) == nf(f) + nf(g)
    assert nf(nf(f)) == nf(f)
    assert all(S.is_standard(m) for m in nf(f).terms)


def test_graded_ring_repr_and_parse():
    S = make_ring(["x^2+y^2+z^2"])
    assert "x^2+y^2+z^2" in repr(S)
    assert isinstance(S, GradedRing)
