"""Ring laws, term order, linear forms, and the residue engine."""
from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gkmcalc.polyalg import (
    Covector,
    LinearForm,
    LocalizedSum,
    LocalizedTerm,
    Polynomial,
    Vector,
    divides_exactly,
    graded_dim,
    grlex_key,
    is_polynomial_via_residues,
    monomials,
    pair,
    project_along,
    reduce_mod_line,
    residue,
    residue_partial_fractions,
    simplify,
)

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
exps2 = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys2 = st.dictionaries(exps2, fracs, max_size=5).map(lambda d: Polynomial(2, d))
points2 = st.tuples(fracs, fracs)


@given(polys2, polys2, polys2)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - b == a + (-b)
    assert a + Polynomial.zero(2) == a
    assert a * Polynomial.constant(2, 1) == a


@given(polys2, polys2, points2)
def test_evaluate_is_a_ring_hom(a, b, pt):
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)


@given(polys2, st.integers(0, 4))
def test_pow_matches_repeated_product(a, k):
    expected = Polynomial.constant(2, 1)
    for _ in range(k):
        expected = expected * a
    assert a**k == expected


@given(polys2)
def test_terms_come_out_grlex_descending(a):
    keys = [grlex_key(exp) for exp, _ in a.terms()]
    assert keys == sorted(keys, reverse=True)
    assert all(coef != 0 for _, coef in a.terms())


@pytest.mark.parametrize("n,k", [(1, 0), (1, 5), (2, 3), (3, 4), (4, 2)])
def test_monomials_and_graded_dim(n, k):
    mons = monomials(n, k)
    assert len(mons) == graded_dim(n, k) == math.comb(k + n - 1, n - 1)
    assert all(sum(m) == k for m in mons)
    keys = [grlex_key(m) for m in mons]
    assert keys == sorted(keys, reverse=True)
    assert len(set(mons)) == len(mons)


def test_graded_dim_negative_degree_is_zero():
    assert graded_dim(3, -1) == 0
    assert monomials(2, 0) == [(0, 0)]


@given(polys2, points2)
def test_substitute_composes_with_evaluate(a, pt):
    images = {0: Polynomial(2, {(0, 1): 2}), 1: Polynomial(2, {(1, 0): 1, (0, 0): 3})}
    composed = a.substitute(images)
    x, y = pt
    assert composed.evaluate(pt) == a.evaluate((2 * y, x + 3))


def test_polynomial_json_round_trip():
    p = Polynomial(2, {(2, 0): Fraction(1, 3), (0, 1): -2, (0, 0): 5})
    doc = p.to_json()
    assert Polynomial.from_json(doc) == p
    keys = [grlex_key(tuple(t["exp"])) for t in doc["terms"]]
    assert keys == sorted(keys, reverse=True)
    assert all(isinstance(t["coef"], str) for t in doc["terms"])


def test_covector_vector_pairing_and_arithmetic():
    c = Covector((1, -2))
    v = Vector((3, Fraction(1, 2)))
    assert pair(c, v) == 2
    assert (c + c).coords == (2, -4)
    assert (-c).coords == (-1, 2)
    assert c.scaled(Fraction(1, 2)).coords == (Fraction(1, 2), -1)
    with pytest.raises(TypeError):
        c + Covector((1, 2, 3))
    with pytest.raises(TypeError):
        c + v


def test_linear_form_canonicalization():
    f = LinearForm(Covector((-2, 4)))
    assert f.canonical == (1, -2)
    assert f.scale == -2
    assert f.pivot() == 1
    g = LinearForm(Covector((1, -2)))
    assert f.parallel_to(g) and g.parallel_to(f)
    assert not f.parallel_to(LinearForm(Covector((1, 1))))
    assert f.canonical_covector() == Covector((1, -2))
    assert f.polynomial() == Polynomial(2, {(1, 0): -2, (0, 1): 4})
    five = LinearForm(Covector((0, 0, 5)))
    assert five.canonical == (0, 0, 1) and five.scale == 5 and five.pivot() == 2
    with pytest.raises(ValueError):
        LinearForm(Covector((0, 0)))


@given(polys2)
def test_reduce_mod_line_is_a_normal_form(f):
    form = LinearForm(Covector((1, -2)))
    r = reduce_mod_line(f, form)
    assert divides_exactly(form, f - r) is not None
    assert reduce_mod_line(r, form) == r
    # adding any multiple of the line does not change the normal form
    g = Polynomial(2, {(1, 1): Fraction(1, 2), (0, 0): 3})
    assert reduce_mod_line(f + form.polynomial() * g, form) == r


@given(polys2)
def test_divides_exactly_inverts_multiplication(g):
    form = LinearForm(Covector((3, 1)))
    assert divides_exactly(form, form.polynomial() * g) == g


def test_divides_exactly_rejects_non_multiples():
    form = LinearForm(Covector((1, 0)))
    assert divides_exactly(form, Polynomial(2, {(0, 1): 1})) is None
    assert divides_exactly(form, Polynomial.constant(2, 1)) is None
    assert divides_exactly(form, Polynomial.zero(2)).is_zero()


def test_project_along_kills_the_form_and_fixes_the_annihilator():
    xi = Vector((1, 2))
    form = LinearForm(Covector((1, 1)))
    assert project_along(form.polynomial(), form, xi).is_zero()
    ann = Polynomial(2, {(1, 0): 2, (0, 1): -1})  # (2, -1) annihilates xi
    assert project_along(ann, form, xi) == ann
    with pytest.raises(ValueError):
        project_along(ann, LinearForm(Covector((2, -1))), xi)


def test_simplify_clears_a_removable_denominator():
    alpha = LinearForm(Covector((1, 0)))
    h = Polynomial(2, {(0, 1): 1, (0, 0): 2})
    f = Polynomial(2, {(1, 1): 1})
    lsum = LocalizedSum(
        2,
        (
            LocalizedTerm(f, (alpha,)),
            LocalizedTerm(alpha.polynomial() * h - f, (alpha,)),
        ),
    )
    numerator, denominators = simplify(lsum)
    assert denominators == ()
    assert numerator == h


def test_simplify_agrees_with_pointwise_evaluation():
    rng = random.Random(3)
    alphas = [LinearForm(Covector(c)) for c in ((1, 0), (0, 1), (1, -1))]
    terms = []
    for i, form in enumerate(alphas):
        num = Polynomial(2, {(i, 0): 1 + i, (0, 1): Fraction(1, 2)})
        terms.append(LocalizedTerm(num, (form, alphas[(i + 1) % 3])))
    lsum = LocalizedSum(2, tuple(terms))
    numerator, denominators = simplify(lsum)
    for _ in range(20):
        pt = (Fraction(rng.randint(1, 30), 7), Fraction(rng.randint(31, 60), 11))
        got = numerator.evaluate(pt)
        for d in denominators:
            got /= d.polynomial().evaluate(pt)
        assert got == lsum.evaluate(pt)


def _random_independent_forms(rng, n, d):
    forms = []
    while len(forms) < d:
        c = tuple(rng.randint(-4, 4) for _ in range(n))
        if not any(c):
            continue
        cand = LinearForm(Covector(c))
        if all(not cand.parallel_to(f) for f in forms):
            forms.append(cand)
    return forms


def _nonvanishing_xi(rng, forms, n):
    while True:
        xi = Vector(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)))
        if not xi.is_zero() and all(f.evaluate(xi) != 0 for f in forms):
            return xi


def _random_poly(rng, n, max_deg):
    terms = {}
    for _ in range(rng.randint(1, 6)):
        while True:
            exp = tuple(rng.randint(0, max_deg) for _ in range(n))
            if sum(exp) <= max_deg:
                break
        terms[exp] = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
    return Polynomial(n, terms)


def test_residue_series_and_formula_agree():
    rng = random.Random(11)
    for _ in range(80):
        n = rng.choice((2, 3))
        d = rng.randint(1, 4)
        forms = _random_independent_forms(rng, n, d)
        xi = _nonvanishing_xi(rng, forms, n)
        f = _random_poly(rng, n, 5)
        a = residue(f, forms, xi, method="series")
        b = residue(f, forms, xi, method="formula")
        assert a == b


def test_residue_is_linear_in_the_numerator():
    rng = random.Random(5)
    forms = _random_independent_forms(rng, 2, 3)
    xi = _nonvanishing_xi(rng, forms, 2)
    f = _random_poly(rng, 2, 4)
    g = _random_poly(rng, 2, 4)
    lhs = residue(f + g.scaled(Fraction(3, 2)), forms, xi)
    rhs = residue(f, forms, xi) + residue(g, forms, xi).scaled(Fraction(3, 2))
    assert lhs == rhs


def test_residue_vanishes_below_the_critical_degree():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.choice((2, 3))
        d = rng.randint(2, 5)
        forms = _random_independent_forms(rng, n, d)
        xi = _nonvanishing_xi(rng, forms, n)
        f = _random_poly(rng, n, d - 2)
        assert residue(f, forms, xi).is_zero()


def test_residue_lands_in_the_annihilator_subring():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.choice((2, 3))
        forms = _random_independent_forms(rng, n, 3)
        xi = _nonvanishing_xi(rng, forms, n)
        f = _random_poly(rng, n, 5)
        r = residue(f, forms, xi)
        # every nonconstant monomial of r is a product of forms vanishing at xi
        assert r.evaluate(tuple(xi)) == r.coefficient((0,) * n)


def test_residue_is_independent_of_the_complement_basis():
    forms = [LinearForm(Covector(c)) for c in ((1, 0), (0, 1), (1, 1))]
    xi = Vector((1, 2))
    f = Polynomial(2, {(3, 1): 1, (1, 1): Fraction(1, 2)})
    default = residue(f, forms, xi)
    basis_a = (Covector((1, 0)), [Covector((2, -1))])
    basis_b = (Covector((-1, 1)), [Covector((-4, 2))])
    assert residue(f, forms, xi, basis=basis_a) == default
    assert residue(f, forms, xi, basis=basis_b) == default


def test_residue_rejects_bad_inputs():
    forms = [LinearForm(Covector((1, 0)))]
    f = Polynomial(2, {(1, 0): 1})
    with pytest.raises(ValueError):
        residue(f, forms, Vector((0, 1)))  # denominator vanishes on xi
    with pytest.raises(ValueError):
        residue(f, forms, Vector((1, 1, 1)))
    with pytest.raises(ValueError):
        residue(f, forms, Vector((1, 1)), method="guess")


def test_residue_partial_fractions_numeric():
    # x^2 / ((x-1)(x-2)): the 1/x coefficient at infinity is 3
    assert residue_partial_fractions([0, 0, 1], [1, 2]) == 3


def test_residue_partial_fractions_symbolic():
    y = Polynomial.variable(1, 0)
    got = residue_partial_fractions(
        [Polynomial.zero(1), Polynomial.zero(1), Polynomial.zero(1), Polynomial.constant(1, 1)],
        [y, y.scaled(2), y.scaled(3)],
    )
    assert got == y.scaled(6)


def test_polynomiality_detector():
    alpha = LinearForm(Covector((1, 0)))
    xi = Vector((1, 0))
    theta = Covector((1, 1))  # theta(xi) = 1, not parallel to alpha
    f = Polynomial(2, {(0, 1): 1})
    honest = LocalizedSum(2, (LocalizedTerm(f * alpha.polynomial(), (alpha,)),))
    assert is_polynomial_via_residues(honest, xi, theta, 2)
    pole = LocalizedSum(2, (LocalizedTerm(Polynomial.constant(2, 1), (alpha,)),))
    assert not is_polynomial_via_residues(pole, xi, theta, 2)
    with pytest.raises(ValueError):
        is_polynomial_via_residues(pole, xi, Covector((2, 0)), 2)  # theta(xi) != 1
    with pytest.raises(ValueError):
        is_polynomial_via_residues(pole, xi, theta, 0)  # below the Vandermonde bound
