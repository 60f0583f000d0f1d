"""Classes, bases, characteristic classes, and the blow-up ring audit."""
from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from gkmcalc import coh_basis, chern_class, is_class, is_symplectic
from gkmcalc.cohomology import (
    CohClass,
    as_class,
    blowup_class_check,
    compatibility_rows,
    constant_class,
    gysin,
    pullback,
    thom_class_subobject,
    thom_class_vertex,
    zero_class,
)
from gkmcalc import linalg
from gkmcalc.polyalg import Covector, Polynomial, monomials


def _oracle_dim(pair, k):
    """Nullspace dimension of the compatibility system, built independently.

    Each edge difference is restricted to the kernel of its axial covector by
    substituting a sympy nullspace parametrization, with one linear condition
    per parameter monomial.
    """
    mons = monomials(pair.n, k)
    unknowns = [(v, m) for v in pair.vertices for m in mons]
    ts = sympy.symbols(f"t0:{max(pair.n - 1, 1)}")
    rows = []
    for p, q in pair.edges:
        alpha = pair.axial_at(p, q)
        kernel = sympy.Matrix([[sympy.Rational(c) for c in alpha.coords]]).nullspace()
        subs = [sum(ts[j] * vec[i] for j, vec in enumerate(kernel)) for i in range(pair.n)]
        restricted = {}
        for m in mons:
            expr = sympy.expand(sympy.prod(s**e for s, e in zip(subs, m)))
            restricted[m] = sympy.Poly(expr, *ts) if expr != 0 else None
        tmons = sorted(
            {tm for poly in restricted.values() if poly is not None for tm in poly.monoms()}
        )
        for tm in tmons:
            row = []
            for v, m in unknowns:
                if v == p:
                    sign = 1
                elif v == q:
                    sign = -1
                else:
                    row.append(sympy.Integer(0))
                    continue
                poly = restricted[m]
                coef = poly.coeff_monomial(tm) if poly is not None else 0
                row.append(sign * coef)
            rows.append(row)
    if not rows:
        return len(unknowns)
    mat = sympy.Matrix(rows)
    return len(unknowns) - mat.rank()


@pytest.mark.parametrize(
    "fixture,ks",
    [("cp2", range(5)), ("cycle4", range(4)), ("gamma4", range(4))],
)
def test_basis_dimension_matches_an_independent_oracle(request, fixture, ks):
    pair = request.getfixturevalue(fixture)
    for k in ks:
        dim, basis = coh_basis(pair, k)
        assert dim == _oracle_dim(pair, k)
        assert len(basis) == dim
        for cls in basis:
            ok, _ = is_class(pair, cls.values)
            assert ok


def test_frozen_dimension_tables(cp2, cycle4, gamma4, gamma5):
    assert [coh_basis(cp2, k)[0] for k in range(7)] == [1, 3, 6, 9, 12, 15, 18]
    assert [coh_basis(cycle4, k)[0] for k in range(7)] == [1, 4, 8, 12, 16, 20, 24]
    assert [coh_basis(gamma4, k)[0] for k in range(5)] == [1, 4, 10, 20, 34]
    assert [coh_basis(gamma5, k)[0] for k in range(6)] == [1, 3, 6, 10, 15, 20]


def test_basis_elements_are_linearly_independent(cp2):
    dim, basis = coh_basis(cp2, 2)
    mons = monomials(2, 2)
    vectors = [
        [cls.value(v).coefficient(m) for v in cp2.vertices for m in mons]
        for cls in basis
    ]
    assert linalg.rank(vectors, len(vectors[0])) == dim


def test_rank_nullity_of_the_compatibility_system(cp2):
    for k in range(4):
        rows, mons = compatibility_rows(cp2, k)
        ncols = len(cp2.vertices) * len(mons)
        dim, _ = coh_basis(cp2, k)
        assert linalg.rank(rows, ncols) + dim == ncols


def test_negative_degree_has_no_classes(cp2):
    assert coh_basis(cp2, -1) == (0, [])


def test_class_predicate(cp2):
    one = constant_class(cp2, 1)
    ok, witness = is_class(cp2, one.values)
    assert ok and witness is None
    bad = {
        "1": Polynomial.zero(2),
        "2": Polynomial(2, {(0, 1): 1}),
        "3": Polynomial.zero(2),
    }
    ok, witness = is_class(cp2, bad)
    assert not ok
    assert witness is not None
    with pytest.raises(ValueError):
        as_class(cp2, bad)


def test_class_algebra(cp2):
    c1 = chern_class(cp2, 1)
    c2 = chern_class(cp2, 2)
    assert (c1 + c1).degree == 1
    assert (c1 * c1).degree == 2
    assert (c1**3).degree == 3
    assert (c1 * Fraction(2, 3)).value("2") == c1.value("2").scaled(Fraction(2, 3))
    assert (c1 - c1).is_zero()
    with pytest.raises(ValueError):
        c1 + c2
    zero = zero_class(cp2, 5)
    assert zero.is_zero() and zero.degree == 5
    ok, _ = is_class(cp2, (c1 * c2 + zero_class(cp2, 3)).values)
    assert ok


def test_chern_values_on_cp2(cp2):
    c1 = chern_class(cp2, 1)
    assert c1.value("1") == Polynomial(2, {(1, 0): -1, (0, 1): -1})
    assert c1.value("2") == Polynomial(2, {(1, 0): 2, (0, 1): -1})
    assert c1.value("3") == Polynomial(2, {(1, 0): -1, (0, 1): 2})
    ok, _ = is_class(cp2, c1.values)
    assert ok
    euler = chern_class(cp2, 2)
    for p in cp2.vertices:
        prod = Polynomial.constant(2, 1)
        for q in cp2.neighbors(p):
            prod = prod * Polynomial.from_covector(cp2.axial_at(p, q))
        assert euler.value(p) == prod
    with pytest.raises(ValueError):
        chern_class(cp2, 0)
    with pytest.raises(ValueError):
        chern_class(cp2, 3)


def test_chern_classes_are_classes_everywhere(family):
    for name, pair in family:
        if pair.valence < 1:
            continue
        for k in (1, pair.valence):
            ok, _ = is_class(pair, chern_class(pair, k).values)
            assert ok, (name, k)


def _moment_class(points, pair):
    values = {
        v: Polynomial.from_covector(Covector(pt)).scaled(-1)
        for v, pt in zip(pair.vertices, points)
    }
    return CohClass(1, values)


def test_symplectic_detection(cp2, gamma5):
    for pts, pair in (
        ([(0, 0), (1, 0), (0, 1)], cp2),
        ([(i, i * i) for i in range(1, 6)], gamma5),
    ):
        c = _moment_class(pts, pair)
        assert is_symplectic(pair, c)
        assert not is_symplectic(pair, -c)
    squashed = CohClass(
        1,
        {
            "1": Polynomial.zero(2),
            "2": Polynomial(2, {(0, 1): -1}),
            "3": Polynomial(2, {(0, 1): -1}),
        },
    )
    assert not is_symplectic(cp2, squashed)
    with pytest.raises(ValueError):
        is_symplectic(cp2, constant_class(cp2, 1))


def test_thom_class_of_a_vertex(cp2):
    tau = thom_class_vertex(cp2, "2")
    assert tau.degree == 2
    assert tau.value("1").is_zero() and tau.value("3").is_zero()
    expected = Polynomial.from_covector(cp2.axial_at("2", "1")) * Polynomial.from_covector(
        cp2.axial_at("2", "3")
    )
    assert tau.value("2") == expected
    ok, _ = is_class(cp2, tau.values)
    assert ok


def test_thom_class_of_a_subobject(cp2):
    tau = thom_class_subobject(cp2, ["1", "2"], [("1", "2")])
    assert tau.degree == 1
    assert tau.value("3").is_zero()
    assert tau.value("1") == Polynomial.from_covector(cp2.axial_at("1", "3"))
    assert tau.value("2") == Polynomial.from_covector(cp2.axial_at("2", "3"))
    ok, _ = is_class(cp2, tau.values)
    assert ok
    with pytest.raises(ValueError):
        thom_class_subobject(cp2, ["1", "2", "3"], [("1", "2")])


def test_gysin_extends_by_the_thom_class(cp2):
    sub_v, sub_e = ["1", "2"], [("1", "2")]
    one = {v: Polynomial.constant(2, 1) for v in sub_v}
    pushed = gysin(cp2, sub_v, sub_e, CohClass(0, one))
    assert pushed == thom_class_subobject(cp2, sub_v, sub_e)
    g = CohClass(1, {"1": Polynomial.zero(2), "2": Polynomial(2, {(1, 0): 1})})
    lifted = gysin(cp2, sub_v, sub_e, g)
    assert lifted.degree == 2
    ok, _ = is_class(cp2, lifted.values)
    assert ok
    not_a_class = CohClass(1, {"1": Polynomial.zero(2), "2": Polynomial(2, {(0, 1): 1})})
    with pytest.raises(ValueError):
        gysin(cp2, sub_v, sub_e, not_a_class)


def test_pullback_along_the_identity(cp2):
    c1 = chern_class(cp2, 1)
    same = pullback({v: v for v in cp2.vertices}, c1, cp2.vertices)
    assert same == c1


def test_blowup_ring_audit(cp2):
    out = blowup_class_check(cp2, "1", max_k=4)
    assert out["relationHolds"]
    assert out["pullbacksAreClasses"]
    assert out["pullbackInjective"]
    assert [row["k"] for row in out["dims"]] == [0, 1, 2, 3, 4]
    for row in out["dims"]:
        assert row["sharp"] >= row["base"]
