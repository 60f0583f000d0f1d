"""Orientations, Betti histograms, chambers, ideals, and the equality tables."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from gkmcalc import (
    GkmPair,
    Vector,
    betti,
    betti_equality_report,
    betti_invariance_check,
    coh_basis,
    ideal_hilbert,
    l_independent,
    morse_inequalities,
    orient,
    positively_oriented_function,
)
from gkmcalc.morse_betti import (
    _axial_classes,
    _chambers,
    find_acyclic_xi,
    is_acyclic,
    wall_crossing_check,
)
from gkmcalc.polyalg import Covector, graded_dim


def _cyclic_triangle():
    # every vertex star is parallel, and the x-positive orientation is a loop
    return GkmPair(
        1,
        ["1", "2", "3"],
        [("1", "2"), ("2", "3"), ("3", "1")],
        {("1", "2"): (1,), ("2", "3"): (1,), ("3", "1"): (1,)},
    )


def test_orientation_on_cp2(cp2):
    o = orient(cp2, Vector((1, 2)))
    assert o.sigma == {"1": 2, "2": 1, "3": 0}
    assert set(o.edges) == {("2", "1"), ("3", "1"), ("3", "2")}
    assert o.vertices == cp2.vertices


def test_orientation_rejects_walls(cp2):
    with pytest.raises(ValueError):
        orient(cp2, Vector((1, 0)))  # kills the edge form y
    with pytest.raises(ValueError):
        orient(cp2, Vector((0, 0)))


def test_sigma_flips_under_negation(family):
    for name, pair in family:
        if pair.valence < 1:
            continue
        xi = find_acyclic_xi(pair)
        fwd = orient(pair, xi).sigma
        bwd = orient(pair, Vector(tuple(-c for c in xi))).sigma
        d = pair.valence
        assert all(bwd[p] == d - fwd[p] for p in pair.vertices), name


def test_acyclicity_and_its_witness():
    tri = _cyclic_triangle()
    o = orient(tri, Vector((1,)))
    ok, witness = is_acyclic(o)
    assert not ok
    assert witness is not None and len(witness) >= 3
    # the witness walks actual directed edges
    directed = set(o.edges)
    for a, b in zip(witness, witness[1:] + witness[:1]):
        assert (a, b) in directed
    with pytest.raises(ValueError):
        positively_oriented_function(tri, Vector((1,)))


def test_levels_on_cp2(cp2):
    phi = positively_oriented_function(cp2, Vector((1, 2)))
    assert phi == {"1": Fraction(0), "2": Fraction(-1), "3": Fraction(-2)}


def test_levels_split_ties_on_the_cycle(cycle4):
    phi = positively_oriented_function(cycle4, Vector((1, 2)))
    assert phi == {
        "1": Fraction(-2),
        "2": Fraction(-5, 6),
        "3": Fraction(0),
        "4": Fraction(-2, 3),
    }


def test_levels_increase_along_directed_edges(family):
    for name, pair in family:
        if pair.valence < 1:
            continue
        xi = find_acyclic_xi(pair)
        phi = positively_oriented_function(pair, xi)
        assert len(set(phi.values())) == len(phi), name
        for lo, hi in orient(pair, xi).edges:
            assert phi[lo] < phi[hi], name


@pytest.mark.parametrize(
    "fixture,expected",
    [
        ("k2", [1, 1]),
        ("cp2", [1, 1, 1]),
        ("gamma4", [1, 1, 1, 1]),
        ("gamma5", [1, 1, 1, 1, 1]),
        ("cycle4", [1, 2, 1]),
        ("prod", [1, 2, 2, 1]),
    ],
)
def test_frozen_betti(request, fixture, expected):
    pair = request.getfixturevalue(fixture)
    assert betti(pair, find_acyclic_xi(pair)) == expected


def test_blowup_betti(blowup):
    sharp, _ = blowup
    assert betti(sharp, find_acyclic_xi(sharp)) == [1, 2, 1]


def test_poincare_duality_of_the_histogram(family):
    for name, pair in family:
        if pair.valence < 1:
            continue
        b = betti(pair, find_acyclic_xi(pair))
        assert b == b[::-1], name


@pytest.mark.parametrize(
    "fixture,chambers",
    [
        ("k2", 2),
        ("cp2", 6),
        ("gamma4", 24),
        ("gamma5", 14),
        ("cycle4", 4),
        ("prod", 8),
    ],
)
def test_chamber_counts_and_invariance(request, fixture, chambers):
    pair = request.getfixturevalue(fixture)
    out = betti_invariance_check(pair)
    assert out["invariant"]
    assert out["method"] == "exhaustive"
    assert out["chambers_found"] == chambers
    assert out["betti"] == betti(pair, find_acyclic_xi(pair))


def test_chamber_count_matches_random_sampling(gamma4):
    # independent estimate: sign vectors of many random directions
    rng = random.Random(1)
    classes = _axial_classes(gamma4)
    seen = set()
    for _ in range(4000):
        v = tuple(Fraction(rng.randint(-60, 60), rng.randint(1, 9)) for _ in range(3))
        signs = tuple(
            1 if f.evaluate(Vector(v)) > 0 else (-1 if f.evaluate(Vector(v)) < 0 else 0)
            for f in classes
        )
        if 0 not in signs:
            seen.add(signs)
    assert len(seen) == 24


def _adjacent_witnesses(pair):
    chambers, _ = _chambers(_axial_classes(pair), pair.n, 500)
    for i in range(len(chambers)):
        for j in range(i + 1, len(chambers)):
            si, wi = chambers[i]
            sj, wj = chambers[j]
            if sum(a != b for a, b in zip(si, sj)) == 1:
                return Vector(wi), Vector(wj)
    raise AssertionError("no adjacent chambers found")


def test_wall_crossing_local_picture(cp2):
    lo, hi = _adjacent_witnesses(cp2)
    out = wall_crossing_check(cp2, lo, hi)
    assert out["ok"] and out["others_fixed"]
    assert len(out["edges"]) >= 1
    for rec in out["edges"]:
        r, s = rec["before"]
        assert (s, r) == tuple(rec["after"]) and s == r + 1


def test_wall_crossing_flips_each_class_edge(cycle4):
    lo, hi = _adjacent_witnesses(cycle4)
    out = wall_crossing_check(cycle4, lo, hi)
    assert out["ok"] and out["others_fixed"]
    assert len(out["edges"]) == 2  # both edges of the parallel class trade places


def test_wall_crossing_needs_a_single_wall(cp2):
    xi = Vector((1, 2))
    with pytest.raises(ValueError):
        wall_crossing_check(cp2, xi, Vector((-1, -2)))  # all three classes flip


def test_find_acyclic_xi_properties(family):
    for name, pair in family:
        if pair.valence < 1:
            continue
        xi = find_acyclic_xi(pair)
        assert is_acyclic(orient(pair, xi))[0], name
        assert find_acyclic_xi(pair) == xi  # deterministic


def test_find_acyclic_xi_can_fail():
    with pytest.raises(ValueError):
        find_acyclic_xi(_cyclic_triangle())


def test_l_independence():
    forms = [Covector((1, 0)), Covector((0, 1)), Covector((1, 1))]
    assert l_independent(forms, 1)
    assert l_independent(forms, 2)
    assert not l_independent(forms, 3)
    assert l_independent(forms, 0)
    assert l_independent([], 2)


def test_ideal_hilbert_worked_examples():
    x, y = Covector((1, 0)), Covector((0, 1))
    xy = Covector((1, 1))
    assert ideal_hilbert([x, y], 2, 1) == (2, 2)
    assert ideal_hilbert([x, y], 2, 0) == (0, 1)
    assert ideal_hilbert([x, y, xy], 2, 2) == (3, 3)
    # principal case: the single generator is the product of all the forms
    assert ideal_hilbert([x, y, xy], 1, 3) == (1, 4)
    assert ideal_hilbert([x, y, xy], 1, 4) == (2, 5)
    assert ideal_hilbert([x, y, xy], 1, 2) == (0, 3)
    # more omitted factors than forms leaves nothing to generate with
    assert ideal_hilbert([x, y], 4, 2) == (0, 3)
    assert ideal_hilbert([x, y], 2, -1) == (0, 0)
    with pytest.raises(ValueError):
        ideal_hilbert([], 1, 1)
    with pytest.raises(ValueError):
        ideal_hilbert([x, y], 0, 1)
    with pytest.raises(ValueError):
        ideal_hilbert([x, Covector((1, 0, 0))], 1, 1)


def test_full_ring_is_reached_above_the_critical_degree():
    # for l = n independent forms the ideal fills the whole ring past N - n
    rng = random.Random(17)
    built = 0
    while built < 3:
        n = rng.choice((2, 3))
        N = rng.randint(n, 5)
        forms = []
        while len(forms) < N:
            c = Covector(tuple(rng.randint(-3, 3) for _ in range(n)))
            if not any(c.coords):
                continue
            if l_independent(forms + [c], n):
                forms.append(c)
        built += 1
        for m in range(N - n + 1, N - n + 3):
            dim_ideal, dim_ring = ideal_hilbert(forms, n, m)
            assert dim_ideal == dim_ring


def test_morse_inequalities_on_cp2(cp2):
    out = morse_inequalities(cp2, Vector((1, 2)), 6)
    assert out["ok"]
    assert out["betti"] == [1, 1, 1]
    for row in out["morse"]:
        assert row["lhs"] <= row["rhs"] and row["equality"]
    k2_steps = [s for s in out["steps"] if s["k"] == 2]
    assert [(s["vertex"], s["sigma"], s["gain"]) for s in k2_steps] == [
        ("1", 2, 1),
        ("2", 1, 2),
        ("3", 0, 3),
    ]
    assert [(s["lower"], s["upper"]) for s in k2_steps] == [(0, 1), (0, 2), (3, 3)]
    assert all(s["ok"] for s in out["steps"])


def test_morse_inequalities_across_fixtures(cycle4, gamma5):
    for pair in (cycle4, gamma5):
        out = morse_inequalities(pair, find_acyclic_xi(pair), 4)
        assert out["ok"]
        for row in out["morse"]:
            assert row["lhs"] <= row["rhs"]


def test_equality_report_on_the_complete_graphs(cp2, gamma4):
    for pair, l in ((cp2, 2), (gamma4, 3)):
        out = betti_equality_report(pair, l, 6)
        assert out["star_independence_ok"] and out["unique_min_ok"]
        assert out["asserted_equality"] is True
        assert all(row["equal"] for row in out["table"])
        rhs = [
            sum(
                b * graded_dim(pair.n, row["k"] - r)
                for r, b in enumerate(out["betti"])
            )
            for row in out["table"]
        ]
        assert [row["rhs"] for row in out["table"]] == rhs


def test_equality_report_on_the_cycle(cycle4):
    out = betti_equality_report(cycle4, 2, 4)
    assert out["betti"] == [1, 2, 1]
    assert out["asserted_equality"] is True
    assert all(row["equal"] for row in out["table"])
    # the degree-zero row in particular: one component, beta_0 = 1
    assert out["table"][0]["lhs"] == out["table"][0]["rhs"] == 1


def test_equality_report_records_hypothesis_failures():
    # the x-parallel edges form an irregular path, so the subgraph test
    # cannot even be posed; the failure is recorded, nothing is asserted
    pair = GkmPair(
        2,
        ["1", "2", "3", "4"],
        [("1", "2"), ("2", "3"), ("3", "4"), ("4", "1")],
        {
            ("1", "2"): (1, 0),
            ("2", "3"): (2, 0),
            ("3", "4"): (3, 0),
            ("4", "1"): (0, 1),
        },
    )
    out = betti_equality_report(pair, 2, 2)
    assert not out["unique_min_ok"]
    assert out["unique_min_failures"]
    assert out["asserted_equality"] is None
