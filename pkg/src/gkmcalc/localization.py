"""Pushforwards: fixed-point sums, level cuts, and residue comparisons.

The basic pushforward sums f(p) over the denominators given by each
vertex star and must collapse to a polynomial of degree k - d.  A level
cut (a direction xi, an injective positively oriented level function,
and a regular value c) yields the cross-section pushforward built from
projected star forms; it is computed both ways, via the cross-section
formula and via per-vertex residues below the cut, and the two results
are required to agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cohomology import CohClass
from .gkm_core import GkmPair, OrientedEdge
from .morse_betti import positively_oriented_function
from .polyalg import (
    LinearForm,
    LocalizedSum,
    LocalizedTerm,
    NonPolynomialResultError,
    Polynomial,
    Vector,
    as_fraction,
    pair as pairing,
    project_along,
    residue,
    simplify,
)


class IntegrityError(ArithmeticError):
    """Two computations that must agree exactly did not."""


def pushforward_localized_sum(pair: GkmPair, f: CohClass) -> LocalizedSum:
    """The unsimplified sum of f(p) over the product of each star's forms."""
    terms = []
    for p in pair.vertices:
        dens = tuple(pair.form(p, q) for q in pair.neighbors(p))
        terms.append(LocalizedTerm(f.value(p), dens))
    return LocalizedSum(pair.n, tuple(terms))


def integrate(pair: GkmPair, f: CohClass) -> Polynomial:
    """Exact pushforward of a class; homogeneous of degree k - d, zero if k < d.

    A residual denominator after simplification means the input was not a
    class (or the pair invalid) and raises NonPolynomialResultError.
    """
    d = pair.valence
    numerator, denominators = simplify(pushforward_localized_sum(pair, f))
    if denominators:
        raise NonPolynomialResultError(
            "pushforward did not simplify to a polynomial", numerator, denominators
        )
    expected = f.degree - d
    if numerator.is_zero():
        return numerator
    if expected < 0 or numerator.homogeneous_degree() != expected:
        raise IntegrityError(
            f"pushforward degree {numerator.homogeneous_degree()} != {expected}"
        )
    return numerator


@dataclass(frozen=True)
class LevelCut:
    """Direction xi, injective positively oriented levels phi, regular value c."""

    xi: Vector
    phi: Mapping[str, Fraction]
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "xi", self.xi if isinstance(self.xi, Vector) else Vector(self.xi))
        object.__setattr__(self, "phi", {p: as_fraction(v) for p, v in self.phi.items()})
        object.__setattr__(self, "c", as_fraction(self.c))

    def validate(self, pair: GkmPair) -> None:
        if self.xi.n != pair.n:
            raise ValueError("xi has the wrong dimension")
        if set(self.phi) != set(pair.vertices):
            raise ValueError("phi must assign a level to every vertex")
        levels = list(self.phi.values())
        if len(set(levels)) != len(levels):
            raise ValueError("phi must be injective")
        if self.c in set(levels):
            raise ValueError("c must avoid the vertex levels")
        for p, q in pair.edges:
            a = pairing(pair.axial_at(q, p), self.xi)
            if a == 0:
                raise ValueError(f"xi lies on the wall of edge ({p!r}, {q!r})")
            if (self.phi[p] - self.phi[q]) * a <= 0:
                raise ValueError(f"phi is not positively oriented on edge ({p!r}, {q!r})")


def cross_section(pair: GkmPair, cut: LevelCut) -> list[OrientedEdge]:
    """Edges crossing the level c, oriented upper vertex first, in input order."""
    cut.validate(pair)
    out = []
    for p, q in pair.edges:
        if cut.phi[p] > cut.c > cut.phi[q]:
            out.append((p, q))
        elif cut.phi[q] > cut.c > cut.phi[p]:
            out.append((q, p))
    return out


def kirwan_map(
    pair: GkmPair, cut: LevelCut, f: CohClass
) -> dict[OrientedEdge, Polynomial]:
    """Common image of the two end values of f on each cross-section edge.

    Values are projected into the subring annihilating xi along the edge
    form; the p- and q-side images must agree exactly.
    """
    cut.validate(pair)
    out: dict[OrientedEdge, Polynomial] = {}
    for p, q in cross_section(pair, cut):
        form = pair.form(p, q)
        image_p = project_along(f.value(p), form, cut.xi)
        image_q = project_along(f.value(q), form, cut.xi)
        if image_p != image_q:
            raise IntegrityError(f"edge ({p!r}, {q!r}): end values project differently")
        out[(p, q)] = image_p
    return out


@dataclass(frozen=True)
class JKResult:
    polynomial: Polynomial
    degree: int
    per_vertex_residues: dict[str, Polynomial]


def jk_pushforward(
    pair: GkmPair,
    cut: LevelCut,
    f: CohClass,
    _residues: Mapping[str, Polynomial] | None = None,
) -> JKResult:
    """Cross-section pushforward of f at the cut, checked against residues.

    The cross-section sum of (1/m_e) f(e) over the projected star forms is
    simplified exactly and must be a polynomial of degree k - d + 1; it is
    then compared with the sum of the residues of f(p) over the stars of
    the vertices below the cut, and any disagreement raises IntegrityError.
    Precomputed per-vertex residues may be passed to avoid recomputation.
    """
    d = pair.valence
    kir = kirwan_map(pair, cut, f)
    terms = []
    for (p, q), value in kir.items():
        alpha_qe = pair.axial_at(q, p)
        m_e = pairing(alpha_qe, cut.xi)
        if m_e <= 0:
            raise IntegrityError(f"edge ({p!r}, {q!r}): lower-end pairing not positive")
        alpha_pe = pair.axial_at(p, q)
        m_p = pairing(alpha_pe, cut.xi)
        sharps = []
        for r in pair.neighbors(p):
            if r == q:
                continue
            beta = pair.axial_at(p, r)
            sharp = beta - alpha_pe.scaled(pairing(beta, cut.xi) / m_p)
            if sharp.is_zero():
                raise ValueError(
                    f"projected star form vanishes on edge ({p!r}, {q!r}) toward {r!r}"
                )
            sharps.append(LinearForm(sharp))
        terms.append(LocalizedTerm(value.scaled(Fraction(1) / m_e), tuple(sharps)))
    numerator, denominators = simplify(LocalizedSum(pair.n, tuple(terms)))
    if denominators:
        raise NonPolynomialResultError(
            "cross-section pushforward did not simplify to a polynomial",
            numerator,
            denominators,
        )
    expected = f.degree - d + 1
    if not numerator.is_zero() and (
        expected < 0 or numerator.homogeneous_degree() != expected
    ):
        raise IntegrityError(
            f"cross-section pushforward degree {numerator.homogeneous_degree()} != {expected}"
        )

    below = [p for p in pair.vertices if cut.phi[p] < cut.c]
    per_vertex: dict[str, Polynomial] = {}
    total = Polynomial.zero(pair.n)
    for p in below:
        if _residues is not None:
            res = _residues[p]
        else:
            alphas = [pair.axial_at(p, q) for q in pair.neighbors(p)]
            res = residue(f.value(p), alphas, cut.xi, method="series")
        per_vertex[p] = res
        total = total + res
    if total != numerator:
        raise IntegrityError("cross-section sum and residue sum disagree")
    return JKResult(numerator, expected, per_vertex)


def wall_crossing_step(
    pair: GkmPair, cut_hi: LevelCut, cut_lo: LevelCut, f: CohClass
) -> Polynomial:
    """Difference of the two cut pushforwards across a single vertex.

    The two cuts must share xi and phi and isolate exactly one vertex
    between their levels; the difference must equal the residue of f at
    that vertex.
    """
    if cut_hi.xi != cut_lo.xi or cut_hi.phi != cut_lo.phi:
        raise ValueError("cuts must share xi and phi")
    if cut_hi.c <= cut_lo.c:
        raise ValueError("first cut must sit above the second")
    between = [p for p in pair.vertices if cut_lo.c < cut_hi.phi[p] < cut_hi.c]
    if len(between) != 1:
        raise ValueError(f"expected exactly one vertex between the levels, got {between}")
    p_r = between[0]
    hi = jk_pushforward(pair, cut_hi, f).polynomial
    lo = jk_pushforward(pair, cut_lo, f).polynomial
    diff = hi - lo
    alphas = [pair.axial_at(p_r, q) for q in pair.neighbors(p_r)]
    expected = residue(f.value(p_r), alphas, cut_hi.xi, method="series")
    if diff != expected:
        raise IntegrityError(f"wall-crossing difference at {p_r!r} mismatches its residue")
    return diff


def full_sweep(pair: GkmPair, xi: Vector, f: CohClass) -> dict:
    """Sweep levels from below the minimum to above the maximum, one vertex per step.

    Every intermediate pushforward is computed both ways (jk_pushforward
    already enforces their agreement), each step difference is compared
    with the residue of the vertex it crosses, and the final value above
    all vertices must vanish.
    """
    xi = xi if isinstance(xi, Vector) else Vector(xi)
    phi = positively_oriented_function(pair, xi)
    ordered = sorted(pair.vertices, key=lambda p: phi[p])
    levels = [phi[ordered[0]] - 1]
    for i in range(len(ordered) - 1):
        levels.append((phi[ordered[i]] + phi[ordered[i + 1]]) / 2)
    levels.append(phi[ordered[-1]] + 1)

    residues = {}
    for p in pair.vertices:
        alphas = [pair.axial_at(p, q) for q in pair.neighbors(p)]
        residues[p] = residue(f.value(p), alphas, xi, method="series")

    results = []
    for c in levels:
        cut = LevelCut(xi, phi, c)
        results.append(jk_pushforward(pair, cut, f, _residues=residues))

    steps_ok = True
    for i, p in enumerate(ordered):
        diff = results[i + 1].polynomial - results[i].polynomial
        if diff != residues[p]:
            steps_ok = False
    top_zero = results[-1].polynomial.is_zero()
    if not steps_ok or not top_zero:
        raise IntegrityError("level sweep failed telescoping checks")
    return {
        "levels": levels,
        "pushforwards": [r.polynomial for r in results],
        "perVertexResidues": residues,
        "stepsOk": steps_ok,
        "topIsZero": top_zero,
    }
