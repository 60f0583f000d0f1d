"""The graded ring of vertex-polynomial maps compatible across edges.

A degree-k class assigns to each vertex a homogeneous degree-k
polynomial such that the difference across any edge is divisible by
that edge's axial form.  Bases are computed degreewise by exact kernel
extraction from the divisibility constraints; the distinguished classes
(Chern, Thom, Gysin images, blow-up classes) are built pointwise and
re-checked against the compatibility condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg
from .constructions import blow_up
from .gkm_core import GkmPair, is_compatible_subobject, subpair
from .polyalg import (
    Monomial,
    Polynomial,
    as_fraction,
    grlex_key,
    monomials,
    reduce_mod_line,
)


@dataclass(frozen=True)
class CohClass:
    """Map from vertices to homogeneous polynomials of one degree."""

    degree: int
    values: Mapping[str, Polynomial]

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("class degree must be nonnegative")
        for v, f in self.values.items():
            d = f.homogeneous_degree()
            if d is not None and d != self.degree:
                raise ValueError(f"value at {v!r} has degree {d}, expected {self.degree}")

    def value(self, p: str) -> Polynomial:
        return self.values[p]

    def vertices(self) -> list[str]:
        return list(self.values)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.values.values())

    def _check(self, other: "CohClass") -> None:
        if set(self.values) != set(other.values):
            raise ValueError("classes live on different vertex sets")

    def __add__(self, other: "CohClass") -> "CohClass":
        self._check(other)
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("cannot add classes of different degrees")
        deg = other.degree if self.is_zero() else self.degree
        return CohClass(deg, {v: f + other.values[v] for v, f in self.values.items()})

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + (-other)

    def __neg__(self) -> "CohClass":
        return CohClass(self.degree, {v: -f for v, f in self.values.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        self._check(other)
        return CohClass(
            self.degree + other.degree,
            {v: f * other.values[v] for v, f in self.values.items()},
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    def scaled(self, q) -> "CohClass":
        q = as_fraction(q)
        return CohClass(self.degree, {v: f.scaled(q) for v, f in self.values.items()})

    def times_poly(self, h: Polynomial) -> "CohClass":
        """Module action of a homogeneous ambient polynomial."""
        d = h.homogeneous_degree()
        if d is None:
            d = 0
        return CohClass(self.degree + d, {v: h * f for v, f in self.values.items()})

    def __pow__(self, k: int) -> "CohClass":
        if k < 0:
            raise ValueError("negative power")
        out = CohClass(0, {v: Polynomial.constant(f.n, 1) for v, f in self.values.items()})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CohClass)
            and self.degree == other.degree
            and dict(self.values) == dict(other.values)
        )

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "values": {v: f.to_json() for v, f in self.values.items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "CohClass":
        if not isinstance(obj, Mapping) or "degree" not in obj or "values" not in obj:
            raise ValueError("class object needs 'degree' and 'values'")
        values = {v: Polynomial.from_json(f) for v, f in obj["values"].items()}
        return cls(obj["degree"], values)


def constant_class(pair: GkmPair, c) -> CohClass:
    return CohClass(0, {v: Polynomial.constant(pair.n, c) for v in pair.vertices})


def zero_class(pair: GkmPair, degree: int) -> CohClass:
    return CohClass(degree, {v: Polynomial.zero(pair.n) for v in pair.vertices})


def _common_degree(values: Mapping[str, Polynomial]) -> int:
    degs = set()
    for f in values.values():
        d = f.homogeneous_degree()
        if d is not None:
            degs.add(d)
    if len(degs) > 1:
        raise ValueError(f"values mix degrees {sorted(degs)}")
    return degs.pop() if degs else 0


def is_class(
    pair: GkmPair, candidate: CohClass | Mapping[str, Polynomial]
) -> tuple[bool, tuple[str, str] | None]:
    """Edge-compatibility check; returns (ok, first failing edge or None).

    Values must be homogeneous of a single common degree; mixing degrees
    raises.
    """
    values = candidate.values if isinstance(candidate, CohClass) else candidate
    if set(values) != set(pair.vertices):
        raise ValueError("candidate must assign a value to every vertex")
    for v, f in values.items():
        if not isinstance(f, Polynomial) or f.n != pair.n:
            raise ValueError(f"value at {v!r} is not a polynomial in the ambient ring")
    _common_degree(values)
    for p, q in pair.edges:
        diff = values[p] - values[q]
        if not reduce_mod_line(diff, pair.form(p, q)).is_zero():
            return False, (p, q)
    return True, None


def as_class(pair: GkmPair, values: Mapping[str, Polynomial]) -> CohClass:
    """Wrap a vertex-to-polynomial map as a class after full validation."""
    ok, witness = is_class(pair, values)
    if not ok:
        raise ValueError(f"not a class: incompatible across edge {witness}")
    return CohClass(_common_degree(values), dict(values))


def compatibility_rows(pair: GkmPair, k: int) -> tuple[list[list[Fraction]], list[Monomial]]:
    """Linear constraints cutting out the degree-k classes.

    One unknown per (vertex, degree-k monomial), vertex-major in the order
    of pair.vertices with monomials graded-lex descending; per edge, the
    normal form of f(p) - f(q) modulo the edge form must vanish,
    contributing one row per reduced monomial.
    """
    n = pair.n
    mons = monomials(n, k)
    M = len(mons)
    ncols = len(pair.vertices) * M
    vindex = {v: i for i, v in enumerate(pair.vertices)}
    rows: list[list[Fraction]] = []
    reduced_cache: dict[tuple, list[Polynomial]] = {}
    for p, q in pair.edges:
        form = pair.form(p, q)
        reduced = reduced_cache.get(form.canonical)
        if reduced is None:
            reduced = [reduce_mod_line(Polynomial(n, {m: 1}), form) for m in mons]
            reduced_cache[form.canonical] = reduced
        rowmap: dict[Monomial, list[Fraction]] = {}
        poff, qoff = vindex[p] * M, vindex[q] * M
        for mi, rp in enumerate(reduced):
            for exp, coef in rp.terms():
                row = rowmap.get(exp)
                if row is None:
                    row = [Fraction(0)] * ncols
                    rowmap[exp] = row
                row[poff + mi] += coef
                row[qoff + mi] -= coef
        for exp in sorted(rowmap, key=grlex_key, reverse=True):
            rows.append(rowmap[exp])
    return rows, mons


def coh_basis(pair: GkmPair, k: int) -> tuple[int, list[CohClass]]:
    """Dimension and echelonized basis of the degree-k piece.

    The kernel of the compatibility system is computed exactly.
    """
    if k < 0:
        return 0, []
    n = pair.n
    rows, mons = compatibility_rows(pair, k)
    M = len(mons)
    vindex = {v: i for i, v in enumerate(pair.vertices)}
    ncols = len(pair.vertices) * M
    kernel = linalg.kernel_basis(rows, ncols)
    classes = []
    for vec in kernel:
        values = {}
        for v in pair.vertices:
            off = vindex[v] * M
            values[v] = Polynomial(
                n, {mons[mi]: vec[off + mi] for mi in range(M) if vec[off + mi]}
            )
        classes.append(CohClass(k, values))
    return len(classes), classes


def chern_class(pair: GkmPair, k: int) -> CohClass:
    """k-th elementary symmetric function of the star forms at each vertex."""
    d = pair.valence
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= {d}")
    values = {}
    for p in pair.vertices:
        elem = [Polynomial.constant(pair.n, 1)] + [Polynomial.zero(pair.n)] * d
        for q in pair.neighbors(p):
            alpha = Polynomial.from_covector(pair.axial_at(p, q))
            for j in range(min(d, len(elem) - 1), 0, -1):
                elem[j] = elem[j] + elem[j - 1] * alpha
        values[p] = elem[k]
    return CohClass(k, values)


def is_symplectic(pair: GkmPair, c: CohClass) -> bool:
    """Whether c(p) - c(q) is a positive multiple of the axial value at q.

    True exactly when every edge's proportionality factor is positive; a
    difference that is not even proportional makes the answer False.
    """
    if c.degree != 1:
        raise ValueError("symplectic candidates must have degree 1")
    if set(c.values) != set(pair.vertices):
        raise ValueError("class must assign a value to every vertex")
    for p, q in pair.edges:
        diff = c.value(p) - c.value(q)
        alpha = Polynomial.from_covector(pair.axial_at(q, p))
        exp0 = next(exp for exp, _ in alpha.terms())
        lam = diff.coefficient(exp0) / alpha.coefficient(exp0)
        if diff != alpha.scaled(lam) or lam <= 0:
            return False
    return True


def thom_class_vertex(pair: GkmPair, p: str) -> CohClass:
    """The degree-d class supported on p with value the product of p's star."""
    d = pair.valence
    prod = Polynomial.constant(pair.n, 1)
    for q in pair.neighbors(p):
        prod = prod * Polynomial.from_covector(pair.axial_at(p, q))
    values = {v: Polynomial.zero(pair.n) for v in pair.vertices}
    values[p] = prod
    return CohClass(d, values)


def thom_class_subobject(
    pair: GkmPair, sub_vertices: Iterable[str], sub_edges: Iterable
) -> CohClass:
    """Product of the normal star forms on a compatible subgraph, zero outside."""
    sub_vertices = list(sub_vertices)
    sub_edges = [tuple(e) for e in sub_edges]
    if not is_compatible_subobject(pair, sub_vertices, sub_edges):
        raise ValueError("subgraph is not a compatible sub-object")
    d = pair.valence
    keys = {frozenset(e) for e in sub_edges}
    r = 0
    values = {v: Polynomial.zero(pair.n) for v in pair.vertices}
    for p in sub_vertices:
        normal = [q for q in pair.neighbors(p) if frozenset((p, q)) not in keys]
        r = d - len(normal)
        prod = Polynomial.constant(pair.n, 1)
        for q in normal:
            prod = prod * Polynomial.from_covector(pair.axial_at(p, q))
        values[p] = prod
    return CohClass(d - r, values)


def gysin(
    pair: GkmPair,
    sub_vertices: Iterable[str],
    sub_edges: Iterable,
    f1: CohClass,
) -> CohClass:
    """Extend a class of the sub-pair by zero and multiply by the Thom class."""
    sub_vertices = list(sub_vertices)
    sub_edges = [tuple(e) for e in sub_edges]
    sub = subpair(pair, sub_vertices, sub_edges)
    ok, witness = is_class(sub, f1.values)
    if not ok:
        raise ValueError(f"input is not a class of the sub-pair (edge {witness})")
    tau = thom_class_subobject(pair, sub_vertices, sub_edges)
    values = {}
    for v in pair.vertices:
        if v in set(sub_vertices):
            values[v] = f1.value(v) * tau.value(v)
        else:
            values[v] = Polynomial.zero(pair.n)
    return CohClass(f1.degree + tau.degree, values)


def pullback(back_map: Mapping[str, str], base_class: CohClass, vertices: Iterable[str]) -> CohClass:
    """Composition with a vertex map: (back_map* f)(v) = f(back_map(v))."""
    return CohClass(
        base_class.degree, {v: base_class.value(back_map[v]) for v in vertices}
    )


def blowup_class_check(base: GkmPair, p0: str, max_k: int = 4) -> dict:
    """Blow up at p0 and audit the induced ring structure.

    Checks that pullbacks of a basis along the blow-down map are classes and
    degreewise linearly independent up to max_k, that the alternating-sign
    relation in the singular-locus Thom class holds exactly (with the top
    coefficient the Thom class of p0), and tabulates dimensions of both
    rings for reference.
    """
    sharp, beta = blow_up(base, p0)
    d = base.valence
    ps = [v for v in sharp.vertices if beta[v] == p0]
    locus_edges = [e for e in sharp.edges if e[0] in set(ps) and e[1] in set(ps)]

    pullback_ok = True
    injective_ok = True
    dims = []
    mons_cache: dict[int, list[Monomial]] = {}
    for k in range(max_k + 1):
        dim_base, basis = coh_basis(base, k)
        vectors = []
        mons = mons_cache.setdefault(k, monomials(base.n, k))
        for cls in basis:
            lifted = pullback(beta, cls, sharp.vertices)
            ok, _ = is_class(sharp, lifted.values)
            if not ok:
                pullback_ok = False
            vectors.append(
                [
                    lifted.value(v).coefficient(m)
                    for v in sharp.vertices
                    for m in mons
                ]
            )
        if vectors and linalg.rank(vectors, len(vectors[0])) != dim_base:
            injective_ok = False
        dim_sharp, _ = coh_basis(sharp, k)
        shifted = sum(coh_basis(base, k - j)[0] for j in range(1, d))
        dims.append({"k": k, "sharp": dim_sharp, "base": dim_base, "shiftedSum": shifted})

    tau = thom_class_subobject(sharp, ps, locus_edges)
    relation = tau**d
    for i in range(1, d + 1):
        coeff = chern_class(base, i) if i < d else thom_class_vertex(base, p0)
        lifted = pullback(beta, coeff, sharp.vertices)
        term = lifted * (tau ** (d - i))
        relation = relation + term.scaled(Fraction((-1) ** i))
    relation_ok = relation.is_zero()

    return {
        "pullbacksAreClasses": pullback_ok,
        "pullbackInjective": injective_ok,
        "relationHolds": relation_ok,
        "dims": dims,
    }
