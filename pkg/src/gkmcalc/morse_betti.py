"""Orientations from a generic direction and what they count.

A direction xi off every wall alpha(xi) = 0 orients each edge toward the
end whose covector is negative on xi.  The per-vertex count of incoming
edges (sigma) has a chamber-invariant histogram, the combinatorial Betti
numbers, and when the orientation is acyclic those numbers bound the
dimensions of the class spaces degree by degree.  This module computes
the orientations, the level functions, the Betti numbers with their
invariance report, the dimension bounds with exact filtered steps, and
the Hilbert functions of the omit-a-few-factors monomial ideals those
bounds rest on.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .cohomology import coh_basis, compatibility_rows
from .gkm_core import GkmPair, OrientedEdge, subgraph_gamma_h
from .polyalg import (
    Covector,
    LinearForm,
    Polynomial,
    Vector,
    graded_dim,
    monomials,
    pair as pairing,
)

_SAMPLE_SEED = 20260818


@dataclass(frozen=True)
class Orientation:
    """Edges directed upward: each stored pair (p, q) has alpha at p positive on xi.

    sigma[v] counts the incidences at v whose covector is negative on xi,
    i.e. the number of edges pointing into v.
    """

    xi: Vector
    vertices: tuple[str, ...]
    edges: tuple[OrientedEdge, ...]
    sigma: Mapping[str, int]


def orient(pair: GkmPair, xi) -> Orientation:
    """Orient every edge by the sign of its covector on xi.

    Directions on a wall (some incidence evaluating to zero) are rejected
    with the offending incidence named.
    """
    vec = xi if isinstance(xi, Vector) else Vector(xi)
    if vec.n != pair.n:
        raise ValueError(f"xi has {vec.n} coordinates, expected {pair.n}")
    sigma = {v: 0 for v in pair.vertices}
    directed: list[OrientedEdge] = []
    for p, q in pair.edges:
        vp = pairing(pair.axial_at(p, q), vec)
        vq = pairing(pair.axial_at(q, p), vec)
        if vp == 0 or vq == 0:
            a, b = (p, q) if vp == 0 else (q, p)
            raise ValueError(f"xi lies on a wall: alpha[{a}->{b}](xi) = 0")
        if vp < 0:
            sigma[p] += 1
        if vq < 0:
            sigma[q] += 1
        directed.append((p, q) if vp > 0 else (q, p))
    return Orientation(vec, tuple(pair.vertices), tuple(directed), sigma)


def is_acyclic(orientation: Orientation) -> tuple[bool, list[str] | None]:
    """Directed-cycle test; on failure the witness lists the cycle's vertices."""
    succ: dict[str, list[str]] = {v: [] for v in orientation.vertices}
    for p, q in orientation.edges:
        succ[p].append(q)
    # 0 unvisited, 1 on the active path, 2 finished
    state = {v: 0 for v in orientation.vertices}
    for start in orientation.vertices:
        if state[start]:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        path = [start]
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if state[w] == 0:
                    state[w] = 1
                    stack.append((w, iter(succ[w])))
                    path.append(w)
                    advanced = True
                    break
                if state[w] == 1:
                    return False, path[path.index(w):]
            if not advanced:
                state[v] = 2
                stack.pop()
                path.pop()
    return True, None


def positively_oriented_function(pair: GkmPair, xi) -> dict[str, Fraction]:
    """Injective vertex levels that increase along every upward edge.

    The base level of a vertex is minus the edge count of the longest
    directed path out of it.  Tied vertices are then separated, in input
    order, by adding i/(r+1) times half the minimal gap between distinct
    base levels (half of one when there is a single level).  Both
    injectivity and the orientation inequality are rechecked exactly.
    """
    o = orient(pair, xi)
    ok, cycle = is_acyclic(o)
    if not ok:
        raise ValueError("orientation has a directed cycle: " + " -> ".join(cycle))
    succ: dict[str, list[str]] = {v: [] for v in o.vertices}
    for p, q in o.edges:
        succ[p].append(q)
    # longest path by postorder DP; acyclicity was just established
    post: list[str] = []
    state = {v: 0 for v in o.vertices}
    for start in o.vertices:
        if state[start]:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if state[w] == 0:
                    state[w] = 1
                    stack.append((w, iter(succ[w])))
                    advanced = True
                    break
            if not advanced:
                post.append(v)
                stack.pop()
    longest: dict[str, int] = {}
    for v in post:
        longest[v] = max((longest[w] + 1 for w in succ[v]), default=0)

    base = {v: Fraction(-longest[v]) for v in o.vertices}
    levels = sorted(set(base.values()))
    if len(levels) > 1:
        gap = min(b - a for a, b in zip(levels, levels[1:]))
        g = gap / 2
    else:
        g = Fraction(1, 2)
    phi = dict(base)
    groups: dict[Fraction, list[str]] = {}
    for v in o.vertices:
        groups.setdefault(base[v], []).append(v)
    for level, members in groups.items():
        if len(members) == 1:
            continue
        r = len(members)
        for i, v in enumerate(members, start=1):
            phi[v] = level + Fraction(i, r + 1) * g
    if len(set(phi.values())) != len(phi):
        raise ArithmeticError("level perturbation failed to separate vertices")
    for p, q in pair.edges:
        if (phi[p] - phi[q]) * pairing(pair.axial_at(q, p), o.xi) <= 0:
            raise ArithmeticError(f"levels not positively oriented on edge ({p}, {q})")
    return phi


def betti(pair: GkmPair, xi) -> list[int]:
    """Histogram of sigma over the vertices, indexed 0..valence."""
    o = orient(pair, xi)
    out = [0] * (pair.valence + 1)
    for v in pair.vertices:
        out[o.sigma[v]] += 1
    return out


def _axial_classes(pair: GkmPair) -> list[LinearForm]:
    """Distinct parallel classes of the axial covectors, in first-seen order."""
    seen: dict[tuple, LinearForm] = {}
    for p, q in pair.edges:
        form = pair.form(p, q)
        if form.canonical not in seen:
            seen[form.canonical] = form
    return list(seen.values())


def _feasible(rows: Sequence[Sequence[Fraction]], n: int) -> list[Fraction] | None:
    """Rational witness for the strict system row . x > 0, or None.

    The last variable is eliminated by combining rows of opposite sign
    there; a witness for the reduced system is extended by picking the
    last coordinate strictly between the surviving bounds.
    """
    if any(not any(r) for r in rows):
        return None
    if n == 0:
        return []
    lower = [r for r in rows if r[n - 1] > 0]
    upper = [r for r in rows if r[n - 1] < 0]
    reduced: list[tuple[Fraction, ...]] = [tuple(r[: n - 1]) for r in rows if r[n - 1] == 0]
    for a in lower:
        for b in upper:
            reduced.append(
                tuple(a[i] * -b[n - 1] + b[i] * a[n - 1] for i in range(n - 1))
            )
    point = _feasible(reduced, n - 1)
    if point is None:
        return None
    lo = [-sum(r[i] * point[i] for i in range(n - 1)) / r[n - 1] for r in lower]
    hi = [-sum(r[i] * point[i] for i in range(n - 1)) / r[n - 1] for r in upper]
    if lo and hi:
        a, b = max(lo), min(hi)
        if a >= b:
            raise ArithmeticError("feasibility witness collapsed")
        last = (a + b) / 2
    elif lo:
        last = max(lo) + 1
    elif hi:
        last = min(hi) - 1
    else:
        last = Fraction(1)
    return point + [last]


def _chambers(
    classes: Sequence[LinearForm], n: int, samples: int, seed: int = _SAMPLE_SEED
) -> tuple[list[tuple[tuple[int, ...], list[Fraction]]], str]:
    """Chambers of the wall arrangement as (sign vector, witness) pairs.

    Up to 12 classes every sign vector is tried with an exact feasibility
    check; beyond that, `samples` random directions are deduplicated by
    sign vector.  Output is sorted by sign vector either way.
    """
    if len(classes) <= 12:
        found = []
        for signs in itertools.product((1, -1), repeat=len(classes)):
            rows = [
                tuple(Fraction(s * c) for c in cls.canonical)
                for s, cls in zip(signs, classes)
            ]
            w = _feasible(rows, n)
            if w is None:
                continue
            for row in rows:
                if sum(c * x for c, x in zip(row, w)) <= 0:
                    raise ArithmeticError("feasibility witness fails its own system")
            found.append((signs, w))
        found.sort(key=lambda sw: sw[0])
        return found, "exhaustive"
    rng = random.Random(seed)
    seen: dict[tuple[int, ...], list[Fraction]] = {}
    for _ in range(samples):
        cand = [Fraction(rng.randint(-99, 99), rng.randint(1, 20)) for _ in range(n)]
        vals = [
            sum(c * x for c, x in zip(cls.canonical, cand)) for cls in classes
        ]
        if any(v == 0 for v in vals):
            continue
        signs = tuple(1 if v > 0 else -1 for v in vals)
        seen.setdefault(signs, cand)
    return sorted(seen.items()), "sampled"


def betti_invariance_check(pair: GkmPair, samples: int = 500) -> dict:
    """Betti histograms across every reachable chamber of the wall arrangement.

    Chambers are keyed by the sign vector of the parallel classes of the
    axial covectors.  For each chamber the histogram is computed twice,
    from the witness direction and from the sign vector alone, and all
    chambers must agree on it.
    """
    classes = _axial_classes(pair)
    chambers, method = _chambers(classes, pair.n, samples)
    cindex = {cls.canonical: i for i, cls in enumerate(classes)}
    incidences: dict[str, list[tuple[int, int]]] = {v: [] for v in pair.vertices}
    for p, q in pair.oriented_edges():
        form = pair.form(p, q)
        incidences[p].append((cindex[form.canonical], 1 if form.scale > 0 else -1))
    d = pair.valence
    betas = []
    for signs, witness in chambers:
        hist = betti(pair, witness)
        from_signs = [0] * (d + 1)
        for v in pair.vertices:
            from_signs[sum(1 for ci, s in incidences[v] if s * signs[ci] < 0)] += 1
        if hist != from_signs:
            raise ArithmeticError("witness histogram disagrees with its sign vector")
        betas.append(hist)
    invariant = all(b == betas[0] for b in betas)
    return {
        "betti": betas[0] if betas else [],
        "chambers_found": len(chambers),
        "invariant": invariant,
        "method": method,
    }


def wall_crossing_check(pair: GkmPair, xi, xi2) -> dict:
    """Compare sigma between two chambers separated by a single wall.

    The two directions must have sign vectors differing in exactly one
    parallel class.  On every edge of that class the lower end's count r
    and the upper end's r+1 trade places; every other vertex keeps its
    count.  Both facts need the compatibility across edges, so this is
    only meaningful for pairs carrying a valid connection.
    """
    classes = _axial_classes(pair)
    o1 = orient(pair, xi)
    o2 = orient(pair, xi2)
    s1 = tuple(
        1 if pairing(c.canonical_covector(), o1.xi) > 0 else -1 for c in classes
    )
    s2 = tuple(
        1 if pairing(c.canonical_covector(), o2.xi) > 0 else -1 for c in classes
    )
    diff = [i for i in range(len(classes)) if s1[i] != s2[i]]
    if len(diff) != 1:
        raise ValueError(
            f"need sign vectors differing in exactly one class, got {len(diff)} differences"
        )
    target = classes[diff[0]].canonical
    edge_reports = []
    touched: set[str] = set()
    edges_ok = True
    for p, q in pair.edges:
        if pair.form(p, q).canonical != target:
            continue
        touched.update((p, q))
        low, high = (p, q) if pairing(pair.axial_at(p, q), o1.xi) > 0 else (q, p)
        before = (o1.sigma[low], o1.sigma[high])
        after = (o2.sigma[low], o2.sigma[high])
        ok = before[1] == before[0] + 1 and after == (before[1], before[0])
        edges_ok = edges_ok and ok
        edge_reports.append(
            {"edge": [low, high], "before": list(before), "after": list(after), "ok": ok}
        )
    others_fixed = all(
        o1.sigma[v] == o2.sigma[v] for v in pair.vertices if v not in touched
    )
    return {
        "class": list(target),
        "edges": edge_reports,
        "others_fixed": others_fixed,
        "ok": edges_ok and others_fixed,
    }


def find_acyclic_xi(pair: GkmPair, samples: int = 500) -> Vector:
    """First chamber direction, in sign-vector order, with an acyclic orientation."""
    chambers, _ = _chambers(_axial_classes(pair), pair.n, samples)
    for _, witness in chambers:
        if is_acyclic(orient(pair, witness))[0]:
            return Vector(witness)
    raise ValueError("no acyclic orientation found in any sampled chamber")


def l_independent(forms: Sequence, l: int) -> bool:
    """True when every l-subset of the forms is linearly independent."""
    covs = [_as_covector(f) for f in forms]
    if l <= 0:
        return True
    n = covs[0].n if covs else 0
    for combo in itertools.combinations(covs, l):
        if linalg.rank([list(c) for c in combo], n) < l:
            return False
    return True


def _as_covector(form) -> Covector:
    if isinstance(form, LinearForm):
        return form.covector
    if isinstance(form, Covector):
        return form
    return Covector(form)


def ideal_hilbert(forms: Sequence, l: int, m: int) -> tuple[int, int]:
    """Dimensions of (degree-m piece of the ideal, degree-m piece of the ring).

    The ideal is generated by the products of all the forms except l-1 of
    them, one generator per (l-1)-subset.  Its degree-m piece is spanned
    by generator-times-monomial products and the dimension is an exact
    rank over the rationals.
    """
    covs = [_as_covector(f) for f in forms]
    if not covs:
        raise ValueError("need at least one form")
    n = covs[0].n
    if any(c.n != n for c in covs):
        raise ValueError("forms of mixed dimension")
    if l < 1:
        raise ValueError("need l >= 1")
    if m < 0:
        return 0, 0
    total = graded_dim(n, m)
    gdeg = len(covs) - (l - 1)
    if m < gdeg:
        return 0, total
    polys = [Polynomial.from_covector(c) for c in covs]
    col = {mon: i for i, mon in enumerate(monomials(n, m))}
    mult = monomials(n, m - gdeg)
    rows = []
    for omit in itertools.combinations(range(len(covs)), l - 1):
        skip = set(omit)
        gen = Polynomial.constant(n, 1)
        for i, g in enumerate(polys):
            if i not in skip:
                gen = gen * g
        for mu in mult:
            prod = gen * Polynomial(n, {mu: 1})
            row = [Fraction(0)] * total
            for exp, coef in prod.terms():
                row[col[exp]] = coef
            rows.append(row)
    return linalg.rank(rows, total), total


def morse_inequalities(pair: GkmPair, xi, max_k: int) -> dict:
    """Dimension bounds per degree, globally and one filtration step at a time.

    For each k the class-space dimension is compared against the
    sigma-histogram bound.  The filtered dimensions (classes vanishing
    below a level) come from adding vertex column blocks to the
    compatibility system in descending level order while tracking the
    rank; each one-vertex step is bounded above by the count of monomials
    in the complementary degree and below by the matching graded piece of
    the omit-one-factor ideal of the parallel classes.
    """
    o = orient(pair, xi)
    ok, cycle = is_acyclic(o)
    if not ok:
        raise ValueError("orientation has a directed cycle: " + " -> ".join(cycle))
    phi = positively_oriented_function(pair, xi)
    d = pair.valence
    n = pair.n
    beta = [0] * (d + 1)
    for v in pair.vertices:
        beta[o.sigma[v]] += 1
    class_covs = [c.canonical_covector() for c in _axial_classes(pair)]
    ideal_cache: dict[int, int] = {}

    def ideal_dim(m: int) -> int:
        if m < 0 or not class_covs:
            return 0
        if m not in ideal_cache:
            ideal_cache[m] = ideal_hilbert(class_covs, 2, m)[0]
        return ideal_cache[m]

    order = sorted(pair.vertices, key=lambda v: phi[v], reverse=True)
    vindex = {v: i for i, v in enumerate(pair.vertices)}
    morse_rows = []
    steps = []
    overall = True
    for k in range(max_k + 1):
        lhs, _ = coh_basis(pair, k)
        rhs = sum(beta[r] * graded_dim(n, k - r) for r in range(d + 1))
        ok_k = lhs <= rhs
        overall = overall and ok_k
        morse_rows.append(
            {"k": k, "lhs": lhs, "rhs": rhs, "ok": ok_k, "equality": lhs == rhs}
        )
        rows, mons = compatibility_rows(pair, k)
        M = len(mons)
        nrows = len(rows)
        tracker = linalg.RankTracker(nrows)
        cols = 0
        prev_dim = 0
        for v in order:
            off = vindex[v] * M
            for mi in range(M):
                tracker.add([rows[ri][off + mi] for ri in range(nrows)])
            cols += M
            dim_here = cols - tracker.rank
            gain = dim_here - prev_dim
            prev_dim = dim_here
            r = o.sigma[v]
            upper = graded_dim(n, k - r)
            lower = ideal_dim(k - r)
            ok_s = lower <= gain <= upper
            overall = overall and ok_s
            steps.append(
                {
                    "k": k,
                    "vertex": v,
                    "sigma": r,
                    "gain": gain,
                    "upper": upper,
                    "lower": lower,
                    "ok": ok_s,
                }
            )
        if prev_dim != lhs:
            raise ArithmeticError(
                "filtered dimension at the bottom level disagrees with coh_basis"
            )
    return {"betti": beta, "morse": morse_rows, "steps": steps, "ok": overall}


def betti_equality_report(pair: GkmPair, l: int, max_k: int) -> dict:
    """Independence and unique-minimum hypotheses, and the dimension table.

    Hypotheses: the star covectors at every vertex are l-independent, and
    for every subspace annihilating an independent set of fewer than l
    wall normals the components of the induced subgraph each have exactly
    one sigma-zero vertex.  When l equals the ambient dimension and both
    hypotheses hold, the table's two sides must agree for every
    k > valence - n up to max_k; that equality is enforced, anything else
    is only reported.
    """
    xi = find_acyclic_xi(pair)
    n = pair.n
    d = pair.valence
    indep_failures = [
        p
        for p in pair.vertices
        if not l_independent([f for _, f in pair.star_forms(p)], l)
    ]
    classes = _axial_classes(pair)
    normals = [c.canonical_covector() for c in classes]
    min_failures: list[dict] = []
    seen_spans: set[tuple] = set()
    for size in range(0, l):
        for combo in itertools.combinations(range(len(normals)), size):
            chosen = [normals[i] for i in combo]
            if linalg.rank([list(c) for c in chosen], n) < size:
                continue
            h_basis = linalg.kernel_basis([list(c) for c in chosen], n)
            key = tuple(tuple(v) for v in h_basis)
            if key in seen_spans:
                continue
            seen_spans.add(key)
            try:
                components = subgraph_gamma_h(pair, h_basis)
            except ValueError as err:
                min_failures.append(
                    {"normals": [list(c) for c in chosen], "error": str(err)}
                )
                continue
            for comp, _ in components:
                beta0 = 0
                for v in comp.vertices:
                    sigma_v = sum(
                        1
                        for q in comp.neighbors(v)
                        if pairing(comp.axial_at(v, q), xi) < 0
                    )
                    if sigma_v == 0:
                        beta0 += 1
                if beta0 != 1:
                    min_failures.append(
                        {
                            "normals": [list(c) for c in chosen],
                            "component": list(comp.vertices),
                            "beta0": beta0,
                        }
                    )
    beta = betti(pair, xi)
    table = []
    for k in range(max_k + 1):
        lhs, _ = coh_basis(pair, k)
        rhs = sum(beta[r] * graded_dim(n, k - r) for r in range(d + 1))
        table.append({"k": k, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs})
    hypotheses_ok = not indep_failures and not min_failures
    asserted: bool | None = None
    if l == n and hypotheses_ok:
        asserted = True
        for row in table:
            if row["k"] > d - n and not row["equal"]:
                raise ArithmeticError(
                    f"dimension equality failed at k={row['k']} despite the hypotheses"
                )
    return {
        "l": l,
        "n": n,
        "valence": d,
        "xi": [str(c) for c in xi],
        "star_independence_ok": not indep_failures,
        "star_independence_failures": indep_failures,
        "unique_min_ok": not min_failures,
        "unique_min_failures": min_failures,
        "betti": beta,
        "table": table,
        "asserted_equality": asserted,
    }
