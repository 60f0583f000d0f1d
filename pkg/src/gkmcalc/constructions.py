"""Factories for the standard graph-axial-function pairs.

Complete graphs, products, blow-ups at a vertex, and 2-valent cycles,
each built together with its axial function and (where the inputs allow)
its connection.  Vertex naming is deterministic: complete graphs and
cycles use "1".."N", products join factor names with "|", and a blow-up
at p0 names the new vertices "p0#1".."p0#d" following the sorted order
of p0's neighbors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .gkm_core import ConnectionMap, GkmPair, ValidationReport, validate_axial
from .polyalg import Covector, LinearForm


def _coerce_covectors(alphas: Sequence) -> list[Covector]:
    return [a if isinstance(a, Covector) else Covector(a) for a in alphas]


def complete_graph(alphas: Sequence[Covector | Iterable]) -> GkmPair:
    """Complete graph on N vertices with axial (i -> j) = alpha_i - alpha_j.

    Requires, for every i, that the differences alpha_i - alpha_j (j != i)
    are pairwise linearly independent; in particular the alphas are
    distinct.  The standard connection (i -> j): (i,k) -> (j,k) is attached.
    """
    cov = _coerce_covectors(alphas)
    if not cov:
        raise ValueError("need at least one point")
    n = cov[0].n
    if any(c.n != n for c in cov):
        raise ValueError("all points must share one ambient dimension")
    N = len(cov)
    for i in range(N):
        for j in range(N):
            if j != i and cov[i] == cov[j]:
                raise ValueError(f"points {i + 1} and {j + 1} coincide")
    for i in range(N):
        diffs = [(j, LinearForm(cov[i] - cov[j])) for j in range(N) if j != i]
        for a in range(len(diffs)):
            for b in range(a + 1, len(diffs)):
                if diffs[a][1].parallel_to(diffs[b][1]):
                    raise ValueError(
                        "differences at vertex "
                        f"{i + 1} toward {diffs[a][0] + 1} and {diffs[b][0] + 1} are parallel"
                    )

    names = [str(i + 1) for i in range(N)]
    edges = []
    axial = {}
    for i in range(N):
        for j in range(i + 1, N):
            edges.append((names[i], names[j]))
            axial[(names[i], names[j])] = cov[i] - cov[j]
    conn = {}
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            m = {names[j]: names[i]}
            for k in range(N):
                if k != i and k != j:
                    m[names[k]] = names[k]
            conn[(names[i], names[j])] = m
    return GkmPair(n, names, edges, axial, conn)


def product(a: GkmPair, b: GkmPair) -> tuple[GkmPair, ValidationReport]:
    """Product pair on V_a x V_b with the disjoint-union axial function.

    The product of valid factors can still violate star independence when
    factor covectors at a composite vertex are parallel, so the result is
    validated rather than trusted; both the pair and its report are
    returned.  The product connection is attached when both factors carry
    one.
    """
    if a.n != b.n:
        raise ValueError("factors must share one ambient dimension")

    def name(p: str, q: str) -> str:
        return f"{p}|{q}"

    vertices = [name(p, q) for p in a.vertices for q in b.vertices]
    edges = []
    axial = {}
    for p, p2 in a.edges:
        for q in b.vertices:
            edges.append((name(p, q), name(p2, q)))
            axial[(name(p, q), name(p2, q))] = a.axial_at(p, p2)
            axial[(name(p2, q), name(p, q))] = a.axial_at(p2, p)
    for p in a.vertices:
        for q, q2 in b.edges:
            edges.append((name(p, q), name(p, q2)))
            axial[(name(p, q), name(p, q2))] = b.axial_at(q, q2)
            axial[(name(p, q2), name(p, q))] = b.axial_at(q2, q)

    conn = None
    if a.connection is not None and b.connection is not None:
        maps = {}
        for p, p2 in a.oriented_edges():
            base = a.connection[(p, p2)]
            for q in b.vertices:
                m = {name(r, q): name(base[r], q) for r in a.neighbors(p)}
                for q2 in b.neighbors(q):
                    m[name(p, q2)] = name(p2, q2)
                maps[(name(p, q), name(p2, q))] = m
        for q, q2 in b.oriented_edges():
            base = b.connection[(q, q2)]
            for p in a.vertices:
                m = {name(p, r): name(p, base[r]) for r in b.neighbors(q)}
                for p2 in a.neighbors(p):
                    m[name(p2, q)] = name(p2, q2)
                maps[(name(p, q), name(p, q2))] = m
        conn = maps

    out = GkmPair(a.n, vertices, edges, axial, conn)
    return out, validate_axial(out)


def blow_up(pair: GkmPair, p0: str) -> tuple[GkmPair, dict[str, str]]:
    """Blow up the pair at a vertex, returning the new pair and the blow-down map.

    The vertex p0 with star edges toward q_1 < ... < q_d (sorted by id) is
    replaced by new vertices p_i = "p0#i", each joined to its q_i and to the
    other p_j.  Axial values: old edges keep theirs, (p_i -> q_i) gets the
    old value alpha_i of (p0 -> q_i), and (p_i -> p_j) gets alpha_j - alpha_i.
    The inherited connection is attached when the base pair carries one.
    Requires, for each i, the differences alpha_j - alpha_i (j != i) to be
    pairwise linearly independent.
    """
    if p0 not in pair.vertices:
        raise ValueError(f"unknown vertex {p0!r}")
    qs = sorted(pair.neighbors(p0))
    d = len(qs)
    if d < 1:
        raise ValueError("cannot blow up an isolated vertex")
    alphas = [pair.axial_at(p0, q) for q in qs]
    for i in range(d):
        for j in range(d):
            if j != i and alphas[i] == alphas[j]:
                raise ValueError(f"axial values toward {qs[i]!r} and {qs[j]!r} coincide")
    for i in range(d):
        diffs = [(j, LinearForm(alphas[j] - alphas[i])) for j in range(d) if j != i]
        for a in range(len(diffs)):
            for b in range(a + 1, len(diffs)):
                if diffs[a][1].parallel_to(diffs[b][1]):
                    raise ValueError(
                        f"blow-up at {p0!r}: differences toward {qs[diffs[a][0]]!r} "
                        f"and {qs[diffs[b][0]]!r} relative to {qs[i]!r} are parallel"
                    )

    ps = [f"{p0}#{i + 1}" for i in range(d)]
    index_of = {q: i for i, q in enumerate(qs)}
    vertices = [v for v in pair.vertices if v != p0] + ps

    kept = [e for e in pair.edges if p0 not in e]
    edges = list(kept)
    axial = {}
    for p, q in kept:
        axial[(p, q)] = pair.axial_at(p, q)
        axial[(q, p)] = pair.axial_at(q, p)
    for i in range(d):
        edges.append((ps[i], qs[i]))
        axial[(ps[i], qs[i])] = alphas[i]
        axial[(qs[i], ps[i])] = pair.axial_at(qs[i], p0)
    for i in range(d):
        for j in range(i + 1, d):
            edges.append((ps[i], ps[j]))
            axial[(ps[i], ps[j])] = alphas[j] - alphas[i]
            axial[(ps[j], ps[i])] = alphas[i] - alphas[j]

    conn = None
    if pair.connection is not None:
        # neighbor-level rewrite: the old neighbor p0 of q_i becomes p_i
        def rewrite(v: str, r: str) -> str:
            return ps[index_of[v]] if r == p0 else r

        maps = {}
        for u, v in pair.oriented_edges():
            if p0 in (u, v):
                continue
            base = pair.connection[(u, v)]
            maps[(u, v)] = {rewrite(u, r): rewrite(v, s) for r, s in base.items()}
        for i in range(d):
            for j in range(d):
                if i == j:
                    continue
                m = {qs[i]: qs[j], ps[j]: ps[i]}
                for k in range(d):
                    if k != i and k != j:
                        m[ps[k]] = ps[k]
                maps[(ps[i], ps[j])] = m
        for i in range(d):
            base = pair.connection[(p0, qs[i])]
            forward = {qs[i]: ps[i]}
            for j in range(d):
                if j != i:
                    forward[ps[j]] = base[qs[j]]
            maps[(ps[i], qs[i])] = forward
            maps[(qs[i], ps[i])] = {s: r for r, s in forward.items()}
        conn = maps

    out = GkmPair(pair.n, vertices, edges, axial, conn)
    blow_down = {v: v for v in pair.vertices if v != p0}
    blow_down.update({p: p0 for p in ps})
    return out, blow_down


def cycle_2valent(N: int, a1: Covector | Iterable, a2: Covector | Iterable) -> GkmPair:
    """N-cycle (N = 4k) with the alternating axial pattern a1, a2, -a1, -a2.

    The wedge condition on consecutive axial values (equality of all 2x2
    coordinate determinants around the cycle, wraparound included) is
    checked after construction.
    """
    if N % 4 != 0 or N <= 0:
        raise ValueError("cycle length must be a positive multiple of 4")
    c1 = a1 if isinstance(a1, Covector) else Covector(a1)
    c2 = a2 if isinstance(a2, Covector) else Covector(a2)
    if c1.n != c2.n:
        raise ValueError("axial covectors must share one ambient dimension")
    if c1.n < 2:
        raise ValueError("need ambient dimension at least 2")
    if LinearForm(c1).parallel_to(LinearForm(c2)):
        raise ValueError("the two axial covectors must be linearly independent")

    pattern = [c1, c2, -c1, -c2]
    names = [str(i + 1) for i in range(N)]
    seq = [pattern[i % 4] for i in range(N)]
    edges = []
    axial = {}
    for i in range(N):
        p, q = names[i], names[(i + 1) % N]
        edges.append((p, q))
        axial[(p, q)] = seq[i]

    def wedge(u: Covector, v: Covector) -> tuple:
        n = u.n
        return tuple(
            u.coords[r] * v.coords[s] - u.coords[s] * v.coords[r]
            for r in range(n)
            for s in range(r + 1, n)
        )

    first = wedge(seq[1], seq[0])
    for i in range(N):
        if wedge(seq[(i + 1) % N], seq[i]) != first:
            raise ValueError(f"wedge condition fails between steps {i} and {i + 1}")

    conn = {}
    for i in range(N):
        p, q = names[i], names[(i + 1) % N]
        prev_p, next_q = names[(i - 1) % N], names[(i + 2) % N]
        conn[(p, q)] = {q: p, prev_p: next_q}
        conn[(q, p)] = {p: q, next_q: prev_p}
    return GkmPair(c1.n, names, edges, axial, conn)
