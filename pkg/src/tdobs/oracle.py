"""Slow reference computations straight from the definitions.

Nothing here shares code with the solver, the enumeration or the obstruction
filters; only the canonical form is reused, to name graphs when diffing.

Isomorphism classes come from exhaustive enumeration of all labeled graphs:
for n <= 5 deduplicated with the all-permutations form, for n = 6 with the
search form.  For n = 7 the 2**21 labeled graphs are replaced by every
extension (any vertex set A, no degree pruning) of the 6-vertex classes,
which reaches every class because each 7-vertex graph is a 6-vertex graph
plus one vertex.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .canon import DEFAULT_CUTOFF, CanonicalForm, brute_force_form, canonical_form
from .graph import Graph

ORACLE_MAX_N = 7
BRUTE_MAX_N = 5
LABELED_MAX_N = 6


# treedepth by definition -------------------------------------------------------


def _nbrs(g: Graph) -> dict[int, frozenset[int]]:
    return {v: frozenset(u for u in range(g.n) if g.adj[v] >> u & 1) for v in range(g.n)}


def _split(nbrs: dict[int, frozenset[int]], verts: frozenset[int]) -> list[frozenset[int]]:
    left = set(verts)
    out = []
    while left:
        start = left.pop()
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y in left:
                    left.discard(y)
                    comp.add(y)
                    stack.append(y)
        out.append(frozenset(comp))
    return out


def td_by_definition(g: Graph, memo: bool = False) -> int:
    """td via max over components / 1 + min over deletions.

    With ``memo=False`` every subproblem is re-evaluated (no pruning either).
    """
    nbrs = _nbrs(g)

    def rec(verts: frozenset[int]) -> int:
        if not verts:
            return 0
        comps = _split(nbrs, verts)
        if len(comps) > 1:
            return max(solve(c) for c in comps)
        if len(verts) == 1:
            return 1
        return 1 + min(solve(verts - {v}) for v in verts)

    solve = lru_cache(maxsize=None)(rec) if memo else rec
    return solve(frozenset(range(g.n)))


# isomorphism classes ------------------------------------------------------------


def labeled_graphs(n: int) -> Iterator[Graph]:
    pairs = list(combinations(range(n), 2))
    for m in range(1 << len(pairs)):
        yield Graph.from_edges(n, [e for b, e in enumerate(pairs) if m >> b & 1])


@lru_cache(maxsize=None)
def graph_classes(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of n-vertex graphs."""
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle supports n <= {ORACLE_MAX_N}")
    seen: dict[bytes, Graph] = {}
    if n <= LABELED_MAX_N:
        form = brute_force_form if n <= BRUTE_MAX_N else canonical_form
        for g in labeled_graphs(n):
            seen.setdefault(form(g), g)
    else:
        for g in graph_classes(n - 1):
            for a in range(1 << g.n):
                h = _add_vertex(g, a)
                seen.setdefault(canonical_form(h), h)
    return tuple(seen.values())


def _add_vertex(g: Graph, a: int) -> Graph:
    return Graph.from_edges(g.n + 1, g.edges() + [(v, g.n) for v in range(g.n) if a >> v & 1])


# sets by definition ---------------------------------------------------------------


def _forms(graphs: list[Graph], cutoff: int) -> set[CanonicalForm]:
    forms = {canonical_form(g, cutoff) for g in graphs}
    if len(forms) != len(graphs):
        raise AssertionError("canonical form merged non-isomorphic oracle graphs")
    return forms


def oracle_level(k: int, n: int, cutoff: int = DEFAULT_CUTOFF) -> set[CanonicalForm]:
    """Canonical forms of all n-vertex graphs with td <= k."""
    return _forms([g for g in graph_classes(n) if td_by_definition(g, memo=True) <= k], cutoff)


def _delete(g: Graph, keep: list[int], edges: set[tuple[int, int]]) -> Graph:
    index = {v: i for i, v in enumerate(keep)}
    return Graph.from_edges(
        len(keep), [(index[u], index[v]) for u, v in edges if u in index and v in index]
    )


def _contract(g: Graph, u: int, v: int) -> Graph:
    rest = [x for x in range(g.n) if x != v]
    index = {x: i for i, x in enumerate(rest)}
    out = set()
    for a, b in g.edges():
        a = u if a == v else a
        b = u if b == v else b
        if a != b:
            out.add((min(index[a], index[b]), max(index[a], index[b])))
    return Graph.from_edges(len(rest), sorted(out))


def proper_induced_subgraphs(g: Graph) -> Iterator[Graph]:
    edges = set(g.edges())
    for size in range(1, g.n):
        for keep in combinations(range(g.n), size):
            yield _delete(g, list(keep), edges)


def proper_subgraphs(g: Graph, exhaustive: bool = False) -> Iterator[Graph]:
    """Maximal proper subgraphs, or with ``exhaustive`` every proper subgraph.

    Every proper subgraph lies inside some G - v or G - e, so the maximal ones
    decide minimality for any subgraph-monotone parameter.
    """
    edges = g.edges()
    if exhaustive:
        for size in range(1, g.n + 1):
            for keep in combinations(range(g.n), size):
                inside = [e for e in edges if e[0] in keep and e[1] in keep]
                for m in range(1 << len(inside)):
                    chosen = {e for b, e in enumerate(inside) if m >> b & 1}
                    if size == g.n and len(chosen) == len(edges):
                        continue
                    yield _delete(g, list(keep), chosen)
        return
    all_edges = set(edges)
    for v in range(g.n):
        yield _delete(g, [x for x in range(g.n) if x != v], all_edges)
    for e in edges:
        yield _delete(g, list(range(g.n)), all_edges - {e})


def proper_minors(g: Graph, exhaustive: bool = False) -> Iterator[Graph]:
    """Maximal proper minors (G - v, G - e, G / e), or with ``exhaustive`` all of them."""
    if not exhaustive:
        yield from proper_subgraphs(g)
        for u, v in g.edges():
            yield _contract(g, u, v)
        return
    seen = {(g.n, g.adj)}
    stack = [g]
    while stack:
        h = stack.pop()
        for m in proper_minors(h):
            key = (m.n, m.adj)
            if key not in seen and m.n > 0:
                seen.add(key)
                stack.append(m)
                yield m


def oracle_obstructions(
    k: int, n: int, cutoff: int = DEFAULT_CUTOFF, exhaustive: bool = False
) -> dict[str, set[CanonicalForm]]:
    """The three n-vertex obstruction sets, each by its own minimality test."""
    cache: dict[tuple[int, tuple[int, ...]], int] = {}

    def td(h: Graph) -> int:
        key = (h.n, h.adj)
        if key not in cache:
            cache[key] = td_by_definition(h, memo=True)
        return cache[key]

    outside = [g for g in graph_classes(n) if td(g) > k]
    induced = [g for g in outside if all(td(h) <= k for h in proper_induced_subgraphs(g))]
    subgraph = [g for g in outside if all(td(h) <= k for h in proper_subgraphs(g, exhaustive))]
    minor = [g for g in outside if all(td(h) <= k for h in proper_minors(g, exhaustive))]
    return {
        "induced": _forms(induced, cutoff),
        "subgraph": _forms(subgraph, cutoff),
        "minor": _forms(minor, cutoff),
    }
