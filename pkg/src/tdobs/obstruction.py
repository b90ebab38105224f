"""n-vertex obstructions for treedepth at most k.

``induced``  graphs with td = k + 1 all of whose vertex-deleted subgraphs
             have td <= k (minimal under induced subgraphs);
``subgraph`` members of ``induced`` with no single-edge deletion landing in
             ``induced`` again (minimal under subgraphs);
``minor``    members of ``subgraph`` with no single-edge contraction landing
             in the (n-1)-vertex ``induced`` set (minimal under minors).

The two filters only ever look at one-step edits.  That is enough: a
proper subgraph on fewer vertices sits inside some G - v, and a spanning
proper subgraph either is some G - e (td <= k unless it is itself an induced
obstruction) or sits inside one.  The minor case works the same way with
contractions, against the (n-1)-vertex induced obstructions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .canon import DEFAULT_CUTOFF, CanonicalForm, canonical_form
from .enumeration import (
    LevelSet,
    chunked,
    extension_sets,
    orbit_representatives,
    parallel_union,
)
from .graph import Graph, contract_edge, delete_edge, delete_vertex, extend, from_graph6
from .treedepth import ExtensionFamily, TreedepthSolver

_solver = TreedepthSolver(memo_cap=0)


class Mode(str, Enum):
    """How vertex-deleted subgraphs are checked for td <= k."""

    LOOKUP = "lookup"  # membership in the stored (n-1)-vertex level
    RECOMPUTE = "recompute"  # rerun the solver; the level need not stay in memory


@dataclass
class ObstructionSets:
    k: int
    n: int
    induced: list[CanonicalForm] = field(default_factory=list)
    subgraph: list[CanonicalForm] = field(default_factory=list)
    minor: list[CanonicalForm] = field(default_factory=list)

    def check_chain(self) -> bool:
        return set(self.minor) <= set(self.subgraph) <= set(self.induced)


# step 2 -------------------------------------------------------------------------

# Level members for lookup mode; set before forking workers so they inherit it.
_lookup_level: frozenset[bytes] = frozenset()


def _all_deletions_ok(h: Graph, a: int, family: ExtensionFamily, k: int, mode: Mode, cutoff: int) -> bool:
    # h - new is the parent, already in the level
    for v in range(h.n - 1):
        if mode is Mode.LOOKUP:
            if canonical_form(delete_vertex(h, v), cutoff) not in _lookup_level:
                return False
        elif not family.deletion_at_most(a, v, k):
            return False
    return True


def _obstruction_chunk(args: tuple[list[bytes], int, int, Mode]) -> set[bytes]:
    lines, k, cutoff, mode = args
    out: set[bytes] = set()
    checked: set[bytes] = set()
    for line in lines:
        g = from_graph6(line)
        # td(G_A) <= td(G) + 1: parents below the bound cannot produce td k + 1
        if _solver.td_at_most(g, k - 1):
            continue
        family = _solver.extensions(g)
        for a in orbit_representatives(g, list(extension_sets(g))):
            if family.at_most(a, k):
                continue
            h = extend(g, a)
            form = canonical_form(h, cutoff)
            if form in checked:
                continue
            checked.add(form)
            if _all_deletions_ok(h, a, family, k, mode, cutoff):
                out.add(form)
    return out


def induced_obstructions_from(
    parents: Iterable[bytes],
    k: int,
    mode: Mode = Mode.LOOKUP,
    level: Iterable[bytes] | None = None,
    workers: int = 1,
    cutoff: int = DEFAULT_CUTOFF,
    chunk_size: int = 64,
) -> list[CanonicalForm]:
    """Induced obstructions on one more vertex than the ``parents`` stream.

    ``level`` is the full parent level and is required in lookup mode.
    """
    global _lookup_level
    mode = Mode(mode)
    if mode is Mode.LOOKUP:
        if level is None:
            raise ValueError("lookup mode needs the (n-1)-vertex level")
        _lookup_level = frozenset(level)
    try:
        tasks = ((c, k, cutoff, mode) for c in chunked(parents, chunk_size))
        return sorted(parallel_union(_obstruction_chunk, tasks, workers))
    finally:
        _lookup_level = frozenset()


def induced_obstructions(
    prev_level: LevelSet,
    mode: Mode | str = Mode.LOOKUP,
    workers: int = 1,
    cutoff: int = DEFAULT_CUTOFF,
) -> list[CanonicalForm]:
    """All (i+1)-vertex induced obstructions, given the complete level G_k^(i)."""
    prev_level.verify()
    return induced_obstructions_from(
        prev_level.members,
        prev_level.k,
        Mode(mode),
        prev_level.members,
        workers,
        cutoff,
    )


# steps 3 and 4 -------------------------------------------------------------------


def subgraph_filter(induced: Iterable[CanonicalForm], cutoff: int = DEFAULT_CUTOFF) -> list[CanonicalForm]:
    members = sorted(set(induced))
    pool = frozenset(members)
    keep = []
    for form in members:
        g = from_graph6(form)
        if all(canonical_form(delete_edge(g, e), cutoff) not in pool for e in g.edges()):
            keep.append(form)
    return keep


def minor_filter(
    subgraph: Iterable[CanonicalForm],
    induced_prev: Iterable[CanonicalForm],
    cutoff: int = DEFAULT_CUTOFF,
) -> list[CanonicalForm]:
    pool = frozenset(induced_prev)
    keep = []
    for form in sorted(set(subgraph)):
        g = from_graph6(form)
        if all(canonical_form(contract_edge(g, e), cutoff) not in pool for e in g.edges()):
            keep.append(form)
    return keep


def obstruction_sets(
    k: int,
    n: int,
    induced: list[CanonicalForm],
    induced_prev: Iterable[CanonicalForm],
    cutoff: int = DEFAULT_CUTOFF,
) -> ObstructionSets:
    sub = subgraph_filter(induced, cutoff)
    return ObstructionSets(k, n, sorted(induced), sub, minor_filter(sub, induced_prev, cutoff))


def membership_certificate(form: CanonicalForm, k: int, solver: TreedepthSolver | None = None) -> bool:
    """Independent check of an induced obstruction: td = k + 1, every G - v has td <= k."""
    solver = solver or _solver
    g = from_graph6(form)
    if solver.treedepth(g).value != k + 1:
        return False
    return all(solver.td_at_most(delete_vertex(g, v), k) for v in range(g.n))
