"""Level-by-level generation of all graphs with treedepth at most k.

Level i holds one canonical form per isomorphism class of i-vertex graphs
with td <= k.  Level i+1 is built from single-vertex extensions of level i
where the new vertex has minimum degree: every graph arises that way by
deleting one of its minimum-degree vertices, so nothing is missed.
"""

from __future__ import annotations

import hashlib
import multiprocessing as mp
import signal
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator

from .canon import DEFAULT_CUTOFF, CanonicalForm, canonical_form, search_labeling
from .graph import MAX_VERTICES, Graph, GraphError, extend, from_graph6, to_graph6
from .treedepth import TreedepthSolver

# Cross-call memo off: at the sizes enumerated here canonizing a subproblem
# costs more than re-solving it.
_solver = TreedepthSolver(memo_cap=0)


class IntegrityError(RuntimeError):
    """Stored data does not match its recorded digest or is incomplete."""


def digest_lines(members: Iterable[bytes]) -> str:
    h = hashlib.sha256()
    for m in members:
        h.update(m)
        h.update(b"\n")
    return h.hexdigest()


@dataclass
class LevelSet:
    k: int
    i: int
    members: list[CanonicalForm]
    digest: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.digest is None:
            self.digest = digest_lines(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, form: object) -> bool:
        return form in self._lookup

    @property
    def _lookup(self) -> frozenset[bytes]:
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = self.__dict__["_set"] = frozenset(self.members)
        return cached

    def graphs(self) -> Iterator[Graph]:
        return (from_graph6(m) for m in self.members)

    def verify(self) -> None:
        """Raise ``IntegrityError`` unless sorted, distinct and matching the digest."""
        if any(a >= b for a, b in zip(self.members, self.members[1:])):
            raise IntegrityError(f"level k={self.k} i={self.i} is not sorted and distinct")
        if digest_lines(self.members) != self.digest:
            raise IntegrityError(f"level k={self.k} i={self.i} digest mismatch")


def initial_level(k: int) -> LevelSet:
    if k < 1:
        raise ValueError("treedepth bound must be at least 1")
    return LevelSet(k, 1, [to_graph6(Graph.empty(1)).encode("ascii")])


# candidate generation -----------------------------------------------------------


def extension_sets(g: Graph) -> Iterator[int]:
    """Vertex sets A (bitmasks) for which the new vertex has minimum degree in G_A.

    Ordered by increasing |A|, then lexicographically.  Sets larger than
    min_degree + 1 cannot qualify and are never generated; the degree check
    itself is applied to every generated set.
    """
    n = g.n
    if n >= MAX_VERTICES:
        raise GraphError(f"capacity of {MAX_VERTICES} vertices exceeded")
    degs = [row.bit_count() for row in g.adj]
    delta = min(degs, default=0)
    for size in range(0, min(n, delta + 1) + 1):
        for combo in combinations(range(n), size):
            a = 0
            for v in combo:
                a |= 1 << v
            if all(degs[u] + (a >> u & 1) >= size for u in range(n)):
                yield a


def candidate_extensions(g: Graph) -> Iterator[Graph]:
    for a in extension_sets(g):
        yield extend(g, a)


def orbit_representatives(g: Graph, sets: list[int]) -> list[int]:
    """One set per orbit of ``sets`` under the automorphism group of ``g``.

    Sets in one orbit give isomorphic extensions, so only one needs testing.
    """
    if len(sets) <= 1 or g.n <= 1:
        return sets
    gens = search_labeling(g)[2]
    if not gens:
        return sets
    index = {a: i for i, a in enumerate(sets)}
    parent = list(range(len(sets)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gm in gens:
        for a, i in index.items():
            b = 0
            for v in range(g.n):
                if a >> v & 1:
                    b |= 1 << gm[v]
            j = index.get(b)
            if j is not None:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    return [a for i, a in enumerate(sets) if find(i) == i]


# level construction ---------------------------------------------------------------


def _extend_chunk(args: tuple[list[bytes], int, int]) -> set[bytes]:
    lines, k, cutoff = args
    out: set[bytes] = set()
    for line in lines:
        g = from_graph6(line)
        sets = orbit_representatives(g, list(extension_sets(g)))
        # td(G_A) <= td(G) + 1, so parents below the bound pass outright
        trivially = _solver.td_at_most(g, k - 1)
        family = None if trivially else _solver.extensions(g)
        for a in sets:
            if trivially or family.at_most(a, k):
                out.add(canonical_form(extend(g, a), cutoff))
    return out


def chunked(items: Iterable[bytes], size: int) -> Iterator[list[bytes]]:
    chunk: list[bytes] = []
    for item in items:
        chunk.append(item)
        if len(chunk) >= size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def _ignore_sigint() -> None:
    signal.signal(signal.SIGINT, signal.SIG_IGN)


@contextmanager
def _deferred_sigint() -> Iterator[Callable[[], None]]:
    """Hold SIGINT until the caller reaches a safe point.

    An interrupt landing inside pool start-up or result handling can leave
    multiprocessing deadlocked, so the handler only records it and the
    yielded ``check`` raises ``KeyboardInterrupt`` between chunks.
    """
    if threading.current_thread() is not threading.main_thread():
        yield lambda: None
        return
    hits: list[int] = []

    def check() -> None:
        if hits:
            raise KeyboardInterrupt

    previous = signal.signal(signal.SIGINT, lambda signum, frame: hits.append(signum))
    try:
        yield check
    finally:
        signal.signal(signal.SIGINT, previous)
    check()


def parallel_union(
    func: Callable[[tuple], set[bytes]],
    chunks: Iterable[tuple],
    workers: int,
) -> set[bytes]:
    """Union of ``func`` over ``chunks``; the merged set is the only shared state."""
    result: set[bytes] = set()
    if workers <= 1:
        for c in chunks:
            result |= func(c)
        return result
    ctx = mp.get_context("fork")
    with _deferred_sigint() as check:
        pool = ctx.Pool(workers, initializer=_ignore_sigint)
        try:
            for part in pool.imap_unordered(func, chunks):
                result |= part
                check()
            pool.close()
        finally:
            pool.terminate()
            pool.join()
    return result


def next_level_from(
    parents: Iterable[bytes],
    k: int,
    i: int,
    workers: int = 1,
    cutoff: int = DEFAULT_CUTOFF,
    chunk_size: int = 64,
) -> LevelSet:
    """Build level ``i`` from a stream of level ``i - 1`` canonical forms."""
    if i > MAX_VERTICES:
        raise GraphError(f"capacity of {MAX_VERTICES} vertices exceeded")
    tasks = ((c, k, cutoff) for c in chunked(parents, chunk_size))
    forms = parallel_union(_extend_chunk, tasks, workers)
    return LevelSet(k, i, sorted(forms))


def next_level(
    prev: LevelSet,
    workers: int = 1,
    cutoff: int = DEFAULT_CUTOFF,
) -> LevelSet:
    prev.verify()
    return next_level_from(prev.members, prev.k, prev.i + 1, workers, cutoff)


def levels(k: int, n: int, workers: int = 1, cutoff: int = DEFAULT_CUTOFF) -> list[LevelSet]:
    """Levels 1..n in memory; convenient for tests and small runs."""
    out = [initial_level(k)]
    while out[-1].i < n:
        out.append(next_level(out[-1], workers, cutoff))
    return out
