"""Canonical labeling of small graphs.

A canonical form is the graph6 line (as ``bytes``) of a canonically relabeled
copy of the graph, so two graphs are isomorphic iff their forms are equal.

Two labelings are used, selected by vertex count:

* ``n <= cutoff``: the lexicographically smallest graph6 line over *all*
  relabelings (``lexmin_labeling``).  The search only follows vertices that
  minimize the next adjacency column, which is exact because graph6 bits are
  laid out column by column.
* ``n > cutoff``: the smallest graph6 line over the leaves of an
  individualization/refinement search tree, pruned with automorphisms found
  along the way (``search_labeling``).

Both are deterministic functions of the isomorphism class for a fixed cutoff,
so a run must use one cutoff throughout.
"""

from __future__ import annotations

from itertools import permutations

from .graph import Graph, bits, to_graph6

CanonicalForm = bytes

DEFAULT_CUTOFF = 6


# refinement -----------------------------------------------------------------


def _refine(adj: tuple[int, ...], cells: list[int], active: set[int]) -> list[int]:
    """Refine ``cells`` in place to the coarsest equitable partition.

    ``active`` holds the cell masks still to be used as splitters.  All
    choices depend on cell positions and neighbor counts only, which makes
    the result commute with relabeling.
    """
    n_cells = len(cells)
    total = len(adj)
    while active and n_cells < total:
        for splitter in cells:
            if splitter in active:
                break
        active.discard(splitter)
        if splitter & (splitter - 1) == 0:
            # singleton splitter: counts are 0 or 1, split by adjacency alone
            nbrs = adj[splitter.bit_length() - 1]
            i = 0
            while i < len(cells):
                cell = cells[i]
                hit = cell & nbrs
                if hit and hit != cell:
                    frags = [cell & ~nbrs, hit]
                    cells[i : i + 1] = frags
                    active.discard(cell)
                    active.update(frags)
                    i += 2
                    n_cells += 1
                else:
                    i += 1
            continue
        i = 0
        while i < len(cells):
            cell = cells[i]
            if cell & (cell - 1) == 0:
                i += 1
                continue
            groups: dict[int, int] = {}
            for v in bits(cell):
                c = (adj[v] & splitter).bit_count()
                groups[c] = groups.get(c, 0) | 1 << v
            if len(groups) == 1:
                i += 1
                continue
            frags = [groups[c] for c in sorted(groups)]
            cells[i : i + 1] = frags
            active.discard(cell)
            active.update(frags)
            i += len(frags)
            n_cells += len(frags) - 1
    return cells


def refine(g: Graph, partition: list[int]) -> list[int]:
    """Coarsest equitable partition finer than ``partition`` (cells as bitmasks)."""
    cells = [c for c in partition]
    if sum(c.bit_count() for c in cells) != g.n or _union(cells) != g.vertex_mask:
        raise ValueError("partition does not cover the vertex set")
    return _refine(g.adj, cells, set(cells))


def _union(cells: list[int]) -> int:
    out = 0
    for c in cells:
        out |= c
    return out


def _individualize(adj: tuple[int, ...], cells: list[int], idx: int, v: int) -> list[int]:
    cells = cells[:]
    single = 1 << v
    cells[idx : idx + 1] = [single, cells[idx] & ~single]
    return _refine(adj, cells, {single})


# leaf keys ------------------------------------------------------------------


def _order_key(adj: tuple[int, ...], order: list[int]) -> int:
    """graph6 bit string (as an int) of the graph relabeled by position in ``order``."""
    n = len(order)
    top = n - 1
    pos = [0] * n
    for p, v in enumerate(order):
        pos[v] = top - p
    key = 0
    for j in range(1, n):
        r = 0
        for u in bits(adj[order[j]]):
            r |= 1 << pos[u]
        key = key << j | r >> (n - j)
    return key


def _form_from_order(g: Graph, order: list[int]) -> tuple[CanonicalForm, list[int]]:
    labeling = [0] * g.n
    for p, v in enumerate(order):
        labeling[v] = p
    return to_graph6(g.relabel(labeling)).encode("ascii"), labeling


# exhaustive lexicographic minimum ---------------------------------------------


def lexmin_labeling(g: Graph) -> tuple[CanonicalForm, list[int]]:
    """Lexicographically smallest graph6 line over all n! relabelings.

    Returns the form and a labeling (``labeling[v]`` is the new index of v)
    that produces it.
    """
    n = g.n
    if n <= 1:
        return _form_from_order(g, list(range(n)))
    adj = g.adj
    total_bits = n * (n - 1) // 2
    best_key = -1
    best_order: list[int] = []
    order: list[int] = []

    def dfs(used: int, key: int, nbits: int) -> None:
        nonlocal best_key, best_order
        j = len(order)
        if j == n:
            if best_key < 0 or key < best_key:
                best_key, best_order = key, order[:]
            return
        # column j bits: adjacency to positions 0..j-1, position 0 most significant
        cands: list[tuple[int, int]] = []
        for v in bits(~used & ((1 << n) - 1)):
            col = 0
            row = adj[v]
            for u in order:
                col = col << 1 | (row >> u & 1)
            cands.append((col, v))
        low = min(c for c, _ in cands)
        new_bits = nbits + j
        new_key = key << j | low
        if best_key >= 0:
            prefix = best_key >> (total_bits - new_bits)
            if new_key > prefix:
                return
        tried = 0
        for col, v in cands:
            if col != low:
                continue
            if _has_twin_in(adj, v, tried):
                continue
            tried |= 1 << v
            order.append(v)
            dfs(used | 1 << v, new_key, new_bits)
            order.pop()

    dfs(0, 0, 0)
    return _form_from_order(g, best_order)


def _has_twin_in(adj: tuple[int, ...], v: int, group: int) -> bool:
    # u, v twins => the transposition (u v) is an automorphism
    for u in bits(group):
        mask = ~((1 << u) | (1 << v))
        if adj[u] & mask == adj[v] & mask:
            return True
    return False


def brute_force_form(g: Graph) -> CanonicalForm:
    """Minimum graph6 line over ``itertools.permutations``; reference oracle only."""
    best = None
    for perm in permutations(range(g.n)):
        line = to_graph6(g.relabel(perm)).encode("ascii")
        if best is None or line < best:
            best = line
    return best if best is not None else to_graph6(g).encode("ascii")


# individualization / refinement search ------------------------------------------


class _Search:
    def __init__(self, g: Graph) -> None:
        self.g = g
        self.adj = g.adj
        self.first_key: int | None = None
        self.first_seq: list[int] = []
        self.first_order: list[int] = []
        self.best_key: int | None = None
        self.best_seq: list[int] = []
        self.best_order: list[int] = []
        self.generators: list[list[int]] = []

    def run(self) -> None:
        cells = _refine(self.adj, [self.g.vertex_mask], {self.g.vertex_mask})
        self._node(cells, [])

    def _leaf(self, cells: list[int], seq: list[int]) -> int:
        order = [c.bit_length() - 1 for c in cells]
        key = _order_key(self.adj, order)
        depth = len(seq)
        if self.first_key is None:
            self.first_key, self.first_seq, self.first_order = key, seq[:], order
            self.best_key, self.best_seq, self.best_order = key, seq[:], order
            return depth
        if key == self.first_key:
            self._add_automorphism(self.first_order, order)
            return _common_prefix(seq, self.first_seq)
        if key == self.best_key:
            self._add_automorphism(self.best_order, order)
            return _common_prefix(seq, self.best_seq)
        if key < self.best_key:
            self.best_key, self.best_seq, self.best_order = key, seq[:], order
        return depth

    def _add_automorphism(self, old: list[int], new: list[int]) -> None:
        gamma = [0] * len(old)
        for a, b in zip(old, new):
            gamma[a] = b
        self.generators.append(gamma)

    def _node(self, cells: list[int], seq: list[int]) -> int:
        """Explore the subtree; return the depth the search should resume at."""
        depth = len(seq)
        if len(cells) == self.g.n:
            return self._leaf(cells, seq)
        idx = _target_cell(cells)
        tried = 0
        for v in bits(cells[idx]):
            if tried and _in_orbit(self._stabilizer_gens(seq), v, tried):
                continue
            tried |= 1 << v
            seq.append(v)
            back = self._node(_individualize(self.adj, cells, idx, v), seq)
            seq.pop()
            if back < depth:
                return back
        return depth

    def _stabilizer_gens(self, seq: list[int]) -> list[list[int]]:
        return [gm for gm in self.generators if all(gm[x] == x for x in seq)]


def _common_prefix(a: list[int], b: list[int]) -> int:
    i = 0
    for x, y in zip(a, b):
        if x != y:
            break
        i += 1
    return i


def _target_cell(cells: list[int]) -> int:
    best, best_size = -1, 0
    for i, c in enumerate(cells):
        size = c.bit_count()
        if size > 1 and (best < 0 or size < best_size):
            best, best_size = i, size
    return best


def _in_orbit(gens: list[list[int]], v: int, seeds: int) -> bool:
    """Whether ``v`` lies in the orbit of some vertex of ``seeds`` under ``gens``."""
    if not gens:
        return False
    seen = 1 << v
    stack = [v]
    while stack:
        x = stack.pop()
        for gm in gens:
            y = gm[x]
            if not seen >> y & 1:
                if seeds >> y & 1:
                    return True
                seen |= 1 << y
                stack.append(y)
    return False


def search_labeling(g: Graph) -> tuple[CanonicalForm, list[int], list[list[int]]]:
    """Canonical form, labeling and automorphism generators via refinement search."""
    if g.n <= 1:
        form, labeling = _form_from_order(g, list(range(g.n)))
        return form, labeling, []
    s = _Search(g)
    s.run()
    form, labeling = _form_from_order(g, s.best_order)
    return form, labeling, s.generators


# public API -----------------------------------------------------------------


def canonical_labeling(g: Graph, cutoff: int = DEFAULT_CUTOFF) -> tuple[CanonicalForm, list[int]]:
    """Canonical form and a labeling with ``g.relabel(labeling)`` equal to its decoding."""
    if g.n <= cutoff:
        return lexmin_labeling(g)
    form, labeling, _ = search_labeling(g)
    return form, labeling


def canonical_form(g: Graph, cutoff: int = DEFAULT_CUTOFF, brute_force: bool = False) -> CanonicalForm:
    if brute_force:
        return brute_force_form(g)
    if g.n <= cutoff:
        return lexmin_labeling(g)[0]
    return search_labeling(g)[0]


def are_isomorphic(g: Graph, h: Graph, cutoff: int = DEFAULT_CUTOFF) -> bool:
    if g.n != h.n or g.num_edges() != h.num_edges():
        return False
    return canonical_form(g, cutoff) == canonical_form(h, cutoff)


def automorphism_generators(g: Graph) -> list[list[int]]:
    """Generators (possibly redundant) of a subgroup of Aut(g) found by the search.

    The returned set generates the full automorphism group.
    """
    return search_labeling(g)[2]
