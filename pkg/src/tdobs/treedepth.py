"""Exact treedepth with elimination-forest certificates.

td of a connected graph is 1 + min over v of td(G - v); td of a disconnected
graph is the max over its components.  The solver evaluates this recursion by
branch and bound over vertex subsets (bitmasks) of the input graph:

* per-call memo keyed by vertex subset, holding lower bounds and exact values;
* an optional cross-call memo keyed by the canonical form of connected
  subproblems with at least ``memo_min_size`` vertices, capped at
  ``memo_cap`` entries (the table is cleared when full);
* lower bounds from greedy cliques, degeneracy and long paths.

Heights count vertices, so td(K_1) = 1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .canon import DEFAULT_CUTOFF, canonical_labeling
from .graph import MAX_VERTICES, Graph, GraphError, _induced_rows, bits, component_masks


@dataclass(frozen=True)
class EliminationForest:
    """``parent[v]`` is the parent of v, or ``None`` for a root."""

    parent: tuple[int | None, ...]

    @property
    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self.parent) if p is None]

    def depths(self) -> list[int]:
        """Depth of every vertex (roots have depth 1); raises on cycles."""
        n = len(self.parent)
        depth = [0] * n
        for v in range(n):
            chain = []
            x: int | None = v
            while x is not None and depth[x] == 0:
                if len(chain) > n:
                    raise ValueError("parent relation has a cycle")
                chain.append(x)
                x = self.parent[x]
            d = 0 if x is None else depth[x]
            for y in reversed(chain):
                d += 1
                depth[y] = d
        return depth

    def height(self) -> int:
        return max(self.depths(), default=0)

    def ancestors(self, v: int) -> set[int]:
        out = set()
        x = self.parent[v]
        while x is not None:
            out.add(x)
            x = self.parent[x]
        return out


@dataclass(frozen=True)
class TreedepthResult:
    value: int
    certificate: EliminationForest


def verify_forest(g: Graph, f: EliminationForest) -> bool:
    """Check that ``f`` is a rooted forest on V(g) covering every edge of g."""
    if len(f.parent) != g.n:
        return False
    for p in f.parent:
        if p is not None and not 0 <= p < g.n:
            raise GraphError(f"parent index {p} out of range for n={g.n}")
    try:
        f.depths()
    except ValueError:
        return False
    anc = [f.ancestors(v) for v in range(g.n)]
    return all(u in anc[v] or v in anc[u] for u, v in g.edges())


# lower bounds -----------------------------------------------------------------


def _degeneracy(adj: tuple[int, ...], mask: int) -> int:
    best = 0
    rest = mask
    while rest:
        pick, low = -1, 1 << 30
        for v in bits(rest):
            d = (adj[v] & rest).bit_count()
            if d < low:
                pick, low = v, d
                # any vertex of degree <= best can go next without changing the result
                if d <= best:
                    break
        if low > best:
            best = low
        rest &= ~(1 << pick)
    return best


def _greedy_clique(adj: tuple[int, ...], mask: int) -> int:
    best = 0
    for v in bits(mask):
        cand = adj[v] & mask
        size = 1
        while cand:
            u = max(bits(cand), key=lambda x: (adj[x] & cand).bit_count())
            cand &= adj[u]
            size += 1
        best = max(best, size)
    return best


def _greedy_path(adj: tuple[int, ...], mask: int, starts: int | None = None) -> int:
    """Vertex count of a long path found by greedy walks.

    Walks start from every vertex, or from the ``starts`` lowest-degree ones.
    """
    order = sorted(bits(mask), key=lambda x: ((adj[x] & mask).bit_count(), x))
    best = 0
    for start in order[:starts]:
        seen = 1 << start
        v = start
        length = 1
        while True:
            nxt = adj[v] & mask & ~seen
            if not nxt:
                break
            low = 1 << 30
            for x in bits(nxt):
                d = (adj[x] & mask & ~seen).bit_count()
                if d < low:
                    v, low = x, d
            seen |= 1 << v
            length += 1
        best = max(best, length)
    return best


def _mask_lower_bound(adj: tuple[int, ...], mask: int) -> int:
    if not mask:
        return 0
    lb = max(_greedy_clique(adj, mask), _degeneracy(adj, mask) + 1)
    for comp in component_masks(adj, mask):
        lb = max(lb, _greedy_path(adj, comp).bit_length())
    return lb


def lower_bound(g: Graph) -> int:
    """A lower bound on td(g): clique, degeneracy + 1, and ceil(log2(path + 1))."""
    return _mask_lower_bound(g.adj, g.vertex_mask)


# solver -----------------------------------------------------------------------


class TreedepthSolver:
    """Branch-and-bound treedepth solver with an optional canonical-form memo.

    ``memo_cap=0`` disables the cross-call memo; answers never depend on it.
    """

    def __init__(
        self,
        memo_cap: int = 200_000,
        memo_min_size: int = 9,
        cutoff: int = DEFAULT_CUTOFF,
    ) -> None:
        self.memo_cap = memo_cap
        self.memo_min_size = memo_min_size
        self.cutoff = cutoff
        # form -> (lower bound, exact value or 0, parent array in canonical labels)
        self._memo: dict[bytes, tuple[int, int, tuple[int, ...] | None]] = {}
        self._lock = threading.Lock()
        self.resets = 0

    def clear(self) -> None:
        with self._lock:
            self._memo.clear()

    def treedepth(self, g: Graph) -> TreedepthResult:
        if g.n == 0:
            raise GraphError("treedepth of the empty graph is undefined")
        run = _Run(self, g.adj)
        value = run.solve(g.vertex_mask, g.n)
        parent: list[int | None] = [None] * g.n
        run.build(g.vertex_mask, None, parent)
        return TreedepthResult(value, EliminationForest(tuple(parent)))

    def td_at_most(self, g: Graph, k: int) -> bool:
        if k < 0:
            raise ValueError("budget must be non-negative")
        if g.n == 0:
            return True
        if k == 0:
            return False
        run = _Run(self, g.adj)
        return run.solve(g.vertex_mask, k) <= k

    def extensions(self, g: Graph) -> ExtensionFamily:
        """Decision procedure for the family of one-vertex extensions of ``g``."""
        return ExtensionFamily(self, g)

    # cross-call memo ---------------------------------------------------------

    def _lookup(self, form: bytes) -> tuple[int, int, tuple[int, ...] | None] | None:
        with self._lock:
            return self._memo.get(form)

    def _store(self, form: bytes, lo: int, exact: int, forest: tuple[int, ...] | None) -> None:
        if self.memo_cap <= 0:
            return
        with self._lock:
            old = self._memo.get(form)
            if old is not None:
                if old[1]:
                    return
                lo = max(lo, old[0])
            elif len(self._memo) >= self.memo_cap:
                self._memo.clear()
                self.resets += 1
            self._memo[form] = (lo, exact, forest)


class _Run:
    """Memo state for solves on one adjacency, or on a family of extensions.

    For a family G_A sharing the base graph G, ``xbit`` marks the added
    vertex and ``ext`` is the current A.  A subproblem on vertex set S is
    keyed by S alone when S avoids the added vertex, and by (S, A & S)
    otherwise, so results are shared between all members of the family.
    """

    def __init__(self, solver: TreedepthSolver, adj: tuple[int, ...], xbit: int = 0) -> None:
        self.solver = solver
        self.adj = adj
        self.xbit = xbit
        self.ext = 0
        self.lo: dict[int, int] = {}
        self.exact: dict[int, int] = {}
        self.choice: dict[int, int] = {}
        # canonical subproblem hits: mask -> (labeling, forest in canonical labels)
        self.borrowed: dict[int, tuple[list[int], tuple[int, ...]]] = {}

    def _key(self, mask: int) -> int:
        if mask & self.xbit:
            return mask | (self.ext & mask) << 20
        return mask

    def solve(self, mask: int, budget: int) -> int:
        """td of the subgraph induced by ``mask`` if at most ``budget``, else budget + 1."""
        worst = 0
        for comp in component_masks(self.adj, mask):
            r = self._connected(comp, budget)
            if r > budget:
                return budget + 1
            worst = max(worst, r)
        return worst

    def _connected(self, mask: int, budget: int) -> int:
        size = mask.bit_count()
        if size == 1:
            return 1 if budget >= 1 else budget + 1
        if budget <= 1:
            return budget + 1
        key = self._key(mask)
        ex = self.exact.get(key)
        if ex is not None:
            return ex if ex <= budget else budget + 1
        lo = self.lo.get(key, 0)
        if lo > budget:
            return budget + 1
        adj = self.adj
        if size == 2:
            return self._record(key, 2, mask.bit_length() - 1)
        edges2 = sum((adj[v] & mask).bit_count() for v in bits(mask))
        if edges2 == 2 * (size - 1):
            # trees with a universal vertex are stars
            for v in bits(mask):
                if (adj[v] & mask).bit_count() == size - 1:
                    return self._record(key, 2, v)
        if budget == 2:
            self.lo[key] = 3
            return 3

        form = labeling = None
        solver = self.solver
        if solver.memo_cap > 0 and size >= solver.memo_min_size:
            sub = _induced(adj, mask)
            form, labeling = canonical_labeling(sub, solver.cutoff)
            hit = solver._lookup(form)
            if hit is not None:
                h_lo, h_exact, h_forest = hit
                if h_exact:
                    self.exact[key] = h_exact
                    self.borrowed[key] = (labeling, h_forest)
                    return h_exact if h_exact <= budget else budget + 1
                lo = max(lo, h_lo)
                if lo > budget:
                    self.lo[key] = lo
                    return budget + 1

        if not lo:
            # clique size never beats degeneracy + 1; a path only helps once
            # it can reach 2**budget vertices
            lo = max(3, _degeneracy(adj, mask) + 1)
            if lo <= budget and size >= 1 << budget:
                lo = max(lo, _greedy_path(adj, mask, 3).bit_length())
            self.lo[key] = lo
            if lo > budget:
                if form is not None:
                    solver._store(form, lo, 0, None)
                return budget + 1

        best = budget + 1
        best_v = -1
        order = sorted(bits(mask), key=lambda x: (-(adj[x] & mask).bit_count(), x))
        for v in order:
            r = self.solve(mask & ~(1 << v), best - 2)
            if r <= best - 2:
                best = r + 1
                best_v = v
                if best <= lo:
                    break
        if best <= budget:
            self._record(key, best, best_v)
            if form is not None:
                solver._store(form, best, best, self._canonical_forest(mask, labeling))
            return best
        self.lo[key] = budget + 1
        if form is not None:
            solver._store(form, budget + 1, 0, None)
        return budget + 1

    def _record(self, key: int, value: int, root: int) -> int:
        self.exact[key] = value
        self.choice[key] = root
        return value

    def build(self, mask: int, parent_vertex: int | None, parent: list[int | None]) -> None:
        for comp in component_masks(self.adj, mask):
            self._build_connected(comp, parent_vertex, parent)

    def _build_connected(self, mask: int, parent_vertex: int | None, parent: list[int | None]) -> None:
        if mask & (mask - 1) == 0:
            parent[mask.bit_length() - 1] = parent_vertex
            return
        key = self._key(mask)
        if key not in self.choice and key in self.borrowed:
            labeling, forest = self.borrowed[key]
            verts = list(bits(mask))
            by_label = {labeling[i]: v for i, v in enumerate(verts)}
            for i, v in enumerate(verts):
                p = forest[labeling[i]]
                parent[v] = parent_vertex if p < 0 else by_label[p]
            return
        if key not in self.choice:
            self.solve(mask, mask.bit_count())
        root = self.choice[key]
        parent[root] = parent_vertex
        self.build(mask & ~(1 << root), root, parent)

    def _canonical_forest(self, mask: int, labeling: list[int]) -> tuple[int, ...]:
        verts = list(bits(mask))
        parent: list[int | None] = [None] * len(self.adj)
        self._build_connected(mask, None, parent)
        out = [-1] * len(verts)
        for i, v in enumerate(verts):
            p = parent[v]
            out[labeling[i]] = -1 if p is None else labeling[verts.index(p)]
        return tuple(out)


class ExtensionFamily:
    """td decisions for G_A = G plus a vertex adjacent to A, over many A.

    Subproblems are memoized across the whole family (see ``_Run``).
    """

    def __init__(self, solver: TreedepthSolver, g: Graph) -> None:
        if g.n >= MAX_VERTICES:
            raise GraphError(f"capacity of {MAX_VERTICES} vertices exceeded")
        self.base = g
        self.new = g.n
        self._run = _Run(solver, g.adj + (0,), 1 << g.n)
        self._full = (1 << (g.n + 1)) - 1

    def _select(self, a: int) -> None:
        run = self._run
        if run.ext == a and run.adj[-1] == a:
            return
        new = 1 << self.new
        run.adj = tuple(row | new if a >> i & 1 else row for i, row in enumerate(self.base.adj)) + (a,)
        run.ext = a

    def at_most(self, a: int, k: int) -> bool:
        """td(G_A) <= k."""
        self._select(a)
        return self._run.solve(self._full, k) <= k

    def deletion_at_most(self, a: int, v: int, k: int) -> bool:
        """td(G_A - v) <= k."""
        self._select(a)
        return self._run.solve(self._full & ~(1 << v), k) <= k


def _induced(adj: tuple[int, ...], mask: int) -> Graph:
    return Graph._trusted(*_induced_rows(adj, mask))


_default = TreedepthSolver()


def default_solver() -> TreedepthSolver:
    return _default


def treedepth(g: Graph, solver: TreedepthSolver | None = None) -> TreedepthResult:
    return (solver or _default).treedepth(g)


def td_at_most(g: Graph, k: int, solver: TreedepthSolver | None = None) -> bool:
    return (solver or _default).td_at_most(g, k)
