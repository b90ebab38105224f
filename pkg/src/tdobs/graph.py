"""Dense small graphs stored as one adjacency bitmask per vertex.

Vertices are ``0..n-1``.  Row ``adj[v]`` has bit ``u`` set iff ``uv`` is an
edge.  Graphs are immutable and hashable, so they can be used as dict keys
and passed between worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_VERTICES = 18


class GraphError(ValueError):
    """Raised for invalid graph edits or out-of-range arguments."""


class Graph6Error(ValueError):
    """Raised for malformed graph6 input; ``offset`` is the offending byte."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


_TABLE_BITS = 12
_BIT_TABLE: list[tuple[int, ...]] = [()]
for _i in range(_TABLE_BITS):
    _BIT_TABLE += [t + (_i,) for t in _BIT_TABLE]


def bits(mask: int) -> tuple[int, ...] | Iterator[int]:
    """Indices of set bits in ascending order."""
    if mask < 4096:
        return _BIT_TABLE[mask]
    return _bits_slow(mask)


def _bits_slow(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise GraphError("adjacency row count does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError(f"row {v} has bits at or above n={self.n}")
            if row >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def _trusted(cls, n: int, adj: tuple[int, ...]) -> Graph:
        # Skips validation; only for rows produced by invariant-preserving edits.
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def star(cls, leaves: int) -> Graph:
        return cls.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and 0 <= v < self.n and bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` pairs with ``u < v``, sorted."""
        out = []
        for u, row in enumerate(self.adj):
            for v in bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def relabel(self, perm: list[int] | tuple[int, ...]) -> Graph:
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        rows = [0] * self.n
        for v, row in enumerate(self.adj):
            r = 0
            for u in bits(row):
                r |= 1 << perm[u]
            rows[perm[v]] = r
        return Graph._trusted(self.n, tuple(rows))

    def induced(self, mask: int) -> Graph:
        """Induced subgraph on ``mask``, relabeled order-preservingly."""
        return Graph._trusted(*_induced_rows(self.adj, mask & self.vertex_mask))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def _induced_rows(adj: tuple[int, ...], mask: int) -> tuple[int, tuple[int, ...]]:
    verts = list(bits(mask))
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        r = 0
        for u in bits(adj[v] & mask):
            r |= 1 << index[u]
        rows.append(r)
    return len(verts), tuple(rows)


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range for n={g.n}")


def _check_edge(g: Graph, e: tuple[int, int]) -> tuple[int, int]:
    u, v = e
    _check_vertex(g, u)
    _check_vertex(g, v)
    if not g.adj[u] >> v & 1:
        raise GraphError(f"({u}, {v}) is not an edge")
    return u, v


def _drop_bit(row: int, v: int) -> int:
    low = row & ((1 << v) - 1)
    return low | (row >> (v + 1) << v)


def delete_vertex(g: Graph, v: int) -> Graph:
    """G - v, remaining vertices shifted down to stay contiguous."""
    _check_vertex(g, v)
    rows = tuple(_drop_bit(row, v) for i, row in enumerate(g.adj) if i != v)
    return Graph._trusted(g.n - 1, rows)


def delete_edge(g: Graph, e: tuple[int, int]) -> Graph:
    u, v = _check_edge(g, e)
    rows = list(g.adj)
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    return Graph._trusted(g.n, tuple(rows))


def contract_edge(g: Graph, e: tuple[int, int]) -> Graph:
    """Simple-graph contraction G / uv.

    The merged vertex keeps index ``min(u, v)``; the other endpoint is removed
    and higher vertices shift down by one.
    """
    u, v = _check_edge(g, e)
    keep, gone = min(u, v), max(u, v)
    merged = (g.adj[u] | g.adj[v]) & ~(1 << u) & ~(1 << v)
    rows = list(g.adj)
    rows[keep] = merged
    for w in bits(merged):
        rows[w] |= 1 << keep
    rows = [_drop_bit(row & ~(1 << gone), gone) for i, row in enumerate(rows) if i != gone]
    return Graph._trusted(g.n - 1, tuple(rows))


def extend(g: Graph, a: int) -> Graph:
    """Append a new vertex at index ``g.n`` adjacent exactly to the vertex set ``a``."""
    if g.n >= MAX_VERTICES:
        raise GraphError(f"capacity of {MAX_VERTICES} vertices exceeded")
    if a & ~g.vertex_mask:
        raise GraphError("extension set contains vertices outside the graph")
    new = 1 << g.n
    rows = tuple(row | new if a >> i & 1 else row for i, row in enumerate(g.adj))
    return Graph._trusted(g.n + 1, rows + (a,))


def component_masks(adj: tuple[int, ...], mask: int) -> list[int]:
    """Connected components of the subgraph induced by ``mask``, by minimum vertex."""
    comps = []
    rest = mask
    while rest:
        seen = frontier = rest & -rest
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            frontier = nxt & rest & ~seen
            seen |= frontier
        comps.append(seen)
        rest &= ~seen
    return comps


def components(g: Graph) -> list[int]:
    """Vertex sets (as bitmasks) of the connected components of ``g``."""
    return component_masks(g.adj, g.vertex_mask)


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def min_degree(g: Graph) -> tuple[int, int]:
    """Lowest-index vertex of minimum degree, and that degree."""
    if g.n == 0:
        raise GraphError("min_degree of the empty graph")
    best = min(range(g.n), key=lambda v: (g.adj[v].bit_count(), v))
    return best, g.adj[best].bit_count()


# graph6 ---------------------------------------------------------------------


def _encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([63 + n])
    return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])


def graph6_bits(g: Graph) -> int:
    """Upper-triangle bits in graph6 column order, first bit most significant."""
    acc = 0
    adj = g.adj
    for j in range(1, g.n):
        col = adj[j]
        for i in range(j):
            acc = acc << 1 | (col >> i & 1)
    return acc


def to_graph6(g: Graph) -> str:
    nbits = g.n * (g.n - 1) // 2
    acc = graph6_bits(g)
    pad = -nbits % 6
    acc <<= pad
    chunks = (nbits + pad) // 6
    body = bytes(63 + (acc >> (6 * (chunks - 1 - i)) & 63) for i in range(chunks))
    return (_encode_n(g.n) + body).decode("ascii")


def from_graph6(text: str | bytes) -> Graph:
    data = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    data = data.rstrip(b"\r\n")
    if data.startswith(b">>graph6<<"):
        data = data[10:]
        start = 10
    else:
        start = 0
    if not data:
        raise Graph6Error("empty graph6 line", start)
    for i, c in enumerate(data):
        if not 63 <= c <= 126:
            raise Graph6Error(f"character {chr(c)!r} outside graph6 range", start + i)
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 4 and data[1] != 126:
        n = (data[1] - 63) << 12 | (data[2] - 63) << 6 | (data[3] - 63)
        pos = 4
    else:
        raise Graph6Error("unsupported or truncated vertex-count prefix", start)
    if n > MAX_VERTICES:
        raise Graph6Error(f"graph has {n} vertices, capacity is {MAX_VERTICES}", start)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - pos != need:
        raise Graph6Error(
            f"expected {need} adjacency bytes for n={n}, got {len(data) - pos}",
            start + min(len(data), pos + need),
        )
    acc = 0
    for c in data[pos:]:
        acc = acc << 6 | (c - 63)
    pad = need * 6 - nbits
    if acc & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits", start + len(data) - 1)
    acc >>= pad
    rows = [0] * n
    k = nbits - 1
    for j in range(1, n):
        for i in range(j):
            if acc >> k & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k -= 1
    return Graph._trusted(n, tuple(rows))
