"""Simple undirected graphs on bitset rows, named families and structural classifiers.

Vertices are ``0..n-1``; ``rows[v]`` is an integer whose bit ``u`` is set when
``u`` and ``v`` are adjacent.  Graphs are immutable and hashable.

Vertex numbering of the named families is fixed:

* ``path(n)``: edges ``i ~ i+1``.
* ``cycle(n)``: the path plus ``n-1 ~ 0``.
* ``star(k)``: centre ``0``, leaves ``1..k`` (order ``k+1``).
* ``friendship(k)``: centre ``0``, triangles on ``{0, 2i+1, 2i+2}``.
* ``complete_minus_perfect_matching(n)``: ``K_n`` without the edges ``2i ~ 2i+1``.
* ``union_with_isolates_and_matching(G, r, s)``: ``G`` keeps its labels, the
  ``r`` isolated vertices follow, then the ``s`` disjoint edges as consecutive pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from ._config import MAX_ORDER, CapacityError


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, slots=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.n
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        if n > MAX_ORDER:
            raise CapacityError(f"order {n} exceeds MAX_ORDER={MAX_ORDER}")
        if len(self.rows) != n:
            raise ValueError(f"expected {n} rows, got {len(self.rows)}")
        full = (1 << n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {v} has bits outside 0..{n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not self.rows[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {u})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n > MAX_ORDER:
            raise CapacityError(f"order {n} exceeds MAX_ORDER={MAX_ORDER}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for order {n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.rows[u] >> (u + 1) << (u + 1))]

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph in which old vertex ``v`` becomes ``perm[v]``."""
        rows = [0] * self.n
        for v, row in enumerate(self.rows):
            mapped = 0
            for u in iter_bits(row):
                mapped |= 1 << perm[u]
            rows[perm[v]] = mapped
        return Graph(self.n, tuple(rows))

    def delete_vertex(self, v: int) -> "Graph":
        low = (1 << v) - 1
        rows = []
        for u, row in enumerate(self.rows):
            if u != v:
                rows.append((row & low) | (row >> (v + 1) << v))
        return Graph(self.n - 1, tuple(rows))

    def delete_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge")
        rows = list(self.rows)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices),
            ((index[u], index[v]) for u, v in self.edges() if u in index and v in index),
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


# -- named families ----------------------------------------------------------

def empty(n: int) -> Graph:
    return Graph.from_edges(n, ())


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star(k: int) -> Graph:
    if k < 0:
        raise ValueError("star needs k >= 0 leaves")
    return Graph.from_edges(k + 1, ((0, i) for i in range(1, k + 1)))


def friendship(k: int) -> Graph:
    if k < 1:
        raise ValueError("friendship graph needs k >= 1 triangles")
    edges = []
    for i in range(k):
        a, b = 2 * i + 1, 2 * i + 2
        edges += [(0, a), (0, b), (a, b)]
    return Graph.from_edges(2 * k + 1, edges)


def complete_minus_perfect_matching(n: int) -> Graph:
    if n % 2:
        raise ValueError(f"a perfect matching needs even order, got {n}")
    return Graph.from_edges(
        n, ((u, v) for u, v in combinations(range(n), 2) if not (u % 2 == 0 and v == u + 1))
    )


_FAMILIES = {
    "empty": empty,
    "complete": complete,
    "path": path,
    "cycle": cycle,
    "star": star,
    "friendship": friendship,
    "complete_minus_perfect_matching": complete_minus_perfect_matching,
}

FAMILIES = tuple(_FAMILIES)


def make_named(family: str, size: int) -> Graph:
    """Build a member of a named family; ``size`` is the order except for
    ``star`` (number of leaves) and ``friendship`` (number of triangles)."""
    try:
        build = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}") from None
    if size < 0:
        raise ValueError("size must be non-negative")
    return build(size)


# -- operations ----------------------------------------------------------------

def disjoint_union(*graphs: Graph) -> Graph:
    total = sum(g.n for g in graphs)
    if total > MAX_ORDER:
        raise CapacityError(f"union order {total} exceeds MAX_ORDER={MAX_ORDER}")
    rows: list[int] = []
    offset = 0
    for g in graphs:
        rows.extend(row << offset for row in g.rows)
        offset += g.n
    return Graph(total, tuple(rows))


def union_with_isolates_and_matching(g: Graph, r: int, s: int) -> Graph:
    """``G ∪ rK1 ∪ sK2``."""
    if r < 0 or s < 0:
        raise ValueError("r and s must be non-negative")
    total = g.n + r + 2 * s
    if total > MAX_ORDER:
        raise CapacityError(f"G ∪ {r}K1 ∪ {s}K2 has order {total} > MAX_ORDER={MAX_ORDER}")
    rows = list(g.rows) + [0] * r
    base = g.n + r
    for i in range(s):
        a = base + 2 * i
        rows += [1 << (a + 1), 1 << a]
    return Graph(total, tuple(rows))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(g.rows)))


def join(g: Graph, h: Graph) -> Graph:
    total = g.n + h.n
    if total > MAX_ORDER:
        raise CapacityError(f"join order {total} exceeds MAX_ORDER={MAX_ORDER}")
    h_mask = ((1 << h.n) - 1) << g.n
    g_mask = (1 << g.n) - 1
    rows = [row | h_mask for row in g.rows] + [(row << g.n) | g_mask for row in h.rows]
    return Graph(total, tuple(rows))


# -- degree and structure ------------------------------------------------------

@dataclass(frozen=True)
class DegreeStats:
    degrees: tuple[int, ...]
    max_degree: int
    power_sums: tuple[int, int, int]


def degree_stats(g: Graph) -> DegreeStats:
    degs = tuple(row.bit_count() for row in g.rows)
    return DegreeStats(
        degrees=degs,
        max_degree=max(degs, default=0),
        power_sums=(sum(degs), sum(d * d for d in degs), sum(d**3 for d in degs)),
    )


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    order: int
    size: int
    bipartite: bool
    cyclomatic: int
    shape: str  # tree | odd-unicyclic | even-unicyclic | bicyclic | other


@dataclass(frozen=True)
class StructureClass:
    component_count: int
    bipartite_component_count: int
    is_bipartite: bool
    is_regular: bool
    triangle_count: int
    components: tuple[Component, ...]
    has_induced_c4: bool

    @property
    def is_connected(self) -> bool:
        return self.component_count == 1

    @property
    def cyclomatic_numbers(self) -> tuple[int, ...]:
        return tuple(c.cyclomatic for c in self.components)

    @property
    def shapes(self) -> tuple[str, ...]:
        return tuple(c.shape for c in self.components)


def _shape(cyclomatic: int, bipartite: bool) -> str:
    if cyclomatic == 0:
        return "tree"
    if cyclomatic == 1:
        # the unique cycle is even exactly when the component is bipartite
        return "even-unicyclic" if bipartite else "odd-unicyclic"
    if cyclomatic == 2:
        return "bicyclic"
    return "other"


def components(g: Graph) -> list[tuple[int, ...]]:
    seen = 0
    out = []
    for start in range(g.n):
        if seen >> start & 1:
            continue
        comp = frontier = 1 << start
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= g.rows[v]
            frontier = reach & ~comp
            comp |= frontier
        seen |= comp
        out.append(tuple(iter_bits(comp)))
    return out


def _two_colourable(g: Graph, vertices: Sequence[int]) -> bool:
    colour = {vertices[0]: 0}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for u in iter_bits(g.rows[v]):
            if u not in colour:
                colour[u] = colour[v] ^ 1
                stack.append(u)
            elif colour[u] == colour[v]:
                return False
    return True


def triangle_count(g: Graph) -> int:
    # every triangle is seen once from each of its three edges
    return sum((g.rows[u] & g.rows[v]).bit_count() for u, v in g.edges()) // 3


def has_induced_c4(g: Graph) -> bool:
    rows = g.rows
    for quad in combinations(range(g.n), 4):
        mask = sum(1 << v for v in quad)
        if all((rows[v] & mask).bit_count() == 2 for v in quad):
            # 2-regular on 4 vertices is C4 (2K2 would have degree 1)
            return True
    return False


def contains_c4(g: Graph) -> bool:
    """C4 as a (not necessarily induced) subgraph: two vertices with two common neighbours."""
    rows = g.rows
    return any((rows[u] & rows[v]).bit_count() >= 2 for u, v in combinations(range(g.n), 2))


def structure_class(g: Graph) -> StructureClass:
    comps = []
    for verts in components(g):
        mask = sum(1 << v for v in verts)
        size = sum((g.rows[v] & mask).bit_count() for v in verts) // 2
        bip = _two_colourable(g, verts)
        cyc = size - len(verts) + 1
        comps.append(Component(verts, len(verts), size, bip, cyc, _shape(cyc, bip)))
    degs = [row.bit_count() for row in g.rows]
    return StructureClass(
        component_count=len(comps),
        bipartite_component_count=sum(c.bipartite for c in comps),
        is_bipartite=all(c.bipartite for c in comps),
        is_regular=len(set(degs)) <= 1,
        triangle_count=triangle_count(g),
        components=tuple(comps),
        has_induced_c4=has_induced_c4(g),
    )


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(components(g)) == 1


def is_bipartite(g: Graph) -> bool:
    return all(_two_colourable(g, verts) for verts in components(g))


def is_subgraph(h: Graph, g: Graph) -> bool:
    """True when ``h`` is a labeled subgraph of ``g`` (vertex ``i`` of ``h`` is vertex ``i`` of ``g``)."""
    if h.n > g.n:
        return False
    return all(hr & ~gr == 0 for hr, gr in zip(h.rows, g.rows))
